#pragma once

#include <stdexcept>
#include <string>

namespace lattest {

// Every failure surfaced by the library derives from Error so callers (and the
// CLI's exit-code mapping) can dispatch on the concrete kind.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

class SingularMatrix : public Error {
 public:
  using Error::Error;
};

class RankError : public Error {
 public:
  using Error::Error;
};

// An enumeration (cosets, codewords, trees) would exceed its configured cap.
class ResourceLimit : public Error {
 public:
  using Error::Error;
};

class NotALattice : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class GenerationFailed : public Error {
 public:
  using Error::Error;
};

}  // namespace lattest
