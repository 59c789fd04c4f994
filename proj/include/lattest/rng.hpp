#pragma once

#include <cstdint>
#include <limits>
#include <string>

namespace lattest {

/// Identifies the exact stream a value was drawn from.
struct SeedRecord {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

/// Counter-based generator: the i-th output of a stream is
/// splitmix64(key + (i + 1) * golden_gamma), where the key is derived from
/// (seed, stream). Outputs depend only on (seed, stream, i), so experiments
/// split work as master seed -> per-cell stream -> per-trial stream and any
/// slice can be replayed independently of the others.
///
/// Models UniformRandomBitGenerator, but the sampling helpers below are used
/// throughout instead of <random> distributions, whose output is
/// implementation-defined.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0, std::uint64_t stream = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform integer in [0, bound); bound must be positive. Unbiased.
  std::uint64_t below(std::uint64_t bound);
  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01();
  bool bernoulli(double p) { return uniform01() < p; }

  /// Child stream keyed by this stream's identity and `id`. Does not advance
  /// this generator.
  Rng split(std::uint64_t id) const;

  SeedRecord record() const { return {seed_, stream_}; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Stream id for the (cell, trial) slot of an experiment grid.
std::uint64_t trial_stream(std::uint64_t cell, std::uint64_t trial);

}  // namespace lattest
