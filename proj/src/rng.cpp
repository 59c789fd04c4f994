#include "lattest/rng.hpp"

#include "lattest/errors.hpp"

namespace lattest {

namespace {
constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
constexpr std::uint64_t kStreamSalt = 0xd1b54a32d192ed03ULL;
}  // namespace

std::uint64_t splitmix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream), key_(splitmix64(seed ^ splitmix64(stream + kStreamSalt))) {}

Rng::result_type Rng::operator()() {
  ++counter_;
  return splitmix64(key_ + counter_ * kGamma);
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw InvalidInput("Rng::below: zero bound");
  // Lemire's multiply-shift with rejection of the biased low region.
  unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<unsigned __int128>((*this)()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

double Rng::uniform01() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

Rng Rng::split(std::uint64_t id) const {
  return Rng(seed_, splitmix64(stream_ ^ splitmix64(id + kGamma)));
}

std::uint64_t trial_stream(std::uint64_t cell, std::uint64_t trial) {
  return splitmix64(splitmix64(cell + 1) ^ (trial * kGamma));
}

}  // namespace lattest
