#pragma once

#include <cstdint>
#include <limits>

#include <boost/random/uniform_01.hpp>
#include <boost/random/uniform_int_distribution.hpp>

namespace netglm {

// SplitMix64: a 64-bit counter passed through a fixed mixing function. The
// output stream depends only on the seed, on every platform.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;
  explicit SplitMix64(std::uint64_t seed = 0) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return mix(state_ += 0x9E3779B97F4A7C15ULL); }

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

// Seed of an independent stream derived from a parent seed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return SplitMix64::mix(seed ^ SplitMix64::mix(stream + 0x632BE59BD9B4E019ULL));
}

// Thin wrappers over Boost.Random, whose algorithms are fixed in its source
// (unlike the standard library distributions).
inline double uniform01(SplitMix64& rng) { return boost::random::uniform_01<double>()(rng); }

// Uniform integer in [0, n).
inline std::uint64_t uniform_index(SplitMix64& rng, std::uint64_t n) {
  return boost::random::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng);
}

}  // namespace netglm
