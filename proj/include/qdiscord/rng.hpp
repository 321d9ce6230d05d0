#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string_view>

#include "qdiscord/types.hpp"

namespace qdiscord {

/// Identifier written into reports; change it whenever the draw sequence changes.
inline constexpr std::string_view kPrngId = "splitmix64-counter/box-muller-v1";

/// Counter-based generator: draw n of stream `seed` is splitmix64_mix(seed + n * golden).
///
/// Any (master_seed, counter) pair reproduces the same bits. Child streams for
/// parallel trials are derived with child(i), which hashes (seed, i) into a fresh
/// stream seed, so trial i sees the same draws regardless of scheduling.
/// Normals use Box-Muller on two consecutive uniforms; no state is cached.
class SeededSampler {
 public:
  using result_type = std::uint64_t;

  explicit SeededSampler(std::uint64_t master_seed = 0, std::uint64_t counter = 0)
      : seed_(master_seed), counter_(counter) {}

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t next() {
    ++counter_;
    return mix(seed_ + counter_ * 0x9E3779B97F4A7C15ULL);
  }
  result_type operator()() { return next(); }
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  /// Uniform in the open interval (0, 1).
  double uniform() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

  double normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Standard complex Gaussian, E|z|^2 = 1.
  cplx complex_normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(t), r * std::sin(t)};
  }

  double exponential() { return -std::log(uniform()); }

  SeededSampler child(std::uint64_t index) const {
    return SeededSampler(mix(seed_ ^ mix(index + 0x632BE59BD9B4E019ULL)), 0);
  }

  std::uint64_t master_seed() const { return seed_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_;
};

}  // namespace qdiscord
