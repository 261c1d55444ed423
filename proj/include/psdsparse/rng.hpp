#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace psdsparse {

// Counter-based generator: draw n is mix(key + n * golden) with the
// SplitMix64 finaliser. Streams are reproducible bit-for-bit across
// platforms and any draw can be addressed directly by its counter.
// Bump kName whenever the output sequence changes.
class Rng {
 public:
  static constexpr std::string_view kName = "splitmix64-ctr/1";

  explicit Rng(std::uint64_t seed) : key_(mix(seed ^ 0x6a09e667f3bcc909ULL)) {}

  // Independent stream for (seed, stream) pairs, used for per-trial seeds.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
    return mix(mix(seed) + 0x9e3779b97f4a7c15ULL * (stream + 1));
  }

  std::uint64_t next_u64() { return mix(key_ + kGolden * counter_++); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n). Slight modulo bias is irrelevant at our n.
  std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

  // Standard normal via Box-Muller; the second variate is discarded so the
  // stream position stays a simple function of the number of draws.
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  std::uint64_t counter() const { return counter_; }

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace psdsparse
