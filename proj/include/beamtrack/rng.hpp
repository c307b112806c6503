#pragma once

#include <cstdint>
#include <random>

#include "beamtrack/types.hpp"

namespace beamtrack {

/// SplitMix64 finalizer; used to derive decorrelated per-trial seeds.
constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed for stream `index` under base seed `base`. Distinct indices give
/// independent-looking streams; the mapping never depends on thread layout.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept {
  return splitmix64(splitmix64(base) + index);
}

/// One explicitly seeded random stream. Not thread-safe; give each trial its own.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static Rng for_trial(std::uint64_t base_seed, std::uint64_t trial) {
    return Rng(derive_seed(base_seed, trial));
  }

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  int uniform_int(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(engine_);
  }
  double normal() { return normal_(engine_); }

  /// Circular-symmetric complex Gaussian with unit total variance:
  /// real and imaginary parts are independent N(0, 1/2).
  cplx complex_normal() {
    constexpr double kHalfStd = 0.70710678118654752440;
    const double re = normal_(engine_);
    const double im = normal_(engine_);
    return {kHalfStd * re, kHalfStd * im};
  }

  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace beamtrack
