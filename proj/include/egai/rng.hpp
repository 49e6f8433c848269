#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace egai {

/// splitmix64 mixing step; used for seeding and sub-stream derivation.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// xoshiro256++ with splitmix64 seeding. Self-contained so streams are
/// reproducible across platforms and standard-library versions.
class Rng {
public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : s_) word = splitmix64(sm);
  }

  /// Independent sub-stream for replication `rep` of a seeded run.
  static Rng substream(std::uint64_t seed, std::uint64_t rep) {
    std::uint64_t sm = seed;
    const std::uint64_t a = splitmix64(sm);
    sm = rep ^ 0xD1B54A32D192ED03ULL;
    const std::uint64_t b = splitmix64(sm);
    return Rng(a ^ (b * 0x9E3779B97F4A7C15ULL));
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform on [0,1) with 53-bit resolution.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller (two uniforms per draw, no cached
  /// second value, so the stream position is input-independent).
  double normal() {
    const double u1 = 1.0 - uniform(); // (0,1], keeps log finite
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  bool bernoulli(double p) { return uniform() < p; }

private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t s_[4];
};

/// Upper tail of the standard normal, P(Z > z), via erfc for accuracy
/// far into the tail.
inline double normal_upper_tail(double z) {
  return 0.5 * std::erfc(z / std::numbers::sqrt2);
}

} // namespace egai
