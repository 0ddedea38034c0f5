#pragma once

#include <cmath>
#include <cstdint>

namespace ratiosparse {

// SplitMix64 (Steele/Lea/Flood, OOPSLA 2014). Counter-based: the k-th output
// for a given seed is mix(seed + (k+1)*0x9E3779B97F4A7C15), so a stream is a
// pure function of (seed, draw index) and can be replicated in any language.
// All randomness in this project flows through this generator.
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in (0, 1]; never returns 0 so log() is safe.
  double uniform01() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  // Uniform index in [0, n). Modulo bias is ~n/2^64 and ignored.
  std::uint64_t uniform_index(std::uint64_t n) { return next_u64() % n; }

  // Standard normal via Box-Muller; consumes two uniforms per pair and
  // caches the sine branch. Draw order is part of the stream contract.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace ratiosparse
