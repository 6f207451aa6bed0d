#pragma once

#include <cmath>
#include <cstdint>

namespace itables {

inline uint64_t mix64(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derive a child seed from a master seed and a label path. Every random
// stream in the project is addressed this way, so results are independent
// of scheduling order and reproducible for a fixed master seed.
inline uint64_t derive_seed(uint64_t master, uint64_t a) {
  return mix64(master + 0x9e3779b97f4a7c15ULL * (a + 1));
}
inline uint64_t derive_seed(uint64_t master, uint64_t a, uint64_t b) {
  return derive_seed(derive_seed(master, a), b);
}
inline uint64_t derive_seed(uint64_t master, uint64_t a, uint64_t b, uint64_t c) {
  return derive_seed(derive_seed(master, a, b), c);
}

// Stream labels used with derive_seed. Keeping them in one place makes the
// seeding layout part of the public contract.
namespace streams {
inline constexpr uint64_t kModelSetup = 0;   // per-model params + hash sampling
inline constexpr uint64_t kTrain = 1;        // per (participant, model) subsampling
inline constexpr uint64_t kNoise = 2;        // per (participant, model) DP noise
inline constexpr uint64_t kRun = 3;          // per repeated-eval run
inline constexpr uint64_t kPartition = 4;    // dataset partitioning
}  // namespace streams

// splitmix64 stream. Small, fast, and fully deterministic across platforms;
// all distribution transforms are implemented here rather than with
// std::*_distribution so sequences do not depend on the standard library.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    return mix64(z);
  }

  // [0, 1)
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // (0, 1), never returns an exact endpoint
  double uniform01_open() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  // unbiased integer in [0, n)
  uint64_t uniform_int(uint64_t n) {
    uint64_t threshold = (0 - n) % n;
    for (;;) {
      uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

  // standard normal via Box-Muller; the second value is cached
  double normal() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    double u1 = uniform01_open();
    double u2 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * M_PI * u2;
    cached_ = r * std::sin(a);
    has_cached_ = true;
    return r * std::cos(a);
  }

  // Laplace(0, scale) by inverse CDF
  double laplace(double scale) {
    double u = uniform01_open() - 0.5;
    double s = (u < 0.0) ? -1.0 : 1.0;
    return -scale * s * std::log1p(-2.0 * std::fabs(u));
  }

 private:
  uint64_t state_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace itables
