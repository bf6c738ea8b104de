#pragma once

#include <cstdint>

namespace qlp::rng {

// SplitMix64: tiny, portable, and bit-reproducible across platforms, which
// the seeded-experiment contract requires of every stream.
struct SplitMix64 {
  std::uint64_t state = 0;

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53-bit resolution.
  double next_double() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) {
    return lo + next_double() * (hi - lo);
  }
};

// Stream that is a pure function of (seed, index): sampling order never
// affects the draws of any point.
inline SplitMix64 point_stream(std::uint64_t seed, std::uint64_t index) {
  SplitMix64 mixer{seed ^ (0xD1B54A32D192ED03ULL * (index + 1))};
  return SplitMix64{mixer.next()};
}

// Exact binomial draw as a sum of Bernoulli trials.
inline int binomial(SplitMix64& gen, int shots, double p) {
  int successes = 0;
  for (int i = 0; i < shots; ++i)
    if (gen.next_double() < p) ++successes;
  return successes;
}

}  // namespace qlp::rng
