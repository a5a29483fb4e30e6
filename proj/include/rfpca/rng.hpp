#pragma once

#include <cmath>
#include <cstdint>

namespace rfpca {

/// Counter-based random streams: every draw is a pure function of
/// (seed, stream, counter), so simulation output is reproducible
/// bit-for-bit no matter how work is scheduled across threads.
namespace rng {

inline std::uint64_t mix(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

inline std::uint64_t bits(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  std::uint64_t h = mix(seed + 0x9e3779b97f4a7c15ULL);
  h = mix(h ^ (stream + 0x9e3779b97f4a7c15ULL));
  return mix(h ^ (counter + 0x9e3779b97f4a7c15ULL));
}

/// Uniform draw in [0, 1).
inline double uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  return static_cast<double>(bits(seed, stream, counter) >> 11) * 0x1.0p-53;
}

/// Standard normal via Box-Muller on two counters derived from one.
inline double normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  const double u1 = 1.0 - uniform(seed, stream, 2 * counter);      // (0, 1]
  const double u2 = uniform(seed, stream, 2 * counter + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

}  // namespace rng
}  // namespace rfpca
