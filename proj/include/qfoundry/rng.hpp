#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace qfoundry::rng {

inline constexpr std::uint64_t kDefaultSeed = 20240611;

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed for substream `index` of a run seeded with `seed`. Shards and trials each get their own.
inline constexpr std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

using Engine = std::mt19937_64;

inline Engine substream(std::uint64_t seed, std::uint64_t index) {
  return Engine(substream_seed(seed, index));
}

/// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
inline double uniform01(Engine& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

/// Standard normal by Box-Muller over uniform01, so the sequence does not depend on the standard library.
inline double standard_normal(Engine& engine) {
  constexpr double kTwoPi = 6.283185307179586476925286766559;
  double u1 = uniform01(engine);
  while (u1 <= 0.0) u1 = uniform01(engine);
  const double u2 = uniform01(engine);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

}  // namespace qfoundry::rng
