#pragma once

#include <cstdint>
#include <numbers>
#include <random>

namespace qftqkd {

using RandomEngine = std::mt19937_64;

namespace detail {

// splitmix64 finalizer; decorrelates nearby seed values before they reach the
// main engine.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace detail

inline RandomEngine seeded_engine(std::uint64_t seed) {
  return RandomEngine(detail::mix64(seed));
}

/// Independent stream for a (seed, index) pair. Trial i of a run seeded with s
/// always sees the same stream no matter how trials are batched.
inline RandomEngine derive_stream(std::uint64_t seed, std::uint64_t index) {
  return RandomEngine(detail::mix64(detail::mix64(seed) ^ detail::mix64(index + 0x51ed2701ULL)));
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform_double(RandomEngine& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform angle in [0, 2*pi).
inline double uniform_angle(RandomEngine& rng) {
  return 2.0 * std::numbers::pi * uniform_double(rng);
}

inline int uniform_bit(RandomEngine& rng) { return static_cast<int>(rng() & 1ULL); }

/// Uniform integer in [0, bound). Rejection keeps the draw unbiased.
inline std::uint64_t uniform_index(RandomEngine& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

}  // namespace qftqkd
