#pragma once

// Counter-based random streams. Every draw is a pure function of its key,
// so results never depend on evaluation order or thread count.

#include <cmath>
#include <cstdint>
#include <numbers>

namespace johnell::rng {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Hash of (seed, stream, index, lane). Each component goes through a full
// mixing round so that nearby keys are decorrelated.
constexpr std::uint64_t key(std::uint64_t seed, std::uint64_t stream, std::uint64_t index,
                            std::uint64_t lane = 0) noexcept {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ stream);
  h = splitmix64(h ^ index);
  return splitmix64(h ^ lane);
}

// Uniform on [0, 1) with 53 random bits.
constexpr double to_unit(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

inline double uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t index,
                      std::uint64_t lane = 0) noexcept {
  return to_unit(key(seed, stream, index, lane));
}

// Standard normal via Box-Muller on two keyed uniforms.
inline double gaussian(std::uint64_t seed, std::uint64_t stream, std::uint64_t index,
                       std::uint64_t lane) noexcept {
  const double u1 = 1.0 - to_unit(key(seed, stream, index, 2 * lane));  // (0, 1]
  const double u2 = to_unit(key(seed, stream, index, 2 * lane + 1));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace johnell::rng
