#pragma once

#include <cstdint>
#include <random>

namespace uea {

// Every trajectory owns one of these. Mersenne Twister 19937, 64-bit variant:
// period 2^19937 - 1.
using Rng = std::mt19937_64;

// splitmix64 finalizer (Steele, Lea, Flood). Used to derive per-trial seeds:
// seed_i = mix64(master_seed ^ i).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t trial_seed(std::uint64_t master_seed,
                                   std::uint64_t trial) noexcept {
  return mix64(master_seed ^ trial);
}

// Uniform double in [0, 1) from the top 53 bits of one draw.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, bound).
inline std::uint32_t uniform_below(Rng& rng, std::uint32_t bound) {
  return std::uniform_int_distribution<std::uint32_t>(0, bound - 1)(rng);
}

}  // namespace uea
