#pragma once

#include <cstdint>
#include <random>

namespace voldens {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; the mixing function behind every derived seed.
constexpr std::uint64_t
splitmix64(std::uint64_t x) noexcept
{
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed for substream `stream` of `seed`: splitmix64(seed ^ splitmix64(stream)).
constexpr std::uint64_t
derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept
{
  return splitmix64(seed ^ splitmix64(stream));
}

/// Replication seed for (n-index, rep-index) under a master seed.
constexpr std::uint64_t
replication_seed(std::uint64_t master, std::uint64_t n_index, std::uint64_t rep) noexcept
{
  return derive_seed(derive_seed(master, n_index + 1), rep + 1);
}

// Substream tags used when one seed drives several independent generators.
inline constexpr std::uint64_t kStreamVolatility = 0x766f6cULL;  // "vol"
inline constexpr std::uint64_t kStreamPriceNoise = 0x707278ULL;  // "prx"
inline constexpr std::uint64_t kStreamChain = 0x636861ULL;       // "cha"
inline constexpr std::uint64_t kStreamOu0 = 0x6f7530ULL;         // "ou0"
inline constexpr std::uint64_t kStreamOu1 = 0x6f7531ULL;         // "ou1"

} // namespace voldens
