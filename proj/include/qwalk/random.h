#pragma once

#include <cstdint>
#include <random>

namespace qwalk {

/// Generator used for every sampled quantity. std::mt19937_64 is fully
/// specified by the standard, so streams agree across platforms.
using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Seed of the stream for one trial, a hash of (master_seed, trial_index).
constexpr std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t trial_index) {
    return mix64(mix64(master_seed) ^ (trial_index + 0x632BE59BD9B4E019ULL));
}

/// Uniform double in [0, 1) from the top 53 bits. Avoids
/// std::uniform_real_distribution, whose output is implementation defined.
inline double uniform01(Rng &rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace qwalk
