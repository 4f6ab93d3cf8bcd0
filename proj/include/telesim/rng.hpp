#pragma once

#include <cstdint>
#include <random>

namespace telesim {

using Rng = std::mt19937_64;

// SplitMix64 finalizer; used as a counter-based mixer for seed derivation.
inline uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Seed of cell `index` under `master`. Each cell gets an independent stream that
// does not depend on how many cells exist or in which order they run.
inline uint64_t derive_seed(uint64_t master, uint64_t index) {
    return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

inline uint64_t uniform_below(Rng &rng, uint64_t n) {
    return std::uniform_int_distribution<uint64_t>(0, n - 1)(rng);
}

inline double uniform01(Rng &rng) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

}  // namespace telesim
