#pragma once

#include <cstdint>
#include <random>

namespace deltaiss {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Independent per-task generator derived from a base seed, so parallel or
/// reordered runs of task `index` see the same stream.
inline std::mt19937_64 seeded_stream(std::uint64_t seed, std::uint64_t index) {
    return std::mt19937_64(splitmix64(splitmix64(seed) ^ (index + 1)));
}

} // namespace deltaiss
