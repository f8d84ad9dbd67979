#pragma once

#include <cstdint>

namespace fastped {

// Counter-based random numbers: every value is a pure function of
// (seed, agent_id, step, draw), so results do not depend on thread
// count, scheduling, or the order agents are visited in.

namespace detail {

inline constexpr std::uint64_t splitmix64_mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace detail

inline constexpr std::uint64_t rng_u64(std::uint64_t seed, std::uint64_t agent_id,
                                       std::uint64_t step, std::uint64_t draw) {
    const std::uint64_t v = seed ^ (agent_id * 0x9E3779B97F4A7C15ULL) ^
                            (step * 0xBF58476D1CE4E5B9ULL) ^
                            (draw * 0x94D049BB133111EBULL);
    return detail::splitmix64_mix(v);
}

// Top 53 bits -> [0, 1).
inline constexpr double unit_interval(std::uint64_t x) {
    return static_cast<double>(x >> 11) * 0x1.0p-53;
}

// Agent ids are dense indices, so everything at or above 2^63 is free
// for non-agent draw streams.
inline constexpr std::uint64_t kMoveOrderStream = 1ULL << 63;
inline constexpr std::uint64_t kSpawnStream = (1ULL << 63) + 1;

}  // namespace fastped
