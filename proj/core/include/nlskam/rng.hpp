#pragma once

#include <cstdint>

namespace nlskam {

// Counter-based generator built on splitmix64. Every draw is a pure
// function of (seed, counter), so sample i can be produced by any worker
// in any order and results stay byte-identical across thread counts.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // uniform in [0,1)
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // uniform integer in [lo, hi] (inclusive); hi-lo fits in int64
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1u;
        return lo + static_cast<std::int64_t>(next() % span);
    }
};

// Derive an independent stream for (seed, index) pairs.
inline SplitMix64 stream_for(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 mix(seed ^ (0x517cc1b727220a95ull * (index + 1)));
    mix.next();
    return mix;
}

} // namespace nlskam
