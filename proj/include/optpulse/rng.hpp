#pragma once

// Counter-based start-point generation: start k under seed s is a pure
// function of (s, k), so multi-start batches reproduce bitwise no matter how
// starts are scheduled across workers.

#include <cstdint>

namespace optpulse {

struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t s) : state(s) {}

    std::uint64_t next_u64() {
        state += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * next_double();
    }
};

inline SplitMix64 stream_for_start(std::uint64_t seed, std::uint64_t k) {
    return SplitMix64(seed * 0x9E3779B97F4A7C15ULL + k * 0xD1B54A32D192ED03ULL);
}

}  // namespace optpulse
