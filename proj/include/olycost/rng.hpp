#pragma once

#include <cstdint>

namespace olycost {

// SplitMix64 mixing function (Steele, Lea & Flood 2014, in Vigna's
// fixed-increment formulation). Pure function of its input, which is what
// makes per-run streams derivable statelessly.
inline std::uint64_t splitmix64_mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Derives an independent stream seed for run `stream` of a master seed.
inline std::uint64_t derive_stream_seed(std::uint64_t master_seed,
                                        std::uint64_t stream) {
    return splitmix64_mix(master_seed ^ splitmix64_mix(stream));
}

// Counter-style SplitMix64 generator. Identical seeds give identical
// sequences regardless of how runs are scheduled.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform draw in the open interval (0, 1); 53-bit resolution with a
    // half-ulp offset so neither endpoint can occur.
    double next_uniform01() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

} // namespace olycost
