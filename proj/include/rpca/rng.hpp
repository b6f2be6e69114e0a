#pragma once

#include <cstdint>
#include <random>

namespace rpca {

// splitmix64 (Steele, Lea, Flood 2014); used both as a mixer for deriving
// independent substream seeds from one master seed and to seed mt19937_64.
inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic substream seed: hash of (seed, stream). Streams derived from
// the same master seed with distinct ids are independent for all practical
// purposes.
inline uint64_t substream_seed(uint64_t seed, uint64_t stream) {
    uint64_t s = seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
    splitmix64(s);
    return splitmix64(s);
}

using Rng = std::mt19937_64;

inline Rng make_rng(uint64_t seed, uint64_t stream = 0) {
    return Rng(substream_seed(seed, stream));
}

}  // namespace rpca
