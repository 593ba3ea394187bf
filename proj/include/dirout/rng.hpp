#pragma once

#include <cstdint>
#include <random>

namespace dirout {

using Rng = std::mt19937_64;

// SplitMix64 mixing step, used to whiten seeds and derive substreams.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Deterministic seed for substream (master, stream, index). Distinct
// streams of one master seed are independent for practical purposes.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                    std::uint64_t index = 0) {
    return splitmix64(splitmix64(splitmix64(master) ^ stream) ^ index);
}

inline Rng make_rng(std::uint64_t seed) { return Rng(splitmix64(seed)); }

}  // namespace dirout
