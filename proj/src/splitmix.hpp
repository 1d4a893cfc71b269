#pragma once

#include <cstdint>

namespace vsgsim::detail {

// Stateless 64-bit mixer; every stochastic draw in the project is a pure
// function of (seed, counter) through this, so any sample is reproducible
// without carrying generator state across ticks or platforms.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
    return splitmix64(a ^ splitmix64(b));
}

// [0, 1) with 53 uniform bits.
inline double uniform01(std::uint64_t h) {
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

}  // namespace vsgsim::detail
