// Shared helpers for the test suites: a tiny deterministic generator for
// property-style tests (so failures reproduce from the printed seed) and a
// relative-error comparison.
#pragma once

#include <cmath>
#include <cstdint>

namespace testsupport {

// SplitMix64: tiny, well-distributed, and stable across platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return next() % n; }

private:
    std::uint64_t state_;
};

inline double rel_err(double got, double want) {
    const double scale = std::fmax(std::fabs(want), 1e-12);
    return std::fabs(got - want) / scale;
}

}  // namespace testsupport
