#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "nbrange/common.hpp"

namespace nbrange {

/// splitmix64 mix; derives independent per-purpose seeds from one base seed
/// so that e.g. phase and noise streams stay aligned across configurations.
inline uint64_t mix_seed(uint64_t base, uint64_t stream) {
    uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// mt19937_64 engine with hand-rolled variate mappings. std::*_distribution
/// output is implementation-defined; these mappings keep identical seeds
/// bit-identical across platforms.
class Rng {
public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    /// uniform on [0, 1)
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    /// exponential with the given mean
    double exponential(double mean) { return -mean * std::log1p(-uniform()); }

    /// standard normal (Box-Muller, one variate per call)
    double normal() {
        const double u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log1p(-u1)) * std::cos(2.0 * kPi * u2);
    }

    /// circularly symmetric complex Gaussian with E|z|^2 = variance
    cdouble complex_normal(double variance) {
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-variance * std::log1p(-u1));
        return {r * std::cos(2.0 * kPi * u2), r * std::sin(2.0 * kPi * u2)};
    }

    uint64_t next_u64() { return eng_(); }

private:
    std::mt19937_64 eng_;
};

} // namespace nbrange
