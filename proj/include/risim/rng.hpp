#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace risim {

/// Stateless splitmix-style generator addressed by (seed, stream, tag) plus a
/// per-draw counter. Every draw is a pure function of those four values, so
/// realizations can be evaluated in any order and from any number of worker
/// threads without changing the output.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t tag)
        : key_(mix(mix(mix(seed) ^ (0x9E3779B97F4A7C15ULL * (tag + 1))) ^
                   (0xC2B2AE3D27D4EB4FULL * (stream + 1)))) {}

    static constexpr std::uint64_t mix(std::uint64_t z) {
        z += 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t bits(std::uint64_t counter) const {
        return mix(key_ ^ (counter * 0xD6E8FEB86659FD93ULL + 0x2545F4914F6CDD1DULL));
    }

    /// Uniform in [0, 1).
    double uniform(std::uint64_t counter) const {
        return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
    }

    /// Circularly symmetric complex Gaussian with E|z|^2 = 1. Consumes the
    /// counter pair (2*index, 2*index + 1).
    std::complex<double> standard_complex_gaussian(std::uint64_t index) const {
        const double u = (static_cast<double>(bits(2 * index) >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
        const double phase = 2.0 * std::numbers::pi * uniform(2 * index + 1);
        const double amplitude = std::sqrt(-std::log(u));
        return {amplitude * std::cos(phase), amplitude * std::sin(phase)};
    }

private:
    std::uint64_t key_;
};

}  // namespace risim
