#pragma once

#include <cstdint>
#include <cmath>

namespace impacteq {

// Counter-based, splittable random generator: every variate is a pure
// function of (seed, stream, index), so draws are reproducible regardless of
// evaluation order and parallel shards can be assigned disjoint index ranges
// with no generator state to carry.  The word function chains SplitMix64
// finalizer rounds, which is statistically solid for Monte Carlo use.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t word(std::uint64_t stream, std::uint64_t index) const {
        return mix(mix(mix(seed_) ^ stream) ^ index);
    }

    // Uniform on (0, 1), never exactly 0 or 1.
    double uniform(std::uint64_t stream, std::uint64_t index) const {
        return (static_cast<double>(word(stream, index) >> 11) + 0.5) *
               0x1.0p-53;
    }

    // Standard normal via Box-Muller on counters (2*index, 2*index + 1).
    double normal(std::uint64_t stream, std::uint64_t index) const {
        const double u1 = uniform(stream, 2 * index);
        const double u2 = uniform(stream, 2 * index + 1);
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(6.283185307179586476925286766559 * u2);
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t seed_;
};

} // namespace impacteq
