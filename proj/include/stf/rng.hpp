#pragma once

#include <cstdint>

#include "stf/grid.hpp"

namespace stf {

/// Counter-based 64-bit generator (splitmix64 finalizer over seed + counter
/// strides). Stateless: sample i of stream `seed` is a pure function of
/// (seed, i), so any evaluation order produces the same stream. The exact
/// algorithm is documented in docs/determinism.md.
inline std::uint64_t splitmix64_at(std::uint64_t seed, std::uint64_t counter) {
    std::uint64_t x = seed + (counter + 1) * 0x9E3779B97F4A7C15ULL;
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}

/// Uniform double in (0, 1]: the top 53 bits plus one, scaled by 2^-53.
/// Never zero, so it is safe under a logarithm.
inline double uniform_unit(std::uint64_t bits) {
    return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

/// Standard normal via the Box-Muller cosine branch, two counters per sample.
double gaussian_at(std::uint64_t seed, std::uint64_t index);

/// Convenience sequential wrapper over the counter-based stream.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed) {}
    std::uint64_t next_u64() { return splitmix64_at(seed_, counter_++); }
    double next_unit() { return uniform_unit(next_u64()); }
    /// Uniform in [lo, hi).
    double next_in(double lo, double hi) { return lo + (hi - lo) * (next_unit() - 0x1.0p-53); }
    double next_gaussian();

private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

} // namespace stf
