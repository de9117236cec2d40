#include "stf/rng.hpp"

#include <cmath>

namespace stf {

double gaussian_at(std::uint64_t seed, std::uint64_t index) {
    const double u1 = uniform_unit(splitmix64_at(seed, 2 * index));
    const double u2 = uniform_unit(splitmix64_at(seed, 2 * index + 1));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

double Rng::next_gaussian() {
    const double u1 = next_unit();
    const double u2 = next_unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

} // namespace stf
