#pragma once

#include <span>
#include <string>
#include <vector>

#include "stf/linalg.hpp"

namespace stf {

/// Set of K unit tune-in directions n_k covering half of the frequency space.
/// Stored directions keep their last nonzero coordinate positive so antipodal
/// detection and orientation wraparound are deterministic.
struct DirectionSet {
    int dim = 0;
    std::vector<double> directions; // K rows of `dim` components
    std::vector<std::string> labels;

    int count() const { return dim > 0 ? static_cast<int>(directions.size()) / dim : 0; }
    std::span<const double> dir(int k) const {
        return {directions.data() + static_cast<std::size_t>(k) * static_cast<std::size_t>(dim),
                static_cast<std::size_t>(dim)};
    }
};

/// The six icosahedral half-set directions in 3-D with
/// a = 2/sqrt(10+2*sqrt(5)) and b = (1+sqrt(5))/sqrt(10+2*sqrt(5)) evaluated
/// from the radicals at full precision. They form a tight frame:
/// sum_k n_k n_k^T = 2 I.
DirectionSet icosa6();

/// K uniformly spaced 2-D directions at angles k*pi/K, k = 0..K-1.
/// Requires K >= 2. sum_k n_k n_k^T = (K/2) I for K >= 3 and I for K = 2.
DirectionSet half_circle(int K);

/// Invariant check; empty result means the set is valid. Reported violations:
/// non-unit norm (1e-12), duplicate/antipodal pairs (1e-9 rad), label count.
std::vector<std::string> validate(const DirectionSet& d);

/// sum_k n_k n_k^T.
SymMat frame_sum(const DirectionSet& d);

/// CSV serialization: header row, then one row per direction, label first.
std::string directions_to_csv(const DirectionSet& d);

/// Compact single-line encoding used to make response rasters self-describing.
std::string encode_directions(const DirectionSet& d);
DirectionSet decode_directions(const std::string& s);

} // namespace stf
