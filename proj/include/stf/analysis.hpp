#pragma once

#include <vector>

#include "stf/field.hpp"
#include "stf/linalg.hpp"

namespace stf {

/// TLS orientation fit of one tensor. The direction is the top eigenvector
/// flipped so its last nonzero coordinate is positive (same half-space
/// convention as DirectionSet); tls_error is the sum of the non-principal
/// eigenvalues, i.e. the orthogonal fitting energy. It can be negative for
/// indefinite (gk-tagged) tensors and is reported as-is. certainty is the
/// coherence (l1-l2)/(l1+l2), clamped to [0,1], 0 when l1+l2 <= 0.
struct OrientationEstimate {
    std::vector<double> direction;
    double certainty = 0.0;
    double tls_error = 0.0;
};

OrientationEstimate orientation(const SymMat& t);

/// Count of near-zero eigenvalues: k = #{ i : lambda_i < rel_tol * lambda_1 }.
/// k near-zero eigenvalues mean spectral energy concentrated near an
/// (N-k)-dimensional hyperplane. If lambda_1 <= 0 the profile is degenerate
/// and k = N.
struct RankProfile {
    int near_zero_count = 0;
    std::vector<double> eigenvalues;
    double threshold = 0.0; // absolute cutoff rel_tol * lambda_1
    bool degenerate = false;
};

RankProfile rank_profile(const SymMat& t, double rel_tol = 1e-3);

/// Field-level indefiniteness summary: fraction of pixels whose minimum
/// eigenvalue is below -tol*|trace|, the global minimum eigenvalue, and a
/// histogram of min-eigenvalue/|trace| ratios (zero-trace pixels count as
/// ratio 0). Histogram bins are fixed: `bins` equal cells over [lo, hi],
/// outliers clamped into the edge cells.
struct IndefinitenessReport {
    double negative_fraction = 0.0;
    double min_eigenvalue = 0.0;
    std::size_t pixel_count = 0;
    std::size_t negative_count = 0;
    double tol = 0.0;
    double hist_lo = -1.0;
    double hist_hi = 1.0;
    std::vector<long long> histogram; // ratio counts
};

IndefinitenessReport indefiniteness_report(const TensorField& tf, double tol = 1e-12, int bins = 40);

/// Per-pixel orientation over a 2-D tensor field: angle in [0, pi) plus the
/// coherence value.
struct OrientationField {
    Dims dims;
    std::vector<double> angle;
    std::vector<double> certainty;
};

OrientationField orientation_field(const TensorField& tf);

/// Per-pixel top-eigenvector planes (any N) plus certainty, for 3-D exports.
VectorField direction_field(const TensorField& tf);

ScalarField min_eigenvalue_field(const TensorField& tf);

/// Angle in radians between two orientation axes (sign-insensitive), in [0, pi/2].
double axis_angle(std::span<const double> u, std::span<const double> v);

} // namespace stf
