#include "stf/analysis.hpp"

#include <algorithm>
#include <cmath>

namespace stf {

namespace {

// Half-space convention shared with DirectionSet: last nonzero component positive.
void canonicalize_direction(std::vector<double>& v) {
    double maxmag = 0.0;
    for (double c : v) maxmag = std::max(maxmag, std::abs(c));
    if (maxmag == 0.0) return;
    const double thresh = 1e-12 * maxmag;
    for (int i = static_cast<int>(v.size()) - 1; i >= 0; --i) {
        const double c = v[static_cast<std::size_t>(i)];
        if (std::abs(c) > thresh) {
            if (c < 0.0)
                for (double& x : v) x = -x;
            return;
        }
    }
}

} // namespace

OrientationEstimate orientation(const SymMat& t) {
    if (!t.all_finite()) throw parameter_error("orientation: non-finite tensor");
    const EigenDecomp e = eig_sym(t);
    OrientationEstimate out;
    out.direction.assign(e.vec(0).begin(), e.vec(0).end());
    canonicalize_direction(out.direction);

    double rest = 0.0;
    for (std::size_t i = 1; i < e.eigenvalues.size(); ++i) rest += e.eigenvalues[i];
    out.tls_error = rest;

    const double l1 = e.eigenvalues[0];
    const double l2 = e.eigenvalues.size() > 1 ? e.eigenvalues[1] : 0.0;
    if (l1 + l2 > 0.0)
        out.certainty = std::clamp((l1 - l2) / (l1 + l2), 0.0, 1.0);
    return out;
}

RankProfile rank_profile(const SymMat& t, double rel_tol) {
    if (!(rel_tol > 0.0) || !(rel_tol < 1.0))
        throw parameter_error("rank_profile: rel_tol must lie in (0,1)");
    const EigenDecomp e = eig_sym(t);
    RankProfile out;
    out.eigenvalues = e.eigenvalues;
    const double l1 = e.eigenvalues[0];
    if (l1 <= 0.0) {
        out.degenerate = true;
        out.near_zero_count = t.dim();
        out.threshold = 0.0;
        return out;
    }
    out.threshold = rel_tol * l1;
    for (double l : e.eigenvalues)
        if (l < out.threshold) ++out.near_zero_count;
    return out;
}

IndefinitenessReport indefiniteness_report(const TensorField& tf, double tol, int bins) {
    if (bins < 1) throw parameter_error("indefiniteness_report: bins must be >= 1");
    IndefinitenessReport rep;
    rep.tol = tol;
    rep.pixel_count = tf.pixel_count();
    rep.histogram.assign(static_cast<std::size_t>(bins), 0);
    if (rep.pixel_count == 0) return rep;

    const std::size_t npix = rep.pixel_count;
    double global_min = 0.0;
    bool have_min = false;
    std::size_t negatives = 0;

#pragma omp parallel
    {
        double local_min = 0.0;
        bool local_have = false;
        std::size_t local_neg = 0;
        std::vector<long long> local_hist(static_cast<std::size_t>(bins), 0);

#pragma omp for schedule(static)
        for (long long pix = 0; pix < static_cast<long long>(npix); ++pix) {
            const SymMat m = tf.matrix_at(static_cast<std::size_t>(pix));
            const EigenDecomp e = eig_sym(m);
            const double lmin = e.eigenvalues.back();
            const double tr = std::abs(m.trace());
            if (!local_have || lmin < local_min) {
                local_min = lmin;
                local_have = true;
            }
            if (lmin < -tol * tr) ++local_neg;
            const double ratio = tr > 0.0 ? lmin / tr : 0.0;
            const double unit = (ratio - rep.hist_lo) / (rep.hist_hi - rep.hist_lo);
            int b = static_cast<int>(std::floor(unit * bins));
            b = std::clamp(b, 0, bins - 1);
            ++local_hist[static_cast<std::size_t>(b)];
        }

#pragma omp critical
        {
            if (local_have && (!have_min || local_min < global_min)) {
                global_min = local_min;
                have_min = true;
            }
            negatives += local_neg;
            for (int b = 0; b < bins; ++b) rep.histogram[static_cast<std::size_t>(b)] += local_hist[static_cast<std::size_t>(b)];
        }
    }

    rep.min_eigenvalue = global_min;
    rep.negative_count = negatives;
    rep.negative_fraction = static_cast<double>(negatives) / static_cast<double>(npix);
    return rep;
}

OrientationField orientation_field(const TensorField& tf) {
    if (tf.dims.size() != 2 || tf.order != 2)
        throw parameter_error("orientation_field: expects a 2-D tensor field of 2x2 matrices");
    OrientationField out;
    out.dims = tf.dims;
    const std::size_t npix = tf.pixel_count();
    out.angle.resize(npix);
    out.certainty.resize(npix);
#pragma omp parallel for schedule(static)
    for (long long pix = 0; pix < static_cast<long long>(npix); ++pix) {
        const OrientationEstimate est = orientation(tf.matrix_at(static_cast<std::size_t>(pix)));
        double ang = std::atan2(est.direction[1], est.direction[0]);
        if (ang < 0.0) ang += kPi;        // canonical direction keeps angle in [0, pi)
        if (ang >= kPi) ang -= kPi;
        out.angle[static_cast<std::size_t>(pix)] = ang;
        out.certainty[static_cast<std::size_t>(pix)] = est.certainty;
    }
    return out;
}

VectorField direction_field(const TensorField& tf) {
    VectorField out(tf.dims, tf.order + 1); // N direction planes + certainty
    const std::size_t npix = tf.pixel_count();
#pragma omp parallel for schedule(static)
    for (long long pix = 0; pix < static_cast<long long>(npix); ++pix) {
        const OrientationEstimate est = orientation(tf.matrix_at(static_cast<std::size_t>(pix)));
        for (int a = 0; a < tf.order; ++a)
            out.at(a, static_cast<std::size_t>(pix)) = est.direction[static_cast<std::size_t>(a)];
        out.at(tf.order, static_cast<std::size_t>(pix)) = est.certainty;
    }
    return out;
}

ScalarField min_eigenvalue_field(const TensorField& tf) {
    ScalarField out(tf.dims);
    const std::size_t npix = tf.pixel_count();
#pragma omp parallel for schedule(static)
    for (long long pix = 0; pix < static_cast<long long>(npix); ++pix) {
        const EigenDecomp e = eig_sym(tf.matrix_at(static_cast<std::size_t>(pix)));
        out.values[static_cast<std::size_t>(pix)] = e.eigenvalues.back();
    }
    return out;
}

double axis_angle(std::span<const double> u, std::span<const double> v) {
    double uu = 0.0, vv = 0.0, uv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        uu += u[i] * u[i];
        vv += v[i] * v[i];
        uv += u[i] * v[i];
    }
    const double denom = std::sqrt(uu * vv);
    if (denom == 0.0) return 0.0;
    const double c = std::min(1.0, std::abs(uv) / denom);
    return std::acos(c);
}

} // namespace stf
