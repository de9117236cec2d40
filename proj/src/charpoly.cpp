#include "stf/charpoly.hpp"

#include <algorithm>
#include <cmath>

namespace stf {

namespace {

// q(x) = x^3 - A x^2 + B x - C, monic with the eigenvalues as roots.
struct Cubic {
    double A, B, C;
    double operator()(double x) const { return ((x - A) * x + B) * x - C; }
};

// Bisection on a bracket [lo, hi] with q(lo) <= 0 <= q(hi) (or the reverse).
double bisect(const Cubic& q, double lo, double hi) {
    double qlo = q(lo);
    double qhi = q(hi);
    if (qlo == 0.0) return lo;
    if (qhi == 0.0) return hi;
    if (qlo > 0.0 && qhi < 0.0) {
        std::swap(lo, hi);
        std::swap(qlo, qhi);
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        const double qm = q(mid);
        if (qm <= 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

std::vector<double> charpoly_eigenvalues(const SymMat& m) {
    const int n = m.dim();
    if (!m.all_finite()) throw parameter_error("charpoly_eigenvalues: non-finite entries");

    if (n == 1) return {m.at(0, 0)};

    if (n == 2) {
        const double a = m.at(0, 0), c = m.at(1, 1), b = m.at(0, 1);
        const double mean = 0.5 * (a + c);
        const double disc = std::sqrt(0.25 * (a - c) * (a - c) + b * b);
        return {mean + disc, mean - disc};
    }

    if (n != 3)
        throw parameter_error("charpoly_eigenvalues: only implemented for N <= 3");

    const double a00 = m.at(0, 0), a11 = m.at(1, 1), a22 = m.at(2, 2);
    const double a01 = m.at(0, 1), a02 = m.at(0, 2), a12 = m.at(1, 2);

    const double A = a00 + a11 + a22;
    const double B = (a00 * a11 - a01 * a01) + (a00 * a22 - a02 * a02) + (a11 * a22 - a12 * a12);
    const double C = a00 * (a11 * a22 - a12 * a12) - a01 * (a01 * a22 - a12 * a02) +
                     a02 * (a01 * a12 - a11 * a02);
    const Cubic q{A, B, C};

    // Gershgorin bounds, slightly widened so the bracket endpoints are strict.
    double lo = a00 - std::abs(a01) - std::abs(a02);
    double hi = a00 + std::abs(a01) + std::abs(a02);
    lo = std::min(lo, a11 - std::abs(a01) - std::abs(a12));
    hi = std::max(hi, a11 + std::abs(a01) + std::abs(a12));
    lo = std::min(lo, a22 - std::abs(a02) - std::abs(a12));
    hi = std::max(hi, a22 + std::abs(a02) + std::abs(a12));
    const double scale = std::max({std::abs(lo), std::abs(hi), 1e-300});
    lo -= 1e-12 * scale + 1e-300;
    hi += 1e-12 * scale + 1e-300;

    // A^2 - 3B = ((l1-l2)^2 + (l2-l3)^2 + (l1-l3)^2)/2 >= 0 for symmetric input.
    const double disc = A * A - 3.0 * B;
    if (disc <= 1e-28 * scale * scale) {
        const double l = A / 3.0;
        return {l, l, l};
    }
    const double root = std::sqrt(disc);
    const double crit_lo = (A - root) / 3.0; // local maximum of q
    const double crit_hi = (A + root) / 3.0; // local minimum of q

    // In exact arithmetic q(crit_lo) >= 0 >= q(crit_hi); a violated sign means
    // a double root pinched at that critical point up to roundoff.
    double l1, l2, l3; // ascending
    const double q_at_max = q(crit_lo);
    const double q_at_min = q(crit_hi);
    if (q_at_max < 0.0) {
        l1 = l2 = crit_lo;
        l3 = bisect(q, crit_hi, hi);
    } else if (q_at_min > 0.0) {
        l2 = l3 = crit_hi;
        l1 = bisect(q, lo, crit_lo);
    } else {
        l1 = bisect(q, lo, crit_lo);
        l2 = bisect(q, crit_lo, crit_hi);
        l3 = bisect(q, crit_hi, hi);
    }
    std::vector<double> out{l3, l2, l1};
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

} // namespace stf
