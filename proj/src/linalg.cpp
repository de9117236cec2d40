#include "stf/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace stf {

SymMat::SymMat(int n) : n_(n), a_(packed_size(n), 0.0) {
    if (n < 1) throw parameter_error("SymMat: dimension must be >= 1");
}

SymMat SymMat::identity(int n) {
    SymMat m(n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
}

std::size_t SymMat::index(int i, int j) const {
    if (i > j) std::swap(i, j);
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) -
           static_cast<std::size_t>(i) * static_cast<std::size_t>(i - 1) / 2 +
           static_cast<std::size_t>(j - i);
}

double SymMat::trace() const {
    double t = 0.0;
    for (int i = 0; i < n_; ++i) t += at(i, i);
    return t;
}

double SymMat::frobenius_norm() const {
    double s = 0.0;
    for (int i = 0; i < n_; ++i)
        for (int j = i; j < n_; ++j) {
            const double v = at(i, j);
            s += (i == j) ? v * v : 2.0 * v * v;
        }
    return std::sqrt(s);
}

bool SymMat::all_finite() const {
    for (double v : a_)
        if (!std::isfinite(v)) return false;
    return true;
}

SymMat& SymMat::operator+=(const SymMat& rhs) {
    if (rhs.n_ != n_) throw parameter_error("SymMat: dimension mismatch");
    for (std::size_t e = 0; e < a_.size(); ++e) a_[e] += rhs.a_[e];
    return *this;
}

SymMat& SymMat::operator-=(const SymMat& rhs) {
    if (rhs.n_ != n_) throw parameter_error("SymMat: dimension mismatch");
    for (std::size_t e = 0; e < a_.size(); ++e) a_[e] -= rhs.a_[e];
    return *this;
}

SymMat& SymMat::operator*=(double c) {
    for (double& v : a_) v *= c;
    return *this;
}

SymMat operator+(SymMat lhs, const SymMat& rhs) { return lhs += rhs; }
SymMat operator-(SymMat lhs, const SymMat& rhs) { return lhs -= rhs; }
SymMat operator*(double c, SymMat m) { return m *= c; }

double rel_frobenius_error(const SymMat& a, const SymMat& b) {
    const double scale = std::max(a.frobenius_norm(), b.frobenius_norm());
    if (scale == 0.0) return 0.0;
    return (a - b).frobenius_norm() / scale;
}

SymMat outer(std::span<const double> v) {
    const int n = static_cast<int>(v.size());
    SymMat m(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            m.at(i, j) = v[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(j)];
    return m;
}

namespace {

// Applies the deterministic sign convention in place.
void fix_vector_signs(int n, std::vector<double>& vecs) {
    for (int k = 0; k < n; ++k) {
        double* v = vecs.data() + static_cast<std::size_t>(k) * static_cast<std::size_t>(n);
        double maxmag = 0.0;
        for (int i = 0; i < n; ++i) maxmag = std::max(maxmag, std::abs(v[i]));
        if (maxmag == 0.0) continue;
        const double thresh = 1e-12 * maxmag;
        for (int i = 0; i < n; ++i) {
            if (std::abs(v[i]) > thresh) {
                if (v[i] < 0.0)
                    for (int j = 0; j < n; ++j) v[j] = -v[j];
                break;
            }
        }
    }
}

EigenDecomp sort_descending(int n, const std::vector<double>& diag, const std::vector<double>& vecs) {
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    // Stable: equal eigenvalues keep the solver's output order.
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return diag[static_cast<std::size_t>(a)] > diag[static_cast<std::size_t>(b)]; });

    EigenDecomp out;
    out.n = n;
    out.eigenvalues.resize(static_cast<std::size_t>(n));
    out.eigenvectors.resize(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const int src = order[static_cast<std::size_t>(k)];
        out.eigenvalues[static_cast<std::size_t>(k)] = diag[static_cast<std::size_t>(src)];
        for (int i = 0; i < n; ++i)
            out.eigenvectors[static_cast<std::size_t>(k) * static_cast<std::size_t>(n) + static_cast<std::size_t>(i)] =
                vecs[static_cast<std::size_t>(src) * static_cast<std::size_t>(n) + static_cast<std::size_t>(i)];
    }
    fix_vector_signs(n, out.eigenvectors);
    return out;
}

} // namespace

EigenDecomp eig_sym(const SymMat& m, int max_sweeps) {
    const int n = m.dim();
    if (n < 1) throw parameter_error("eig_sym: empty matrix");
    if (!m.all_finite()) throw parameter_error("eig_sym: non-finite entries");

    // Column-major identity; columns accumulate the rotations.
    std::vector<double> vecs(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i)
        vecs[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(i)] = 1.0;

    if (n == 1) {
        std::vector<double> diag{m.at(0, 0)};
        return sort_descending(n, diag, vecs);
    }

    if (n == 2) {
        // Closed-form single rotation.
        const double app = m.at(0, 0), aqq = m.at(1, 1), apq = m.at(0, 1);
        std::vector<double> diag(2);
        if (apq == 0.0) {
            diag[0] = app;
            diag[1] = aqq;
        } else {
            const double theta = (aqq - app) / (2.0 * apq);
            const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
            const double c = 1.0 / std::sqrt(t * t + 1.0);
            const double s = t * c;
            diag[0] = app - t * apq;
            diag[1] = aqq + t * apq;
            vecs = {c, -s, s, c}; // columns (c,-s) and (s,c)
        }
        return sort_descending(n, diag, vecs);
    }

    // Dense working copy.
    std::vector<double> A(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            A[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)] = m.at(i, j);

    auto a = [&](int i, int j) -> double& {
        return A[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)];
    };
    auto v = [&](int i, int k) -> double& {
        // component i of column k
        return vecs[static_cast<std::size_t>(k) * static_cast<std::size_t>(n) + static_cast<std::size_t>(i)];
    };

    const double norm = m.frobenius_norm();
    const double off_target = 1e-14 * norm;

    bool converged = (norm == 0.0);
    for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
        double off2 = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off2 += a(i, j) * a(i, j);
        if (std::sqrt(2.0 * off2) <= off_target) {
            converged = true;
            break;
        }
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double tau = s / (1.0 + c);

                const double app = a(p, p), aqq = a(q, q);
                a(p, p) = app - t * apq;
                a(q, q) = aqq + t * apq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (int i = 0; i < n; ++i) {
                    if (i == p || i == q) continue;
                    const double aip = a(i, p), aiq = a(i, q);
                    a(i, p) = aip - s * (aiq + tau * aip);
                    a(p, i) = a(i, p);
                    a(i, q) = aiq + s * (aip - tau * aiq);
                    a(q, i) = a(i, q);
                }
                for (int i = 0; i < n; ++i) {
                    const double vip = v(i, p), viq = v(i, q);
                    v(i, p) = vip - s * (viq + tau * vip);
                    v(i, q) = viq + s * (vip - tau * viq);
                }
            }
        }
    }
    if (!converged) {
        double off2 = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off2 += a(i, j) * a(i, j);
        if (std::sqrt(2.0 * off2) > off_target)
            throw numeric_error("eig_sym: Jacobi iteration did not converge within sweep cap");
    }

    std::vector<double> diag(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) diag[static_cast<std::size_t>(i)] = a(i, i);
    return sort_descending(n, diag, vecs);
}

bool is_psd(const SymMat& m, double tol) {
    if (tol < 0.0) throw parameter_error("is_psd: tolerance must be >= 0");
    const EigenDecomp e = eig_sym(m);
    return e.eigenvalues.back() >= -tol;
}

} // namespace stf
