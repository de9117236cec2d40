#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "stf/errors.hpp"

namespace stf {

/// Symmetric N x N matrix stored as the row-major packed upper triangle
/// (N(N+1)/2 values). Entry order for N=3: (0,0),(0,1),(0,2),(1,1),(1,2),(2,2).
class SymMat {
public:
    SymMat() = default;
    explicit SymMat(int n);

    static SymMat identity(int n);

    int dim() const { return n_; }

    double& at(int i, int j) { return a_[index(i, j)]; }
    double at(int i, int j) const { return a_[index(i, j)]; }

    std::vector<double>& packed() { return a_; }
    const std::vector<double>& packed() const { return a_; }

    static std::size_t packed_size(int n) {
        return static_cast<std::size_t>(n) * static_cast<std::size_t>(n + 1) / 2;
    }

    /// Packed offset of entry (i,j); arguments in either order.
    std::size_t index(int i, int j) const;

    double trace() const;
    /// Frobenius norm of the full matrix (off-diagonal entries count twice).
    double frobenius_norm() const;
    bool all_finite() const;

    SymMat& operator+=(const SymMat& rhs);
    SymMat& operator-=(const SymMat& rhs);
    SymMat& operator*=(double c);

private:
    int n_ = 0;
    std::vector<double> a_;
};

SymMat operator+(SymMat lhs, const SymMat& rhs);
SymMat operator-(SymMat lhs, const SymMat& rhs);
SymMat operator*(double c, SymMat m);

/// Relative Frobenius distance ||a-b|| / max(||a||, ||b||); 0 when both are zero.
double rel_frobenius_error(const SymMat& a, const SymMat& b);

/// v v^T as a packed symmetric matrix. Total function: any vector, any norm.
SymMat outer(std::span<const double> v);

/// Eigendecomposition of a symmetric matrix. Eigenvalues sorted descending,
/// eigenvectors orthonormal, column k paired with eigenvalue k.
struct EigenDecomp {
    int n = 0;
    std::vector<double> eigenvalues;
    std::vector<double> eigenvectors; // column-major: vector k occupies [k*n, (k+1)*n)

    std::span<const double> vec(int k) const {
        return {eigenvectors.data() + static_cast<std::size_t>(k) * static_cast<std::size_t>(n),
                static_cast<std::size_t>(n)};
    }
};

/// Cyclic Jacobi eigensolver with a closed-form 2x2 path. Sweeps are capped;
/// exceeding the cap throws numeric_error rather than returning garbage.
/// Sign convention: the first component of each eigenvector whose magnitude
/// exceeds 1e-12 of the largest component is made positive.
EigenDecomp eig_sym(const SymMat& m, int max_sweeps = 100);

/// True iff the minimum eigenvalue is >= -tol. Requires tol >= 0.
bool is_psd(const SymMat& m, double tol);

} // namespace stf
