#pragma once

#include <complex>
#include <string>
#include <vector>

#include "stf/grid.hpp"
#include "stf/linalg.hpp"

namespace stf {

/// Discrete real image f(r) on a regular grid, row-major, last axis fastest.
struct ScalarField {
    Dims dims;
    std::vector<double> values;
    bool periodic = true;

    ScalarField() = default;
    ScalarField(Dims d, bool per = true)
        : dims(std::move(d)), values(element_count(dims), 0.0), periodic(per) {}

    std::size_t size() const { return values.size(); }
};

/// Per-pixel nonnegative magnitude (or power) response q_k of one filter.
struct ResponseField {
    Dims dims;
    std::vector<double> values;
    std::string label;
};

/// N gradient planes over a grid, plane-major.
struct VectorField {
    Dims dims;
    int ncomp = 0;
    std::vector<double> planes; // plane c occupies [c*npix, (c+1)*npix)

    std::size_t pixel_count() const { return ncomp > 0 ? planes.size() / static_cast<std::size_t>(ncomp) : 0; }
    double& at(int c, std::size_t pix) { return planes[static_cast<std::size_t>(c) * pixel_count_ + pix]; }
    double at(int c, std::size_t pix) const { return planes[static_cast<std::size_t>(c) * pixel_count_ + pix]; }

    VectorField() = default;
    VectorField(Dims d, int nc)
        : dims(std::move(d)), ncomp(nc), planes(element_count(dims) * static_cast<std::size_t>(nc), 0.0),
          pixel_count_(element_count(dims)) {}

private:
    std::size_t pixel_count_ = 0;
};

/// Per-pixel packed symmetric matrix: N(N+1)/2 planes over the grid,
/// plane-major so each packed entry is a contiguous image.
struct TensorField {
    Dims dims;
    int order = 0;   // matrix dimension N
    std::string tag; // construction: gk | bg | gradient | spectral
    std::vector<double> planes;

    TensorField() = default;
    TensorField(Dims d, int n, std::string t)
        : dims(std::move(d)), order(n), tag(std::move(t)),
          planes(element_count(dims) * SymMat::packed_size(n), 0.0), npix_(element_count(dims)) {}

    std::size_t pixel_count() const { return npix_; }
    std::size_t plane_count() const { return SymMat::packed_size(order); }

    double& at(std::size_t plane, std::size_t pix) { return planes[plane * npix_ + pix]; }
    double at(std::size_t plane, std::size_t pix) const { return planes[plane * npix_ + pix]; }

    SymMat matrix_at(std::size_t pix) const {
        SymMat m(order);
        for (std::size_t e = 0; e < plane_count(); ++e) m.packed()[e] = at(e, pix);
        return m;
    }
    void set_matrix(std::size_t pix, const SymMat& m) {
        for (std::size_t e = 0; e < plane_count(); ++e) at(e, pix) = m.packed()[e];
    }

private:
    std::size_t npix_ = 0;
};

} // namespace stf
