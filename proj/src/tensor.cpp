#include "stf/tensor.hpp"

#include <algorithm>
#include <cmath>

#include "stf/fft.hpp"
#include "stf/linalg.hpp"
#include "stf/reduce.hpp"

namespace stf {

namespace {

void check_responses(std::span<const ResponseField> q, const DirectionSet& dirs) {
    if (q.empty()) throw parameter_error("tensor: empty response list");
    if (static_cast<int>(q.size()) != dirs.count())
        throw parameter_error("tensor: response count does not match direction count");
    const Dims& dims = q.front().dims;
    for (const ResponseField& r : q) {
        if (r.dims != dims) throw parameter_error("tensor: response grids differ");
        for (double v : r.values)
            if (!(v >= 0.0)) throw parameter_error("tensor: responses must be nonnegative");
    }
}

TensorField weighted_outer_sum(std::span<const ResponseField> q, const DirectionSet& dirs,
                               double alpha, double beta, const char* tag) {
    check_responses(q, dirs);
    const int n = dirs.dim;
    const int K = dirs.count();
    TensorField tf(q.front().dims, n, tag);
    const std::size_t npix = tf.pixel_count();
    const std::size_t nplanes = tf.plane_count();

    // Per-filter packed contribution alpha n n^T - beta I.
    std::vector<double> contrib(static_cast<std::size_t>(K) * nplanes);
    for (int k = 0; k < K; ++k) {
        SymMat m = outer(dirs.dir(k));
        m *= alpha;
        for (int i = 0; i < n; ++i) m.at(i, i) -= beta;
        std::copy(m.packed().begin(), m.packed().end(),
                  contrib.begin() + static_cast<std::size_t>(k) * nplanes);
    }

#pragma omp parallel for schedule(static)
    for (long long pix = 0; pix < static_cast<long long>(npix); ++pix) {
        const auto up = static_cast<std::size_t>(pix);
        for (std::size_t e = 0; e < nplanes; ++e) {
            double acc = 0.0;
            for (int k = 0; k < K; ++k)
                acc += q[static_cast<std::size_t>(k)].values[up] *
                       contrib[static_cast<std::size_t>(k) * nplanes + e];
            tf.at(e, up) = acc;
        }
    }
    return tf;
}

} // namespace

TensorField tensor_gk(std::span<const ResponseField> q, const DirectionSet& dirs,
                      FrameCoefficients coef) {
    if (!(coef.alpha > 0.0)) throw parameter_error("tensor_gk: alpha must be > 0");
    if (!(coef.beta >= 0.0)) throw parameter_error("tensor_gk: beta must be >= 0");
    return weighted_outer_sum(q, dirs, coef.alpha, coef.beta, "gk");
}

TensorField tensor_bg(std::span<const ResponseField> q, const DirectionSet& dirs) {
    return weighted_outer_sum(q, dirs, 1.0, 0.0, "bg");
}

SymMat spectral_moment_tensor(const ScalarField& f) {
    if (!all_even(f.dims)) throw parameter_error("spectral_moment_tensor: extents must be even");
    const std::vector<fft::cplx> F = fft::forward(f);
    const int nd = static_cast<int>(f.dims.size());
    const std::size_t nacc = SymMat::packed_size(nd);
    const Dims dims = f.dims;

    std::vector<double> sums = blocked_sum(F.size(), nacc, [&](std::size_t idx, double* acc) {
        std::vector<int> c(static_cast<std::size_t>(nd));
        flat_to_coords(idx, dims, c.data());
        std::vector<double> w(static_cast<std::size_t>(nd));
        for (int a = 0; a < nd; ++a)
            w[static_cast<std::size_t>(a)] = freq_rad(c[static_cast<std::size_t>(a)], dims[static_cast<std::size_t>(a)]);
        const double p = std::norm(F[idx]);
        std::size_t e = 0;
        for (int i = 0; i < nd; ++i)
            for (int j = i; j < nd; ++j)
                acc[e++] = p * w[static_cast<std::size_t>(i)] * w[static_cast<std::size_t>(j)];
    });

    SymMat t(nd);
    t.packed() = sums;
    return t;
}

SymMat dft_gradient_tensor(const ScalarField& f) {
    if (!all_even(f.dims)) throw parameter_error("dft_gradient_tensor: extents must be even");
    const std::vector<fft::cplx> F = fft::forward(f);
    const int nd = static_cast<int>(f.dims.size());
    const std::size_t count = F.size();
    const Dims dims = f.dims;

    // Complex derivative planes g_a = IDFT(i w_a F).
    std::vector<std::vector<fft::cplx>> grad(static_cast<std::size_t>(nd));
    for (int axis = 0; axis < nd; ++axis) {
        std::vector<fft::cplx> spec(count);
        for (std::size_t idx = 0; idx < count; ++idx) {
            std::vector<int> c(static_cast<std::size_t>(nd));
            flat_to_coords(idx, dims, c.data());
            const double w = freq_rad(c[static_cast<std::size_t>(axis)], dims[static_cast<std::size_t>(axis)]);
            spec[idx] = fft::cplx(0.0, w) * F[idx];
        }
        grad[static_cast<std::size_t>(axis)].resize(count);
        fft::transform(dims, spec.data(), grad[static_cast<std::size_t>(axis)].data(), +1);
    }

    const std::size_t nacc = SymMat::packed_size(nd);
    std::vector<double> sums = blocked_sum(count, nacc, [&](std::size_t idx, double* acc) {
        std::size_t e = 0;
        for (int i = 0; i < nd; ++i)
            for (int j = i; j < nd; ++j) {
                const fft::cplx prod =
                    grad[static_cast<std::size_t>(i)][idx] * std::conj(grad[static_cast<std::size_t>(j)][idx]);
                acc[e++] = prod.real();
            }
    });

    SymMat t(nd);
    t.packed() = sums;
    return t;
}

// ---------------------------------------------------------------------------
// Spatial convolution machinery for the Gaussian-derivative realization.

namespace {

// Kernel over offsets [-radius, radius].
struct Kernel1D {
    int radius = 0;
    std::vector<double> w; // size 2*radius+1, center at index radius
};

Kernel1D gauss_kernel(double sigma) {
    Kernel1D k;
    k.radius = std::max(1, static_cast<int>(std::ceil(4.0 * sigma)));
    k.w.resize(static_cast<std::size_t>(2 * k.radius + 1));
    double sum = 0.0;
    for (int t = -k.radius; t <= k.radius; ++t) {
        const double v = std::exp(-0.5 * t * t / (sigma * sigma));
        k.w[static_cast<std::size_t>(t + k.radius)] = v;
        sum += v;
    }
    for (double& v : k.w) v /= sum;
    return k;
}

// Derivative of the unit-sum sampled Gaussian: d(t) = -t/sigma^2 * g(t).
Kernel1D gauss_deriv_kernel(double sigma) {
    Kernel1D k = gauss_kernel(sigma);
    for (int t = -k.radius; t <= k.radius; ++t)
        k.w[static_cast<std::size_t>(t + k.radius)] *= -static_cast<double>(t) / (sigma * sigma);
    return k;
}

int wrap_index(int i, int m, Boundary boundary) {
    if (boundary == Boundary::periodic) {
        i %= m;
        return i < 0 ? i + m : i;
    }
    // Symmetric reflection with edge duplication: ..., 1, 0 | 0, 1, ...
    while (i < 0 || i >= m) {
        if (i < 0) i = -i - 1;
        if (i >= m) i = 2 * m - i - 1;
    }
    return i;
}

// Convolution along one axis; parallel over independent lines.
void convolve_axis(std::vector<double>& values, const Dims& dims, int axis, const Kernel1D& k,
                   Boundary boundary) {
    const int m = dims[static_cast<std::size_t>(axis)];
    const auto strides = row_major_strides(dims);
    const std::size_t stride = strides[static_cast<std::size_t>(axis)];
    const std::size_t count = values.size();
    const std::size_t nlines = count / static_cast<std::size_t>(m);

    // Line l = outer block index + inner offset, never touching `axis`.
    const std::size_t inner = stride;                      // product of extents after axis
    const std::size_t outer = count / (inner * static_cast<std::size_t>(m)); // before axis

    std::vector<double> result(count);
#pragma omp parallel for collapse(2) schedule(static)
    for (long long o = 0; o < static_cast<long long>(outer); ++o) {
        for (long long in = 0; in < static_cast<long long>(inner); ++in) {
            const std::size_t base = static_cast<std::size_t>(o) * inner * static_cast<std::size_t>(m) +
                                     static_cast<std::size_t>(in);
            for (int i = 0; i < m; ++i) {
                double acc = 0.0;
                for (int t = -k.radius; t <= k.radius; ++t) {
                    const int src = wrap_index(i - t, m, boundary);
                    acc += k.w[static_cast<std::size_t>(t + k.radius)] *
                           values[base + static_cast<std::size_t>(src) * stride];
                }
                result[base + static_cast<std::size_t>(i) * stride] = acc;
            }
        }
    }
    values.swap(result);
    (void)nlines;
}

void spectral_multiply_gaussian(std::vector<double>& values, const Dims& dims, double sigma,
                                double freq_scale) {
    const std::size_t count = element_count(dims);
    const int nd = static_cast<int>(dims.size());
    std::vector<fft::cplx> in(count), out(count);
    for (std::size_t i = 0; i < count; ++i) in[i] = fft::cplx(values[i], 0.0);
    fft::transform(dims, in.data(), out.data(), -1);
#pragma omp parallel for schedule(static)
    for (long long idx = 0; idx < static_cast<long long>(count); ++idx) {
        std::vector<int> c(static_cast<std::size_t>(nd));
        flat_to_coords(static_cast<std::size_t>(idx), dims, c.data());
        double w2 = 0.0;
        for (int a = 0; a < nd; ++a) {
            const double w = freq_scale * freq_rad(c[static_cast<std::size_t>(a)], dims[static_cast<std::size_t>(a)]);
            w2 += w * w;
        }
        out[static_cast<std::size_t>(idx)] *= std::exp(-0.5 * sigma * sigma * w2);
    }
    fft::transform(dims, out.data(), in.data(), +1);
    for (std::size_t i = 0; i < count; ++i) values[i] = in[i].real();
}

// Real spectral-derivative planes; Nyquist bins carry weight zero so the
// derivative of a real field stays real.
VectorField spectral_gradient(const ScalarField& f, double freq_scale) {
    const std::vector<fft::cplx> F = fft::forward(f);
    const int nd = static_cast<int>(f.dims.size());
    const std::size_t count = F.size();
    VectorField g(f.dims, nd);
    for (int axis = 0; axis < nd; ++axis) {
        std::vector<fft::cplx> spec(count), out(count);
        for (std::size_t idx = 0; idx < count; ++idx) {
            std::vector<int> c(static_cast<std::size_t>(nd));
            flat_to_coords(idx, f.dims, c.data());
            const int m = f.dims[static_cast<std::size_t>(axis)];
            const int bin = freq_bin(c[static_cast<std::size_t>(axis)], m);
            const bool nyquist = (m % 2 == 0) && (bin == -m / 2);
            const double w = nyquist ? 0.0 : freq_scale * 2.0 * kPi * bin / m;
            spec[idx] = fft::cplx(0.0, w) * F[idx];
        }
        fft::transform(f.dims, spec.data(), out.data(), +1);
        for (std::size_t i = 0; i < count; ++i) g.at(axis, i) = out[i].real();
    }
    return g;
}

TensorField outer_product_field(const VectorField& g, const char* tag) {
    TensorField tf(g.dims, g.ncomp, tag);
    const std::size_t npix = tf.pixel_count();
    const int n = g.ncomp;
#pragma omp parallel for schedule(static)
    for (long long pix = 0; pix < static_cast<long long>(npix); ++pix) {
        const auto up = static_cast<std::size_t>(pix);
        std::size_t e = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) tf.at(e++, up) = g.at(i, up) * g.at(j, up);
    }
    return tf;
}

TensorField subsample_even_sites(const TensorField& fine, const Dims& coarse_dims) {
    TensorField out(coarse_dims, fine.order, fine.tag);
    const std::size_t npix = out.pixel_count();
    const int nd = static_cast<int>(coarse_dims.size());
#pragma omp parallel for schedule(static)
    for (long long pix = 0; pix < static_cast<long long>(npix); ++pix) {
        std::vector<int> c(static_cast<std::size_t>(nd));
        flat_to_coords(static_cast<std::size_t>(pix), coarse_dims, c.data());
        for (int a = 0; a < nd; ++a) c[static_cast<std::size_t>(a)] *= 2;
        const std::size_t src = coords_to_flat(c.data(), fine.dims);
        for (std::size_t e = 0; e < out.plane_count(); ++e)
            out.at(e, static_cast<std::size_t>(pix)) = fine.at(e, src);
    }
    return out;
}

} // namespace

ScalarField gaussian_smooth(const ScalarField& f, double sigma, Boundary boundary) {
    if (!(sigma >= 0.0)) throw parameter_error("gaussian_smooth: sigma must be >= 0");
    ScalarField out = f;
    if (sigma == 0.0) return out;
    const Kernel1D k = gauss_kernel(sigma);
    for (int axis = 0; axis < static_cast<int>(f.dims.size()); ++axis)
        convolve_axis(out.values, f.dims, axis, k, boundary);
    return out;
}

VectorField gaussian_gradient(const ScalarField& f, double sigma_d, Boundary boundary) {
    if (!(sigma_d > 0.0)) throw parameter_error("gaussian_gradient: sigma_d must be > 0");
    const int nd = static_cast<int>(f.dims.size());
    const Kernel1D smooth = gauss_kernel(sigma_d);
    const Kernel1D deriv = gauss_deriv_kernel(sigma_d);

    VectorField g(f.dims, nd);
    for (int axis = 0; axis < nd; ++axis) {
        std::vector<double> plane = f.values;
        for (int b = 0; b < nd; ++b)
            convolve_axis(plane, f.dims, b, b == axis ? deriv : smooth, boundary);
        std::copy(plane.begin(), plane.end(),
                  g.planes.begin() + static_cast<std::size_t>(axis) * element_count(f.dims));
    }
    return g;
}

TensorField gradient_tensor(const ScalarField& f, const GradientOptions& opt) {
    if (!(opt.sigma_d > 0.0)) throw parameter_error("gradient_tensor: sigma_d must be > 0");
    if (!(opt.sigma_o >= 0.0)) throw parameter_error("gradient_tensor: sigma_o must be >= 0");
    if (opt.kind == GradientKind::spectral && opt.boundary != Boundary::periodic)
        throw parameter_error("gradient_tensor: spectral kind requires periodic boundary");

    if (opt.upsample) {
        const ScalarField fine = upsample2x(f);
        GradientOptions inner = opt;
        inner.upsample = false;
        inner.sigma_d = 2.0 * opt.sigma_d;
        inner.sigma_o = 2.0 * opt.sigma_o;
        TensorField tf = gradient_tensor(fine, inner);
        // Gradients above were per fine-grid sample; rescale to original units.
        for (double& v : tf.planes) v *= 4.0;
        return subsample_even_sites(tf, f.dims);
    }

    VectorField g;
    if (opt.kind == GradientKind::gaussian_derivative) {
        g = gaussian_gradient(f, opt.sigma_d, opt.boundary);
    } else {
        if (!all_even(f.dims)) throw parameter_error("gradient_tensor: spectral kind needs even extents");
        g = spectral_gradient(f, 1.0);
        if (opt.sigma_d > 0.0) {
            // Inner scale as an exact Gaussian transfer on each derivative plane.
            const std::size_t npix = element_count(f.dims);
            for (int a = 0; a < g.ncomp; ++a) {
                std::vector<double> plane(g.planes.begin() + static_cast<std::size_t>(a) * npix,
                                          g.planes.begin() + static_cast<std::size_t>(a + 1) * npix);
                spectral_multiply_gaussian(plane, f.dims, opt.sigma_d, 1.0);
                std::copy(plane.begin(), plane.end(), g.planes.begin() + static_cast<std::size_t>(a) * npix);
            }
        }
    }

    TensorField tf = outer_product_field(g, "gradient");
    if (opt.sigma_o > 0.0) {
        const std::size_t npix = tf.pixel_count();
        for (std::size_t e = 0; e < tf.plane_count(); ++e) {
            std::vector<double> plane(tf.planes.begin() + e * npix, tf.planes.begin() + (e + 1) * npix);
            if (opt.kind == GradientKind::spectral)
                spectral_multiply_gaussian(plane, tf.dims, opt.sigma_o, 1.0);
            else {
                const Kernel1D k = gauss_kernel(opt.sigma_o);
                for (int axis = 0; axis < static_cast<int>(tf.dims.size()); ++axis)
                    convolve_axis(plane, tf.dims, axis, k, opt.boundary);
            }
            std::copy(plane.begin(), plane.end(), tf.planes.begin() + e * npix);
        }
    }
    return tf;
}

ScalarField upsample2x(const ScalarField& f) {
    if (!all_even(f.dims)) throw parameter_error("upsample2x: extents must be even");
    const int nd = static_cast<int>(f.dims.size());
    const std::vector<fft::cplx> F = fft::forward(f);

    Dims big = f.dims;
    for (int& d : big) d *= 2;
    const std::size_t big_count = element_count(big);
    std::vector<fft::cplx> G(big_count, fft::cplx(0.0, 0.0));

    // Embed each source bin into the centered big spectrum. A source bin at
    // the Nyquist frequency -M/2 is split evenly between -M/2 and +M/2 on the
    // big grid, which preserves Hermitian symmetry and the sample values.
    const std::size_t count = F.size();
    std::vector<int> c(static_cast<std::size_t>(nd));
    for (std::size_t idx = 0; idx < count; ++idx) {
        flat_to_coords(idx, f.dims, c.data());
        // Collect per-axis target bins: one bin, or a split pair at Nyquist.
        std::vector<std::vector<int>> targets(static_cast<std::size_t>(nd));
        double weight = 1.0;
        for (int a = 0; a < nd; ++a) {
            const int m = f.dims[static_cast<std::size_t>(a)];
            const int bin = freq_bin(c[static_cast<std::size_t>(a)], m);
            if (bin == -m / 2) {
                targets[static_cast<std::size_t>(a)] = {-m / 2, m / 2};
                weight *= 0.5;
            } else {
                targets[static_cast<std::size_t>(a)] = {bin};
            }
        }
        // Distribute over the cartesian product of target bins.
        std::vector<std::size_t> pick(static_cast<std::size_t>(nd), 0);
        while (true) {
            std::vector<int> tc(static_cast<std::size_t>(nd));
            for (int a = 0; a < nd; ++a) {
                const int bin = targets[static_cast<std::size_t>(a)][pick[static_cast<std::size_t>(a)]];
                const int bm = big[static_cast<std::size_t>(a)];
                tc[static_cast<std::size_t>(a)] = bin >= 0 ? bin : bin + bm;
            }
            G[coords_to_flat(tc.data(), big)] += weight * F[idx];
            int a = nd - 1;
            for (; a >= 0; --a) {
                if (++pick[static_cast<std::size_t>(a)] < targets[static_cast<std::size_t>(a)].size()) break;
                pick[static_cast<std::size_t>(a)] = 0;
            }
            if (a < 0) break;
        }
    }

    ScalarField out = fft::inverse_to_real(big, G, f.periodic);
    const double scale = std::pow(2.0, 0.5 * nd); // restores original sample values under the unitary DFT
    for (double& v : out.values) v *= scale;
    return out;
}

double max_psd_violation(const TensorField& tf) {
    const std::size_t npix = tf.pixel_count();
    double worst = 0.0;
#pragma omp parallel for schedule(static) reduction(max : worst)
    for (long long pix = 0; pix < static_cast<long long>(npix); ++pix) {
        const SymMat m = tf.matrix_at(static_cast<std::size_t>(pix));
        const double tr = std::abs(m.trace());
        if (tr == 0.0) continue;
        const EigenDecomp e = eig_sym(m);
        const double viol = std::max(0.0, -e.eigenvalues.back()) / tr;
        worst = std::max(worst, viol);
    }
    return worst;
}

} // namespace stf
