#include "stf/reference.hpp"

#include <cmath>

namespace stf::reference {

using cplx = std::complex<double>;

std::vector<cplx> naive_dft(const Dims& dims, std::span<const cplx> in, int sign) {
    const std::size_t count = element_count(dims);
    if (in.size() != count) throw parameter_error("naive_dft: size mismatch");
    const int nd = static_cast<int>(dims.size());
    std::vector<cplx> out(count, cplx(0.0, 0.0));
    std::vector<int> oc(static_cast<std::size_t>(nd)), ic(static_cast<std::size_t>(nd));

    for (std::size_t o = 0; o < count; ++o) {
        flat_to_coords(o, dims, oc.data());
        cplx acc(0.0, 0.0);
        for (std::size_t i = 0; i < count; ++i) {
            flat_to_coords(i, dims, ic.data());
            double phase = 0.0;
            for (int a = 0; a < nd; ++a)
                phase += static_cast<double>(oc[static_cast<std::size_t>(a)]) *
                         static_cast<double>(ic[static_cast<std::size_t>(a)]) /
                         static_cast<double>(dims[static_cast<std::size_t>(a)]);
            const double arg = sign * 2.0 * kPi * phase;
            acc += in[i] * cplx(std::cos(arg), std::sin(arg));
        }
        out[o] = acc;
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(count));
    for (cplx& v : out) v *= scale;
    return out;
}

std::vector<cplx> naive_dft_real(const ScalarField& f) {
    std::vector<cplx> in(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) in[i] = cplx(f.values[i], 0.0);
    return naive_dft(f.dims, in, -1);
}

std::vector<ResponseField> apply_bank(const ScalarField& f, std::span<const FilterSpec> bank,
                                      ResponseMode mode) {
    const std::size_t count = element_count(f.dims);
    const int nd = static_cast<int>(f.dims.size());
    const std::vector<cplx> F = naive_dft_real(f);
    std::vector<ResponseField> out(bank.size());
    std::vector<int> c(static_cast<std::size_t>(nd));
    for (std::size_t k = 0; k < bank.size(); ++k) {
        std::vector<cplx> spec(count);
        for (std::size_t idx = 0; idx < count; ++idx) {
            flat_to_coords(idx, f.dims, c.data());
            std::vector<double> omega(static_cast<std::size_t>(nd));
            for (int a = 0; a < nd; ++a)
                omega[static_cast<std::size_t>(a)] =
                    freq_rad(c[static_cast<std::size_t>(a)], f.dims[static_cast<std::size_t>(a)]);
            spec[idx] = transfer_at(bank[k], omega) * F[idx];
        }
        const std::vector<cplx> resp = naive_dft(f.dims, spec, +1);
        out[k].dims = f.dims;
        out[k].label = "q" + std::to_string(k + 1);
        out[k].values.resize(count);
        for (std::size_t i = 0; i < count; ++i) {
            const double m2 = std::norm(resp[i]);
            out[k].values[i] = (mode == ResponseMode::power) ? m2 : std::sqrt(m2);
        }
    }
    return out;
}

SymMat spectral_moment_tensor(const ScalarField& f) {
    const std::vector<cplx> F = naive_dft_real(f);
    const int nd = static_cast<int>(f.dims.size());
    SymMat t(nd);
    std::vector<int> c(static_cast<std::size_t>(nd));
    for (std::size_t idx = 0; idx < F.size(); ++idx) {
        flat_to_coords(idx, f.dims, c.data());
        const double p = std::norm(F[idx]);
        for (int i = 0; i < nd; ++i)
            for (int j = i; j < nd; ++j)
                t.at(i, j) += p * freq_rad(c[static_cast<std::size_t>(i)], f.dims[static_cast<std::size_t>(i)]) *
                              freq_rad(c[static_cast<std::size_t>(j)], f.dims[static_cast<std::size_t>(j)]);
    }
    return t;
}

namespace {

TensorField weighted_sum_serial(std::span<const ResponseField> q, const DirectionSet& dirs,
                                double alpha, double beta, const char* tag) {
    const int n = dirs.dim;
    TensorField tf(q.front().dims, n, tag);
    for (std::size_t pix = 0; pix < tf.pixel_count(); ++pix) {
        SymMat acc(n);
        for (int k = 0; k < dirs.count(); ++k) {
            const double w = q[static_cast<std::size_t>(k)].values[pix];
            SymMat m = outer(dirs.dir(k));
            m *= alpha * w;
            for (int i = 0; i < n; ++i) m.at(i, i) -= beta * w;
            acc += m;
        }
        tf.set_matrix(pix, acc);
    }
    return tf;
}

} // namespace

TensorField tensor_bg(std::span<const ResponseField> q, const DirectionSet& dirs) {
    return weighted_sum_serial(q, dirs, 1.0, 0.0, "bg");
}

TensorField tensor_gk(std::span<const ResponseField> q, const DirectionSet& dirs,
                      FrameCoefficients coef) {
    return weighted_sum_serial(q, dirs, coef.alpha, coef.beta, "gk");
}

namespace {

int reflect_or_wrap(int i, int m, Boundary boundary) {
    if (boundary == Boundary::periodic) {
        i %= m;
        return i < 0 ? i + m : i;
    }
    while (i < 0 || i >= m) {
        if (i < 0) i = -i - 1;
        if (i >= m) i = 2 * m - i - 1;
    }
    return i;
}

// Dense normalized Gaussian product kernel applied directly.
ScalarField dense_kernel_apply(const ScalarField& f, const std::vector<std::vector<double>>& axis_kernels,
                               Boundary boundary) {
    const int nd = static_cast<int>(f.dims.size());
    ScalarField out(f.dims, f.periodic);
    std::vector<int> c(static_cast<std::size_t>(nd)), s(static_cast<std::size_t>(nd));
    Dims kdims(static_cast<std::size_t>(nd));
    for (int a = 0; a < nd; ++a) kdims[static_cast<std::size_t>(a)] = static_cast<int>(axis_kernels[static_cast<std::size_t>(a)].size());

    for (std::size_t pix = 0; pix < f.size(); ++pix) {
        flat_to_coords(pix, f.dims, c.data());
        double acc = 0.0;
        std::vector<int> t(static_cast<std::size_t>(nd), 0);
        while (true) {
            double w = 1.0;
            for (int a = 0; a < nd; ++a) {
                const int radius = (kdims[static_cast<std::size_t>(a)] - 1) / 2;
                const int off = t[static_cast<std::size_t>(a)] - radius;
                w *= axis_kernels[static_cast<std::size_t>(a)][static_cast<std::size_t>(t[static_cast<std::size_t>(a)])];
                s[static_cast<std::size_t>(a)] = reflect_or_wrap(c[static_cast<std::size_t>(a)] - off,
                                                                 f.dims[static_cast<std::size_t>(a)], boundary);
            }
            acc += w * f.values[coords_to_flat(s.data(), f.dims)];
            if (!next_coord(t, kdims)) break;
        }
        out.values[pix] = acc;
    }
    return out;
}

std::vector<double> sampled_gauss(double sigma) {
    const int radius = std::max(1, static_cast<int>(std::ceil(4.0 * sigma)));
    std::vector<double> w(static_cast<std::size_t>(2 * radius + 1));
    double sum = 0.0;
    for (int t = -radius; t <= radius; ++t) {
        w[static_cast<std::size_t>(t + radius)] = std::exp(-0.5 * t * t / (sigma * sigma));
        sum += w[static_cast<std::size_t>(t + radius)];
    }
    for (double& v : w) v /= sum;
    return w;
}

std::vector<double> sampled_gauss_deriv(double sigma) {
    std::vector<double> w = sampled_gauss(sigma);
    const int radius = (static_cast<int>(w.size()) - 1) / 2;
    for (int t = -radius; t <= radius; ++t)
        w[static_cast<std::size_t>(t + radius)] *= -static_cast<double>(t) / (sigma * sigma);
    return w;
}

} // namespace

ScalarField gaussian_smooth(const ScalarField& f, double sigma, Boundary boundary) {
    if (sigma == 0.0) return f;
    const int nd = static_cast<int>(f.dims.size());
    std::vector<std::vector<double>> kernels(static_cast<std::size_t>(nd), sampled_gauss(sigma));
    return dense_kernel_apply(f, kernels, boundary);
}

TensorField gradient_tensor(const ScalarField& f, const GradientOptions& opt) {
    const int nd = static_cast<int>(f.dims.size());
    std::vector<ScalarField> grads;
    grads.reserve(static_cast<std::size_t>(nd));
    for (int axis = 0; axis < nd; ++axis) {
        std::vector<std::vector<double>> kernels(static_cast<std::size_t>(nd));
        for (int a = 0; a < nd; ++a)
            kernels[static_cast<std::size_t>(a)] =
                (a == axis) ? sampled_gauss_deriv(opt.sigma_d) : sampled_gauss(opt.sigma_d);
        grads.push_back(dense_kernel_apply(f, kernels, opt.boundary));
    }

    TensorField tf(f.dims, nd, "gradient");
    for (std::size_t pix = 0; pix < tf.pixel_count(); ++pix) {
        std::size_t e = 0;
        for (int i = 0; i < nd; ++i)
            for (int j = i; j < nd; ++j)
                tf.at(e++, pix) = grads[static_cast<std::size_t>(i)].values[pix] *
                                  grads[static_cast<std::size_t>(j)].values[pix];
    }
    if (opt.sigma_o > 0.0) {
        const std::size_t npix = tf.pixel_count();
        for (std::size_t e = 0; e < tf.plane_count(); ++e) {
            ScalarField plane(f.dims, f.periodic);
            std::copy(tf.planes.begin() + static_cast<std::ptrdiff_t>(e * npix),
                      tf.planes.begin() + static_cast<std::ptrdiff_t>((e + 1) * npix), plane.values.begin());
            plane = reference::gaussian_smooth(plane, opt.sigma_o, opt.boundary);
            std::copy(plane.values.begin(), plane.values.end(),
                      tf.planes.begin() + static_cast<std::ptrdiff_t>(e * npix));
        }
    }
    return tf;
}

} // namespace stf::reference
