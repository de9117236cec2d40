#pragma once

#include <span>
#include <vector>

#include "stf/field.hpp"
#include "stf/filterbank.hpp"
#include "stf/tessellation.hpp"

namespace stf {

/// Weights of the frame-corrected construction: per filter the contribution is
/// q_k * (alpha n_k n_k^T - beta I). The icosahedral six-direction defaults
/// are alpha = 5/4 and beta = 1/4; other tessellations need caller-supplied
/// coefficients.
struct FrameCoefficients {
    double alpha = 1.25;
    double beta = 0.25;
};

inline constexpr FrameCoefficients kIcosa6Coefficients{1.25, 0.25};

/// Frame-corrected tensor: per pixel T = sum_k q_k (alpha n_k n_k^T - beta I).
/// May be indefinite; tagged "gk".
TensorField tensor_gk(std::span<const ResponseField> q, const DirectionSet& dirs,
                      FrameCoefficients coef);

/// Direct-sampling tensor: per pixel T = sum_k q_k n_k n_k^T. Positive
/// semi-definite for nonnegative q by construction; tagged "bg".
TensorField tensor_bg(std::span<const ResponseField> q, const DirectionSet& dirs);

/// Global second-order spectral energy moments over the full DFT grid:
/// T = sum_w |F(w)|^2 w w^T, unitary DFT, w in radians/sample.
SymMat spectral_moment_tensor(const ScalarField& f);

/// Global sum of gradient outer products with the gradient taken as the DFT
/// derivative (multiply by i*w per axis, invert): T = sum_r grad f grad f^T.
/// The derivative planes are kept complex internally — Nyquist bins make them
/// non-Hermitian — and products use the conjugate, which makes this equal to
/// spectral_moment_tensor exactly in exact arithmetic.
SymMat dft_gradient_tensor(const ScalarField& f);

enum class Boundary { periodic, reflect };
enum class GradientKind {
    gaussian_derivative, // sampled derivative-of-Gaussian kernels, truncated at 4 sigma
    spectral             // exact DFT derivative and Gaussian transfer (periodic only)
};

struct GradientOptions {
    double sigma_d = 1.0;  // inner (derivative) scale, > 0
    double sigma_o = 3.0;  // outer (tensor smoothing) scale, >= 0; 0 disables
    Boundary boundary = Boundary::periodic;
    GradientKind kind = GradientKind::gaussian_derivative;
    bool upsample = false; // form products on the 2x grid, then subsample back
};

/// Per-pixel structure tensor field: gradient at sigma_d, outer product,
/// component-wise smoothing at sigma_o. Tagged "gradient"; PSD within
/// roundoff since the smoothing weights are nonnegative.
/// With upsample set, the input is upsampled 2x first, gradients are scaled
/// to original sample units, and the smoothed tensor field is subsampled back
/// to the original sites, so the output keeps the input dims either way.
TensorField gradient_tensor(const ScalarField& f, const GradientOptions& opt);

/// Gradient planes at scale sigma_d (no outer product); used by
/// gradient_tensor and exposed for inspection.
VectorField gaussian_gradient(const ScalarField& f, double sigma_d, Boundary boundary);

/// Sinc (spectral zero-padding) upsampling by 2 per axis; values at original
/// sample sites are preserved. Requires even extents.
ScalarField upsample2x(const ScalarField& f);

/// Global spectral moment construction applied per pixel as a field:
/// wraps Eq-style moments into a per-pixel tensor via gradient products.
/// Returns max_pixel relative PSD violation: max(0, -lambda_min) / trace,
/// 0 for zero pixels. Used by --check and tests.
double max_psd_violation(const TensorField& tf);

/// Gaussian smoothing of a scalar image (shared with the response/tensor
/// pipelines; kernel truncated at 4 sigma and renormalized to unit sum).
ScalarField gaussian_smooth(const ScalarField& f, double sigma, Boundary boundary);

} // namespace stf
