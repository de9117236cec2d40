#pragma once

#include <complex>
#include <span>
#include <vector>

#include "stf/field.hpp"
#include "stf/filterbank.hpp"
#include "stf/tensor.hpp"

namespace stf::reference {

/// Literal unitary DFT: a double sum over every (frequency, sample) pair.
/// O(n^2), serial; the independent cross-check for the FFT-backed paths.
std::vector<std::complex<double>> naive_dft(const Dims& dims,
                                            std::span<const std::complex<double>> in, int sign);

std::vector<std::complex<double>> naive_dft_real(const ScalarField& f);

/// Filter application through the naive DFT.
std::vector<ResponseField> apply_bank(const ScalarField& f, std::span<const FilterSpec> bank,
                                      ResponseMode mode);

/// Spectral moment sum via the naive DFT.
SymMat spectral_moment_tensor(const ScalarField& f);

/// Plain serial per-pixel weighted outer-product constructions.
TensorField tensor_bg(std::span<const ResponseField> q, const DirectionSet& dirs);
TensorField tensor_gk(std::span<const ResponseField> q, const DirectionSet& dirs, FrameCoefficients coef);

/// Direct (non-separable) dense Gaussian smoothing, serial.
ScalarField gaussian_smooth(const ScalarField& f, double sigma, Boundary boundary);

/// Serial gradient structure tensor with dense convolutions.
TensorField gradient_tensor(const ScalarField& f, const GradientOptions& opt);

} // namespace stf::reference
