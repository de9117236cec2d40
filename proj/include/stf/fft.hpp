#pragma once

#include <complex>
#include <vector>

#include "stf/field.hpp"
#include "stf/grid.hpp"

namespace stf::fft {

using cplx = std::complex<double>;

/// Unitary N-dimensional complex DFT (scale 1/sqrt(count) in each direction).
/// sign -1 is forward, +1 inverse. Thread-safe: the planner is serialized,
/// execution runs concurrently on caller-owned buffers.
void transform(const Dims& dims, const cplx* in, cplx* out, int sign);

std::vector<cplx> forward(const ScalarField& f);

/// Inverse transform; returns the real part (callers are responsible for
/// handing in Hermitian spectra when they expect a real field).
ScalarField inverse_to_real(const Dims& dims, const std::vector<cplx>& spectrum, bool periodic = true);

} // namespace stf::fft
