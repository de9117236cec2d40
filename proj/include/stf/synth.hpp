#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "stf/field.hpp"

namespace stf {

enum class WaveProfile { cosine, square, gauss_modulated };

/// Linearly symmetric stimulus f(r) = amplitude * g(omega0 * k.r + phase):
/// constant along every direction orthogonal to k, so its power spectrum is
/// concentrated on the line through +-k.
struct WaveSpec {
    std::vector<double> direction; // unit k
    double frequency = 0.0;        // omega0, radians/sample in (0, pi)
    WaveProfile profile = WaveProfile::cosine;
    double amplitude = 1.0;
    double phase = 0.0;
};

/// Samples the wave on the integer grid. With `periodic` set the frequency
/// vector omega0*k must land on DFT bins (2*pi*m/M per axis within 1e-9),
/// which keeps spectra leakage-free; off-grid waves require periodic=false.
/// The gauss_modulated profile multiplies the carrier by a Gaussian envelope
/// exp(-tau^2/(2 s^2)) with s = 8 samples around the grid center and is only
/// available non-periodic.
ScalarField linear_symmetric(const Dims& dims, const WaveSpec& spec, bool periodic = true);

/// Exact on-grid wave from integer cycle counts per axis: omega0 k = 2 pi m / M.
WaveSpec wave_from_cycles(const Dims& dims, const std::vector<int>& cycles,
                          WaveProfile profile = WaveProfile::cosine, double amplitude = 1.0,
                          double phase = 0.0);

/// Pointwise sum; all fields must share dims.
ScalarField superpose(std::span<const ScalarField> fields);

/// Adds i.i.d. zero-mean Gaussian noise from the counter-based splitmix64 /
/// Box-Muller stream; line r of the grid uses stream seed ^ r, sample c in
/// the line uses counters 2c and 2c+1, so generation parallelizes over lines
/// without changing the output.
ScalarField add_noise(const ScalarField& f, double sigma, std::uint64_t seed);

} // namespace stf
