#pragma once

#include <span>
#include <vector>

#include "stf/field.hpp"
#include "stf/tessellation.hpp"

namespace stf {

enum class FilterKind { quadrature, gabor };

/// How a complex filter response becomes a nonnegative sample q:
/// power = |response|^2 (treats q as a power-spectrum sample, the default),
/// magnitude = |response|.
enum class ResponseMode { power, magnitude };

/// One directional filter. The quadrature kind is one-sided with angular
/// decay cos^p and a lognormal radial profile; the gabor kind is an isotropic
/// Gaussian around rho0 * direction, single-lobed but not exactly zero on the
/// opposite half-space.
struct FilterSpec {
    FilterKind kind = FilterKind::quadrature;
    std::vector<double> direction;    // unit tune-in direction
    double center_frequency = kPi / 3.0; // rho0 in radians/sample, (0, pi)
    double bandwidth_octaves = 2.0;      // relative bandwidth B > 0
    int angular_exponent = 1;            // cosine power p >= 1
};

void validate(const FilterSpec& spec);

/// Half-amplitude-width Gaussian deviation for the gabor kind:
/// sigma = rho0 * (2^B - 1) / (2^B + 1) / sqrt(2 ln 2), which places the
/// half-amplitude radial crossings B octaves apart.
double gabor_sigma(double rho0, double bandwidth_octaves);

/// Transfer function value at an arbitrary frequency vector (radians/sample).
/// Real-valued and nonnegative; H(0) = 0 for every filter.
double transfer_at(const FilterSpec& spec, std::span<const double> omega);

/// Samples the transfer function over the DFT grid of `dims`.
std::vector<double> synth_transfer(const FilterSpec& spec, const Dims& dims);

/// One filter per direction with shared radial/angular parameters.
std::vector<FilterSpec> make_bank(const DirectionSet& dirs, FilterKind kind, double rho0,
                                  double bandwidth_octaves, int angular_exponent);

/// Filters the image through the bank: forward DFT once, per filter multiply
/// by the sampled transfer and invert, then reduce the complex response to a
/// nonnegative q per pixel. Requires even extents on every axis.
std::vector<ResponseField> apply_bank(const ScalarField& f, std::span<const FilterSpec> bank,
                                      ResponseMode mode = ResponseMode::power);

} // namespace stf
