#include "stf/synth.hpp"

#include <cmath>

#include "stf/rng.hpp"

namespace stf {

namespace {

// sgn(cos tau) evaluated through the phase in turns with the quarter-period
// boundaries snapped, so on-grid waves produce an exactly balanced square
// (roundoff at cos ~ 0 would otherwise flip isolated samples and leak even
// harmonics). Boundary convention: -1 entering at a quarter turn, +1 at
// three quarters; one boundary sample of each sign per period keeps the duty
// cycle at exactly one half.
double square_value(double tau) {
    const double turns = tau / (2.0 * kPi);
    double u = turns - std::floor(turns);
    double quarters = 4.0 * u;
    const double snapped = std::round(quarters);
    if (std::abs(quarters - snapped) < 1e-9) quarters = snapped;
    if (quarters >= 4.0) quarters -= 4.0;
    return (quarters < 1.0 || quarters >= 3.0) ? 1.0 : -1.0;
}

double profile_value(WaveProfile p, double tau) {
    switch (p) {
        case WaveProfile::cosine:
            return std::cos(tau);
        case WaveProfile::square:
            return square_value(tau);
        case WaveProfile::gauss_modulated:
            return std::cos(tau); // envelope applied separately
    }
    return 0.0;
}

} // namespace

ScalarField linear_symmetric(const Dims& dims, const WaveSpec& spec, bool periodic) {
    for (int d : dims)
        if (d < 4) throw parameter_error("linear_symmetric: extents must be >= 4");
    const int nd = static_cast<int>(dims.size());
    if (static_cast<int>(spec.direction.size()) != nd)
        throw parameter_error("linear_symmetric: direction dimension does not match grid");
    double n2 = 0.0;
    for (double c : spec.direction) n2 += c * c;
    if (std::abs(std::sqrt(n2) - 1.0) > 1e-9)
        throw parameter_error("linear_symmetric: direction must be unit length");
    if (!(spec.frequency > 0.0) || !(spec.frequency < kPi))
        throw parameter_error("linear_symmetric: frequency must lie in (0, pi)");

    if (periodic) {
        if (spec.profile == WaveProfile::gauss_modulated)
            throw parameter_error("linear_symmetric: gauss_modulated profile requires periodic=false");
        for (int a = 0; a < nd; ++a) {
            const double m = spec.frequency * spec.direction[static_cast<std::size_t>(a)] *
                             dims[static_cast<std::size_t>(a)] / (2.0 * kPi);
            if (std::abs(m - std::round(m)) > 1e-9)
                throw parameter_error("linear_symmetric: off-grid frequency with periodic flag set");
        }
    }

    ScalarField f(dims, periodic);
    const std::size_t count = f.size();
    constexpr double kEnvelopeScale = 8.0; // samples, gauss_modulated only

#pragma omp parallel for schedule(static)
    for (long long idx = 0; idx < static_cast<long long>(count); ++idx) {
        std::vector<int> c(static_cast<std::size_t>(nd));
        flat_to_coords(static_cast<std::size_t>(idx), dims, c.data());
        double tau_spatial = 0.0; // k . (r - center)
        double kr = 0.0;          // k . r
        for (int a = 0; a < nd; ++a) {
            const double r = static_cast<double>(c[static_cast<std::size_t>(a)]);
            kr += spec.direction[static_cast<std::size_t>(a)] * r;
            tau_spatial += spec.direction[static_cast<std::size_t>(a)] *
                           (r - 0.5 * (dims[static_cast<std::size_t>(a)] - 1));
        }
        double v;
        if (spec.profile == WaveProfile::gauss_modulated) {
            const double envelope = std::exp(-tau_spatial * tau_spatial / (2.0 * kEnvelopeScale * kEnvelopeScale));
            v = spec.amplitude * envelope * std::cos(spec.frequency * tau_spatial + spec.phase);
        } else {
            v = spec.amplitude * profile_value(spec.profile, spec.frequency * kr + spec.phase);
        }
        f.values[static_cast<std::size_t>(idx)] = v;
    }
    return f;
}

WaveSpec wave_from_cycles(const Dims& dims, const std::vector<int>& cycles, WaveProfile profile,
                          double amplitude, double phase) {
    if (cycles.size() != dims.size())
        throw parameter_error("wave_from_cycles: cycle count does not match dims");
    const int nd = static_cast<int>(dims.size());
    std::vector<double> w(static_cast<std::size_t>(nd));
    double norm = 0.0;
    for (int a = 0; a < nd; ++a) {
        w[static_cast<std::size_t>(a)] =
            2.0 * kPi * cycles[static_cast<std::size_t>(a)] / dims[static_cast<std::size_t>(a)];
        norm += w[static_cast<std::size_t>(a)] * w[static_cast<std::size_t>(a)];
    }
    norm = std::sqrt(norm);
    if (norm == 0.0) throw parameter_error("wave_from_cycles: zero frequency vector");
    WaveSpec spec;
    spec.frequency = norm;
    spec.direction.resize(static_cast<std::size_t>(nd));
    for (int a = 0; a < nd; ++a) spec.direction[static_cast<std::size_t>(a)] = w[static_cast<std::size_t>(a)] / norm;
    spec.profile = profile;
    spec.amplitude = amplitude;
    spec.phase = phase;
    return spec;
}

ScalarField superpose(std::span<const ScalarField> fields) {
    if (fields.empty()) throw parameter_error("superpose: empty field list");
    ScalarField out = fields.front();
    for (std::size_t k = 1; k < fields.size(); ++k) {
        if (fields[k].dims != out.dims) throw parameter_error("superpose: dimension mismatch");
        for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] += fields[k].values[i];
    }
    return out;
}

ScalarField add_noise(const ScalarField& f, double sigma, std::uint64_t seed) {
    if (!(sigma >= 0.0)) throw parameter_error("add_noise: sigma must be >= 0");
    ScalarField out = f;
    if (sigma == 0.0) return out;
    const int last = f.dims.back();
    const std::size_t nlines = f.size() / static_cast<std::size_t>(last);

#pragma omp parallel for schedule(static)
    for (long long line = 0; line < static_cast<long long>(nlines); ++line) {
        const std::uint64_t line_seed = seed ^ static_cast<std::uint64_t>(line);
        double* v = out.values.data() + static_cast<std::size_t>(line) * static_cast<std::size_t>(last);
        for (int c = 0; c < last; ++c)
            v[c] += sigma * gaussian_at(line_seed, static_cast<std::uint64_t>(c));
    }
    return out;
}

} // namespace stf
