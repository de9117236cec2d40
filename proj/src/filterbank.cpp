#include "stf/filterbank.hpp"

#include <cmath>

#include "stf/fft.hpp"

namespace stf {

void validate(const FilterSpec& spec) {
    if (spec.direction.size() < 2) throw parameter_error("filter: direction must have dim >= 2");
    double n2 = 0.0;
    for (double c : spec.direction) n2 += c * c;
    if (std::abs(std::sqrt(n2) - 1.0) > 1e-9) throw parameter_error("filter: direction must be unit length");
    if (!(spec.center_frequency > 0.0) || !(spec.center_frequency < kPi))
        throw parameter_error("filter: center frequency must lie in (0, pi)");
    if (!(spec.bandwidth_octaves > 0.0)) throw parameter_error("filter: bandwidth must be > 0");
    if (spec.angular_exponent < 1) throw parameter_error("filter: angular exponent must be >= 1");
}

double gabor_sigma(double rho0, double bandwidth_octaves) {
    const double pow2 = std::exp2(bandwidth_octaves);
    return rho0 * (pow2 - 1.0) / (pow2 + 1.0) / std::sqrt(2.0 * std::log(2.0));
}

namespace {

double lognormal_radial(double rho, double rho0, double bandwidth_octaves) {
    const double l = std::log(rho / rho0);
    return std::exp(-4.0 / (bandwidth_octaves * bandwidth_octaves * std::log(2.0)) * l * l);
}

} // namespace

double transfer_at(const FilterSpec& spec, std::span<const double> omega) {
    double rho2 = 0.0;
    for (double w : omega) rho2 += w * w;
    if (rho2 == 0.0) return 0.0; // offset invariance: DC is always rejected
    const double rho = std::sqrt(rho2);

    if (spec.kind == FilterKind::quadrature) {
        double proj = 0.0;
        for (std::size_t a = 0; a < omega.size(); ++a) proj += spec.direction[a] * omega[a];
        const double cang = proj / rho;
        if (cang <= 0.0) return 0.0; // one-sided: zero on the opposite half-space
        double angular = cang;
        for (int e = 1; e < spec.angular_exponent; ++e) angular *= cang;
        return lognormal_radial(rho, spec.center_frequency, spec.bandwidth_octaves) * angular;
    }

    const double sigma = gabor_sigma(spec.center_frequency, spec.bandwidth_octaves);
    double d2 = 0.0;
    for (std::size_t a = 0; a < omega.size(); ++a) {
        const double d = omega[a] - spec.center_frequency * spec.direction[a];
        d2 += d * d;
    }
    return std::exp(-d2 / (2.0 * sigma * sigma));
}

std::vector<double> synth_transfer(const FilterSpec& spec, const Dims& dims) {
    validate(spec);
    const std::size_t count = element_count(dims);
    if (spec.direction.size() != dims.size())
        throw parameter_error("filter: direction dimension does not match grid");
    const int nd = static_cast<int>(dims.size());

    std::vector<double> H(count);
#pragma omp parallel for schedule(static)
    for (long long idx = 0; idx < static_cast<long long>(count); ++idx) {
        std::vector<int> c(static_cast<std::size_t>(nd));
        flat_to_coords(static_cast<std::size_t>(idx), dims, c.data());
        std::vector<double> omega(static_cast<std::size_t>(nd));
        for (int a = 0; a < nd; ++a)
            omega[static_cast<std::size_t>(a)] = freq_rad(c[static_cast<std::size_t>(a)], dims[static_cast<std::size_t>(a)]);
        H[static_cast<std::size_t>(idx)] = transfer_at(spec, omega);
    }
    return H;
}

std::vector<FilterSpec> make_bank(const DirectionSet& dirs, FilterKind kind, double rho0,
                                  double bandwidth_octaves, int angular_exponent) {
    std::vector<FilterSpec> bank;
    bank.reserve(static_cast<std::size_t>(dirs.count()));
    for (int k = 0; k < dirs.count(); ++k) {
        FilterSpec s;
        s.kind = kind;
        s.direction.assign(dirs.dir(k).begin(), dirs.dir(k).end());
        s.center_frequency = rho0;
        s.bandwidth_octaves = bandwidth_octaves;
        s.angular_exponent = angular_exponent;
        validate(s);
        bank.push_back(std::move(s));
    }
    return bank;
}

std::vector<ResponseField> apply_bank(const ScalarField& f, std::span<const FilterSpec> bank,
                                      ResponseMode mode) {
    const std::size_t count = element_count(f.dims);
    if (!all_even(f.dims))
        throw parameter_error("apply_bank: image extents must be even (half-spectrum convention)");
    if (bank.empty()) throw parameter_error("apply_bank: empty filter bank");
    for (const FilterSpec& s : bank) {
        validate(s);
        if (s.direction.size() != f.dims.size())
            throw parameter_error("apply_bank: filter dimension does not match image");
    }

    const std::vector<fft::cplx> F = fft::forward(f);
    const int K = static_cast<int>(bank.size());
    std::vector<ResponseField> out(static_cast<std::size_t>(K));

    // Warm the plan cache before the parallel region; the planner is the only
    // serialized piece of FFTW.
    {
        std::vector<fft::cplx> dummy(count), dummy2(count);
        fft::transform(f.dims, dummy.data(), dummy2.data(), +1);
    }

#pragma omp parallel for schedule(dynamic)
    for (int k = 0; k < K; ++k) {
        const std::vector<double> H = synth_transfer(bank[static_cast<std::size_t>(k)], f.dims);
        std::vector<fft::cplx> spec(count), resp(count);
        for (std::size_t i = 0; i < count; ++i) spec[i] = H[i] * F[i];
        fft::transform(f.dims, spec.data(), resp.data(), +1);

        ResponseField& q = out[static_cast<std::size_t>(k)];
        q.dims = f.dims;
        q.label = "q" + std::to_string(k + 1);
        q.values.resize(count);
        for (std::size_t i = 0; i < count; ++i) {
            const double m2 = std::norm(resp[i]);
            q.values[i] = (mode == ResponseMode::power) ? m2 : std::sqrt(m2);
        }
    }
    return out;
}

} // namespace stf
