#include <doctest.h>

#include <cmath>

#include "stf/filterbank.hpp"
#include "stf/reference.hpp"
#include "stf/synth.hpp"
#include "testutil.hpp"

using namespace stf;

namespace {

FilterSpec quad_spec(std::vector<double> dir, double rho0 = kPi / 3.0, int p = 1) {
    FilterSpec s;
    s.kind = FilterKind::quadrature;
    s.direction = std::move(dir);
    s.center_frequency = rho0;
    s.bandwidth_octaves = 2.0;
    s.angular_exponent = p;
    return s;
}

} // namespace

TEST_CASE("quadrature transfer pointwise values") {
    const FilterSpec s = quad_spec({1.0, 0.0, 0.0});
    const double rho0 = s.center_frequency;

    SUBCASE("unity at the tune-in frequency") {
        const std::vector<double> w{rho0, 0.0, 0.0};
        CHECK(transfer_at(s, w) == doctest::Approx(1.0).epsilon(1e-15));
    }
    SUBCASE("zero at 90 degrees off axis") {
        const std::vector<double> w{0.0, rho0, 0.0};
        CHECK(transfer_at(s, w) == 0.0);
    }
    SUBCASE("zero on the opposite half-space") {
        const std::vector<double> w{-rho0, 0.2, 0.0};
        CHECK(transfer_at(s, w) == 0.0);
    }
    SUBCASE("cosine decay: 0.5 at 60 degrees, same radius") {
        const std::vector<double> w{rho0 * 0.5, rho0 * std::sqrt(3.0) / 2.0, 0.0};
        CHECK(transfer_at(s, w) == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("DC rejected") {
        const std::vector<double> w{0.0, 0.0, 0.0};
        CHECK(transfer_at(s, w) == 0.0);
    }
    SUBCASE("higher cosine power sharpens the decay") {
        FilterSpec s3 = s;
        s3.angular_exponent = 3;
        const std::vector<double> w{rho0 * 0.5, rho0 * std::sqrt(3.0) / 2.0, 0.0};
        CHECK(transfer_at(s3, w) == doctest::Approx(0.125).epsilon(1e-12));
    }
}

TEST_CASE("gabor transfer pointwise values") {
    FilterSpec s;
    s.kind = FilterKind::gabor;
    s.direction = {0.0, 1.0};
    const double rho0 = s.center_frequency;
    const double sigma = gabor_sigma(rho0, s.bandwidth_octaves);

    SUBCASE("unity at the center") {
        const std::vector<double> w{0.0, rho0};
        CHECK(transfer_at(s, w) == doctest::Approx(1.0).epsilon(1e-15));
    }
    SUBCASE("leakage on the opposite half-space is exp(-2 rho0^2 / sigma^2)") {
        const std::vector<double> w{0.0, -rho0};
        CHECK(transfer_at(s, w) == doctest::Approx(std::exp(-2.0 * rho0 * rho0 / (sigma * sigma))).epsilon(1e-12));
        CHECK(transfer_at(s, w) > 0.0);
    }
    SUBCASE("bandwidth sets the half-amplitude octave span") {
        const double span = std::sqrt(2.0 * std::log(2.0)) * sigma;
        const std::vector<double> lo{0.0, rho0 - span};
        const std::vector<double> hi{0.0, rho0 + span};
        CHECK(transfer_at(s, lo) == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(transfer_at(s, hi) == doctest::Approx(0.5).epsilon(1e-12));
        CHECK((rho0 + span) / (rho0 - span) == doctest::Approx(std::exp2(s.bandwidth_octaves)).epsilon(1e-12));
    }
    SUBCASE("rotationally symmetric about the tune-in axis") {
        FilterSpec s3;
        s3.kind = FilterKind::gabor;
        s3.direction = {0.0, 0.0, 1.0};
        const std::vector<double> wa{0.3, 0.1, s3.center_frequency};
        const std::vector<double> wb{-0.1, 0.3, s3.center_frequency}; // same distance from the center
        CHECK(transfer_at(s3, wa) == doctest::Approx(transfer_at(s3, wb)).epsilon(1e-14));
    }
}

TEST_CASE("monotone angular decay at fixed radius for both kinds") {
    for (FilterKind kind : {FilterKind::quadrature, FilterKind::gabor}) {
        FilterSpec s;
        s.kind = kind;
        s.direction = {1.0, 0.0};
        double prev = 2.0;
        for (int step = 0; step <= 90; ++step) {
            const double ang = step * kPi / 180.0;
            const std::vector<double> w{s.center_frequency * std::cos(ang), s.center_frequency * std::sin(ang)};
            const double h = transfer_at(s, w);
            CHECK(h <= prev + 1e-15);
            prev = h;
        }
    }
}

TEST_CASE("apply_bank input validation") {
    const auto bank = make_bank(half_circle(4), FilterKind::quadrature, kPi / 3.0, 2.0, 1);
    SUBCASE("odd extents rejected") {
        ScalarField f(Dims{5, 6});
        CHECK_THROWS_AS(apply_bank(f, bank), parameter_error);
    }
    SUBCASE("dimension mismatch rejected") {
        ScalarField f(Dims{4, 4, 4});
        CHECK_THROWS_AS(apply_bank(f, bank), parameter_error);
    }
    SUBCASE("empty bank rejected") {
        ScalarField f(Dims{4, 4});
        CHECK_THROWS_AS(apply_bank(f, std::span<const FilterSpec>{}), parameter_error);
    }
    SUBCASE("bad spec parameters rejected") {
        FilterSpec s = bank[0];
        s.center_frequency = 4.0;
        CHECK_THROWS_AS(validate(s), parameter_error);
        s = bank[0];
        s.angular_exponent = 0;
        CHECK_THROWS_AS(validate(s), parameter_error);
        s = bank[0];
        s.bandwidth_octaves = 0.0;
        CHECK_THROWS_AS(validate(s), parameter_error);
    }
}

TEST_CASE("zero image gives zero responses") {
    const ScalarField f(Dims{8, 8});
    const auto bank = make_bank(half_circle(3), FilterKind::quadrature, kPi / 3.0, 2.0, 1);
    for (const auto& q : apply_bank(f, bank))
        for (double v : q.values) CHECK(v == 0.0);
}

TEST_CASE("responses are nonnegative for arbitrary input") {
    const ScalarField f = testutil::random_field(Dims{16, 16}, 5);
    for (FilterKind kind : {FilterKind::quadrature, FilterKind::gabor}) {
        const auto bank = make_bank(half_circle(5), kind, kPi / 3.0, 2.0, 1);
        for (ResponseMode mode : {ResponseMode::power, ResponseMode::magnitude}) {
            for (const auto& q : apply_bank(f, bank, mode))
                for (double v : q.values) CHECK(v >= 0.0);
        }
    }
}

TEST_CASE("FFT bank path matches the naive-DFT reference") {
    const ScalarField f = testutil::random_field(Dims{12, 8}, 17);
    const auto bank = make_bank(half_circle(3), FilterKind::quadrature, kPi / 3.0, 2.0, 2);
    const auto fast = apply_bank(f, bank, ResponseMode::power);
    const auto slow = reference::apply_bank(f, bank, ResponseMode::power);
    REQUIRE(fast.size() == slow.size());
    for (std::size_t k = 0; k < fast.size(); ++k)
        CHECK(testutil::max_abs_diff(fast[k].values, slow[k].values) < 1e-12);
}

TEST_CASE("shift covariance: circular input shift translates every q field") {
    const ScalarField f = testutil::random_field(Dims{16, 16}, 23);
    const std::vector<int> shift{5, 11};
    const ScalarField fs = testutil::circular_shift(f, shift);
    const auto bank = make_bank(half_circle(4), FilterKind::gabor, kPi / 3.0, 2.0, 1);
    const auto q0 = apply_bank(f, bank);
    const auto q1 = apply_bank(fs, bank);
    for (std::size_t k = 0; k < q0.size(); ++k) {
        ScalarField plane(f.dims);
        plane.values = q0[k].values;
        const ScalarField shifted = testutil::circular_shift(plane, shift);
        CHECK(testutil::max_abs_diff(shifted.values, q1[k].values) < 1e-10);
    }
}

TEST_CASE("quadrature one-sidedness: constant response modulus on a pure wave") {
    // Only one of the +-omega pair passes the one-sided filter, so the complex
    // response is a single exponential and its modulus is flat.
    const Dims dims{64, 64};
    const WaveSpec w = wave_from_cycles(dims, {6, 3});
    const ScalarField f = linear_symmetric(dims, w);
    const auto bank = make_bank(half_circle(6), FilterKind::quadrature, kPi / 3.0, 2.0, 1);
    const auto q = apply_bank(f, bank, ResponseMode::magnitude);
    for (const auto& rf : q) {
        double lo = rf.values[0], hi = rf.values[0];
        for (double v : rf.values) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        if (hi > 1e-6) CHECK((hi - lo) / hi < 1e-8);
    }
}

TEST_CASE("icosahedral bank on a wave tuned to filter 1") {
    // Stimulus at the on-grid frequency closest to rho0 * n1; filter 1 wins
    // everywhere and the q2/q1 ratio matches the transfer prediction.
    const Dims dims{64, 64, 64};
    const DirectionSet dirs = icosa6();
    const double rho0 = kPi / 3.0;

    // Nearest integer frequency vector to (rho0 * M / 2pi) * n1.
    const std::vector<int> m{6, 0, 9};
    std::vector<double> omega(3);
    for (int a = 0; a < 3; ++a) omega[static_cast<std::size_t>(a)] = 2.0 * kPi * m[static_cast<std::size_t>(a)] / 64.0;

    WaveSpec spec = wave_from_cycles(dims, m);
    const ScalarField f = linear_symmetric(dims, spec);
    const auto bank = make_bank(dirs, FilterKind::quadrature, rho0, 2.0, 1);
    const auto q = apply_bank(f, bank, ResponseMode::magnitude);

    // q1 maximal at every pixel.
    const std::size_t npix = f.size();
    for (std::size_t pix = 0; pix < npix; pix += 97) {
        for (std::size_t k = 1; k < q.size(); ++k) CHECK(q[0].values[pix] >= q[k].values[pix]);
    }

    // Ratio against the independent transfer-formula prediction.
    auto predicted = [&](int k) {
        double rho2 = 0.0, proj = 0.0;
        for (int a = 0; a < 3; ++a) {
            rho2 += omega[static_cast<std::size_t>(a)] * omega[static_cast<std::size_t>(a)];
            proj += dirs.dir(k)[static_cast<std::size_t>(a)] * omega[static_cast<std::size_t>(a)];
        }
        const double rho = std::sqrt(rho2);
        const double radial = std::exp(-4.0 / (4.0 * std::log(2.0)) * std::log(rho / rho0) * std::log(rho / rho0));
        return radial * std::max(0.0, proj / rho);
    };
    const double want = predicted(1) / predicted(0);
    const double got = q[1].values[0] / q[0].values[0];
    CHECK(got == doctest::Approx(want).epsilon(1e-8));
    // Both directions sit inside the radial peak, so the ratio is close to
    // the pairwise dot product ab = 1/sqrt(5).
    CHECK(std::abs(got - 1.0 / std::sqrt(5.0)) < 0.08);
}

TEST_CASE("sampled transfer grid matches pointwise evaluation") {
    const FilterSpec s = quad_spec({0.6, 0.8});
    const Dims dims{8, 6};
    const auto H = synth_transfer(s, dims);
    std::vector<int> c(2);
    for (std::size_t idx = 0; idx < H.size(); ++idx) {
        flat_to_coords(idx, dims, c.data());
        const std::vector<double> w{freq_rad(c[0], dims[0]), freq_rad(c[1], dims[1])};
        CHECK(H[idx] == transfer_at(s, w));
    }
}
