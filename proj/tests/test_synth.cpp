#include <doctest.h>

#include <cmath>

#include "stf/reference.hpp"
#include "stf/synth.hpp"
#include "testutil.hpp"

using namespace stf;

TEST_CASE("cosine wave along the first axis") {
    const Dims dims{64, 64};
    const ScalarField f = linear_symmetric(dims, wave_from_cycles(dims, {4, 0}));
    const double w0 = 2.0 * kPi * 4.0 / 64.0;
    std::vector<int> c(2);
    for (std::size_t pix = 0; pix < f.size(); pix += 13) {
        flat_to_coords(pix, dims, c.data());
        CHECK(f.values[pix] == doctest::Approx(std::cos(w0 * c[0])).epsilon(1e-12));
    }
    SUBCASE("constant along the orthogonal axis") {
        for (int x = 0; x < 64; ++x) {
            const int base[2] = {x, 0};
            const double v0 = f.values[coords_to_flat(base, dims)];
            for (int y = 1; y < 64; ++y) {
                const int at[2] = {x, y};
                CHECK(std::abs(f.values[coords_to_flat(at, dims)] - v0) < 1e-12);
            }
        }
    }
}

TEST_CASE("wave validation") {
    const Dims dims{16, 16};
    SUBCASE("off-grid frequency with periodic flag rejected") {
        WaveSpec spec;
        spec.direction = {1.0, 0.0};
        spec.frequency = 1.0; // not a multiple of 2 pi / 16
        CHECK_THROWS_AS(linear_symmetric(dims, spec, true), parameter_error);
        CHECK_NOTHROW(linear_symmetric(dims, spec, false));
    }
    SUBCASE("tiny grids rejected") {
        CHECK_THROWS_AS(linear_symmetric(Dims{2, 16}, wave_from_cycles(Dims{2, 16}, {1, 0})), parameter_error);
    }
    SUBCASE("gauss_modulated requires non-periodic") {
        WaveSpec spec = wave_from_cycles(dims, {3, 0}, WaveProfile::gauss_modulated);
        CHECK_THROWS_AS(linear_symmetric(dims, spec, true), parameter_error);
        const ScalarField f = linear_symmetric(dims, spec, false);
        // Envelope decays away from the center.
        CHECK(std::abs(f.values[0]) < std::abs(f.values[f.size() / 2]) + 1.0);
    }
}

TEST_CASE("on-grid wave spectra live on the direction line") {
    const Dims dims{32, 32};
    const ScalarField f = linear_symmetric(dims, wave_from_cycles(dims, {3, 5}));
    const auto F = reference::naive_dft_real(f);
    double on_line = 0.0, total = 0.0;
    std::vector<int> c(2);
    for (std::size_t idx = 0; idx < F.size(); ++idx) {
        flat_to_coords(idx, dims, c.data());
        const int b0 = freq_bin(c[0], 32), b1 = freq_bin(c[1], 32);
        const double p = std::norm(F[idx]);
        total += p;
        if (std::abs(b0) == 3 && std::abs(b1) == 5 && b0 * 5 == b1 * 3) on_line += p;
    }
    CHECK(total > 0.0);
    CHECK((total - on_line) / total < 1e-10);
}

TEST_CASE("square profile: only odd harmonics along the wave axis") {
    const Dims dims{64, 64};
    const int m = 4;
    const ScalarField f = linear_symmetric(dims, wave_from_cycles(dims, {m, 0}, WaveProfile::square));
    const auto F = reference::naive_dft_real(f);
    double odd = 0.0, total = 0.0;
    std::vector<int> c(2);
    for (std::size_t idx = 0; idx < F.size(); ++idx) {
        flat_to_coords(idx, dims, c.data());
        const int b0 = freq_bin(c[0], 64), b1 = freq_bin(c[1], 64);
        const double p = std::norm(F[idx]);
        total += p;
        // Odd harmonics of m alias onto bins congruent to m (mod 2m), always
        // on the wave axis.
        if (b1 == 0 && std::abs(b0) % (2 * m) == m) odd += p;
    }
    CHECK(total > 0.0);
    CHECK((total - odd) / total < 1e-12);
}

TEST_CASE("superpose") {
    const Dims dims{16, 16};
    const ScalarField a = linear_symmetric(dims, wave_from_cycles(dims, {2, 1}));
    const ScalarField zero(dims);
    SUBCASE("identity") {
        const std::vector<ScalarField> fs{a, zero};
        const ScalarField s = superpose(fs);
        CHECK(testutil::max_abs_diff(s.values, a.values) == 0.0);
    }
    SUBCASE("cancellation") {
        const ScalarField neg = linear_symmetric(dims, wave_from_cycles(dims, {2, 1}, WaveProfile::cosine, -1.0));
        const std::vector<ScalarField> fs{a, neg};
        const ScalarField s = superpose(fs);
        for (double v : s.values) CHECK(std::abs(v) < 1e-15);
    }
    SUBCASE("commutative and associative to 1e-15") {
        const ScalarField b = linear_symmetric(dims, wave_from_cycles(dims, {0, 3}));
        const ScalarField c = testutil::random_field(dims, 8);
        const std::vector<ScalarField> abc{a, b, c};
        const std::vector<ScalarField> cba{c, b, a};
        CHECK(testutil::max_abs_diff(superpose(abc).values, superpose(cba).values) < 1e-15);
    }
    SUBCASE("dim mismatch") {
        const ScalarField other(Dims{8, 8});
        const std::vector<ScalarField> bad{a, other};
        CHECK_THROWS_AS(superpose(bad), parameter_error);
    }
}

TEST_CASE("noise generator") {
    const Dims dims{64, 64};
    const ScalarField base = linear_symmetric(dims, wave_from_cycles(dims, {3, 0}));
    SUBCASE("sigma 0 is the identity") {
        const ScalarField same = add_noise(base, 0.0, 9);
        CHECK(testutil::max_abs_diff(same.values, base.values) == 0.0);
    }
    SUBCASE("fixed seed reproduces bit-for-bit") {
        const ScalarField n1 = add_noise(base, 1.0, 42);
        const ScalarField n2 = add_noise(base, 1.0, 42);
        CHECK(n1.values == n2.values);
        const ScalarField n3 = add_noise(base, 1.0, 43);
        CHECK(n1.values != n3.values);
    }
    SUBCASE("unit sigma yields unit sample variance within chi-square bounds") {
        ScalarField zero(dims);
        const ScalarField n = add_noise(zero, 1.0, 7);
        double mean = 0.0;
        for (double v : n.values) mean += v;
        mean /= static_cast<double>(n.size());
        double var = 0.0;
        for (double v : n.values) var += (v - mean) * (v - mean);
        var /= static_cast<double>(n.size() - 1);
        CHECK(var > 0.9);
        CHECK(var < 1.1);
    }
    SUBCASE("negative sigma rejected") {
        CHECK_THROWS_AS(add_noise(base, -1.0, 0), parameter_error);
    }
}
