#include <doctest.h>

#include <cmath>

#include "stf/analysis.hpp"
#include "stf/tensor.hpp"
#include "testutil.hpp"

using namespace stf;

TEST_CASE("orientation estimates") {
    const DirectionSet dirs = icosa6();
    SUBCASE("rank-1 tensor: direction recovered, certainty 1, zero error") {
        const SymMat t = outer(dirs.dir(0));
        const OrientationEstimate est = orientation(t);
        CHECK(axis_angle(est.direction, dirs.dir(0)) < 1e-10);
        CHECK(est.certainty == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(est.tls_error) < 1e-14);
    }
    SUBCASE("isotropic tensor: certainty 0, deterministic direction") {
        const OrientationEstimate est = orientation(SymMat::identity(3));
        CHECK(est.certainty == 0.0);
        const OrientationEstimate again = orientation(SymMat::identity(3));
        CHECK(est.direction == again.direction);
        CHECK(est.tls_error == doctest::Approx(2.0));
    }
    SUBCASE("synthetic wave tensor: direction within 0.5 degrees") {
        const Dims dims{64, 64};
        const WaveSpec spec = wave_from_cycles(dims, {9, 5});
        const ScalarField f = linear_symmetric(dims, spec);
        const TensorField tf = gradient_tensor(f, {});
        const OrientationEstimate est = orientation(tf.matrix_at(100));
        CHECK(axis_angle(est.direction, spec.direction) < 0.5 * kPi / 180.0);
    }
    SUBCASE("half-space convention on the reported direction") {
        SymMat t(2);
        t.at(0, 0) = 1.0; // top eigenvector is +-e0; convention picks +e0
        const OrientationEstimate est = orientation(t);
        CHECK(est.direction[0] > 0.0);
    }
}

TEST_CASE("orientation scale invariance") {
    Rng rng(5);
    for (int rep = 0; rep < 25; ++rep) {
        const SymMat t = testutil::random_psd(rng, 3);
        const double c = 0.1 + 5.0 * rng.next_unit();
        const OrientationEstimate a = orientation(t);
        const OrientationEstimate b = orientation(c * t);
        CHECK(axis_angle(a.direction, b.direction) < 1e-10);
        CHECK(a.certainty == doctest::Approx(b.certainty).epsilon(1e-12));
        CHECK(b.tls_error == doctest::Approx(c * a.tls_error).epsilon(1e-10));
    }
}

TEST_CASE("orientation on PSD input never reports negative error") {
    Rng rng(6);
    for (int rep = 0; rep < 50; ++rep) {
        const SymMat t = testutil::random_psd(rng, 3);
        const OrientationEstimate est = orientation(t);
        CHECK(est.tls_error >= -1e-12 * std::max(1.0, t.trace()));
        CHECK(est.certainty >= 0.0);
        CHECK(est.certainty <= 1.0);
    }
}

TEST_CASE("rank profile") {
    auto diag = [](std::initializer_list<double> d) {
        SymMat m(static_cast<int>(d.size()));
        int i = 0;
        for (double v : d) {
            m.at(i, i) = v;
            ++i;
        }
        return m;
    };
    SUBCASE("line-like spectrum") {
        const RankProfile rp = rank_profile(diag({1, 0, 0}), 1e-6);
        CHECK(rp.near_zero_count == 2);
        CHECK_FALSE(rp.degenerate);
    }
    SUBCASE("plane-like spectrum") {
        CHECK(rank_profile(diag({1, 1, 0}), 1e-6).near_zero_count == 1);
    }
    SUBCASE("isotropic spectrum") {
        CHECK(rank_profile(diag({1, 1, 1}), 1e-6).near_zero_count == 0);
    }
    SUBCASE("degenerate when the top eigenvalue is not positive") {
        const RankProfile rp = rank_profile(diag({0, 0, 0}), 1e-3);
        CHECK(rp.degenerate);
        CHECK(rp.near_zero_count == 3);
    }
    SUBCASE("exhaustive 0/1 diagonals up to N=4") {
        for (int n = 2; n <= 4; ++n) {
            for (int mask = 0; mask < (1 << n); ++mask) {
                SymMat m(n);
                int zeros = 0;
                for (int i = 0; i < n; ++i) {
                    const bool one = (mask >> i) & 1;
                    m.at(i, i) = one ? 1.0 : 0.0;
                    if (!one) ++zeros;
                }
                const RankProfile rp = rank_profile(m, 1e-3);
                if (mask == 0) {
                    CHECK(rp.degenerate);
                    CHECK(rp.near_zero_count == n);
                } else {
                    CHECK_FALSE(rp.degenerate);
                    CHECK(rp.near_zero_count == zeros);
                }
            }
        }
    }
    SUBCASE("tolerance validation") {
        CHECK_THROWS_AS(rank_profile(SymMat::identity(2), 0.0), parameter_error);
        CHECK_THROWS_AS(rank_profile(SymMat::identity(2), 1.0), parameter_error);
    }
}

TEST_CASE("indefiniteness report") {
    const DirectionSet dirs = icosa6();
    const std::vector<double> cq{1.0, 0.0, 0.25, 0.0, 0.25, 0.0};
    SUBCASE("bg field is clean") {
        const auto q = testutil::constant_responses(Dims{8, 8}, cq);
        const IndefinitenessReport rep = indefiniteness_report(tensor_bg(q, dirs));
        CHECK(rep.negative_fraction == 0.0);
        CHECK(rep.min_eigenvalue >= -1e-12);
    }
    SUBCASE("gk counterexample field is fully indefinite") {
        const auto q = testutil::constant_responses(Dims{8, 8}, cq);
        const IndefinitenessReport rep = indefiniteness_report(tensor_gk(q, dirs, kIcosa6Coefficients));
        CHECK(rep.negative_fraction == 1.0);
        CHECK(rep.min_eigenvalue == doctest::Approx(-0.2022542485937369).epsilon(1e-9));
        // The ratio histogram puts every pixel in the bin holding
        // min-eig/trace = -0.2697.
        long long populated = 0;
        for (long long cnt : rep.histogram)
            if (cnt > 0) ++populated;
        CHECK(populated == 1);
        const double ratio = -0.2022542485937369 / 0.75;
        const int expect_bin = static_cast<int>(std::floor((ratio - rep.hist_lo) / (rep.hist_hi - rep.hist_lo) *
                                                           static_cast<double>(rep.histogram.size())));
        CHECK(rep.histogram[static_cast<std::size_t>(expect_bin)] == 64);
    }
    SUBCASE("zero field") {
        const TensorField tf(Dims{4, 4}, 3, "bg");
        const IndefinitenessReport rep = indefiniteness_report(tf);
        CHECK(rep.negative_fraction == 0.0);
        CHECK(rep.min_eigenvalue == 0.0);
    }
}

TEST_CASE("orientation field over a wave") {
    const Dims dims{32, 32};
    const WaveSpec spec = wave_from_cycles(dims, {5, 3});
    const ScalarField f = linear_symmetric(dims, spec);
    const TensorField tf = gradient_tensor(f, {});
    const OrientationField of = orientation_field(tf);
    const double target = std::atan2(spec.direction[1], spec.direction[0]);
    for (std::size_t pix = 0; pix < of.angle.size(); pix += 17) {
        double d = std::abs(of.angle[pix] - target);
        d = std::min(d, kPi - d);
        CHECK(d < 0.5 * kPi / 180.0);
        CHECK(of.certainty[pix] > 0.99);
    }
}

TEST_CASE("min eigenvalue field and axis_angle helpers") {
    const DirectionSet dirs = icosa6();
    const auto q = testutil::constant_responses(Dims{4, 4}, {1, 0, 0, 0, 0, 0});
    const ScalarField mins = min_eigenvalue_field(tensor_gk(q, dirs, kIcosa6Coefficients));
    for (double v : mins.values) CHECK(v == doctest::Approx(-0.25).epsilon(1e-12));

    const std::vector<double> x{1.0, 0.0};
    const std::vector<double> y{0.0, 1.0};
    const std::vector<double> neg_x{-1.0, 0.0};
    CHECK(axis_angle(x, y) == doctest::Approx(kPi / 2).epsilon(1e-12));
    CHECK(axis_angle(x, neg_x) == doctest::Approx(0.0));
}
