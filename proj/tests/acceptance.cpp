// Acceptance suite: end-to-end checks of the toolkit's core guarantees, one
// printed verdict per criterion. Exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "stf/analysis.hpp"
#include "stf/charpoly.hpp"
#include "stf/fft.hpp"
#include "stf/filterbank.hpp"
#include "stf/io.hpp"
#include "stf/rng.hpp"
#include "stf/synth.hpp"
#include "stf/tensor.hpp"
#include "stf/tessellation.hpp"
#include "testutil.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace stf;

namespace {

struct Harness {
    int failures = 0;

    void run(int number, const std::string& title, const std::function<void()>& body) {
        const auto start = std::chrono::steady_clock::now();
        std::string error;
        try {
            body();
        } catch (const std::exception& e) {
            error = e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        char line[512];
        std::snprintf(line, sizeof(line), "[%s] criterion %d: %s (%.2fs)%s%s",
                      error.empty() ? "PASS" : "FAIL", number, title.c_str(), secs,
                      error.empty() ? "" : " -- ", error.c_str());
        std::cout << line << std::endl;
        if (!error.empty()) ++failures;
    }
};

void require(bool cond, const std::string& what) {
    if (!cond) throw std::runtime_error(what);
}

const std::vector<double> kCounterexampleQ{1.0, 0.0, 0.25, 0.0, 0.25, 0.0};

// --------------------------------------------------------------------------

void criterion1_counterexample() {
    const DirectionSet dirs = icosa6();
    SymMat t(3);
    for (int k = 0; k < 6; ++k) {
        SymMat m = outer(dirs.dir(k));
        m *= 1.25 * kCounterexampleQ[static_cast<std::size_t>(k)];
        for (int i = 0; i < 3; ++i) m.at(i, i) -= 0.25 * kCounterexampleQ[static_cast<std::size_t>(k)];
        t += m;
    }
    require(std::abs(t.trace() - 0.75) <= 1e-12,
            "trace must equal (5/4 - 3/4) * 1.5 = 0.75, got " + format_double(t.trace()));

    const EigenDecomp e = eig_sym(t);
    int negatives = 0;
    for (double l : e.eigenvalues)
        if (l < 0.0) ++negatives;
    require(negatives == 2, "expected exactly two negative eigenvalues, got " + std::to_string(negatives));

    const std::vector<double> oracle = charpoly_eigenvalues(t);
    for (int i = 0; i < 3; ++i) {
        const double diff = std::abs(oracle[static_cast<std::size_t>(i)] - e.eigenvalues[static_cast<std::size_t>(i)]);
        require(diff < 1e-9, "eigensolver and characteristic-polynomial oracle disagree by " + format_double(diff));
    }
}

void criterion2_psd_property() {
    std::vector<DirectionSet> sets{icosa6()};
    for (int K = 3; K <= 12; ++K) sets.push_back(half_circle(K));

    for (const DirectionSet& dirs : sets) {
        const int K = dirs.count();
        const int draws = 10000;
        // Pack the draws into one response grid: pixel t holds draw t.
        Dims dims{100, 100};
        std::vector<ResponseField> q(static_cast<std::size_t>(K));
        Rng rng(5000 + static_cast<std::uint64_t>(K) * 17 + static_cast<std::uint64_t>(dirs.dim));
        for (auto& rf : q) {
            rf.dims = dims;
            rf.values.resize(static_cast<std::size_t>(draws));
        }
        for (int t = 0; t < draws; ++t)
            for (int k = 0; k < K; ++k)
                q[static_cast<std::size_t>(k)].values[static_cast<std::size_t>(t)] = 10.0 * rng.next_unit();

        const TensorField tf = tensor_bg(q, dirs);
        for (int t = 0; t < draws; ++t) {
            const SymMat m = tf.matrix_at(static_cast<std::size_t>(t));
            const EigenDecomp e = eig_sym(m);
            require(e.eigenvalues.back() >= -1e-12 * m.trace(),
                    "PSD violation for K=" + std::to_string(K) + " at draw " + std::to_string(t) + ": " +
                        format_double(e.eigenvalues.back()));
        }
    }
}

void criterion3_frame_identities() {
    require(rel_frobenius_error(frame_sum(icosa6()), 2.0 * SymMat::identity(3)) < 1e-12,
            "icosahedral frame sum is not 2I");
    for (int K = 3; K <= 12; ++K)
        require(rel_frobenius_error(frame_sum(half_circle(K)), (K / 2.0) * SymMat::identity(2)) < 1e-12,
                "half-circle frame sum is not (K/2) I for K=" + std::to_string(K));

    const auto q = testutil::constant_responses(Dims{2, 2}, {1, 0, 0, 0, 0, 0});
    const TensorField tf = tensor_gk(q, icosa6(), kIcosa6Coefficients);
    const EigenDecomp e = eig_sym(tf.matrix_at(0));
    require(std::abs(e.eigenvalues[0] - 1.0) < 1e-12 && std::abs(e.eigenvalues[1] + 0.25) < 1e-12 &&
                std::abs(e.eigenvalues[2] + 0.25) < 1e-12,
            "single-filter excitation eigenvalues are not (1, -1/4, -1/4)");
}

void criterion4_parseval() {
    int count = 0;
    const int sizes[5] = {16, 24, 32, 48, 64};
    for (std::uint64_t seed = 0; count < 80; ++seed, ++count) {
        const int m = sizes[seed % 5];
        const ScalarField f = testutil::random_field(Dims{m, m}, 1000 + seed);
        const double err = rel_frobenius_error(spectral_moment_tensor(f), dft_gradient_tensor(f));
        require(err < 1e-10, "2-D Parseval equivalence failed at seed " + std::to_string(seed) + ": " +
                                 format_double(err));
    }
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const ScalarField f = testutil::random_field(Dims{8, 8, 8}, 2000 + seed);
        const double err = rel_frobenius_error(spectral_moment_tensor(f), dft_gradient_tensor(f));
        require(err < 1e-10, "3-D Parseval equivalence failed at seed " + std::to_string(seed) + ": " +
                                 format_double(err));
    }
}

void criterion5_orientation_accuracy() {
    const Dims dims{64, 64};
    const auto targets = testutil::orientation_targets_25();
    require(targets.size() == 25, "expected 25 orientation targets, got " + std::to_string(targets.size()));

    const DirectionSet dirs = half_circle(6);
    const auto bank = make_bank(dirs, FilterKind::quadrature, kPi / 3.0, 2.0, 3);

    for (const auto& [mx, my] : targets) {
        const WaveSpec spec = wave_from_cycles(dims, {mx, my});
        const ScalarField f = linear_symmetric(dims, spec);

        // Gradient realization: every pixel within 0.5 degrees and strongly rank-1.
        GradientOptions opt;
        opt.sigma_d = 1.0;
        opt.sigma_o = 3.0;
        const TensorField tf = gradient_tensor(f, opt);
        for (std::size_t pix = 0; pix < tf.pixel_count(); pix += 7) {
            const EigenDecomp e = eig_sym(tf.matrix_at(pix));
            const double err_deg = axis_angle(e.vec(0), spec.direction) * 180.0 / kPi;
            require(err_deg < 0.5, "gradient orientation off by " + format_double(err_deg) + " deg at m=(" +
                                       std::to_string(mx) + "," + std::to_string(my) + ")");
            require(e.eigenvalues[1] / e.eigenvalues[0] < 1e-3,
                    "gradient tensor not rank-1 enough: ratio " +
                        format_double(e.eigenvalues[1] / e.eigenvalues[0]));
        }

        // Quadrature bank + direct-sampling tensor: within 2 degrees despite
        // the broad angular overlap.
        const auto q = apply_bank(f, bank, ResponseMode::power);
        const TensorField tb = tensor_bg(q, dirs);
        for (std::size_t pix = 0; pix < tb.pixel_count(); pix += 257) {
            const OrientationEstimate est = orientation(tb.matrix_at(pix));
            const double err_deg = axis_angle(est.direction, spec.direction) * 180.0 / kPi;
            require(err_deg < 2.0, "bank orientation off by " + format_double(err_deg) + " deg at m=(" +
                                       std::to_string(mx) + "," + std::to_string(my) + ")");
        }
    }
}

void criterion6_multi_orientation() {
    const Dims dims{64, 64};
    const ScalarField f1 = linear_symmetric(dims, wave_from_cycles(dims, {11, 0}));
    const ScalarField f2 = linear_symmetric(dims, wave_from_cycles(dims, {0, 11}));
    const std::vector<ScalarField> both{f1, f2};
    const ScalarField f = superpose(both);

    const DirectionSet dirs = half_circle(6);
    const auto bank = make_bank(dirs, FilterKind::quadrature, kPi / 3.0, 2.0, 1);
    const auto q = apply_bank(f, bank, ResponseMode::power);
    const TensorField tb = tensor_bg(q, dirs);

    // Mean tensor over the field: the per-pixel cross terms integrate out.
    SymMat mean(2);
    for (std::size_t pix = 0; pix < tb.pixel_count(); ++pix) mean += tb.matrix_at(pix);
    mean *= 1.0 / static_cast<double>(tb.pixel_count());
    const EigenDecomp e = eig_sym(mean);
    const double ratio = e.eigenvalues[1] / e.eigenvalues[0];
    require(ratio >= 0.9 && ratio <= 1.0,
            "direct-sampling eigenvalue ratio " + format_double(ratio) + " outside [0.9, 1.0]");

    // Same signature through the global gradient construction.
    const SymMat g = dft_gradient_tensor(f);
    const EigenDecomp eg = eig_sym(g);
    const double gratio = eg.eigenvalues[1] / eg.eigenvalues[0];
    require(gratio >= 0.9 && gratio <= 1.0,
            "gradient eigenvalue ratio " + format_double(gratio) + " outside [0.9, 1.0]");
}

void criterion7_upsampling_noop() {
    const Dims dims{32, 32};
    const ScalarField f = testutil::bandlimit(testutil::random_field(dims, 31), kPi / 2.0);

    GradientOptions plain;
    plain.kind = GradientKind::spectral;
    plain.sigma_d = 1.0;
    plain.sigma_o = 3.0;
    GradientOptions up = plain;
    up.upsample = true;

    const TensorField a = gradient_tensor(f, plain);
    const TensorField b = gradient_tensor(f, up);
    require(a.dims == b.dims, "upsampled pipeline must return the original grid");
    double scale = 0.0, worst = 0.0;
    for (std::size_t i = 0; i < a.planes.size(); ++i) {
        scale = std::max(scale, std::abs(a.planes[i]));
        worst = std::max(worst, std::abs(a.planes[i] - b.planes[i]));
    }
    require(worst < 1e-8 * scale, "tensors with and without upsampling differ by " + format_double(worst / scale) +
                                      " (relative) on bandlimited input");
}

void criterion8_determinism_and_formats() {
    namespace fs = std::filesystem;
    const fs::path tmp = fs::temp_directory_path() / "stf_acceptance_c8";
    fs::remove_all(tmp);
    fs::create_directories(tmp);

    auto pipeline = [&](int threads) {
#ifdef _OPENMP
        omp_set_num_threads(threads);
#else
        (void)threads;
#endif
        const Dims dims{64, 64};
        ScalarField f = linear_symmetric(dims, wave_from_cycles(dims, {6, 2}));
        f = add_noise(f, 0.25, 99);
        const DirectionSet dirs = half_circle(8);
        const auto bank = make_bank(dirs, FilterKind::quadrature, kPi / 3.0, 2.0, 1);
        const auto q = apply_bank(f, bank, ResponseMode::power);
        const TensorField tb = tensor_bg(q, dirs);
        const SymMat global = dft_gradient_tensor(f);
        const IndefinitenessReport rep = indefiniteness_report(tb);

        std::vector<std::uint8_t> blob = serialize_raw(to_raster(tb));
        const auto qblob = serialize_raw(to_raster(q, encode_directions(dirs)));
        blob.insert(blob.end(), qblob.begin(), qblob.end());
        for (double v : global.packed()) {
            const std::string s = format_double(v);
            blob.insert(blob.end(), s.begin(), s.end());
        }
        const std::string frac = format_double(rep.negative_fraction) + format_double(rep.min_eigenvalue);
        blob.insert(blob.end(), frac.begin(), frac.end());
        return blob;
    };

    const auto run1 = pipeline(1);
    const auto run4 = pipeline(4);
    const auto run4b = pipeline(4);
    require(run1 == run4, "pipeline bytes differ between 1 and 4 threads");
    require(run4 == run4b, "pipeline bytes differ between identical runs");

    // Format round trips at their stated precision.
    const ScalarField noise = testutil::random_field(Dims{16, 16}, 5);
    ScalarField unit = noise;
    double lo = unit.values[0], hi = unit.values[0];
    for (double v : unit.values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    for (double& v : unit.values) v = (v - lo) / (hi - lo);
    const std::string pgm_path = (tmp / "roundtrip.pgm").string();
    write_pgm(unit, pgm_path, 65535);
    const ScalarField back = read_pgm(pgm_path);
    for (std::size_t i = 0; i < unit.size(); ++i)
        require(std::abs(unit.values[i] - back.values[i]) <= 1.0 / (2.0 * 65535.0), "pgm round trip out of bounds");

    const RasterData raster = to_raster(noise, "scalar");
    const auto blob = serialize_raw(raster);
    require(serialize_raw(parse_raw(blob)) == blob, "raw round trip is not bitwise exact");

    // Fuzzed parsers must reject, never crash.
    Rng rng(424242);
    for (int rep = 0; rep < 100000; ++rep) {
        const std::size_t len = rng.next_u64() % 48;
        std::vector<std::uint8_t> buf(len);
        for (auto& b : buf) b = static_cast<std::uint8_t>(rng.next_u64() & 0xFF);
        if (rep % 3 == 0 && len >= 4) {
            buf[0] = 'S';
            buf[1] = 'T';
            buf[2] = 'F';
            buf[3] = '1';
        }
        if (rep % 3 == 1 && len >= 2) {
            buf[0] = 'P';
            buf[1] = '5';
        }
        try {
            (void)parse_raw(buf);
        } catch (const io_error&) {
        }
        try {
            (void)parse_pgm(buf);
        } catch (const io_error&) {
        }
    }
    fs::remove_all(tmp);
}

} // namespace

int main() {
    Harness h;
    h.run(1, "counterexample: two negative eigenvalues, oracle + trace agreement", criterion1_counterexample);
    h.run(2, "direct-sampling tensor PSD on 10^4 random response draws per tessellation", criterion2_psd_property);
    h.run(3, "frame identities and single-filter eigenvalues", criterion3_frame_identities);
    h.run(4, "spectral-moment vs DFT-gradient equivalence on 100 random images", criterion4_parseval);
    h.run(5, "TLS orientation accuracy at 25 orientations (gradient and bank paths)", criterion5_orientation_accuracy);
    h.run(6, "multi-orientation failure signature: near-equal eigenvalues", criterion6_multi_orientation);
    h.run(7, "2x upsampling is a no-op on input bandlimited below pi/2", criterion7_upsampling_noop);
    h.run(8, "bit-identical outputs across runs/threads; format round trips and fuzzing", criterion8_determinism_and_formats);

    if (h.failures > 0) {
        std::cout << h.failures << " criterion(s) failed" << std::endl;
        return 1;
    }
    std::cout << "all criteria passed" << std::endl;
    return 0;
}
