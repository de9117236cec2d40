// Command-line harness over the structure tensor toolkit: synthesizes test
// images, runs filter banks, builds tensor fields, and analyzes them.
//
// Exit codes: 0 success, 1 I/O or numeric failure, 2 usage/parameter error,
// 3 failed --check assertion or failed built-in verdict.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "stf/analysis.hpp"
#include "stf/charpoly.hpp"
#include "stf/filterbank.hpp"
#include "stf/io.hpp"
#include "stf/synth.hpp"
#include "stf/tensor.hpp"
#include "stf/tessellation.hpp"
#include "stf/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;
constexpr int kExitCheck = 3;

struct check_failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

stf::Dims parse_dims(const std::string& s) {
    stf::Dims dims;
    std::string cur;
    for (char c : s + "x") {
        if (c == 'x' || c == ',') {
            if (cur.empty()) throw stf::parameter_error("bad dims: " + s);
            dims.push_back(std::stoi(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    stf::element_count(dims); // validates
    return dims;
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::string cur;
    for (char c : s + ",") {
        if (c == ',') {
            if (cur.empty()) throw stf::parameter_error("bad integer list: " + s);
            out.push_back(std::stoi(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    return out;
}

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    std::string cur;
    for (char c : s + ",") {
        if (c == ',') {
            if (cur.empty()) throw stf::parameter_error("bad number list: " + s);
            out.push_back(std::stod(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    return out;
}

// Wave spec strings: "cycles=5,3;profile=cosine;amp=1;phase=0".
struct WaveArgs {
    std::vector<int> cycles;
    stf::WaveProfile profile = stf::WaveProfile::cosine;
    double amplitude = 1.0;
    double phase = 0.0;
};

WaveArgs parse_wave(const std::string& s) {
    WaveArgs w;
    std::string item;
    std::stringstream ss(s);
    while (std::getline(ss, item, ';')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw stf::parameter_error("bad wave item: " + item);
        const std::string key = item.substr(0, eq);
        const std::string val = item.substr(eq + 1);
        if (key == "cycles") {
            w.cycles = parse_int_list(val);
        } else if (key == "profile") {
            if (val == "cosine") w.profile = stf::WaveProfile::cosine;
            else if (val == "square") w.profile = stf::WaveProfile::square;
            else if (val == "gauss_modulated") w.profile = stf::WaveProfile::gauss_modulated;
            else throw stf::parameter_error("unknown wave profile: " + val);
        } else if (key == "amp") {
            w.amplitude = std::stod(val);
        } else if (key == "phase") {
            w.phase = std::stod(val);
        } else {
            throw stf::parameter_error("unknown wave key: " + key);
        }
    }
    if (w.cycles.empty()) throw stf::parameter_error("wave spec needs cycles=...");
    return w;
}

stf::DirectionSet make_directions(const std::string& spec) {
    if (spec == "icosa6") return stf::icosa6();
    if (spec.rfind("half:", 0) == 0) return stf::half_circle(std::stoi(spec.substr(5)));
    throw stf::parameter_error("unknown direction set: " + spec + " (use icosa6 or half:K)");
}

stf::ScalarField load_image(const std::string& path) {
    if (path.size() >= 4 && path.substr(path.size() - 4) == ".pgm") return stf::read_pgm(path);
    return stf::raster_to_scalar(stf::read_raw(path));
}

// Shared bank options used by `bank` and `compare`.
struct BankOptions {
    std::string dirs = "icosa6";
    std::string kind = "quadrature";
    double rho0 = stf::kPi / 3.0;
    double bandwidth = 2.0;
    int angular_power = 1;
    std::string response_mode = "power";
    bool upsample = false;
};

void add_bank_options(CLI::App* cmd, BankOptions& b) {
    cmd->add_option("--dirs", b.dirs, "Direction set: icosa6 or half:K")->capture_default_str();
    cmd->add_option("--kind", b.kind, "Filter kind: quadrature or gabor")
        ->check(CLI::IsMember({"quadrature", "gabor"}))
        ->capture_default_str();
    cmd->add_option("--rho0", b.rho0, "Center frequency in radians/sample, (0, pi)")->capture_default_str();
    cmd->add_option("--bandwidth", b.bandwidth, "Relative bandwidth in octaves")->capture_default_str();
    cmd->add_option("--angular-power", b.angular_power, "Cosine exponent p >= 1")->capture_default_str();
    cmd->add_option("--response-mode", b.response_mode, "power (|z|^2) or magnitude (|z|)")
        ->check(CLI::IsMember({"power", "magnitude"}))
        ->capture_default_str();
    cmd->add_flag("--upsample", b.upsample, "Upsample 2x before the squaring step, then subsample back");
}

std::vector<stf::ResponseField> run_bank(const stf::ScalarField& img, const BankOptions& b,
                                         stf::DirectionSet& dirs_out) {
    dirs_out = make_directions(b.dirs);
    const auto kind = b.kind == "gabor" ? stf::FilterKind::gabor : stf::FilterKind::quadrature;
    const auto mode = b.response_mode == "magnitude" ? stf::ResponseMode::magnitude : stf::ResponseMode::power;
    const auto bank = stf::make_bank(dirs_out, kind, b.rho0, b.bandwidth, b.angular_power);
    if (!b.upsample) return stf::apply_bank(img, bank, mode);

    // Anti-aliased responses: form |z|^2 on the doubled grid, subsample back.
    const stf::ScalarField fine = stf::upsample2x(img);
    auto qfine = stf::apply_bank(fine, bank, mode);
    std::vector<stf::ResponseField> out(qfine.size());
    const int nd = static_cast<int>(img.dims.size());
    const std::size_t npix = stf::element_count(img.dims);
    for (std::size_t k = 0; k < qfine.size(); ++k) {
        out[k].dims = img.dims;
        out[k].label = qfine[k].label;
        out[k].values.resize(npix);
        std::vector<int> c(static_cast<std::size_t>(nd));
        for (std::size_t pix = 0; pix < npix; ++pix) {
            stf::flat_to_coords(pix, img.dims, c.data());
            for (int a = 0; a < nd; ++a) c[static_cast<std::size_t>(a)] *= 2;
            out[k].values[pix] = qfine[k].values[stf::coords_to_flat(c.data(), fine.dims)];
        }
    }
    return out;
}

void print_and_save_csv(const stf::CsvWriter& csv, const std::string& path) {
    if (!path.empty())
        csv.write(path);
    else
        std::fputs(csv.str().c_str(), stdout);
}

// Flat key=value config support: `--config FILE` anywhere on the line loads
// defaults for the active subcommand. Lines become `--key=value` tokens for
// keys not already given on the command line, so explicit flags win and
// unknown keys fall through to the parser as usage errors.
std::vector<std::string> expand_config(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::string config_path;
    std::vector<std::string> out;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw stf::parameter_error("--config requires a file path");
            config_path = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            config_path = args[i].substr(9);
        } else {
            out.push_back(args[i]);
        }
    }
    if (config_path.empty()) return out;

    std::set<std::string> given;
    for (const std::string& t : out) {
        if (t.rfind("--", 0) == 0) {
            const auto eq = t.find('=');
            given.insert(t.substr(2, eq == std::string::npos ? std::string::npos : eq - 2));
        } else if (t == "-o") {
            given.insert("out");
        }
    }

    std::ifstream in(config_path);
    if (!in) throw stf::io_error("cannot open config file " + config_path);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos) continue;
        const auto end = line.find_last_not_of(" \t\r");
        line = line.substr(start, end - start + 1);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos || eq == 0)
            throw stf::parameter_error("config " + config_path + ":" + std::to_string(lineno) +
                                       ": expected key=value");
        const std::string key = line.substr(0, eq);
        if (given.count(key)) continue;
        out.push_back("--" + line);
    }
    return out;
}

// ---------------------------------------------------------------------------

int cmd_repro_example(const std::string& csv_out) {
    const stf::DirectionSet dirs = stf::icosa6();
    const std::vector<double> q = {1.0, 0.0, 0.25, 0.0, 0.25, 0.0};

    stf::SymMat tgk(3), tbg(3);
    for (int k = 0; k < 6; ++k) {
        stf::SymMat m = stf::outer(dirs.dir(k));
        tbg += q[static_cast<std::size_t>(k)] * m;
        m *= 1.25;
        for (int i = 0; i < 3; ++i) m.at(i, i) -= 0.25;
        tgk += q[static_cast<std::size_t>(k)] * m;
    }

    const stf::EigenDecomp egk = stf::eig_sym(tgk);
    const stf::EigenDecomp ebg = stf::eig_sym(tbg);
    const std::vector<double> oracle_gk = stf::charpoly_eigenvalues(tgk);
    const std::vector<double> oracle_bg = stf::charpoly_eigenvalues(tbg);

    int gk_negative = 0;
    for (double l : egk.eigenvalues)
        if (l < 0.0) ++gk_negative;
    const bool bg_psd = stf::is_psd(tbg, 1e-12);
    const bool gk_psd = stf::is_psd(tgk, 1e-12);

    stf::CsvWriter csv;
    csv.row({"section", "name", "value"});
    csv.row({"input", "q", "1,0,0.25,0,0.25,0"});
    csv.row({"input", "coefficients", "alpha=5/4 beta=1/4"});
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j)
            csv.row({"tgk", "entry_" + std::to_string(i) + std::to_string(j), stf::format_double(tgk.at(i, j))});
    for (int i = 0; i < 3; ++i)
        csv.row({"tgk", "eig_" + std::to_string(i + 1), stf::format_double(egk.eigenvalues[static_cast<std::size_t>(i)])});
    for (int i = 0; i < 3; ++i)
        csv.row({"tgk", "eig_oracle_" + std::to_string(i + 1), stf::format_double(oracle_gk[static_cast<std::size_t>(i)])});
    csv.row({"tgk", "trace", stf::format_double(tgk.trace())});
    csv.row({"tgk", "negative_eigenvalue_count", std::to_string(gk_negative)});
    csv.row({"tgk", "psd", gk_psd ? "true" : "false"});
    for (int i = 0; i < 3; ++i)
        csv.row({"tbg", "eig_" + std::to_string(i + 1), stf::format_double(ebg.eigenvalues[static_cast<std::size_t>(i)])});
    for (int i = 0; i < 3; ++i)
        csv.row({"tbg", "eig_oracle_" + std::to_string(i + 1), stf::format_double(oracle_bg[static_cast<std::size_t>(i)])});
    csv.row({"tbg", "trace", stf::format_double(tbg.trace())});
    csv.row({"tbg", "psd", bg_psd ? "true" : "false"});
    print_and_save_csv(csv, csv_out);

    return (gk_negative >= 2 && bg_psd) ? kExitOk : kExitCheck;
}

struct SynthArgs {
    std::string dims_str = "64x64";
    std::vector<std::string> waves;
    double noise_sigma = 0.0;
    std::uint64_t seed = 1;
    std::string out;
    std::string pgm_out;
};

int cmd_synth(const SynthArgs& a) {
    const stf::Dims dims = parse_dims(a.dims_str);
    if (a.waves.empty()) throw stf::parameter_error("synth: at least one --wave required");
    std::vector<stf::ScalarField> fields;
    for (const std::string& ws : a.waves) {
        const WaveArgs w = parse_wave(ws);
        const stf::WaveSpec spec = stf::wave_from_cycles(dims, w.cycles, w.profile, w.amplitude, w.phase);
        fields.push_back(stf::linear_symmetric(dims, spec));
    }
    stf::ScalarField f = stf::superpose(fields);
    if (a.noise_sigma > 0.0) f = stf::add_noise(f, a.noise_sigma, a.seed);

    if (!a.out.empty()) stf::write_raw(stf::to_raster(f, "scalar"), a.out);
    if (!a.pgm_out.empty()) {
        double lo = f.values[0], hi = f.values[0];
        for (double v : f.values) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        stf::ScalarField scaled = f;
        const double span = hi > lo ? hi - lo : 1.0;
        for (double& v : scaled.values) v = (v - lo) / span;
        stf::write_pgm(scaled, a.pgm_out);
    }
    return kExitOk;
}

struct BankArgs {
    std::string input;
    BankOptions bank;
    std::string out;
    std::string dump_transfer;
    std::string dump_directions;
};

int cmd_bank(const BankArgs& a) {
    const stf::ScalarField img = load_image(a.input);
    stf::DirectionSet dirs;
    const auto q = run_bank(img, a.bank, dirs);
    if (!a.out.empty())
        stf::write_raw(stf::to_raster(q, stf::encode_directions(dirs)), a.out);
    if (!a.dump_directions.empty())
        stf::write_file(a.dump_directions, stf::directions_to_csv(dirs));
    if (!a.dump_transfer.empty()) {
        const auto kind = a.bank.kind == "gabor" ? stf::FilterKind::gabor : stf::FilterKind::quadrature;
        const auto bank = stf::make_bank(dirs, kind, a.bank.rho0, a.bank.bandwidth, a.bank.angular_power);
        for (std::size_t k = 0; k < bank.size(); ++k) {
            const std::vector<double> H = stf::synth_transfer(bank[k], img.dims);
            stf::ScalarField hf(img.dims);
            hf.values = H;
            stf::write_raw(stf::to_raster(hf, "transfer:" + dirs.labels[k]),
                           a.dump_transfer + "." + std::to_string(k) + ".stf");
        }
    }
    return kExitOk;
}

struct TensorArgs {
    std::string construction = "bg";
    std::string responses;
    std::string image;
    std::string coeff;
    double sigma_d = 1.0;
    double sigma_o = 3.0;
    std::string boundary = "periodic";
    std::string gradient_kind = "gaussian";
    bool upsample = false;
    bool check = false;
    std::string out;
};

int cmd_tensor(const TensorArgs& a) {
    stf::TensorField tf;
    if (a.construction == "gk" || a.construction == "bg") {
        if (a.responses.empty()) throw stf::parameter_error("tensor: gk/bg need --responses");
        const stf::RasterData raster = stf::read_raw(a.responses);
        const stf::DirectionSet dirs = stf::decode_directions(raster.tag);
        const auto q = stf::raster_to_responses(raster);
        if (a.construction == "bg") {
            tf = stf::tensor_bg(q, dirs);
        } else {
            stf::FrameCoefficients coef = stf::kIcosa6Coefficients;
            if (!a.coeff.empty()) {
                const auto ab = parse_double_list(a.coeff);
                if (ab.size() != 2) throw stf::parameter_error("tensor: --coeff expects alpha,beta");
                coef = {ab[0], ab[1]};
            } else if (dirs.dim != 3 || dirs.count() != 6) {
                throw stf::parameter_error(
                    "tensor: gk outside the icosahedral six-direction set requires explicit --coeff alpha,beta");
            }
            tf = stf::tensor_gk(q, dirs, coef);
        }
    } else if (a.construction == "gradient" || a.construction == "spectral") {
        if (a.image.empty()) throw stf::parameter_error("tensor: gradient/spectral need --image");
        const stf::ScalarField img = load_image(a.image);
        if (a.construction == "spectral") {
            // Global moment tensor: a 1x...x1 field holding one matrix.
            const stf::SymMat t = stf::spectral_moment_tensor(img);
            stf::Dims unit(img.dims.size(), 1);
            tf = stf::TensorField(unit, t.dim(), "spectral");
            tf.set_matrix(0, t);
        } else {
            stf::GradientOptions opt;
            opt.sigma_d = a.sigma_d;
            opt.sigma_o = a.sigma_o;
            opt.boundary = a.boundary == "reflect" ? stf::Boundary::reflect : stf::Boundary::periodic;
            opt.kind = a.gradient_kind == "spectral" ? stf::GradientKind::spectral
                                                     : stf::GradientKind::gaussian_derivative;
            opt.upsample = a.upsample;
            tf = stf::gradient_tensor(img, opt);
        }
    } else {
        throw stf::parameter_error("tensor: unknown construction " + a.construction);
    }

    if (a.check && tf.tag != "gk") {
        const double viol = stf::max_psd_violation(tf);
        if (viol > 1e-10)
            throw check_failure("tensor --check: PSD violation " + stf::format_double(viol));
    }
    if (!a.out.empty()) stf::write_raw(stf::to_raster(tf), a.out);
    return kExitOk;
}

struct AnalyzeArgs {
    std::string input;
    std::optional<double> true_angle_deg;
    double rel_tol = 1e-3;
    bool check = false;
    std::string csv_out;
    std::string orientation_out;
    std::string ppm_out;
};

int cmd_analyze(const AnalyzeArgs& a) {
    const stf::TensorField tf = stf::raster_to_tensor(stf::read_raw(a.input));
    if (a.check && tf.tag != "gk") {
        // Rasters hold f32 planes, so allow quantization-level negativity.
        const double viol = stf::max_psd_violation(tf);
        if (viol > 1e-6)
            throw check_failure("analyze --check: field tagged '" + tf.tag +
                                "' violates its PSD invariant by " + stf::format_double(viol));
    }
    const stf::IndefinitenessReport rep = stf::indefiniteness_report(tf);

    stf::CsvWriter csv;
    csv.row({"metric", "value"});
    csv.row({"construction", tf.tag});
    csv.row({"pixels", std::to_string(rep.pixel_count)});
    csv.row({"negative_fraction", stf::format_double(rep.negative_fraction)});
    csv.row({"min_eigenvalue", stf::format_double(rep.min_eigenvalue)});

    // Aggregate rank profile over the field at the requested tolerance.
    std::vector<std::size_t> rank_counts(static_cast<std::size_t>(tf.order) + 1, 0);
    for (std::size_t pix = 0; pix < tf.pixel_count(); ++pix) {
        const stf::RankProfile rp = stf::rank_profile(tf.matrix_at(pix), a.rel_tol);
        ++rank_counts[static_cast<std::size_t>(rp.near_zero_count)];
    }
    for (std::size_t k = 0; k < rank_counts.size(); ++k)
        csv.row({"near_zero_count_" + std::to_string(k), std::to_string(rank_counts[k])});

    if (tf.order == 2 && tf.dims.size() == 2) {
        const stf::OrientationField of = stf::orientation_field(tf);
        double csum = 0.0;
        for (double c : of.certainty) csum += c;
        csv.row({"mean_certainty", stf::format_double(csum / static_cast<double>(of.certainty.size()))});
        if (a.true_angle_deg) {
            const double target = *a.true_angle_deg * stf::kPi / 180.0;
            double errsum = 0.0, errmax = 0.0;
            for (double ang : of.angle) {
                double d = std::abs(ang - target);
                d = std::min(d, stf::kPi - d); // orientation distance is pi-periodic
                errsum += d;
                errmax = std::max(errmax, d);
            }
            const double n = static_cast<double>(of.angle.size());
            csv.row({"mean_angular_error_deg", stf::format_double(errsum / n * 180.0 / stf::kPi)});
            csv.row({"max_angular_error_deg", stf::format_double(errmax * 180.0 / stf::kPi)});
        }
        if (!a.orientation_out.empty()) {
            stf::VectorField planes(of.dims, 2);
            for (std::size_t pix = 0; pix < of.angle.size(); ++pix) {
                planes.at(0, pix) = of.angle[pix];
                planes.at(1, pix) = of.certainty[pix];
            }
            stf::write_raw(stf::to_raster(planes, "orientation"), a.orientation_out);
        }
        if (!a.ppm_out.empty()) {
            stf::ScalarField ang(of.dims), cert(of.dims);
            ang.values = of.angle;
            cert.values = of.certainty;
            stf::write_orientation_ppm(ang, cert, a.ppm_out);
        }
    } else if (!a.orientation_out.empty()) {
        stf::write_raw(stf::to_raster(stf::direction_field(tf), "direction"), a.orientation_out);
    }

    print_and_save_csv(csv, a.csv_out);
    return kExitOk;
}

struct CompareArgs {
    std::string image;
    std::string q_constant;
    std::string dims_str = "32x32";
    BankOptions bank;
    std::string coeff;
    std::string out_prefix = "compare";
    bool check = false;
};

int cmd_compare(const CompareArgs& a) {
    stf::DirectionSet dirs;
    std::vector<stf::ResponseField> q;
    if (!a.q_constant.empty()) {
        dirs = make_directions(a.bank.dirs);
        const auto qv = parse_double_list(a.q_constant);
        if (static_cast<int>(qv.size()) != dirs.count())
            throw stf::parameter_error("compare: --q-constant length must match direction count");
        const stf::Dims dims = parse_dims(a.dims_str);
        const std::size_t npix = stf::element_count(dims);
        q.resize(qv.size());
        for (std::size_t k = 0; k < qv.size(); ++k) {
            if (!(qv[k] >= 0.0)) throw stf::parameter_error("compare: q values must be nonnegative");
            q[k].dims = dims;
            q[k].label = "q" + std::to_string(k + 1);
            q[k].values.assign(npix, qv[k]);
        }
    } else if (!a.image.empty()) {
        const stf::ScalarField img = load_image(a.image);
        q = run_bank(img, a.bank, dirs);
    } else {
        throw stf::parameter_error("compare: need --image or --q-constant");
    }

    stf::FrameCoefficients coef = stf::kIcosa6Coefficients;
    if (!a.coeff.empty()) {
        const auto ab = parse_double_list(a.coeff);
        if (ab.size() != 2) throw stf::parameter_error("compare: --coeff expects alpha,beta");
        coef = {ab[0], ab[1]};
    } else if (dirs.dim != 3 || dirs.count() != 6) {
        throw stf::parameter_error("compare: this direction set requires explicit --coeff alpha,beta");
    }

    const stf::TensorField tgk = stf::tensor_gk(q, dirs, coef);
    const stf::TensorField tbg = stf::tensor_bg(q, dirs);
    const stf::IndefinitenessReport rgk = stf::indefiniteness_report(tgk);
    const stf::IndefinitenessReport rbg = stf::indefiniteness_report(tbg);

    stf::write_raw(stf::to_raster(stf::min_eigenvalue_field(tgk), "mineig:gk"), a.out_prefix + "_gk_mineig.stf");
    stf::write_raw(stf::to_raster(stf::min_eigenvalue_field(tbg), "mineig:bg"), a.out_prefix + "_bg_mineig.stf");

    // Orientation delta between the two constructions.
    double dsum = 0.0, dmax = 0.0;
    for (std::size_t pix = 0; pix < tgk.pixel_count(); ++pix) {
        const auto ogk = stf::orientation(tgk.matrix_at(pix));
        const auto obg = stf::orientation(tbg.matrix_at(pix));
        const double d = stf::axis_angle(ogk.direction, obg.direction);
        dsum += d;
        dmax = std::max(dmax, d);
    }
    const double npixd = static_cast<double>(tgk.pixel_count());

    stf::CsvWriter csv;
    csv.row({"metric", "gk", "bg"});
    csv.row({"negative_fraction", stf::format_double(rgk.negative_fraction), stf::format_double(rbg.negative_fraction)});
    csv.row({"min_eigenvalue", stf::format_double(rgk.min_eigenvalue), stf::format_double(rbg.min_eigenvalue)});
    csv.row({"orientation_delta_mean_rad", stf::format_double(dsum / npixd), ""});
    csv.row({"orientation_delta_max_rad", stf::format_double(dmax), ""});
    for (std::size_t b = 0; b < rgk.histogram.size(); ++b)
        csv.row({"hist_bin_" + std::to_string(b), std::to_string(rgk.histogram[b]), std::to_string(rbg.histogram[b])});
    csv.write(a.out_prefix + "_report.csv");

    if (a.check && rbg.negative_fraction > 0.0)
        throw check_failure("compare --check: direct-sampling tensor shows negative eigenvalues");
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"structure tensor toolkit"};
    app.set_version_flag("--version", std::string("stf ") + stf::kVersion + " (raster format " +
                                          stf::kRasterFormat + ", csv format v" +
                                          std::to_string(stf::kCsvFormatVersion) + ")");
    int threads = 0;
    app.add_option("--threads", threads, "Cap worker threads (0 = library default)");
    app.require_subcommand(1);

    // repro-example
    auto* repro = app.add_subcommand("repro-example",
                                     "Frame-corrected vs direct-sampling tensor on the fixed response vector "
                                     "q = (1, 0, 0.25, 0, 0.25, 0) over the icosahedral six-direction set");
    std::string repro_csv;
    repro->add_option("--csv-out", repro_csv, "Write the table to a file instead of stdout");

    // synth
    SynthArgs synth_args;
    auto* synth = app.add_subcommand("synth", "Generate deterministic synthetic images");
    synth->add_option("--dims", synth_args.dims_str, "Grid extents, e.g. 64x64 or 8x8x8")->capture_default_str();
    synth->add_option("--wave", synth_args.waves,
                      "Wave spec 'cycles=5,3;profile=cosine;amp=1;phase=0' (repeatable, waves superpose)");
    synth->add_option("--noise-sigma", synth_args.noise_sigma, "Additive Gaussian noise sigma")->capture_default_str();
    synth->add_option("--seed", synth_args.seed, "Noise stream seed")->capture_default_str();
    synth->add_option("-o,--out", synth_args.out, "Output raster (.stf)");
    synth->add_option("--pgm", synth_args.pgm_out, "Also write a range-normalized PGM preview");

    // bank
    BankArgs bank_args;
    auto* bank = app.add_subcommand("bank", "Apply a quadrature/Gabor filter bank");
    bank->add_option("--input", bank_args.input, "Input image (.stf or .pgm)")->required();
    add_bank_options(bank, bank_args.bank);
    bank->add_option("-o,--out", bank_args.out, "Output response stack (.stf, one plane per filter)");
    bank->add_option("--dump-transfer", bank_args.dump_transfer, "Write each sampled transfer function (prefix)");
    bank->add_option("--dump-directions", bank_args.dump_directions, "Write the direction set as CSV");

    // tensor
    TensorArgs tensor_args;
    auto* tensor = app.add_subcommand("tensor", "Build a structure tensor field");
    tensor->add_option("--construction", tensor_args.construction, "gk | bg | gradient | spectral")
        ->check(CLI::IsMember({"gk", "bg", "gradient", "spectral"}))
        ->capture_default_str();
    tensor->add_option("--responses", tensor_args.responses, "Response stack from `bank` (gk/bg)");
    tensor->add_option("--image", tensor_args.image, "Input image (gradient/spectral)");
    tensor->add_option("--coeff", tensor_args.coeff, "Frame coefficients alpha,beta for gk");
    tensor->add_option("--sigma-d", tensor_args.sigma_d, "Inner (derivative) scale")->capture_default_str();
    tensor->add_option("--sigma-o", tensor_args.sigma_o, "Outer (smoothing) scale")->capture_default_str();
    tensor->add_option("--boundary", tensor_args.boundary, "periodic or reflect")
        ->check(CLI::IsMember({"periodic", "reflect"}))
        ->capture_default_str();
    tensor->add_option("--gradient-kind", tensor_args.gradient_kind, "gaussian or spectral")
        ->check(CLI::IsMember({"gaussian", "spectral"}))
        ->capture_default_str();
    tensor->add_flag("--upsample", tensor_args.upsample, "Upsample 2x before products, subsample after");
    tensor->add_flag("--check", tensor_args.check, "Verify PSD invariant (exit 3 on violation)");
    tensor->add_option("-o,--out", tensor_args.out, "Output tensor field (.stf)");

    // analyze
    AnalyzeArgs analyze_args;
    auto* analyze = app.add_subcommand("analyze", "Orientation / rank / indefiniteness analysis");
    analyze->add_option("--input", analyze_args.input, "Tensor field (.stf)")->required();
    double true_angle = 0.0;
    auto* ta = analyze->add_option("--true-angle", true_angle, "Ground-truth angle in degrees for error stats");
    analyze->add_option("--rel-tol", analyze_args.rel_tol, "Near-zero eigenvalue threshold")->capture_default_str();
    analyze->add_flag("--check", analyze_args.check,
                      "Verify the field satisfies its construction's PSD invariant (exit 3 otherwise)");
    analyze->add_option("--csv", analyze_args.csv_out, "Write the summary CSV to a file");
    analyze->add_option("--orientation", analyze_args.orientation_out, "Write orientation raster (.stf)");
    analyze->add_option("--ppm", analyze_args.ppm_out, "Write orientation color raster (.ppm)");

    // compare
    CompareArgs compare_args;
    auto* compare = app.add_subcommand("compare", "Run gk and bg on identical responses and report the difference");
    compare->add_option("--image", compare_args.image, "Input image (.stf or .pgm)");
    compare->add_option("--q-constant", compare_args.q_constant, "Constant response vector, e.g. 1,0,0.25,0,0.25,0");
    compare->add_option("--dims", compare_args.dims_str, "Grid extents for --q-constant mode")->capture_default_str();
    add_bank_options(compare, compare_args.bank);
    compare->add_option("--coeff", compare_args.coeff, "Frame coefficients alpha,beta for gk");
    compare->add_option("--out-prefix", compare_args.out_prefix, "Output file prefix")->capture_default_str();
    compare->add_flag("--check", compare_args.check, "Verify the direct-sampling tensor is PSD (exit 3 otherwise)");

    app.footer("Every subcommand accepts --config FILE with flat key=value lines (# comments);\n"
               "command-line flags override config values, unknown keys are rejected.");

    try {
        std::vector<std::string> args = expand_config(argc, argv);
        std::reverse(args.begin(), args.end()); // CLI11's vector overload wants reversed args
        app.parse(std::move(args));
    } catch (const CLI::ParseError& e) {
        return (app.exit(e) == 0) ? kExitOk : kExitUsage;
    } catch (const stf::io_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    } catch (const stf::parameter_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }

#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#endif

    try {
        if (repro->parsed()) return cmd_repro_example(repro_csv);
        if (synth->parsed()) return cmd_synth(synth_args);
        if (bank->parsed()) return cmd_bank(bank_args);
        if (tensor->parsed()) return cmd_tensor(tensor_args);
        if (analyze->parsed()) {
            if (ta->count() > 0) analyze_args.true_angle_deg = true_angle;
            return cmd_analyze(analyze_args);
        }
        if (compare->parsed()) return cmd_compare(compare_args);
    } catch (const check_failure& e) {
        std::cerr << "check failed: " << e.what() << "\n";
        return kExitCheck;
    } catch (const stf::parameter_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitOk;
}
