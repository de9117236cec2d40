// Microbenchmarks contrasting the OpenMP/FFT kernels against the serial
// reference implementations. Build with -DCMAKE_BUILD_TYPE=Release and run
// ./stf_bench; not part of the ctest suite.

#include <benchmark/benchmark.h>

#include "stf/analysis.hpp"
#include "stf/filterbank.hpp"
#include "stf/reference.hpp"
#include "stf/synth.hpp"
#include "stf/tensor.hpp"

using namespace stf;

namespace {

ScalarField bench_image(int m, std::uint64_t seed) {
    ScalarField zero(Dims{m, m});
    return add_noise(zero, 1.0, seed);
}

std::vector<ResponseField> bench_responses(int m, int K) {
    const ScalarField img = bench_image(m, 7);
    const auto bank = make_bank(half_circle(K), FilterKind::quadrature, kPi / 3.0, 2.0, 1);
    return apply_bank(img, bank);
}

void BM_ApplyBank_FFT(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const ScalarField img = bench_image(m, 1);
    const auto bank = make_bank(half_circle(6), FilterKind::quadrature, kPi / 3.0, 2.0, 1);
    for (auto _ : state) {
        auto q = apply_bank(img, bank);
        benchmark::DoNotOptimize(q);
    }
}
BENCHMARK(BM_ApplyBank_FFT)->Arg(64)->Arg(128);

void BM_ApplyBank_NaiveSerial(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const ScalarField img = bench_image(m, 1);
    const auto bank = make_bank(half_circle(6), FilterKind::quadrature, kPi / 3.0, 2.0, 1);
    for (auto _ : state) {
        auto q = reference::apply_bank(img, bank, ResponseMode::power);
        benchmark::DoNotOptimize(q);
    }
}
BENCHMARK(BM_ApplyBank_NaiveSerial)->Arg(32);

void BM_TensorBg_Parallel(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const auto q = bench_responses(m, 6);
    const DirectionSet dirs = half_circle(6);
    for (auto _ : state) {
        auto tf = tensor_bg(q, dirs);
        benchmark::DoNotOptimize(tf);
    }
}
BENCHMARK(BM_TensorBg_Parallel)->Arg(128)->Arg(256);

void BM_TensorBg_Serial(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const auto q = bench_responses(m, 6);
    const DirectionSet dirs = half_circle(6);
    for (auto _ : state) {
        auto tf = reference::tensor_bg(q, dirs);
        benchmark::DoNotOptimize(tf);
    }
}
BENCHMARK(BM_TensorBg_Serial)->Arg(128)->Arg(256);

void BM_GradientTensor_Separable(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const ScalarField img = bench_image(m, 2);
    GradientOptions opt;
    for (auto _ : state) {
        auto tf = gradient_tensor(img, opt);
        benchmark::DoNotOptimize(tf);
    }
}
BENCHMARK(BM_GradientTensor_Separable)->Arg(64)->Arg(128);

void BM_GradientTensor_DenseSerial(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const ScalarField img = bench_image(m, 2);
    GradientOptions opt;
    for (auto _ : state) {
        auto tf = reference::gradient_tensor(img, opt);
        benchmark::DoNotOptimize(tf);
    }
}
BENCHMARK(BM_GradientTensor_DenseSerial)->Arg(64);

void BM_OrientationField(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const ScalarField img = bench_image(m, 3);
    const TensorField tf = gradient_tensor(img, {});
    for (auto _ : state) {
        auto of = orientation_field(tf);
        benchmark::DoNotOptimize(of);
    }
}
BENCHMARK(BM_OrientationField)->Arg(128)->Arg(256);

} // namespace

BENCHMARK_MAIN();
