#include <benchmark/benchmark.h>

#include "udw/closed_form.hpp"
#include "udw/oracle.hpp"
#include "udw/runner.hpp"
#include "udw/special.hpp"

namespace {

void BM_ErfSeries(benchmark::State& state) {
    std::complex<double> z{1.2, 2.1};
    for (auto _ : state) benchmark::DoNotOptimize(udw::erf_complex(z));
}
BENCHMARK(BM_ErfSeries);

void BM_ErfCF(benchmark::State& state) {
    std::complex<double> z{5.0, 1.5};
    for (auto _ : state) benchmark::DoNotOptimize(udw::erf_complex(z));
}
BENCHMARK(BM_ErfCF);

void BM_FAux(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(udw::f_aux(2.236, 0.2));
}
BENCHMARK(BM_FAux);

void BM_PairAmplitudes(benchmark::State& state) {
    udw::Detector a{udw::DetectorLabel::A, 0.1, {0.0, 0.0, 1.0}};
    udw::Detector b{udw::DetectorLabel::B, 0.1, {1.0, 0.0, 1.0}};
    for (auto _ : state) benchmark::DoNotOptimize(udw::pair_amplitudes(a, b));
}
BENCHMARK(BM_PairAmplitudes);

void BM_PointRow(benchmark::State& state) {
    udw::PointConfig pc{udw::make_parallel(1.0, 1.0, {0.1, 0.1, 0.1}), 1.0};
    for (auto _ : state) benchmark::DoNotOptimize(udw::run_point(pc));
}
BENCHMARK(BM_PointRow);

void BM_OracleP(benchmark::State& state) {
    const auto qs = udw::QuadratureSettings::defaults();
    for (auto _ : state) benchmark::DoNotOptimize(udw::oracle_P(0.1, 1.0, qs));
}
BENCHMARK(BM_OracleP);

} // namespace

BENCHMARK_MAIN();
