#include <benchmark/benchmark.h>

#include "dfdt/amplitudes.hpp"
#include "dfdt/incomplete_gamma.hpp"

#include <cmath>
#include <complex>

namespace {

using namespace dfdt;
using cplx = std::complex<double>;

void BM_IncGammaP(benchmark::State& state) {
    // One representative argument per regime.
    static const cplx args[] = {
        cplx(1.5, 0.8),      // ascending series
        cplx(24.0, -6.0),    // continued fraction
        cplx(-8.0, 1e-18),   // gamma* series
        cplx(-44.0, 1e-18),  // Poincare expansion
    };
    const cplx z = args[state.range(0)];
    const int n = 6;
    for (auto _ : state) {
        benchmark::DoNotOptimize(incgamma_P(n, z).value);
    }
}
BENCHMARK(BM_IncGammaP)->DenseRange(0, 3);

void BM_PlaneWaveAmplitude(benchmark::State& state) {
    const double pi = std::acos(-1.0);
    const auto e0 = AmplitudeSeries::plane_wave(pi / 2, pi / 2, pi / 40, 1.0);
    const double t = static_cast<double>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(e0(t));
    }
}
BENCHMARK(BM_PlaneWaveAmplitude)->Arg(5)->Arg(50)->Arg(200);

void BM_WavepacketAmplitude(benchmark::State& state) {
    const auto e = AmplitudeSeries::wavepacket(1.9, 0.5, 2.0, 0.4, 0.6);
    const double t = static_cast<double>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(e(t));
    }
}
BENCHMARK(BM_WavepacketAmplitude)->Arg(5)->Arg(50);

} // namespace

BENCHMARK_MAIN();
