#include <benchmark/benchmark.h>

#include "dfdt/kernel.hpp"
#include "dfdt/schedulers.hpp"

#include <cmath>

namespace {

using namespace dfdt;

SimParams bench_params(InitialCondition cls, std::int64_t Nx, std::int64_t Ny, std::int64_t nx) {
    const double pi = std::acos(-1.0);
    SimParams p;
    p.Nx = Nx;
    p.Ny = Ny;
    p.nx = nx;
    p.Delta = 1e-2;
    p.k = pi / 2;
    p.k1 = p.k2 = p.k;
    p.w0 = pi / 2;
    p.gamma = pi / 40;
    p.init_cond = cls;
    p.alpha = 0.5;
    p.alpha1 = p.alpha2 = 0.5;
    p.save_psi = true;
    p.a = 0.5 * static_cast<double>(nx) * p.Delta;
    p.total_cols = 2 * Nx + nx + 1;
    return p;
}

void BM_SerialMarch(benchmark::State& state) {
    const auto cls = static_cast<InitialCondition>(state.range(0));
    const auto p = bench_params(cls, 400, 400, 32);
    const Scenario sc(p);
    for (auto _ : state) {
        GridField g(p);
        fill_initial_row(g, sc);
        fill_boundary(g, sc);
        march_serial(g, sc);
        benchmark::DoNotOptimize(g.raw());
    }
    const auto cells = static_cast<std::int64_t>((p.Ny - 1) * (p.total_cols - p.nx));
    state.SetItemsProcessed(state.iterations() * cells);
}
BENCHMARK(BM_SerialMarch)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_Scheduler(benchmark::State& state) {
    const bool wavefront = state.range(0) != 0;
    const int workers = static_cast<int>(state.range(1));
    const auto p = bench_params(InitialCondition::TwoPhotonPlaneWave, 400, 400, 32);
    const Scenario sc(p);
    for (auto _ : state) {
        GridField g(p);
        fill_initial_row(g, sc);
        fill_boundary(g, sc);
        if (wavefront) {
            run_wavefront(g, sc, workers);
        } else {
            SwarmOptions opts;
            opts.workers = workers;
            run_swarm(g, sc, opts);
        }
        benchmark::DoNotOptimize(g.raw());
    }
    const auto cells = static_cast<std::int64_t>((p.Ny - 1) * (p.total_cols - p.nx));
    state.SetItemsProcessed(state.iterations() * cells);
}
BENCHMARK(BM_Scheduler)
    ->Args({0, 1})
    ->Args({0, 2})
    ->Args({1, 1})
    ->Args({1, 2})
    ->Unit(benchmark::kMillisecond);

void BM_BoundaryFill(benchmark::State& state) {
    const auto p = bench_params(InitialCondition::TwoPhotonPlaneWave, 400, 400, 32);
    const Scenario sc(p);
    for (auto _ : state) {
        GridField g(p);
        fill_initial_row(g, sc);
        fill_boundary(g, sc);
        benchmark::DoNotOptimize(g.raw());
    }
}
BENCHMARK(BM_BoundaryFill)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
