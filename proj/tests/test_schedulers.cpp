#include <doctest.h>

#include "dfdt/schedulers.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <random>

using namespace dfdt;
using cplx = std::complex<double>;

namespace {

SimParams make_params(InitialCondition cls, std::int64_t Nx, std::int64_t Ny, std::int64_t nx,
                      double Delta, double k, double w0, double gamma, double alpha = 0.5) {
    SimParams p;
    p.Nx = Nx;
    p.Ny = Ny;
    p.nx = nx;
    p.Delta = Delta;
    p.k = k;
    p.k1 = p.k2 = k;
    p.w0 = w0;
    p.gamma = gamma;
    p.init_cond = cls;
    p.alpha = alpha;
    p.alpha1 = p.alpha2 = alpha;
    p.save_psi = true;
    p.a = 0.5 * static_cast<double>(nx) * Delta;
    p.total_cols = 2 * Nx + nx + 1;
    return p;
}

GridField fresh_grid(const SimParams& p, const Scenario& sc, bool checked) {
    GridField g(p, checked);
    fill_initial_row(g, sc);
    fill_boundary(g, sc);
    return g;
}

bool same_cells(const GridField& a, const GridField& b) {
    return a.cells().size() == b.cells().size() &&
           std::memcmp(a.cells().data(), b.cells().data(),
                       a.cells().size() * sizeof(cplx)) == 0;
}

} // namespace

TEST_CASE("one worker degenerates to the serial march, bit-exactly") {
    const auto p = make_params(InitialCondition::TwoPhotonPlaneWave, 12, 14, 4, 0.1, 1.3, 9.0, 0.9);
    const Scenario sc(p);
    GridField serial = fresh_grid(p, sc, false);
    march_serial(serial, sc);

    GridField swarm1 = fresh_grid(p, sc, false);
    SwarmOptions opts;
    opts.workers = 1;
    run_swarm(swarm1, sc, opts);
    CHECK(same_cells(serial, swarm1));

    GridField wave1 = fresh_grid(p, sc, false);
    run_wavefront(wave1, sc, 1);
    CHECK(same_cells(serial, wave1));
}

TEST_CASE("multi-worker runs are bit-identical to serial and sentinel-clean") {
    const auto p = make_params(InitialCondition::TwoPhotonPlaneWave, 25, 50, 4, 0.05,
                               0.5 * std::acos(-1.0), 10.0, 1.0);
    const Scenario sc(p);
    GridField serial = fresh_grid(p, sc, false);
    march_serial(serial, sc);

    for (int workers : {2, 4, 8}) {
        GridField sw = fresh_grid(p, sc, true);
        SwarmOptions opts;
        opts.workers = workers;
        run_swarm(sw, sc, opts);
        CHECK(sw.sentinel_violations() == 0);
        CHECK(same_cells(serial, sw));

        GridField wf = fresh_grid(p, sc, true);
        run_wavefront(wf, sc, workers);
        CHECK(wf.sentinel_violations() == 0);
        CHECK(same_cells(serial, wf));
    }
}

TEST_CASE("randomized small configurations agree across schedulers") {
    std::mt19937 rng(2024);
    for (int trial = 0; trial < 12; ++trial) {
        const std::int64_t nx = 2 << (rng() % 3);
        const std::int64_t Nx = nx / 2 + 1 + static_cast<std::int64_t>(rng() % 16);
        const std::int64_t Ny = 2 + static_cast<std::int64_t>(rng() % 30);
        const int cls = 1 + static_cast<int>(rng() % 3);
        const int workers = 1 + static_cast<int>(rng() % 8);
        const auto p = make_params(static_cast<InitialCondition>(cls), Nx, Ny, nx, 0.1,
                                   0.8 + 0.1 * static_cast<double>(rng() % 10), 11.0,
                                   0.5 + 0.05 * static_cast<double>(rng() % 10));
        const Scenario sc(p);
        GridField serial = fresh_grid(p, sc, true);
        march_serial(serial, sc);
        REQUIRE(serial.sentinel_violations() == 0);

        GridField sw = fresh_grid(p, sc, true);
        SwarmOptions opts;
        opts.workers = workers;
        run_swarm(sw, sc, opts);
        REQUIRE(sw.sentinel_violations() == 0);
        REQUIRE(same_cells(serial, sw));

        GridField wf = fresh_grid(p, sc, true);
        run_wavefront(wf, sc, workers);
        REQUIRE(wf.sentinel_violations() == 0);
        REQUIRE(same_cells(serial, wf));
    }
}

TEST_CASE("swarm hooks fire once per selected row") {
    const auto p = make_params(InitialCondition::TwoPhotonPlaneWave, 10, 13, 4, 0.1, 1.0, 9.0, 1.0);
    const Scenario sc(p);
    GridField g = fresh_grid(p, sc, false);
    RowHooks hooks;
    hooks.stride = 4;
    std::vector<std::int64_t> fired(static_cast<std::size_t>(p.Ny), 0);
    std::mutex m;
    hooks.on_row.push_back([&](std::int64_t i) {
        std::lock_guard<std::mutex> lk(m);
        ++fired[static_cast<std::size_t>(i)];
    });
    SwarmOptions opts;
    opts.workers = 3;
    run_swarm(g, sc, opts, &hooks);
    for (std::int64_t i = 0; i < p.Ny; ++i)
        CHECK(fired[static_cast<std::size_t>(i)] == (i % 4 == 0 ? 1 : 0));
}

TEST_CASE("the nx lag is load-bearing: nx-1 trips the sentinel deterministically") {
    const auto p = make_params(InitialCondition::TwoPhotonPlaneWave, 10, 8, 4, 0.1, 1.0, 9.0, 1.0);
    const Scenario sc(p);

    GridField safe = fresh_grid(p, sc, true);
    simulate_swarm_interleaved(safe, sc, 2, p.nx);
    CHECK(safe.sentinel_violations() == 0);

    GridField unsafe = fresh_grid(p, sc, true);
    simulate_swarm_interleaved(unsafe, sc, 2, p.nx - 1);
    CHECK(unsafe.sentinel_violations() > 0);
    CHECK(unsafe.first_violation().find("read before write") != std::string::npos);
}

TEST_CASE("interleaved replay with the production lag matches serial") {
    const auto p = make_params(InitialCondition::StimulatedEmission, 14, 20, 4, 0.1, 1.1, 9.0,
                               1.0, 0.5);
    const Scenario sc(p);
    GridField serial = fresh_grid(p, sc, false);
    march_serial(serial, sc);
    for (int workers : {2, 3, 5}) {
        GridField sim = fresh_grid(p, sc, true);
        simulate_swarm_interleaved(sim, sc, workers, p.nx);
        CHECK(sim.sentinel_violations() == 0);
        CHECK(same_cells(serial, sim));
    }
}

TEST_CASE("benchmark produces the requested sample count") {
    const auto p = make_params(InitialCondition::TwoPhotonPlaneWave, 40, 60, 4, 0.05, 1.0,
                               12.0, 1.0);
    for (BenchMode mode : {BenchMode::Serial, BenchMode::SerialNoOverhead, BenchMode::Swarm,
                           BenchMode::Wavefront}) {
        const auto samples = benchmark(p, mode, 2, 3);
        REQUIRE(samples.size() == 3);
        for (double s : samples) CHECK(s >= 0.0);
    }
}

TEST_CASE("synchronization overhead stays modest for a single worker") {
    // Serial (swarm machinery, one worker) does strictly more work than the
    // bare march; compare best-of-5 with slack for timer noise.
    const auto p = make_params(InitialCondition::TwoPhotonPlaneWave, 400, 600, 8, 0.01,
                               1.0, 15.0, 1.0);
    const auto bare = benchmark(p, BenchMode::SerialNoOverhead, 1, 5);
    const auto with_overhead = benchmark(p, BenchMode::Serial, 1, 5);
    const double bare_best = *std::min_element(bare.begin(), bare.end());
    const double serial_best = *std::min_element(with_overhead.begin(), with_overhead.end());
    CHECK(bare_best <= serial_best * 1.25 + 0.002);
}
