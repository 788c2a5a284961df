#include <doctest.h>

#include "dfdt/kernel.hpp"
#include "dfdt/postprocess.hpp"

#include <cmath>
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
    p.measure_NM = cls == InitialCondition::StimulatedEmission;
    p.a = 0.5 * static_cast<double>(nx) * Delta;
    p.total_cols = 2 * Nx + nx + 1;
    return p;
}

GridField solved(const SimParams& p, const Scenario& sc) {
    GridField g(p);
    fill_initial_row(g, sc);
    fill_boundary(g, sc);
    march_serial(g, sc);
    return g;
}

} // namespace

TEST_CASE("Tmax rule") {
    auto p = make_params(InitialCondition::StimulatedEmission, 4000, 40000, 200, 1e-2, 1.0,
                         40.0, 4.0);
    CHECK(t_max_rows(p) == 3900);
    p.Ny = 3000;
    CHECK(t_max_rows(p) == 2999);

    std::mt19937 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const std::int64_t nx = 2 * (1 + static_cast<std::int64_t>(rng() % 30));
        const std::int64_t Nx = nx / 2 + 1 + static_cast<std::int64_t>(rng() % 300);
        const std::int64_t Ny = 2 + static_cast<std::int64_t>(rng() % 500);
        auto q = make_params(InitialCondition::StimulatedEmission, Nx, Ny, nx, 0.01, 1.0, 40.0, 4.0);
        const std::int64_t expected = std::min(Ny - 1, Nx - nx / 2);
        CHECK(t_max_rows(q) == expected);
    }
}

TEST_CASE("chi reconstruction at t = 0 returns the initial wavefunction") {
    const auto p = make_params(InitialCondition::TwoPhotonPlaneWave, 30, 20, 4, 0.1, 1.2, 9.0, 1.0);
    const Scenario sc(p);
    const GridField g = solved(p, sc);
    for (double x1 : {p.a + p.Delta, 5 * p.Delta, 2.0}) {
        for (double x2 : {p.a + p.Delta, 1.5}) {
            CHECK(reconstruct_chi(g, sc, x1, x2, 0.0) == sc.chi0(x1, x2));
        }
    }
}

TEST_CASE("chi reconstruction is symmetric to the bit") {
    const auto p = make_params(InitialCondition::TwoPhotonPlaneWave, 40, 40, 8, 0.1,
                               0.5 * std::acos(-1.0), 9.0, 0.8);
    const Scenario sc(p);
    const GridField g = solved(p, sc);
    std::mt19937 rng(11);
    // Detector-side samples keep every retarded lookup inside the grid.
    std::uniform_int_distribution<std::int64_t> xs(p.nx / 2 + 1, p.Nx);
    std::uniform_int_distribution<std::int64_t> rows(1, p.Ny - 1);
    for (int trial = 0; trial < 100; ++trial) {
        const double x1 = static_cast<double>(xs(rng)) * p.Delta;
        const double x2 = static_cast<double>(xs(rng)) * p.Delta;
        const double t = static_cast<double>(rows(rng)) * p.Delta;
        CHECK(reconstruct_chi(g, sc, x1, x2, t) == reconstruct_chi(g, sc, x2, x1, t));
    }
}

TEST_CASE("chi reconstruction rejects off-grid and unsolved requests") {
    const auto p = make_params(InitialCondition::TwoPhotonPlaneWave, 30, 20, 4, 0.1, 1.2, 9.0, 1.0);
    const Scenario sc(p);
    const GridField g = solved(p, sc);
    CHECK_THROWS_AS(reconstruct_chi(g, sc, p.a + 0.5 * p.Delta, p.a + p.Delta, 0.1),
                    ValidationError);
    CHECK_THROWS_AS(reconstruct_chi(g, sc, p.a + p.Delta, p.a + p.Delta, 1e9), ValidationError);
    // A pair whose active retarded term lands one column left of the grid.
    CHECK_THROWS_AS(
        reconstruct_chi(g, sc, -static_cast<double>(p.Nx) * p.Delta, p.a + p.Delta,
                        static_cast<double>(p.nx + 2) * p.Delta),
        SolverError);
}

TEST_CASE("detector slice geometry") {
    const auto p = make_params(InitialCondition::TwoPhotonPlaneWave, 30, 25, 8, 0.1, 1.0, 9.0, 1.0);
    const Scenario sc(p);
    const GridField g = solved(p, sc);
    const auto slice = chi_detector_slice(g, sc, 20);
    CHECK(slice.chi.size() == static_cast<std::size_t>(p.Nx - p.nx / 2));
    CHECK(slice.tau_step == p.Delta);
    CHECK(slice.chi[0] == reconstruct_chi(g, sc, p.a + p.Delta, p.a + p.Delta, slice.t));
    CHECK(slice.chi[3] ==
          reconstruct_chi(g, sc, p.a + p.Delta, p.a + p.Delta + 3 * p.Delta, slice.t));
}

TEST_CASE("psi square integral: trapezoid basics") {
    const auto p = make_params(InitialCondition::TwoPhotonPlaneWave, 10, 4, 4, 0.1, 1.0, 9.0, 1.0);
    const Scenario sc(p);
    GridField g(p);
    CHECK(psi_square_integral(g, 1) == 0.0);  // all-zero row

    const cplx c(0.6, -0.3);
    for (std::int64_t j = 0; j < g.cols(); ++j) g.at(2, j) = c;
    const double expected = std::norm(c) * static_cast<double>(g.cols() - 1) * p.Delta;
    CHECK(psi_square_integral(g, 2) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("psi square integral: initial wavepacket norm on the grid") {
    const auto p = make_params(InitialCondition::StimulatedEmission, 200, 4, 40, 0.01, 1.5,
                               40.0, 4.0, 0.5);
    const Scenario sc(p);
    GridField g(p);
    fill_initial_row(g, sc);
    // Closed form of the truncated norm: 1 - e^{alpha Gamma (x_min + a)}.
    const double xmin = g.x_of_col(0);
    const double tail = std::exp(p.alpha * p.gamma * (xmin + p.a));
    const double expected = 1.0 - tail;
    CHECK(psi_square_integral(g, 0) == doctest::Approx(expected).epsilon(0.02));
}

TEST_CASE("non-Markovianity accumulator") {
    const auto p = make_params(InitialCondition::StimulatedEmission, 200, 100, 40, 0.01, 1.5,
                               40.0, 4.0, 0.5);
    const Scenario sc(p);
    const GridField g = solved(p, sc);
    NmAccumulator acc(p);
    CHECK(acc.tmax_rows() == std::min<std::int64_t>(p.Ny - 1, p.Nx - p.nx / 2));

    for (std::int64_t row = 0; row <= acc.tmax_rows(); ++row) acc.compute_row(g, row);
    CHECK_THROWS_AS(acc.compute_row(g, acc.tmax_rows() + 1), SolverError);

    const auto records = acc.finalize();
    REQUIRE(records.size() == static_cast<std::size_t>(acc.tmax_rows()) + 1);

    // t = 0: psi = phi and e0 = 0, so mu(0) ~ lambda(0) ~ |phi|^2 norm on grid.
    CHECK(std::abs(records[0].mu - cplx(1.0, 0.0)) < 0.05);
    CHECK(records[0].lambda == doctest::Approx(1.0).epsilon(0.05));
    CHECK(std::abs(records[0].e0) < 1e-14);
    CHECK(records[0].e1 == cplx(1.0, 0.0));

    double prev = -1.0;
    for (const auto& r : records) {
        CHECK(r.lambda_imag_residue < 1e-14);
        CHECK(r.n_geo_partial >= prev);
        prev = r.n_geo_partial;
    }
    CHECK(records[0].n_geo_partial == 0.0);
}

TEST_CASE("NmAccumulator requires the stimulated-emission class") {
    const auto p = make_params(InitialCondition::TwoPhotonPlaneWave, 30, 20, 4, 0.1, 1.0, 9.0, 1.0);
    CHECK_THROWS_AS(NmAccumulator{p}, ValidationError);
}
