#include "dfdt/kernel.hpp"

#include <cmath>

namespace dfdt {

using cplx = std::complex<double>;

CellKernel::CellKernel(GridField& g, const Scenario& sc) : g_(&g), sc_(&sc) {
    const SimParams& p = g.params();
    Nx_ = p.Nx;
    nx_ = p.nx;
    Delta_ = p.Delta;
    a_ = p.a;
    sqrt_gamma_ = std::sqrt(p.gamma);
    gamma8_ = p.gamma / 8.0;
    gamma4_ = p.gamma / 4.0;

    guard1_col_ = Nx_ + nx_ / 2 + 1;
    guard2_col_ = Nx_ + 3 * nx_ / 2 + 1;
    row1_off_ = Nx_ + nx_ / 2;
    row2_off_ = Nx_ + 3 * nx_ / 2;
    colA_ = 2 * Nx_ + nx_;
    colB_ = 2 * Nx_ + 2 * nx_;
    colC_ = 2 * Nx_ + 3 * nx_;

    const cplx W(0.5 * p.gamma, p.w0);
    coef_unknown_ = cplx(1.0 / Delta_, 0.0) + 0.25 * W;
    coef_bl_ = cplx(1.0 / Delta_, 0.0) - 0.25 * W;
    coef_w4_ = 0.25 * W;
    chi_zero_ = sc.two_photon().is_zero();

    if (std::abs(coef_unknown_) < 1e-14)
        throw SolverError("update coefficient |1/Delta + W/4| below 1e-14; scheme singular");
}

cplx CellKernel::chi_source(std::int64_t i, std::int64_t j) const {
    const double x1 = static_cast<double>(j - i - Nx_ - nx_) * Delta_;
    const double tc = (static_cast<double>(i) - 0.5) * Delta_;
    return sqrt_gamma_ * (sc_->chi0(x1, -a_ - tc) - sc_->chi0(x1, a_ - tc));
}

cplx update_cell(GridField& g, const Scenario& sc, std::int64_t i, std::int64_t j) {
    if (i < 1 || i >= g.rows() || j < g.params().first_solved_col() || j >= g.cols())
        throw SolverError("update_cell: (i, j) outside the solvable region");
    const CellKernel kernel(g, sc);
    kernel.update_checked_dispatch(i, j);
    return g.at(i, j);
}

void march_serial(GridField& g, const Scenario& sc, const RowHooks* hooks) {
    const CellKernel kernel(g, sc);
    const std::int64_t rows = g.rows();
    const std::int64_t cols = g.cols();
    const std::int64_t j0 = g.params().first_solved_col();
    if (hooks) hooks->fire(0);
    if (g.checked()) {
        for (std::int64_t i = 1; i < rows; ++i) {
            for (std::int64_t j = j0; j < cols; ++j) kernel.update<true>(i, j);
            if (hooks) hooks->fire(i);
        }
    } else {
        for (std::int64_t i = 1; i < rows; ++i) {
            for (std::int64_t j = j0; j < cols; ++j) kernel.update<false>(i, j);
            if (hooks) hooks->fire(i);
        }
    }
}

} // namespace dfdt
