#pragma once

#include "dfdt/amplitudes.hpp"
#include "dfdt/grid.hpp"

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

namespace dfdt {

/// Callbacks fired when a time row is completely solved. `stride` mirrors the
/// Tstep subsampling (stride = Tstep + 1); hooks fire only on selected rows.
struct RowHooks {
    std::int64_t stride = 1;
    std::vector<std::function<void(std::int64_t)>> on_row;

    bool selected(std::int64_t i) const { return stride <= 1 || i % stride == 0; }
    void fire(std::int64_t i) const {
        if (!on_row.empty() && selected(i))
            for (const auto& h : on_row) h(i);
    }
};

/// Per-cell update rule for the delayed transport equation
///
///   (d_t + d_x + W) psi = (Gamma/2) psi(x-2a, t-2a) theta(t-2a)
///                       - (Gamma/2) { mirror-source brackets }
///                       + sqrt(Gamma) [ chi0 drive ],        W = i w0 + Gamma/2.
///
/// The left-hand side is discretized on a unit square (leapfrog averages of
/// the four corners), the delay term as the four-corner average of the square
/// shifted by (2a, 2a), and each mirror-source term as a two-point bar at its
/// reflected light-cone location. Step factors are evaluated at the Taylor
/// point (x + Delta/2, t + Delta/2) with theta(0) = 1; the chi0 drive is
/// analytic and evaluated there directly. Solving for the top-right corner
/// gives one new cell per call; everything it reads lies strictly in the past
/// of the row-major order.
class CellKernel {
public:
    CellKernel(GridField& g, const Scenario& sc);

    /// Coefficient of the unknown corner, (1/Delta + W/4).
    std::complex<double> unknown_coefficient() const { return coef_unknown_; }

    template <bool Checked>
    void update(std::int64_t i, std::int64_t j) const {
        using cplx = std::complex<double>;
        const cplx bl = read<Checked>(i - 1, j - 1);
        const cplx br = read<Checked>(i - 1, j);
        const cplx tl = read<Checked>(i, j - 1);

        cplx rhs = chi_zero_ ? cplx(0.0, 0.0) : chi_source(i, j);
        if (i > nx_) {
            const cplx d = read<Checked>(i - nx_ - 1, j - nx_ - 1) +
                           read<Checked>(i - nx_ - 1, j - nx_) +
                           read<Checked>(i - nx_, j - nx_ - 1) +
                           read<Checked>(i - nx_, j - nx_);
            rhs += gamma8_ * d;
        }
        if (j >= guard1_col_) {
            const std::int64_t r1 = i - j + row1_off_;
            if (r1 >= 0) {
                const cplx barA = read<Checked>(r1, colA_ - j) + read<Checked>(r1, colA_ + 1 - j);
                const cplx barB = read<Checked>(r1, colB_ - j) + read<Checked>(r1, colB_ + 1 - j);
                rhs -= gamma4_ * (barA - barB);
            }
        }
        if (j >= guard2_col_) {
            const std::int64_t r2 = i - j + row2_off_;
            if (r2 >= 0) {
                const cplx barC = read<Checked>(r2, colC_ - j) + read<Checked>(r2, colC_ + 1 - j);
                const cplx barD = read<Checked>(r2, colB_ - j) + read<Checked>(r2, colB_ + 1 - j);
                rhs -= gamma4_ * (barC - barD);
            }
        }
        g_->at(i, j) = (rhs + coef_bl_ * bl - coef_w4_ * (tl + br)) / coef_unknown_;
        if constexpr (Checked) g_->sentinel_note_write(i, j);
    }

    void update_checked_dispatch(std::int64_t i, std::int64_t j) const {
        if (g_->checked())
            update<true>(i, j);
        else
            update<false>(i, j);
    }

private:
    template <bool Checked>
    std::complex<double> read(std::int64_t i, std::int64_t j) const {
        if (j < 0) return g_->margin(i);  // one analytic column left of the strip
        if constexpr (Checked) g_->sentinel_note_read(i, j);
        return g_->at(i, j);
    }

    std::complex<double> chi_source(std::int64_t i, std::int64_t j) const;

    GridField* g_;
    const Scenario* sc_;
    std::int64_t Nx_ = 0, nx_ = 0;
    std::int64_t guard1_col_ = 0, guard2_col_ = 0;  // first column with theta(x -+ a) on
    std::int64_t row1_off_ = 0, row2_off_ = 0;      // retarded-row offsets
    std::int64_t colA_ = 0, colB_ = 0, colC_ = 0;   // mirror bar column anchors
    double Delta_ = 0.0, a_ = 0.0, sqrt_gamma_ = 0.0;
    double gamma8_ = 0.0, gamma4_ = 0.0;
    std::complex<double> coef_unknown_{0.0, 0.0};  // 1/Delta + W/4
    std::complex<double> coef_bl_{0.0, 0.0};       // 1/Delta - W/4
    std::complex<double> coef_w4_{0.0, 0.0};       // W/4
    bool chi_zero_ = false;
};

/// Solve one cell in isolation (test entry point; marches use CellKernel).
std::complex<double> update_cell(GridField& g, const Scenario& sc, std::int64_t i,
                                 std::int64_t j);

/// Row-major serial march over all solvable cells (rows 1..Ny-1, columns
/// nx..total_cols-1). Requires fill_initial_row and fill_boundary first.
void march_serial(GridField& g, const Scenario& sc, const RowHooks* hooks = nullptr);

} // namespace dfdt
