#include "dfdt/postprocess.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dfdt {

using cplx = std::complex<double>;

std::int64_t t_max_rows(const SimParams& p) {
    return std::min<std::int64_t>(p.Ny - 1, p.Nx - p.nx / 2);
}

namespace {

std::int64_t to_grid_steps(double value, double delta, const char* what) {
    const double ratio = value / delta;
    const double rounded = std::round(ratio);
    if (std::abs(ratio - rounded) > 1e-6)
        throw ValidationError(std::string("reconstruct_chi: ") + what +
                              " does not lie on the grid");
    return static_cast<std::int64_t>(rounded);
}

/// One retarded psi term of the chi reconstruction, with its theta guards.
cplx retarded_term(const GridField& g, std::int64_t Xa, std::int64_t Xb, std::int64_t row,
                   std::int64_t sign_a, const char* label) {
    // term = psi(xa - xb - sign_a*a, t - xb - sign_a*a) theta(xb + sign_a*a) theta(...)
    const SimParams& p = g.params();
    const std::int64_t half = p.nx / 2;
    if (Xb + sign_a * half < 0) return cplx(0.0, 0.0);    // theta(x2 -+ a)
    const std::int64_t r = row - Xb - sign_a * half;      // retarded row
    if (r < 0) return cplx(0.0, 0.0);                     // theta(t - x2 -+ a)
    const std::int64_t col = Xa - Xb - sign_a * half + p.Nx + p.nx;
    if (r >= g.rows() || col < 0 || col >= g.cols()) {
        std::ostringstream os;
        os << "reconstruct_chi: " << label << " needs psi at row " << r << ", column " << col
           << " outside the grid";
        throw SolverError(os.str());
    }
    return g.lookup(r, col);
}

} // namespace

cplx reconstruct_chi(const GridField& g, const Scenario& sc, double x1, double x2, double t) {
    const SimParams& p = g.params();
    const std::int64_t X1 = to_grid_steps(x1, p.Delta, "x1");
    const std::int64_t X2 = to_grid_steps(x2, p.Delta, "x2");
    const std::int64_t row = to_grid_steps(t, p.Delta, "t");
    if (row < 0 || row >= g.rows())
        throw ValidationError("reconstruct_chi: t outside the solved rows");

    const cplx free_term = sc.chi0(x1 - t, x2 - t);
    const cplx g12 = retarded_term(g, X1, X2, row, +1, "term psi(x1-x2-a)") -
                     retarded_term(g, X1, X2, row, -1, "term psi(x1-x2+a)");
    const cplx g21 = retarded_term(g, X2, X1, row, +1, "term psi(x2-x1-a)") -
                     retarded_term(g, X2, X1, row, -1, "term psi(x2-x1+a)");
    return free_term - 0.5 * std::sqrt(p.gamma) * (g12 + g21);
}

ChiSlice chi_detector_slice(const GridField& g, const Scenario& sc, std::int64_t row) {
    const SimParams& p = g.params();
    ChiSlice slice;
    slice.t = g.t_of_row(row);
    slice.tau_step = p.Delta;
    const std::int64_t count = p.Nx - p.nx / 2;  // x2 = a + Delta + tau stays on-grid
    slice.chi.reserve(static_cast<std::size_t>(count));
    const double x1 = p.a + p.Delta;
    for (std::int64_t m = 0; m < count; ++m) {
        const double x2 = x1 + static_cast<double>(m) * p.Delta;
        slice.chi.push_back(reconstruct_chi(g, sc, x1, x2, slice.t));
    }
    return slice;
}

double psi_square_integral(const GridField& g, std::int64_t row) {
    const std::int64_t cols = g.cols();
    double acc = 0.0;
    for (std::int64_t j = 0; j < cols; ++j) {
        const double w = (j == 0 || j == cols - 1) ? 0.5 : 1.0;
        acc += w * std::norm(g.at(row, j));
    }
    return acc * g.params().Delta;
}

NmAccumulator::NmAccumulator(const SimParams& p)
    : p_(p),
      tmax_(t_max_rows(p)),
      field_(p.k, p.alpha, p.w0, p.gamma, p.a),
      e1_(AmplitudeSeries::emission(p.w0, p.gamma, p.a)) {
    if (p.init_cond != InitialCondition::StimulatedEmission)
        throw ValidationError("NmAccumulator: requires init_cond=2");
    // x where the second light cone meets t = Tmax: a + Tmax*Delta.
    col_ub_ = std::min<std::int64_t>(p.total_cols - 1, p.Nx + 3 * p.nx / 2 + tmax_);
    slots_.resize(static_cast<std::size_t>(tmax_) + 1);
    present_.assign(static_cast<std::size_t>(tmax_) + 1, 0);
    // Retarded times t - x -+ a land on the time grid; tabulate the qubit
    // amplitude once so row sweeps stay cheap and reentrant.
    field_.build_time_table(tmax_ + p.Nx + 2 * p.nx + 2, p.Delta);
}

void NmAccumulator::compute_row(const GridField& g, std::int64_t row) {
    if (row < 0 || row > tmax_)
        throw SolverError("nm_row: row " + std::to_string(row) +
                          " is beyond Tmax = " + std::to_string(tmax_) +
                          "; the integrals would be underestimated");
    const double t = g.t_of_row(row);
    const double delta = p_.Delta;

    cplx mu(0.0, 0.0);
    cplx lam(0.0, 0.0);
    for (std::int64_t j = 0; j <= col_ub_; ++j) {
        const double w = (j == 0 || j == col_ub_) ? 0.5 : 1.0;
        const cplx psi = g.at(row, j);
        const cplx phi = field_.photon(g.x_of_col(j), t);
        mu += w * std::conj(phi) * psi;
        lam += w * std::conj(psi) * psi;
    }
    mu *= delta;
    lam *= delta;

    NmRecord rec;
    rec.t = t;
    rec.mu = mu;
    rec.e0 = field_.qubit(t);
    rec.e1 = e1_(t);
    rec.lambda = lam.real() - std::norm(rec.e0);
    rec.lambda_imag_residue = std::abs(lam.imag());
    rec.detM = std::norm(rec.mu) * rec.lambda;

    std::lock_guard<std::mutex> lk(slot_mutex_);
    slots_[static_cast<std::size_t>(row)] = rec;
    present_[static_cast<std::size_t>(row)] = 1;
}

std::vector<NmRecord> NmAccumulator::finalize() {
    std::vector<NmRecord> out;
    double running = 0.0;
    bool have_prev = false;
    double prev_abs_det = 0.0;
    for (std::size_t i = 0; i < slots_.size(); ++i) {
        if (!present_[i]) continue;
        NmRecord rec = slots_[i];
        const double abs_det = std::abs(rec.detM);
        if (have_prev) running += std::max(0.0, abs_det - prev_abs_det);
        prev_abs_det = abs_det;
        have_prev = true;
        rec.n_geo_partial = running;
        out.push_back(rec);
    }
    return out;
}

} // namespace dfdt
