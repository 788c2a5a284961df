#include "dfdt/grid.hpp"

#include <new>
#include <sstream>

namespace dfdt {

GridField::GridField(const SimParams& p, bool checked) : p_(p), ny_(p.Ny), cols_(p.total_cols) {
    const std::uint64_t bytes = memory_estimate(p);
    const auto cell_count = static_cast<std::size_t>(ny_) * static_cast<std::size_t>(cols_);
    try {
        data_.assign(cell_count, std::complex<double>(0.0, 0.0));
        margin_.assign(static_cast<std::size_t>(ny_), std::complex<double>(0.0, 0.0));
        if (checked) written_ = std::vector<std::atomic<std::uint8_t>>(cell_count);
    } catch (const std::bad_alloc&) {
        std::ostringstream os;
        os << "grid allocation failed: " << bytes << " bytes required for " << ny_ << " x "
           << cols_ << " cells";
        throw AllocationError(os.str());
    }
}

Region GridField::region(std::int64_t i, std::int64_t j) const {
    if (i == 0) return Region::InitialRow;
    if (j < p_.nx) return Region::Boundary;
    if (j <= p_.Nx + p_.nx / 2) return Region::LeftOfMirrorImage;
    if (j <= p_.Nx + 3 * p_.nx / 2) return Region::BetweenCouplings;
    return Region::RightOfQubit;
}

void GridField::record_violation(std::int64_t i, std::int64_t j, bool is_write) const {
    violations_.fetch_add(1, std::memory_order_acq_rel);
    const std::int64_t packed = (i * cols_ + j) * 2 + (is_write ? 1 : 0);
    std::int64_t expected = -1;
    first_violation_.compare_exchange_strong(expected, packed, std::memory_order_acq_rel);
}

std::string GridField::first_violation() const {
    const std::int64_t packed = first_violation_.load(std::memory_order_acquire);
    if (packed < 0) return "";
    const std::int64_t cell = packed / 2;
    std::ostringstream os;
    os << (packed % 2 ? "double write at (" : "read before write at (") << cell / cols_ << ", "
       << cell % cols_ << ")";
    return os.str();
}

void GridField::sentinel_note_write(std::int64_t i, std::int64_t j) {
    if (written_.empty()) return;
    const auto prev = written_[index(i, j)].exchange(1, std::memory_order_acq_rel);
    if (prev != 0) record_violation(i, j, true);
}

void GridField::sentinel_note_read(std::int64_t i, std::int64_t j) const {
    if (written_.empty()) return;
    if (written_[index(i, j)].load(std::memory_order_acquire) == 0)
        record_violation(i, j, false);
}

bool GridField::is_written(std::int64_t i, std::int64_t j) const {
    if (written_.empty()) return true;
    return written_[index(i, j)].load(std::memory_order_acquire) != 0;
}

std::complex<double> GridField::lookup(std::int64_t i, std::int64_t j) const {
    if (i < 0 || i >= ny_ || j < -1 || j >= cols_) {
        std::ostringstream os;
        os << "lookup out of bounds: (" << i << ", " << j << ") on " << ny_ << " x " << cols_;
        throw SolverError(os.str());
    }
    if (j == -1) return margin(i);
    if (checked() && !is_written(i, j)) {
        std::ostringstream os;
        os << "lookup of unwritten cell (" << i << ", " << j << ")";
        throw SolverError(os.str());
    }
    return at(i, j);
}

GridField allocate(const SimParams& p, bool checked) { return GridField(p, checked); }

void fill_initial_row(GridField& g, const Scenario& sc) {
    const std::int64_t cols = g.cols();
    for (std::int64_t j = 0; j < cols; ++j) {
        g.at(0, j) = sc.psi_initial(g.x_of_col(j));
        g.sentinel_note_write(0, j);
    }
    g.set_margin(0, sc.psi_initial(g.margin_x()));
}

void fill_boundary(GridField& g, const Scenario& sc) {
    const SimParams& p = g.params();
    // Every boundary column sits strictly left of x = -a whenever nx <= 2 Nx.
    if (!(g.x_of_col(p.nx - 1) < -p.a))
        throw Error("fill_boundary: boundary strip extends to x >= -a (geometry bug)");
    for (std::int64_t i = 1; i < g.rows(); ++i) {
        const auto row = sc.prepare_row(g.t_of_row(i));
        for (std::int64_t j = 0; j < p.nx; ++j) {
            g.at(i, j) = sc.eval_row(row, g.x_of_col(j));
            g.sentinel_note_write(i, j);
        }
        g.set_margin(i, sc.eval_row(row, g.margin_x()));
    }
}

} // namespace dfdt
