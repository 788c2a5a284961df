#pragma once

#include "dfdt/amplitudes.hpp"
#include "dfdt/errors.hpp"
#include "dfdt/params.hpp"

#include <atomic>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace dfdt {

enum class Region {
    InitialRow,        // row 0, analytic
    Boundary,          // columns [0, nx), rows >= 1, analytic
    LeftOfMirrorImage, // x <= -a
    BetweenCouplings,  // -a < x <= a
    RightOfQubit,      // x > a
};

/// The psi spacetime array. Rows are time (slow axis), columns are space.
///
/// Columns [0, nx) plus row 0 are analytic (pre-filled, never solver-written).
/// One extra analytic column at x = -(Nx+nx+1)*Delta is kept out-of-band (the
/// "margin"): the delay square of the leftmost solved column reaches one
/// column past the stored strip, and the boundary expression is valid there.
///
/// When constructed with `checked = true` every cell carries a written flag;
/// reads of unwritten cells and double writes are counted as sentinel
/// violations. Release-mode grids skip the flags entirely.
class GridField {
public:
    GridField(const SimParams& p, bool checked = false);

    GridField(GridField&& other) noexcept
        : p_(other.p_),
          ny_(other.ny_),
          cols_(other.cols_),
          data_(std::move(other.data_)),
          margin_(std::move(other.margin_)),
          written_(std::move(other.written_)),
          violations_(other.violations_.load(std::memory_order_acquire)),
          first_violation_(other.first_violation_.load(std::memory_order_acquire)) {}
    GridField(const GridField&) = delete;
    GridField& operator=(const GridField&) = delete;
    GridField& operator=(GridField&&) = delete;

    std::int64_t rows() const { return ny_; }
    std::int64_t cols() const { return cols_; }
    const SimParams& params() const { return p_; }

    double x_of_col(std::int64_t j) const { return p_.x_of_col(j); }
    double t_of_row(std::int64_t i) const { return p_.t_of_row(i); }
    double margin_x() const { return p_.x_of_col(-1); }

    Region region(std::int64_t i, std::int64_t j) const;

    std::size_t index(std::int64_t i, std::int64_t j) const {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(cols_) +
               static_cast<std::size_t>(j);
    }

    std::complex<double>& at(std::int64_t i, std::int64_t j) { return data_[index(i, j)]; }
    const std::complex<double>& at(std::int64_t i, std::int64_t j) const {
        return data_[index(i, j)];
    }
    std::complex<double>* raw() { return data_.data(); }
    const std::complex<double>* raw() const { return data_.data(); }
    const std::vector<std::complex<double>>& cells() const { return data_; }

    std::complex<double> margin(std::int64_t i) const {
        return margin_[static_cast<std::size_t>(i)];
    }
    void set_margin(std::int64_t i, std::complex<double> v) {
        margin_[static_cast<std::size_t>(i)] = v;
    }

    /// Bounds- and sentinel-checked read. Out-of-bounds always faults;
    /// unwritten-cell reads fault when the sentinel is active. This is the
    /// data-race detector for scheduler verification.
    std::complex<double> lookup(std::int64_t i, std::int64_t j) const;

    bool checked() const { return !written_.empty(); }

    /// Sentinel bookkeeping used by the solver kernels (record, don't throw:
    /// these run on worker threads).
    void sentinel_note_write(std::int64_t i, std::int64_t j);
    void sentinel_note_read(std::int64_t i, std::int64_t j) const;
    bool is_written(std::int64_t i, std::int64_t j) const;

    std::int64_t sentinel_violations() const { return violations_.load(std::memory_order_acquire); }
    std::string first_violation() const;

private:
    SimParams p_;
    std::int64_t ny_ = 0;
    std::int64_t cols_ = 0;
    std::vector<std::complex<double>> data_;
    std::vector<std::complex<double>> margin_;
    mutable std::vector<std::atomic<std::uint8_t>> written_;
    mutable std::atomic<std::int64_t> violations_{0};
    mutable std::atomic<std::int64_t> first_violation_{-1};

    void record_violation(std::int64_t i, std::int64_t j, bool is_write) const;
};

/// allocate + the two analytic fills. fill_boundary also fills the margin
/// column. The solver requires both fills before marching.
GridField allocate(const SimParams& p, bool checked = false);
void fill_initial_row(GridField& g, const Scenario& sc);
void fill_boundary(GridField& g, const Scenario& sc);

} // namespace dfdt
