#pragma once

#include "dfdt/amplitudes.hpp"
#include "dfdt/grid.hpp"

#include <complex>
#include <cstdint>
#include <mutex>
#include <vector>

namespace dfdt {

/// Last time row usable for the spatial integrals: min(Ny-1, Nx - nx/2).
/// Beyond it the second light cone leaves the box and the integrals would be
/// underestimated.
std::int64_t t_max_rows(const SimParams& p);

/// Two-photon wavefunction from the solved grid:
///   chi(x1,x2,t) = chi0(x1-t, x2-t)
///                - (sqrt(Gamma)/2) [ psi(x1-x2-a, t-x2-a) theta(x2+a) theta(t-x2-a)
///                                  - psi(x1-x2+a, t-x2+a) theta(x2-a) theta(t-x2+a)
///                                  + (x1 <-> x2) ].
/// x1, x2 must lie on grid columns and t on a solved row. Symmetric in
/// (x1, x2) to the bit, term by term.
std::complex<double> reconstruct_chi(const GridField& g, const Scenario& sc, double x1,
                                     double x2, double t);

/// chi sampled against detector positions x1 = a + Delta, x2 = a + Delta + tau
/// for every on-grid tau >= 0 (tau/Delta in [0, Nx - nx/2 - 1]).
struct ChiSlice {
    double t = 0.0;
    double tau_step = 0.0;
    std::vector<std::complex<double>> chi;
};
ChiSlice chi_detector_slice(const GridField& g, const Scenario& sc, std::int64_t row);

/// Trapezoidal integral of |psi|^2 over all grid columns at one row.
double psi_square_integral(const GridField& g, std::int64_t row);

struct NmRecord {
    double t = 0.0;
    std::complex<double> mu{0.0, 0.0};  // overlap of psi with the one-excitation field
    double lambda = 0.0;                // integral |psi|^2 - |e0|^2
    double lambda_imag_residue = 0.0;   // leftover Im from complex accumulation
    double detM = 0.0;                  // |mu|^2 * lambda
    double n_geo_partial = 0.0;         // running sum of positive |detM| increments
    std::complex<double> e0{0.0, 0.0};  // wavepacket-scattering amplitude
    std::complex<double> e1{0.0, 0.0};  // spontaneous-emission amplitude
};

/// Non-Markovianity measures for a stimulated-emission run, computed in situ
/// from row hooks. compute_row is thread-safe and order-free (slot per row);
/// finalize() sorts and fills the running geometric-measure column.
class NmAccumulator {
public:
    explicit NmAccumulator(const SimParams& p);

    std::int64_t tmax_rows() const { return tmax_; }

    /// Measures of one fully solved row. Throws SolverError beyond Tmax:
    /// the integrals would be underestimated there.
    void compute_row(const GridField& g, std::int64_t row);

    /// Ordered records with n_geo_partial accumulated by forward differences
    /// of |detM| between consecutive sampled rows.
    std::vector<NmRecord> finalize();

    const OneExcitationField& field() const { return field_; }

private:
    SimParams p_;
    std::int64_t tmax_ = 0;
    std::int64_t col_ub_ = 0;  // integration window ends where the second
                               // light cone meets t = Tmax
    OneExcitationField field_;
    AmplitudeSeries e1_;
    std::vector<NmRecord> slots_;
    std::vector<char> present_;
    std::mutex slot_mutex_;
};

} // namespace dfdt
