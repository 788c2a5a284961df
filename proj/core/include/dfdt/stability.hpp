#pragma once

#include "dfdt/errors.hpp"

#include <complex>
#include <cstdint>
#include <vector>

namespace dfdt {

/// Inputs for the von Neumann probes. W is the complex damping coefficient
/// of the local term (i w0 + Gamma/2 for a physical run), so the delay
/// coupling of the full probe is Gamma = 2 Re(W). k is the plane-wave sample
/// wavenumber of the ansatz psi(m Delta, n Delta) = xi^n e^{i k m Delta}.
struct StabilityProbe {
    std::complex<double> W{0.0, 0.0};
    double Delta = 0.0;
    std::int64_t nx = 0;
    double k = 0.0;
};

/// Amplification factor of the undelayed equation d_t f + d_x f + W f = 0:
///   xi(k) = [ (1/D - W/4) - (W/4) e^{ikD} ] / [ (1/D + W/4) + (W/4) e^{-ikD} ] e^{-ikD}.
/// |xi| <= 1 whenever Re(W) > 0.
std::complex<double> amplification_factor_simple(const StabilityProbe& probe);

/// Coefficients c[0..nx+1] (ascending powers) of the degree-(nx+1) polynomial
/// the ansatz turns the delayed equation into (chi drive set to zero):
///   [ (1/D + W/4) + (W/4) e^{-ikD} ] xi^{nx+1}
/// + [ (W/4) - (1/D - W/4) e^{-ikD} ] xi^{nx}
/// - (Gamma/8) e^{-ik(nx+1)D} (1 + e^{ikD}) (xi + 1) = 0.
std::vector<std::complex<double>> amplification_polynomial(const StabilityProbe& probe);

/// All nx+1 roots of the amplification polynomial (Durand-Kerner iteration
/// with a residual check; throws SolverError with the residual report if the
/// iteration fails to converge).
std::vector<std::complex<double>> amplification_polynomial_roots(const StabilityProbe& probe);

/// General-purpose dense root finder used above; exposed for tests.
/// Coefficients ascend in degree; the leading coefficient must be nonzero.
std::vector<std::complex<double>> polynomial_roots(std::vector<std::complex<double>> coeffs);

} // namespace dfdt
