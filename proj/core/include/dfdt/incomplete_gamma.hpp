#pragma once

#include "dfdt/errors.hpp"

#include <complex>
#include <string>

namespace dfdt {

/// Evaluation regime for P(n,z). The dispatch map is total: every finite z
/// selects exactly one regime.
enum class GammaRegime {
    ContinuedFraction,  // Lentz continued fraction for Q(n,z), P = 1 - Q
    SeriesP,            // ascending series for P(n,z)
    SeriesGammaStar,    // gamma* series, stable on the negative real axis
    Poincare,           // Poincare-type expansion, large |z| near the negative axis
};

const char* to_string(GammaRegime r);

struct GammaResult {
    std::complex<double> value;  // P(n,z) = gamma(n,z) / (n-1)!
    GammaRegime regime = GammaRegime::SeriesP;
    int terms_used = 0;
};

/// Non-convergence after the iteration cap, or an intermediate overflow.
/// Carries the offending (n, z, regime).
struct GammaConvergenceError : SolverError {
    GammaConvergenceError(int n, std::complex<double> z, GammaRegime regime,
                          const std::string& what);
    int n;
    std::complex<double> z;
    GammaRegime regime;
};

/// Normalized lower incomplete Gamma function P(n,z) for integer n >= 1 and
/// complex z. Relative accuracy ~1e-12 inside the convergence region.
///
/// Dispatch: Re(z) < 0 with |Im(z)| <= 1e-16 * max(1, |Re(z)|) goes to the
/// negative-axis branch (gamma* series below |z| = 30, Poincare expansion
/// above); otherwise the ascending series for |z| < n+1 and the continued
/// fraction beyond.
GammaResult incgamma_P(int n, std::complex<double> z);

/// Which regime incgamma_P would use for (n, z).
GammaRegime gamma_regime(int n, std::complex<double> z);

/// Unnormalized lower incomplete Gamma gamma(n,z) = (n-1)! * P(n,z).
/// Requires n <= 170 so the factorial stays representable in double.
std::complex<double> incgamma_lower(int n, std::complex<double> z);

namespace gamma_detail {

inline constexpr int kMaxTerms = 10000;

// Individual regime evaluators, exposed so tests can compare methods against
// each other across dispatch boundaries.
GammaResult eval_series_P(int n, std::complex<double> z);
GammaResult eval_continued_fraction(int n, std::complex<double> z);
GammaResult eval_gamma_star_series(int n, std::complex<double> z);
GammaResult eval_poincare(int n, std::complex<double> z);

} // namespace gamma_detail

} // namespace dfdt
