#include "dfdt/incomplete_gamma.hpp"

#include <cmath>
#include <sstream>

namespace dfdt {

using cplx = std::complex<double>;

namespace {

constexpr double kNegativeAxisImagRatio = 1e-16;
constexpr double kNegativeAxisSplit = 30.0;  // gamma* series vs Poincare
constexpr double kLentzTiny = 1e-300;
constexpr double kLentzEps = 1e-15;
constexpr double kSeriesEps = 1e-16;

std::string describe(int n, cplx z, GammaRegime r, const char* what) {
    std::ostringstream os;
    os.precision(17);
    os << "incomplete Gamma " << what << ": n = " << n << ", z = (" << z.real()
       << ", " << z.imag() << "), regime = " << to_string(r);
    return os.str();
}

// exp(-z + n log z - lgamma(n+1)) without forming z^n or n! directly.
cplx series_prefactor(int n, cplx z) {
    return std::exp(-z + static_cast<double>(n) * std::log(z) -
                    std::lgamma(static_cast<double>(n) + 1.0));
}

} // namespace

const char* to_string(GammaRegime r) {
    switch (r) {
    case GammaRegime::ContinuedFraction: return "continued-fraction";
    case GammaRegime::SeriesP: return "series";
    case GammaRegime::SeriesGammaStar: return "gamma-star-series";
    case GammaRegime::Poincare: return "poincare";
    }
    return "?";
}

GammaConvergenceError::GammaConvergenceError(int n_, cplx z_, GammaRegime regime_,
                                             const std::string& what_)
    : SolverError(what_), n(n_), z(z_), regime(regime_) {}

GammaRegime gamma_regime(int n, cplx z) {
    if (z.real() < 0.0 &&
        std::abs(z.imag()) <= kNegativeAxisImagRatio * std::max(1.0, std::abs(z.real()))) {
        return std::abs(z) < kNegativeAxisSplit ? GammaRegime::SeriesGammaStar
                                                : GammaRegime::Poincare;
    }
    return std::abs(z) < static_cast<double>(n) + 1.0 ? GammaRegime::SeriesP
                                                      : GammaRegime::ContinuedFraction;
}

namespace gamma_detail {

GammaResult eval_series_P(int n, cplx z) {
    GammaResult r;
    r.regime = GammaRegime::SeriesP;
    if (z == cplx(0.0, 0.0)) return r;  // gamma(n, 0) = 0
    cplx term(1.0, 0.0);
    cplx sum = term;
    int i = 1;
    for (; i <= kMaxTerms; ++i) {
        term *= z / cplx(static_cast<double>(n + i), 0.0);
        sum += term;
        if (std::abs(term) <= kSeriesEps * std::abs(sum)) break;
    }
    if (i > kMaxTerms)
        throw GammaConvergenceError(n, z, r.regime,
                                    describe(n, z, r.regime, "series did not converge"));
    r.terms_used = i;
    r.value = series_prefactor(n, z) * sum;
    if (!std::isfinite(r.value.real()) || !std::isfinite(r.value.imag()))
        throw GammaConvergenceError(n, z, r.regime, describe(n, z, r.regime, "series overflowed"));
    return r;
}

GammaResult eval_continued_fraction(int n, cplx z) {
    // Lentz evaluation of the continued fraction for Q(n,z); P = 1 - Q.
    GammaResult r;
    r.regime = GammaRegime::ContinuedFraction;
    const double a = static_cast<double>(n);
    cplx b = z + cplx(1.0 - a, 0.0);
    cplx c(1.0 / kLentzTiny, 0.0);
    cplx d = b;
    if (std::abs(d) < kLentzTiny) d = cplx(kLentzTiny, 0.0);
    d = 1.0 / d;
    cplx h = d;
    int i = 1;
    for (; i <= kMaxTerms; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += cplx(2.0, 0.0);
        d = an * d + b;
        if (std::abs(d) < kLentzTiny) d = cplx(kLentzTiny, 0.0);
        c = b + an / c;
        if (std::abs(c) < kLentzTiny) c = cplx(kLentzTiny, 0.0);
        d = 1.0 / d;
        const cplx delta = d * c;
        h *= delta;
        if (std::abs(delta - cplx(1.0, 0.0)) <= kLentzEps) break;
    }
    if (i > kMaxTerms)
        throw GammaConvergenceError(
            n, z, r.regime, describe(n, z, r.regime, "continued fraction did not converge"));
    r.terms_used = i;
    const cplx q = std::exp(-z + a * std::log(z) - std::lgamma(a)) * h;
    r.value = cplx(1.0, 0.0) - q;
    if (!std::isfinite(r.value.real()) || !std::isfinite(r.value.imag()))
        throw GammaConvergenceError(n, z, r.regime,
                                    describe(n, z, r.regime, "continued fraction overflowed"));
    return r;
}

GammaResult eval_gamma_star_series(int n, cplx z) {
    // P(n,z) = z^n / Gamma(n) * sum_i (-z)^i / (i! (i+n)). For z on the
    // negative real axis the terms are all positive, so no cancellation.
    GammaResult r;
    r.regime = GammaRegime::SeriesGammaStar;
    if (z == cplx(0.0, 0.0)) return r;
    const cplx mz = -z;
    cplx pow_term(1.0, 0.0);  // (-z)^i / i!
    cplx sum = pow_term / cplx(static_cast<double>(n), 0.0);
    int i = 1;
    for (; i <= kMaxTerms; ++i) {
        pow_term *= mz / static_cast<double>(i);
        const cplx term = pow_term / cplx(static_cast<double>(i + n), 0.0);
        sum += term;
        if (std::abs(term) <= kSeriesEps * std::abs(sum)) break;
    }
    if (i > kMaxTerms)
        throw GammaConvergenceError(
            n, z, r.regime, describe(n, z, r.regime, "gamma* series did not converge"));
    r.terms_used = i;
    const double a = static_cast<double>(n);
    r.value = std::exp(a * std::log(z) - std::lgamma(a)) * sum;
    if (!std::isfinite(r.value.real()) || !std::isfinite(r.value.imag()))
        throw GammaConvergenceError(n, z, r.regime,
                                    describe(n, z, r.regime, "gamma* series overflowed"));
    return r;
}

GammaResult eval_poincare(int n, cplx z) {
    // P(n,-u) ~ (-1)^n e^u / Gamma(n) * sum_{i=0}^{n-1} (1-n)_i u^{n-1-i}.
    // For integer n the Pochhammer factors terminate the sum at i = n-1; the
    // dropped constant is exponentially small relative to e^u.
    GammaResult r;
    r.regime = GammaRegime::Poincare;
    const cplx u = -z;
    const double a = static_cast<double>(n);
    cplx power = (n == 1) ? cplx(1.0, 0.0) : std::exp((a - 1.0) * std::log(u));
    cplx poch(1.0, 0.0);
    cplx sum(0.0, 0.0);
    for (int i = 0; i < n; ++i) {
        sum += poch * power;
        poch *= cplx(static_cast<double>(i + 1) - a, 0.0);
        power /= u;
    }
    r.terms_used = n;
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    r.value = sign * std::exp(u - std::lgamma(a)) * sum;
    if (!std::isfinite(r.value.real()) || !std::isfinite(r.value.imag()))
        throw GammaConvergenceError(
            n, z, r.regime, describe(n, z, r.regime, "Poincare expansion overflowed"));
    return r;
}

} // namespace gamma_detail

GammaResult incgamma_P(int n, cplx z) {
    if (n < 1) throw ValidationError("incgamma_P: n must be a positive integer");
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw ValidationError("incgamma_P: z must be finite");
    switch (gamma_regime(n, z)) {
    case GammaRegime::SeriesP: return gamma_detail::eval_series_P(n, z);
    case GammaRegime::ContinuedFraction: return gamma_detail::eval_continued_fraction(n, z);
    case GammaRegime::SeriesGammaStar: return gamma_detail::eval_gamma_star_series(n, z);
    case GammaRegime::Poincare: return gamma_detail::eval_poincare(n, z);
    }
    throw Error("incgamma_P: unreachable");
}

std::complex<double> incgamma_lower(int n, cplx z) {
    if (n > 170)
        throw ValidationError("incgamma_lower: (n-1)! not representable in double for n > 170");
    return std::tgamma(static_cast<double>(n)) * incgamma_P(n, z).value;
}

} // namespace dfdt
