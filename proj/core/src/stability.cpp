#include "dfdt/stability.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dfdt {

using cplx = std::complex<double>;

namespace {

constexpr cplx kI{0.0, 1.0};

cplx horner(const std::vector<cplx>& c, cplx z) {
    cplx acc(0.0, 0.0);
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
    return acc;
}

} // namespace

cplx amplification_factor_simple(const StabilityProbe& probe) {
    if (!(probe.Delta > 0.0))
        throw ValidationError("stability probe: Delta must be positive");
    const double invD = 1.0 / probe.Delta;
    const cplx w4 = 0.25 * probe.W;
    const cplx up = std::exp(kI * (probe.k * probe.Delta));
    const cplx dn = std::exp(-kI * (probe.k * probe.Delta));
    const cplx denom = (invD + w4) + w4 * dn;
    if (std::abs(denom) < 1e-300)
        throw SolverError("stability probe: zero denominator in amplification factor");
    return ((invD - w4) - w4 * up) / denom * dn;
}

std::vector<cplx> amplification_polynomial(const StabilityProbe& probe) {
    if (!(probe.Delta > 0.0))
        throw ValidationError("stability probe: Delta must be positive");
    if (probe.nx < 2)
        throw ValidationError("stability probe: nx must be at least 2");
    const double invD = 1.0 / probe.Delta;
    const double gamma = 2.0 * probe.W.real();
    const cplx w4 = 0.25 * probe.W;
    const cplx up = std::exp(kI * (probe.k * probe.Delta));
    const cplx dn = std::exp(-kI * (probe.k * probe.Delta));
    const cplx delay = -(gamma / 8.0) *
                       std::exp(-kI * (probe.k * probe.Delta * static_cast<double>(probe.nx + 1))) *
                       (cplx(1.0, 0.0) + up);

    std::vector<cplx> c(static_cast<std::size_t>(probe.nx) + 2, cplx(0.0, 0.0));
    c[0] = delay;
    c[1] = delay;
    c[static_cast<std::size_t>(probe.nx)] = w4 - (invD - w4) * dn;
    c[static_cast<std::size_t>(probe.nx) + 1] = (invD + w4) + w4 * dn;
    return c;
}

std::vector<cplx> polynomial_roots(std::vector<cplx> coeffs) {
    while (!coeffs.empty() && std::abs(coeffs.back()) == 0.0) coeffs.pop_back();
    if (coeffs.size() < 2) throw ValidationError("polynomial_roots: degree must be >= 1");
    const std::size_t deg = coeffs.size() - 1;

    // Monic normalization, then Durand-Kerner simultaneous iteration.
    std::vector<cplx> c(coeffs);
    const cplx lead = c.back();
    for (auto& v : c) v /= lead;

    double radius = 0.0;
    for (std::size_t i = 0; i + 1 < c.size(); ++i) radius = std::max(radius, std::abs(c[i]));
    radius = 1.0 + radius;  // Cauchy bound on root moduli

    std::vector<cplx> r(deg);
    const cplx seed(0.4, 0.9);
    cplx q(1.0, 0.0);
    for (std::size_t i = 0; i < deg; ++i) {
        q *= seed;
        r[i] = q * radius;
    }

    const int max_iter = 2000;
    for (int iter = 0; iter < max_iter; ++iter) {
        double moved = 0.0;
        for (std::size_t i = 0; i < deg; ++i) {
            cplx denom(1.0, 0.0);
            for (std::size_t j = 0; j < deg; ++j)
                if (j != i) denom *= r[i] - r[j];
            if (std::abs(denom) < 1e-300) denom = cplx(1e-300, 0.0);
            const cplx delta = horner(c, r[i]) / denom;
            r[i] -= delta;
            moved = std::max(moved, std::abs(delta) / (1.0 + std::abs(r[i])));
        }
        if (moved < 1e-14) break;
    }

    // Residual verification against the original (unnormalized) coefficients.
    double scale = 0.0;
    for (const auto& v : coeffs) scale = std::max(scale, std::abs(v));
    for (const auto& root : r) {
        const double pow_bound = std::pow(std::max(1.0, std::abs(root)), static_cast<double>(deg));
        const double residual = std::abs(horner(coeffs, root));
        if (!(residual <= 1e-8 * scale * pow_bound * static_cast<double>(deg + 1))) {
            std::ostringstream os;
            os.precision(17);
            os << "polynomial_roots: residual " << residual << " at root (" << root.real()
               << ", " << root.imag() << ") exceeds tolerance (degree " << deg << ")";
            throw SolverError(os.str());
        }
    }
    return r;
}

std::vector<cplx> amplification_polynomial_roots(const StabilityProbe& probe) {
    return polynomial_roots(amplification_polynomial(probe));
}

} // namespace dfdt
