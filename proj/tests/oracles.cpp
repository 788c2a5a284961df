#include "oracles.hpp"

#include <cmath>
#include <stdexcept>

namespace oracle {

cplx gamma_P_recurrence(int n, cplx z) {
    const cplx ez = std::exp(-z);
    cplx P = cplx(1.0, 0.0) - ez;  // P(1, z)
    cplx term = ez;                // z^m e^{-z} / m! at m = 0
    for (int m = 1; m < n; ++m) {
        term *= z / static_cast<double>(m);
        P -= term;
    }
    return P;
}

namespace {

cplx simpson(const std::function<cplx(double)>& f, double a, double b, cplx fa, cplx fm,
             cplx fb, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const cplx flm = f(lm);
    const cplx frm = f(rm);
    const cplx whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const cplx left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const cplx right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const cplx delta = left + right - whole;
    if (depth <= 0) throw std::runtime_error("quadrature oracle: max depth");
    // Floor the tolerance at the rounding noise of the panel values.
    const double eff = std::max(tol, 1e-15 * (std::abs(left) + std::abs(right)));
    if (std::abs(delta) <= 15.0 * eff) return left + right + delta / 15.0;
    return simpson(f, a, m, fa, flm, fm, 0.5 * tol, depth - 1) +
           simpson(f, m, b, fm, frm, fb, 0.5 * tol, depth - 1);
}

} // namespace

cplx gamma_lower_quadrature(int n, cplx z, double tol) {
    // Parameterize t = z s, s in [0, 1]: integral = z * int_0^1 (z s)^{n-1} e^{-z s} ds.
    const auto f = [n, z](double s) -> cplx {
        const cplx t = z * s;
        cplx p(1.0, 0.0);
        for (int i = 0; i < n - 1; ++i) p *= t;
        return p * std::exp(-t);
    };
    return z * simpson(f, 0.0, 1.0, f(0.0), f(0.5), f(1.0), tol, 48);
}

namespace {

/// Cubic Lagrange on the four history nodes around a (possibly fractional)
/// index q >= 0. Exact at integer q.
cplx history_at(const std::vector<cplx>& h, double q) {
    const auto n = static_cast<std::int64_t>(h.size());
    const double rounded = std::round(q);
    if (std::abs(q - rounded) < 1e-9) {
        const auto idx = static_cast<std::int64_t>(rounded);
        if (idx < 0 || idx >= n) throw std::runtime_error("dde oracle: history index");
        return h[static_cast<std::size_t>(idx)];
    }
    std::int64_t base = static_cast<std::int64_t>(std::floor(q));
    base = std::max<std::int64_t>(1, std::min<std::int64_t>(base, n - 3));
    const double x = q - static_cast<double>(base);
    const cplx ym1 = h[static_cast<std::size_t>(base - 1)];
    const cplx y0 = h[static_cast<std::size_t>(base)];
    const cplx y1 = h[static_cast<std::size_t>(base + 1)];
    const cplx y2 = h[static_cast<std::size_t>(base + 2)];
    const double xm = x + 1.0, x0 = x, x1 = x - 1.0, x2 = x - 2.0;
    return ym1 * (x0 * x1 * x2 / -6.0) + y0 * (xm * x1 * x2 / 2.0) +
           y1 * (xm * x0 * x2 / -2.0) + y2 * (xm * x0 * x1 / 6.0);
}

} // namespace

cplx dde_integrate(const DdeProblem& problem, double t_end, double step_hint) {
    if (t_end <= 0.0) return problem.y0;
    if (problem.tau <= 0.0) throw std::runtime_error("dde oracle: tau must be positive");

    // Step that divides the delay: discontinuity onsets land on step ends,
    // and every delayed stage time (t - tau, t + h/2 - tau, t + h - tau)
    // falls on the half-step history grid, so no stage interpolates across a
    // derivative kink.
    const auto per_delay =
        std::max<std::int64_t>(2, static_cast<std::int64_t>(std::ceil(problem.tau / step_hint)));
    const double h = problem.tau / static_cast<double>(per_delay);
    const double h2 = 0.5 * h;
    const auto steps = static_cast<std::int64_t>(std::ceil(t_end / h - 1e-12));

    std::vector<cplx> hist;  // y at multiples of h/2
    hist.reserve(2 * static_cast<std::size_t>(steps) + 1);
    hist.push_back(problem.y0);

    // Stages at a step's right end must sample the forcing from *inside* the
    // step: theta switches flip exactly at node times, and letting the k4
    // stage see the next interval's value costs one order of accuracy. The
    // delay activation is decided per step (onset at m = per_delay); the
    // user drive gets a tiny inward time bias at right-end stages.
    const auto rhs = [&](std::int64_t m, double s, cplx y, bool right_end) -> cplx {
        cplx v = problem.c_loc * y;
        if (m >= per_delay) v += problem.c_del * history_at(hist, (s - problem.tau) / h2);
        if (problem.drive) v += problem.drive(right_end ? s - 1e-6 * h2 : s);
        return v;
    };

    cplx y = problem.y0;
    for (std::int64_t m = 0; m < steps; ++m) {
        const double t = static_cast<double>(m) * h;
        const cplx k1 = rhs(m, t, y, false);
        const cplx k2 = rhs(m, t + h2, y + h2 * k1, false);
        const cplx k3 = rhs(m, t + h2, y + h2 * k2, false);
        const cplx k4 = rhs(m, t + h, y + h * k3, true);
        const cplx y_next = y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        // Half-step node from the cubic Hermite dense output of this step;
        // each step interior is smooth, so this is 4th-order accurate.
        const cplx f_next = rhs(m, t + h, y_next, true);
        hist.push_back(0.5 * (y + y_next) + h / 8.0 * (k1 - f_next));
        hist.push_back(y_next);
        y = y_next;
    }
    return history_at(hist, t_end / h2);
}

double trapezoid(const std::function<double(double)>& f, double lo, double hi, std::int64_t n) {
    const double dx = (hi - lo) / static_cast<double>(n);
    double acc = 0.5 * (f(lo) + f(hi));
    for (std::int64_t i = 1; i < n; ++i) acc += f(lo + static_cast<double>(i) * dx);
    return acc * dx;
}

} // namespace oracle
