#include "dfdt/amplitudes.hpp"

#include "dfdt/incomplete_gamma.hpp"

#include <cmath>

namespace dfdt {

using cplx = std::complex<double>;

namespace {

constexpr cplx kI{0.0, 1.0};
const double kPi = std::acos(-1.0);

void check_time_domain(double t) {
    if (t < 0.0) throw ValidationError("amplitude: t must be nonnegative");
}

void check_p_regular(cplx p, double gamma) {
    if (std::abs(p) < 1e-10 * std::max(gamma, 1e-300))
        throw SolverError("amplitude: formula singular at p = 0; detune k, w0 or alpha");
}

} // namespace

AmplitudeSeries AmplitudeSeries::plane_wave(double k, double w0, double gamma, double a) {
    AmplitudeSeries s;
    s.kind_ = AmplitudeKind::PlaneWaveScattering;
    s.k_ = k;
    s.w0_ = w0;
    s.gamma_ = gamma;
    s.a_ = a;
    s.p_ = cplx(k - w0, 0.5 * gamma);
    check_p_regular(s.p_, gamma);
    return s;
}

AmplitudeSeries AmplitudeSeries::emission(double w0, double gamma, double a) {
    AmplitudeSeries s;
    s.kind_ = AmplitudeKind::SpontaneousEmission;
    s.w0_ = w0;
    s.gamma_ = gamma;
    s.a_ = a;
    return s;
}

AmplitudeSeries AmplitudeSeries::wavepacket(double k, double alpha, double w0, double gamma,
                                            double a) {
    AmplitudeSeries s;
    s.kind_ = AmplitudeKind::WavepacketScattering;
    s.k_ = k;
    s.alpha_ = alpha;
    s.w0_ = w0;
    s.gamma_ = gamma;
    s.a_ = a;
    s.p_ = cplx(k - w0, 0.5 * gamma * (1.0 - alpha));
    check_p_regular(s.p_, gamma);
    return s;
}

cplx AmplitudeSeries::operator()(double t) const {
    check_time_domain(t);
    switch (kind_) {
    case AmplitudeKind::PlaneWaveScattering: return eval_plane_wave(t);
    case AmplitudeKind::SpontaneousEmission: return eval_emission(t);
    case AmplitudeKind::WavepacketScattering: return eval_wavepacket(t);
    }
    throw Error("amplitude: unreachable");
}

cplx AmplitudeSeries::eval_plane_wave(double t) const {
    const double g2 = 0.5 * gamma_;
    const cplx W(g2, w0_);
    const cplx head = kI * std::sqrt(g2) * std::exp(-kI * (k_ * a_)) *
                      (std::exp(-kI * (k_ * t)) - std::exp(-W * t)) / p_;

    const double log_g2 = std::log(g2);
    const double log_abs_p = std::log(std::abs(p_));
    const double arg_p = std::arg(p_);
    const cplx lead = -std::exp(-kI * (k_ * a_));

    cplx sum(0.0, 0.0);
    const double round = 2.0 * a_;
    for (int n = 1; static_cast<double>(n) * round <= t; ++n) {
        const double s = t - static_cast<double>(n) * round;
        const double dn = static_cast<double>(n);
        cplx piece1(0.0, 0.0);
        if (s > 0.0) {
            const double m1 = (dn - 0.5) * log_g2 + dn * std::log(s) -
                              std::lgamma(dn + 1.0) - g2 * s;
            piece1 = std::exp(m1) * std::exp(-kI * (w0_ * s));
        }
        // gamma(n+1, -ips)/n! = P(n+1, -ips): the factorial cancels.
        const cplx P = incgamma_P(n + 1, -kI * p_ * s).value;
        const double m2 = (dn - 0.5) * log_g2 - (dn + 1.0) * log_abs_p;
        const cplx phase2 =
            std::exp(cplx(0.0, dn * 0.5 * kPi - (dn + 1.0) * arg_p - k_ * s));
        const cplx piece2 = std::exp(m2) * (k_ - w0_) * P * phase2;
        sum += lead * (piece1 + piece2);
    }
    return head + sum;
}

cplx AmplitudeSeries::eval_emission(double t) const {
    const double g2 = 0.5 * gamma_;
    const double round = 2.0 * a_;
    // Magnitudes folded per term: exp(n log(g2 s) + n Gamma a - log n! - Gamma t / 2).
    cplx sum(0.0, 0.0);
    for (int n = 0; static_cast<double>(n) * round <= t; ++n) {
        const double s = t - static_cast<double>(n) * round;
        const double dn = static_cast<double>(n);
        if (n > 0 && s <= 0.0) break;  // s == 0 contributes nothing beyond n = 0
        const double mag = (n == 0 ? 0.0 : dn * (std::log(g2 * s) + gamma_ * a_)) -
                           std::lgamma(dn + 1.0) - g2 * t;
        const double phase = dn * w0_ * round - w0_ * t;
        sum += std::exp(cplx(mag, phase));
    }
    return sum;
}

cplx AmplitudeSeries::eval_wavepacket(double t) const {
    const double g2 = 0.5 * gamma_;
    const double ag2 = 0.5 * alpha_ * gamma_;
    const cplx W(g2, w0_);
    const cplx drive_exp(-ag2 * t, -k_ * t);
    const cplx head = std::sqrt(alpha_ * gamma_ * g2) *
                      (std::exp(-W * t) - std::exp(drive_exp)) / p_;

    const double log_g2 = std::log(g2);
    const double log_abs_p = std::log(std::abs(p_));
    const double arg_p = std::arg(p_);
    const cplx lead = -kI * std::sqrt(alpha_ * gamma_);
    const cplx q = cplx(k_ - w0_, -ag2);

    cplx sum(0.0, 0.0);
    const double round = 2.0 * a_;
    for (int n = 1; static_cast<double>(n) * round <= t; ++n) {
        const double s = t - static_cast<double>(n) * round;
        const double dn = static_cast<double>(n);
        cplx piece1(0.0, 0.0);
        if (s > 0.0) {
            const double m1 = (dn - 0.5) * log_g2 + dn * std::log(s) -
                              std::lgamma(dn + 1.0) - g2 * s;
            piece1 = std::exp(m1) * std::exp(-kI * (w0_ * s));
        }
        const cplx P = incgamma_P(n + 1, -kI * p_ * s).value;
        const double m2 = (dn - 0.5) * log_g2 - (dn + 1.0) * log_abs_p - ag2 * s;
        const cplx phase2 =
            std::exp(cplx(0.0, dn * 0.5 * kPi - (dn + 1.0) * arg_p - k_ * s));
        const cplx piece2 = std::exp(m2) * q * P * phase2;
        sum += lead * (piece1 + piece2);
    }
    return head + sum;
}

cplx Wavepacket::operator()(double x) const {
    if (theta(-x - a) == 0.0) return cplx(0.0, 0.0);
    const double decay = 0.5 * alpha * gamma * (x + a);
    return kI * std::sqrt(alpha * gamma) * std::exp(cplx(decay, k * x));
}

TwoPhotonInitial TwoPhotonInitial::none() { return TwoPhotonInitial{}; }

TwoPhotonInitial TwoPhotonInitial::plane_wave(double k, double a) {
    TwoPhotonInitial c;
    c.kind_ = Kind::PlaneWave;
    c.k_ = k;
    c.a_ = a;
    c.A_ = 1.0;  // unnormalized CW pair
    return c;
}

TwoPhotonInitial TwoPhotonInitial::exponential_pair(double k1, double alpha1, double k2,
                                                    double alpha2, double gamma, double a) {
    TwoPhotonInitial c;
    c.kind_ = Kind::Pair;
    c.a_ = a;
    c.phi1_ = Wavepacket{k1, alpha1, gamma, a};
    c.phi2_ = Wavepacket{k2, alpha2, gamma, a};
    const double dk2 = 4.0 * (k1 - k2) * (k1 - k2);
    const double sw = (alpha1 + alpha2) * (alpha1 + alpha2) * gamma * gamma;
    c.A_ = std::sqrt((dk2 + sw) / (dk2 + sw + 4.0 * alpha1 * alpha2 * gamma * gamma));
    return c;
}

cplx TwoPhotonInitial::operator()(double x1, double x2) const {
    switch (kind_) {
    case Kind::None:
        return cplx(0.0, 0.0);
    case Kind::PlaneWave: {
        if (theta(-a_ - x1) == 0.0 || theta(-a_ - x2) == 0.0) return cplx(0.0, 0.0);
        return std::exp(kI * (k_ * (x1 + x2)));
    }
    case Kind::Pair: {
        const cplx cross = phi1_(x1) * phi2_(x2) + phi1_(x2) * phi2_(x1);
        return A_ / std::sqrt(2.0) * cross;
    }
    }
    return cplx(0.0, 0.0);
}

Scenario::Scenario(const SimParams& p) : cls_(p.init_cond), a_(p.a), k_(p.k) {
    switch (cls_) {
    case InitialCondition::TwoPhotonPlaneWave:
        chi0_ = TwoPhotonInitial::plane_wave(p.k, p.a);
        amp_a_ = AmplitudeSeries::plane_wave(p.k, p.w0, p.gamma, p.a);
        break;
    case InitialCondition::StimulatedEmission:
        phi1_ = Wavepacket{p.k, p.alpha, p.gamma, p.a};
        amp_a_ = AmplitudeSeries::emission(p.w0, p.gamma, p.a);
        break;
    case InitialCondition::TwoPhotonWavepacket:
        chi0_ = TwoPhotonInitial::exponential_pair(p.k1, p.alpha1, p.k2, p.alpha2,
                                                   p.gamma, p.a);
        phi1_ = Wavepacket{p.k1, p.alpha1, p.gamma, p.a};
        phi2_ = Wavepacket{p.k2, p.alpha2, p.gamma, p.a};
        amp_a_ = AmplitudeSeries::wavepacket(p.k1, p.alpha1, p.w0, p.gamma, p.a);
        amp_b_ = AmplitudeSeries::wavepacket(p.k2, p.alpha2, p.w0, p.gamma, p.a);
        // The series amplitudes are phased for a wavepacket front at the
        // coupling point; fold in e^{-i k a} to match the Wavepacket spatial
        // phase convention so the cross terms carry the right relative phase.
        front1_ = std::exp(-kI * (p.k1 * p.a));
        front2_ = std::exp(-kI * (p.k2 * p.a));
        A_ = chi0_.normalization();
        break;
    }
}

cplx Scenario::psi_initial(double x) const {
    if (cls_ == InitialCondition::StimulatedEmission) return phi1_(x);
    return cplx(0.0, 0.0);
}

Scenario::BoundaryRow Scenario::prepare_row(double t) const {
    BoundaryRow row;
    row.t = t;
    switch (cls_) {
    case InitialCondition::TwoPhotonPlaneWave:
        row.amp1 = std::sqrt(2.0) * std::exp(-kI * (k_ * t)) * amp_a_(t);
        break;
    case InitialCondition::StimulatedEmission:
        row.amp1 = amp_a_(t);
        break;
    case InitialCondition::TwoPhotonWavepacket:
        row.amp1 = front1_ * amp_a_(t);
        row.amp2 = front2_ * amp_b_(t);
        break;
    }
    return row;
}

cplx Scenario::eval_row(const BoundaryRow& row, double x) const {
    switch (cls_) {
    case InitialCondition::TwoPhotonPlaneWave:
        return row.amp1 * std::exp(kI * (k_ * x));
    case InitialCondition::StimulatedEmission:
        return phi1_(x - row.t) * row.amp1;
    case InitialCondition::TwoPhotonWavepacket:
        return A_ * (phi1_(x - row.t) * row.amp2 + phi2_(x - row.t) * row.amp1);
    }
    return cplx(0.0, 0.0);
}

cplx Scenario::exact_left(double x, double t) const {
    return eval_row(prepare_row(t), x);
}

cplx Scenario::boundary_psi(double x, double t) const {
    if (!(x < -a_))
        throw ValidationError("boundary_psi: analytic form is valid only for x < -a");
    check_time_domain(t);
    return exact_left(x, t);
}

cplx Scenario::chi0(double x1, double x2) const { return chi0_(x1, x2); }

OneExcitationField::OneExcitationField(double k, double alpha, double w0, double gamma,
                                       double a)
    : phi_{k, alpha, gamma, a},
      e_(AmplitudeSeries::wavepacket(k, alpha, w0, gamma, a)),
      front_phase_(std::exp(-kI * (k * a))),
      gamma_(gamma),
      a_(a) {}

cplx OneExcitationField::qubit(double t) const { return front_phase_ * e_(t); }

void OneExcitationField::build_time_table(std::int64_t n, double dt) {
    table_dt_ = dt;
    table_.resize(static_cast<std::size_t>(n));
    for (std::int64_t m = 0; m < n; ++m)
        table_[static_cast<std::size_t>(m)] = qubit(static_cast<double>(m) * dt);
}

cplx OneExcitationField::qubit_at(double s) const {
    if (table_dt_ > 0.0) {
        const double ratio = s / table_dt_;
        const double rounded = std::round(ratio);
        if (std::abs(ratio - rounded) < 1e-9 && rounded >= 0.0 &&
            rounded < static_cast<double>(table_.size()))
            return table_[static_cast<std::size_t>(rounded)];
    }
    return qubit(s);
}

cplx OneExcitationField::photon(double x, double t) const {
    cplx value = phi_(x - t);
    const double coupling = std::sqrt(0.5 * gamma_);
    if (theta(x + a_) != 0.0 && theta(t - x - a_) != 0.0)
        value -= coupling * qubit_at(t - x - a_);
    if (theta(x - a_) != 0.0 && theta(t - x + a_) != 0.0)
        value += coupling * qubit_at(t - x + a_);
    return value;
}

} // namespace dfdt
