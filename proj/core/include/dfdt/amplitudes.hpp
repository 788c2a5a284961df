#pragma once

#include "dfdt/errors.hpp"
#include "dfdt/params.hpp"

#include <complex>
#include <cstdint>
#include <vector>

namespace dfdt {

/// Unit step with theta(0) = 1 (inclusive onset). Series onsets coincide with
/// grid lines, so the convention matters and is fixed project-wide.
inline double theta(double x) { return x >= 0.0 ? 1.0 : 0.0; }

enum class AmplitudeKind {
    PlaneWaveScattering,   // qubit amplitude under a CW drive, e(0) = 0
    SpontaneousEmission,   // initially excited qubit, no drive, e(0) = 1
    WavepacketScattering,  // exponential-wavepacket drive, e(0) = 0
};

/// Closed-form qubit amplitudes of the one-excitation sector in front of a
/// mirror. Each evaluation sums the finite retardation series (terms switch
/// on at t = 2na) with log-domain magnitude folding so long times and high
/// round-trip counts do not overflow.
class AmplitudeSeries {
public:
    static AmplitudeSeries plane_wave(double k, double w0, double gamma, double a);
    static AmplitudeSeries emission(double w0, double gamma, double a);
    static AmplitudeSeries wavepacket(double k, double alpha, double w0, double gamma, double a);

    /// Amplitude at time t >= 0.
    std::complex<double> operator()(double t) const;

    AmplitudeKind kind() const { return kind_; }
    std::complex<double> p() const { return p_; }
    double round_trip() const { return 2.0 * a_; }

private:
    friend class Scenario;
    friend class OneExcitationField;
    AmplitudeSeries() = default;
    std::complex<double> eval_plane_wave(double t) const;
    std::complex<double> eval_emission(double t) const;
    std::complex<double> eval_wavepacket(double t) const;

    AmplitudeKind kind_ = AmplitudeKind::SpontaneousEmission;
    double k_ = 0.0, w0_ = 0.0, gamma_ = 0.0, a_ = 0.0, alpha_ = 0.0;
    std::complex<double> p_{0.0, 0.0};
};

/// Exponential single-photon wavepacket with its front at x = -a:
/// phi(x) = i sqrt(alpha Gamma) exp(i k x + alpha Gamma (x+a)/2) theta(-x-a).
struct Wavepacket {
    double k = 0.0;
    double alpha = 0.0;
    double gamma = 0.0;
    double a = 0.0;

    std::complex<double> operator()(double x) const;
};

/// Two-photon initial wavefunction chi(x1, x2, 0), symmetric by construction.
class TwoPhotonInitial {
public:
    static TwoPhotonInitial none();  // identically zero (single-photon runs)
    static TwoPhotonInitial plane_wave(double k, double a);
    static TwoPhotonInitial exponential_pair(double k1, double alpha1, double k2,
                                             double alpha2, double gamma, double a);

    std::complex<double> operator()(double x1, double x2) const;
    double normalization() const { return A_; }
    bool is_zero() const { return kind_ == Kind::None; }

private:
    enum class Kind { None, PlaneWave, Pair };
    Kind kind_ = Kind::None;
    double k_ = 0.0, a_ = 0.0;
    double A_ = 1.0;
    Wavepacket phi1_{}, phi2_{};
};

/// All analytic machinery for one run: initial row, boundary strip, and the
/// chi(.,.,0) source terms, specialized by the init_cond class.
class Scenario {
public:
    explicit Scenario(const SimParams& p);

    InitialCondition cls() const { return cls_; }

    /// psi(x, 0): zero for the two-photon classes, the wavepacket for
    /// stimulated emission.
    std::complex<double> psi_initial(double x) const;

    /// Analytic solution in x <= -a (also row 0 at any x <= -a).
    std::complex<double> exact_left(double x, double t) const;

    /// Boundary-condition evaluator; defined strictly left of the mirror
    /// image line. Throws ValidationError for x >= -a.
    std::complex<double> boundary_psi(double x, double t) const;

    /// chi(x1, x2, 0) with its step factors included.
    std::complex<double> chi0(double x1, double x2) const;
    const TwoPhotonInitial& two_photon() const { return chi0_; }

    /// Per-row cache so a boundary row costs one amplitude evaluation.
    struct BoundaryRow {
        double t = 0.0;
        std::complex<double> amp1{0.0, 0.0};
        std::complex<double> amp2{0.0, 0.0};
    };
    BoundaryRow prepare_row(double t) const;
    std::complex<double> eval_row(const BoundaryRow& row, double x) const;

private:
    InitialCondition cls_;
    double a_ = 0.0;
    double k_ = 0.0;
    TwoPhotonInitial chi0_ = TwoPhotonInitial::none();
    Wavepacket phi1_{}, phi2_{};
    AmplitudeSeries amp_a_, amp_b_;  // class-dependent (see .cpp)
    std::complex<double> front1_{1.0, 0.0}, front2_{1.0, 0.0};
    double A_ = 1.0;
};

/// Single-photon scattering state used by the non-Markovianity measures:
/// the qubit amplitude and the photon field it reradiates.
class OneExcitationField {
public:
    OneExcitationField(double k, double alpha, double w0, double gamma, double a);

    /// Qubit amplitude including the wavepacket front phase e^{-ika}, so it
    /// is consistent with the Wavepacket spatial convention.
    std::complex<double> qubit(double t) const;

    /// phi(x, t) = phi(x-t) - sqrt(Gamma/2) [ q(t-x-a) theta(x+a) theta(t-x-a)
    ///                                      - q(t-x+a) theta(x-a) theta(t-x+a) ].
    std::complex<double> photon(double x, double t) const;

    /// Precompute qubit(m*dt) for m in [0, n); photon() then reuses the table
    /// whenever its retarded times land on the grid.
    void build_time_table(std::int64_t n, double dt);

    const Wavepacket& wavepacket() const { return phi_; }

private:
    std::complex<double> qubit_at(double s) const;

    Wavepacket phi_{};
    AmplitudeSeries e_;
    std::complex<double> front_phase_{1.0, 0.0};
    double gamma_ = 0.0, a_ = 0.0;
    std::vector<std::complex<double>> table_;
    double table_dt_ = 0.0;
};

} // namespace dfdt
