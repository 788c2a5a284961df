#pragma once

#include "dfdt/errors.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace dfdt {

/// Which analytic scenario the solver is set up for. Values match the
/// `init_cond` input parameter.
enum class InitialCondition : int {
    TwoPhotonPlaneWave = 1,   // CW pair, qubit in ground state
    StimulatedEmission = 2,   // single exponential wavepacket, qubit excited
    TwoPhotonWavepacket = 3,  // exponential wavepacket pair, qubit in ground state
};

/// Raw `key=value` pairs from an input file, before validation.
/// Unknown and duplicate keys are rejected at parse time.
struct RawInput {
    std::map<std::string, std::string> values;

    bool has(const std::string& key) const { return values.count(key) != 0; }
};

/// Parse an input stream of `key=value` lines. Full lines starting with `#`
/// are comments; blank lines are skipped. Malformed lines report their line
/// number.
RawInput parse_input(std::istream& in);
RawInput parse_input_file(const std::string& path);

/// Validated, immutable parameter set plus derived grid geometry.
///
/// Geometry conventions (space step == time step == Delta, c = 1):
///   columns j in [0, total_cols), x = (j - Nx - nx) * Delta
///   rows    i in [0, Ny),         t = i * Delta
///   boundary strip: columns [0, nx); solved columns [nx, total_cols)
///   x = -a sits exactly at the center column (total_cols - 1) / 2
struct SimParams {
    std::int64_t Nx = 0;  // solved columns along x are 2*Nx + 1
    std::int64_t Ny = 0;  // temporal rows, t/Delta in [0, Ny-1]
    std::int64_t nx = 0;  // 2a/Delta, positive even, nx <= 2*Nx
    double Delta = 0.0;

    double k = 0.0;       // driving frequency
    double k1 = 0.0, k2 = 0.0;
    double w0 = 0.0;      // two-level-system frequency
    double gamma = 0.0;   // two-level-system decay rate

    InitialCondition init_cond = InitialCondition::TwoPhotonPlaneWave;
    double alpha = 0.0;   // wavepacket width, units of gamma
    double alpha1 = 0.0, alpha2 = 0.0;
    bool identical_photons = true;

    bool save_chi = false;
    bool save_psi = false;
    bool save_psi_binary = false;
    bool save_psi_square_integral = false;
    bool measure_NM = false;
    std::int64_t Tstep = 0;  // emit rows i with i % (Tstep+1) == 0
    int Nth = 1;             // worker count

    // Derived.
    double a = 0.0;               // (nx/2) * Delta
    std::int64_t total_cols = 0;  // 2*Nx + nx + 1

    std::int64_t center_col() const { return (total_cols - 1) / 2; }  // x = -a
    std::int64_t first_solved_col() const { return nx; }
    double x_of_col(std::int64_t j) const { return static_cast<double>(j - Nx - nx) * Delta; }
    double t_of_row(std::int64_t i) const { return static_cast<double>(i) * Delta; }
};

/// Check every invariant, apply defaults, and derive geometry. Each violated
/// invariant produces a distinct, named ValidationError. Advisory conditions
/// (w0/gamma < 10) are appended to `warnings` when given.
SimParams validate(const RawInput& raw, std::vector<std::string>* warnings = nullptr);

/// Dimensionless problem statement: K = k/gamma, W = w0/gamma, n = k0*a/pi.
struct PhysicalSpec {
    double K = 0.0;
    double W = 0.0;
    double n = 0.0;
    std::int64_t nx = 0;
    double Delta = 0.0;
};

struct PhysicalValues {
    double k = 0.0;
    double w0 = 0.0;
    double gamma = 0.0;
    double lambda0 = 0.0;
};

/// Convert a dimensionless spec into simulation frequencies:
///   k  = 2 n pi K / (nx W Delta),  w0 = 2 n pi / (nx Delta),
///   Gamma = 2 n pi / (nx W Delta), lambda0 = nx Delta / n.
PhysicalValues convert_physical(const PhysicalSpec& spec);

/// Bytes needed for the spacetime array: 16 * Ny * total_cols.
/// Throws ValidationError if the count overflows a 64-bit size.
std::uint64_t memory_estimate(const SimParams& p);

/// Render the validated parameter block as `# key = value` header lines,
/// used both for stdout provenance and for text-output file headers.
std::vector<std::string> parameter_echo(const SimParams& p);

} // namespace dfdt
