#pragma once

#include "dfdt/grid.hpp"
#include "dfdt/postprocess.hpp"

#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace dfdt {

/// Row/column selection shared by all psi writers: every (Tstep+1)-th row,
/// columns with x >= -a only (the left half is analytic and never written to
/// disk).
struct OutputPlan {
    bool save_chi = false;
    bool save_psi = false;
    bool save_psi_binary = false;
    bool save_psi_square_integral = false;
    bool measure_NM = false;
    std::int64_t stride = 1;     // Tstep + 1
    std::int64_t first_col = 0;  // column of x = -a
    std::int64_t col_count = 0;  // emitted columns per row
};

OutputPlan make_output_plan(const SimParams& p);

/// Row indices emitted under the stride; always starts at row 0.
std::vector<std::int64_t> emitted_rows(std::int64_t ny, std::int64_t stride);

/// Plain-text psi: one line per emitted row,
///   t re(psi(x0)) im(psi(x0)) re(psi(x1)) im(psi(x1)) ...
/// 17 significant digits (lossless double round-trip); `header` lines are
/// written first, each already formatted as a `# ...` comment.
void write_psi_text(const GridField& g, const OutputPlan& plan, const std::string& path,
                    const std::vector<std::string>& header);

/// Binary psi: 64-byte header (magic "DFDT", version, Nx, Ny, nx, Delta,
/// Tstep, emitted column and row counts), then little-endian IEEE-754
/// (re, im) double pairs in row-major order.
void write_psi_binary(const GridField& g, const OutputPlan& plan, const std::string& path);

struct PsiBinary {
    std::uint32_t version = 0;
    std::int64_t Nx = 0, Ny = 0, nx = 0;
    double Delta = 0.0;
    std::int64_t Tstep = 0;
    std::int64_t cols = 0, rows = 0;
    std::vector<std::complex<double>> values;  // rows * cols, row-major
};

/// Bit-exact reader for write_psi_binary output. Truncated or foreign files
/// produce structured IoErrors.
PsiBinary read_psi_binary(const std::string& path);

/// chi slices: `t tau re(chi) im(chi)` rows.
void write_chi_text(const std::vector<ChiSlice>& slices, const std::string& path,
                    const std::vector<std::string>& header);

/// `t value` rows.
void write_integrals(const std::vector<std::pair<double, double>>& records,
                     const std::string& path, const std::vector<std::string>& header);

/// `t re(mu) im(mu) lambda detM n_geo_partial re(e0) im(e0) re(e1) im(e1)` rows.
void write_nm(const std::vector<NmRecord>& records, const std::string& path,
              const std::vector<std::string>& header);

std::uint64_t fnv1a_file(const std::string& path);

struct ManifestEntry {
    std::string name;
    std::uint64_t bytes = 0;
    std::string checksum;  // fnv1a-64, hex
};
ManifestEntry manifest_entry(const std::string& path, const std::string& name);

/// Plain-text run manifest: parameter echo, geometry, Tmax, file list with
/// sizes and checksums, timing summary. Written last; its presence marks a
/// completed run.
void write_manifest(const std::string& path, const SimParams& p,
                    const std::vector<std::string>& echo,
                    const std::vector<ManifestEntry>& files,
                    const std::vector<std::pair<std::string, double>>& timings_seconds);

} // namespace dfdt
