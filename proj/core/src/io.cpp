#include "dfdt/io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace dfdt {

namespace {

static_assert(std::endian::native == std::endian::little,
              "binary psi format is little-endian; add byte swaps for this platform");

constexpr char kMagic[4] = {'D', 'F', 'D', 'T'};
constexpr std::uint32_t kVersion = 1;
constexpr std::size_t kHeaderBytes = 64;

std::ofstream open_out(const std::string& path, std::ios::openmode mode) {
    std::ofstream f(path, mode);
    if (!f) throw IoError("cannot open for writing: " + path);
    return f;
}

void check_stream(const std::ostream& f, const std::string& path) {
    if (!f) throw IoError("write failed (partial file left on disk): " + path);
}

// %.17g: shortest text that round-trips IEEE doubles.
void append_double(std::string& line, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    line += ' ';
    line += buf;
}

void write_header_lines(std::ofstream& f, const std::vector<std::string>& header) {
    for (const auto& line : header) f << line << '\n';
}

} // namespace

OutputPlan make_output_plan(const SimParams& p) {
    OutputPlan plan;
    plan.save_chi = p.save_chi;
    plan.save_psi = p.save_psi;
    plan.save_psi_binary = p.save_psi_binary;
    plan.save_psi_square_integral = p.save_psi_square_integral;
    plan.measure_NM = p.measure_NM;
    plan.stride = p.Tstep + 1;
    plan.first_col = p.center_col();
    plan.col_count = p.total_cols - plan.first_col;
    return plan;
}

std::vector<std::int64_t> emitted_rows(std::int64_t ny, std::int64_t stride) {
    std::vector<std::int64_t> rows;
    for (std::int64_t i = 0; i < ny; i += stride) rows.push_back(i);
    return rows;
}

void write_psi_text(const GridField& g, const OutputPlan& plan, const std::string& path,
                    const std::vector<std::string>& header) {
    auto f = open_out(path, std::ios::out);
    write_header_lines(f, header);
    std::string line;
    for (const std::int64_t i : emitted_rows(g.rows(), plan.stride)) {
        line.clear();
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", g.t_of_row(i));
        line += buf;
        for (std::int64_t j = plan.first_col; j < g.cols(); ++j) {
            const auto v = g.at(i, j);
            append_double(line, v.real());
            append_double(line, v.imag());
        }
        line += '\n';
        f << line;
    }
    check_stream(f, path);
}

void write_psi_binary(const GridField& g, const OutputPlan& plan, const std::string& path) {
    const auto rows = emitted_rows(g.rows(), plan.stride);
    const SimParams& p = g.params();

    char header[kHeaderBytes] = {};
    std::size_t off = 0;
    auto put = [&](const void* src, std::size_t n) {
        std::memcpy(header + off, src, n);
        off += n;
    };
    const std::uint64_t nx64 = static_cast<std::uint64_t>(p.Nx);
    const std::uint64_t ny64 = static_cast<std::uint64_t>(p.Ny);
    const std::uint64_t nxs64 = static_cast<std::uint64_t>(p.nx);
    const std::uint64_t tstep64 = static_cast<std::uint64_t>(p.Tstep);
    const std::uint64_t cols64 = static_cast<std::uint64_t>(plan.col_count);
    const std::uint64_t rows64 = static_cast<std::uint64_t>(rows.size());
    put(kMagic, 4);
    put(&kVersion, 4);
    put(&nx64, 8);
    put(&ny64, 8);
    put(&nxs64, 8);
    put(&p.Delta, 8);
    put(&tstep64, 8);
    put(&cols64, 8);
    put(&rows64, 8);

    auto f = open_out(path, std::ios::out | std::ios::binary);
    f.write(header, kHeaderBytes);
    for (const std::int64_t i : rows) {
        const auto* first = &g.at(i, plan.first_col);
        f.write(reinterpret_cast<const char*>(first),
                static_cast<std::streamsize>(sizeof(std::complex<double>) * plan.col_count));
    }
    check_stream(f, path);
}

PsiBinary read_psi_binary(const std::string& path) {
    std::ifstream f(path, std::ios::in | std::ios::binary);
    if (!f) throw IoError("cannot open for reading: " + path);
    char header[kHeaderBytes];
    f.read(header, kHeaderBytes);
    if (f.gcount() != static_cast<std::streamsize>(kHeaderBytes))
        throw IoError(path + ": truncated header (" + std::to_string(f.gcount()) +
                      " of 64 bytes)");
    if (std::memcmp(header, kMagic, 4) != 0)
        throw IoError(path + ": bad magic, not a psi binary file");

    PsiBinary out;
    std::size_t off = 4;
    auto get = [&](void* dst, std::size_t n) {
        std::memcpy(dst, header + off, n);
        off += n;
    };
    get(&out.version, 4);
    if (out.version != kVersion)
        throw IoError(path + ": unsupported format version " + std::to_string(out.version));
    std::uint64_t v = 0;
    get(&v, 8); out.Nx = static_cast<std::int64_t>(v);
    get(&v, 8); out.Ny = static_cast<std::int64_t>(v);
    get(&v, 8); out.nx = static_cast<std::int64_t>(v);
    get(&out.Delta, 8);
    get(&v, 8); out.Tstep = static_cast<std::int64_t>(v);
    get(&v, 8); out.cols = static_cast<std::int64_t>(v);
    get(&v, 8); out.rows = static_cast<std::int64_t>(v);

    const std::size_t count = static_cast<std::size_t>(out.rows) * static_cast<std::size_t>(out.cols);
    out.values.resize(count);
    f.read(reinterpret_cast<char*>(out.values.data()),
           static_cast<std::streamsize>(count * sizeof(std::complex<double>)));
    if (f.gcount() != static_cast<std::streamsize>(count * sizeof(std::complex<double>)))
        throw IoError(path + ": truncated payload; expected " + std::to_string(count) +
                      " complex values");
    return out;
}

void write_chi_text(const std::vector<ChiSlice>& slices, const std::string& path,
                    const std::vector<std::string>& header) {
    auto f = open_out(path, std::ios::out);
    write_header_lines(f, header);
    std::string line;
    char buf[40];
    for (const auto& slice : slices) {
        for (std::size_t m = 0; m < slice.chi.size(); ++m) {
            line.clear();
            std::snprintf(buf, sizeof(buf), "%.17g", slice.t);
            line += buf;
            append_double(line, static_cast<double>(m) * slice.tau_step);
            append_double(line, slice.chi[m].real());
            append_double(line, slice.chi[m].imag());
            line += '\n';
            f << line;
        }
    }
    check_stream(f, path);
}

void write_integrals(const std::vector<std::pair<double, double>>& records,
                     const std::string& path, const std::vector<std::string>& header) {
    auto f = open_out(path, std::ios::out);
    write_header_lines(f, header);
    char buf[40];
    for (const auto& [t, value] : records) {
        std::snprintf(buf, sizeof(buf), "%.17g", t);
        std::string line = buf;
        append_double(line, value);
        line += '\n';
        f << line;
    }
    check_stream(f, path);
}

void write_nm(const std::vector<NmRecord>& records, const std::string& path,
              const std::vector<std::string>& header) {
    auto f = open_out(path, std::ios::out);
    write_header_lines(f, header);
    char buf[40];
    for (const auto& r : records) {
        std::snprintf(buf, sizeof(buf), "%.17g", r.t);
        std::string line = buf;
        append_double(line, r.mu.real());
        append_double(line, r.mu.imag());
        append_double(line, r.lambda);
        append_double(line, r.detM);
        append_double(line, r.n_geo_partial);
        append_double(line, r.e0.real());
        append_double(line, r.e0.imag());
        append_double(line, r.e1.real());
        append_double(line, r.e1.imag());
        line += '\n';
        f << line;
    }
    check_stream(f, path);
}

std::uint64_t fnv1a_file(const std::string& path) {
    std::ifstream f(path, std::ios::in | std::ios::binary);
    if (!f) throw IoError("cannot open for checksum: " + path);
    std::uint64_t hash = 14695981039346656037ULL;
    char buf[1 << 16];
    while (f) {
        f.read(buf, sizeof(buf));
        const std::streamsize n = f.gcount();
        for (std::streamsize i = 0; i < n; ++i) {
            hash ^= static_cast<unsigned char>(buf[i]);
            hash *= 1099511628211ULL;
        }
    }
    return hash;
}

ManifestEntry manifest_entry(const std::string& path, const std::string& name) {
    std::ifstream f(path, std::ios::in | std::ios::binary | std::ios::ate);
    if (!f) throw IoError("manifest: cannot stat " + path);
    ManifestEntry e;
    e.name = name;
    e.bytes = static_cast<std::uint64_t>(f.tellg());
    std::ostringstream os;
    os << std::hex << fnv1a_file(path);
    e.checksum = os.str();
    return e;
}

void write_manifest(const std::string& path, const SimParams& p,
                    const std::vector<std::string>& echo,
                    const std::vector<ManifestEntry>& files,
                    const std::vector<std::pair<std::string, double>>& timings_seconds) {
    auto f = open_out(path, std::ios::out);
    f << "# dfdt run manifest\n";
    for (const auto& line : echo) f << line << '\n';
    f << "# Tmax_rows = " << t_max_rows(p) << '\n';
    f << "# memory_estimate_bytes = " << memory_estimate(p) << '\n';
    f << "# files (name bytes fnv1a64):\n";
    for (const auto& e : files) f << e.name << ' ' << e.bytes << ' ' << e.checksum << '\n';
    f << "# timings (seconds):\n";
    char buf[64];
    for (const auto& [name, seconds] : timings_seconds) {
        std::snprintf(buf, sizeof(buf), "%.6f", seconds);
        f << name << ' ' << buf << '\n';
    }
    check_stream(f, path);
}

} // namespace dfdt
