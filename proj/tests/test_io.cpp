#include <doctest.h>

#include "dfdt/io.hpp"
#include "dfdt/kernel.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace dfdt;
using cplx = std::complex<double>;

namespace {

SimParams make_params(std::int64_t Nx, std::int64_t Ny, std::int64_t nx, std::int64_t Tstep) {
    SimParams p;
    p.Nx = Nx;
    p.Ny = Ny;
    p.nx = nx;
    p.Delta = 0.1;
    p.k = 1.2;
    p.k1 = p.k2 = p.k;
    p.w0 = 9.0;
    p.gamma = 0.9;
    p.init_cond = InitialCondition::TwoPhotonPlaneWave;
    p.save_psi = p.save_psi_binary = p.save_chi = p.save_psi_square_integral = true;
    p.Tstep = Tstep;
    p.a = 0.5 * static_cast<double>(nx) * p.Delta;
    p.total_cols = 2 * Nx + nx + 1;
    return p;
}

GridField solved(const SimParams& p, const Scenario& sc) {
    GridField g(p);
    fill_initial_row(g, sc);
    fill_boundary(g, sc);
    march_serial(g, sc);
    return g;
}

std::filesystem::path scratch_dir() {
    const auto dir = std::filesystem::temp_directory_path() / "dfdt_io_test";
    std::filesystem::create_directories(dir);
    return dir;
}

std::vector<std::vector<double>> parse_text_rows(const std::string& path) {
    std::ifstream f(path);
    REQUIRE(f.good());
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream is(line);
        std::vector<double> vals;
        double v;
        while (is >> v) vals.push_back(v);
        rows.push_back(std::move(vals));
    }
    return rows;
}

} // namespace

TEST_CASE("output plan and emitted rows") {
    const auto p = make_params(20, 11, 4, 2);
    const auto plan = make_output_plan(p);
    CHECK(plan.stride == 3);
    CHECK(plan.first_col == p.center_col());
    CHECK(plan.col_count == p.Nx + p.nx / 2 + 1);

    CHECK(emitted_rows(11, 3) == std::vector<std::int64_t>{0, 3, 6, 9});
    // Tstep = 99 emits every hundredth row.
    const auto rows = emitted_rows(301, 100);
    CHECK(rows == std::vector<std::int64_t>{0, 100, 200, 300});
}

TEST_CASE("binary psi round-trips bit-exactly and its size is exact") {
    const auto p = make_params(20, 13, 4, 1);
    const Scenario sc(p);
    const GridField g = solved(p, sc);
    const auto plan = make_output_plan(p);
    const auto path = (scratch_dir() / "psi.bin").string();
    write_psi_binary(g, plan, path);

    const auto rows = emitted_rows(p.Ny, plan.stride);
    const auto bytes = std::filesystem::file_size(path);
    CHECK(bytes == 64 + 16 * rows.size() * static_cast<std::size_t>(plan.col_count));

    const auto back = read_psi_binary(path);
    CHECK(back.version == 1);
    CHECK(back.Nx == p.Nx);
    CHECK(back.Ny == p.Ny);
    CHECK(back.nx == p.nx);
    CHECK(back.Delta == p.Delta);
    CHECK(back.Tstep == p.Tstep);
    CHECK(back.cols == plan.col_count);
    CHECK(back.rows == static_cast<std::int64_t>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::int64_t c = 0; c < plan.col_count; ++c) {
            const cplx expected = g.at(rows[r], plan.first_col + c);
            CHECK(back.values[r * static_cast<std::size_t>(plan.col_count) +
                              static_cast<std::size_t>(c)] == expected);
        }
    }
}

TEST_CASE("text psi round-trips to the same doubles and hides x < -a") {
    const auto p = make_params(16, 9, 4, 2);
    const Scenario sc(p);
    const GridField g = solved(p, sc);
    const auto plan = make_output_plan(p);
    const auto path = (scratch_dir() / "psi.txt").string();
    write_psi_text(g, plan, path, {"# test header"});

    const auto rows = parse_text_rows(path);
    const auto emitted = emitted_rows(p.Ny, plan.stride);
    REQUIRE(rows.size() == emitted.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        REQUIRE(rows[r].size() == 1 + 2 * static_cast<std::size_t>(plan.col_count));
        CHECK(rows[r][0] == g.t_of_row(emitted[r]));
        for (std::int64_t c = 0; c < plan.col_count; ++c) {
            const cplx expected = g.at(emitted[r], plan.first_col + c);
            CHECK(rows[r][1 + 2 * static_cast<std::size_t>(c)] == expected.real());
            CHECK(rows[r][2 + 2 * static_cast<std::size_t>(c)] == expected.imag());
        }
    }
    // First emitted column is x = -a exactly: nothing left of it in the file.
    CHECK(g.x_of_col(plan.first_col) == doctest::Approx(-p.a).epsilon(1e-15));
}

TEST_CASE("text and binary decode to identical values") {
    const auto p = make_params(12, 8, 4, 0);
    const Scenario sc(p);
    const GridField g = solved(p, sc);
    const auto plan = make_output_plan(p);
    const auto tpath = (scratch_dir() / "both.txt").string();
    const auto bpath = (scratch_dir() / "both.bin").string();
    write_psi_text(g, plan, tpath, {});
    write_psi_binary(g, plan, bpath);
    const auto text = parse_text_rows(tpath);
    const auto bin = read_psi_binary(bpath);
    REQUIRE(static_cast<std::int64_t>(text.size()) == bin.rows);
    for (std::size_t r = 0; r < text.size(); ++r)
        for (std::int64_t c = 0; c < bin.cols; ++c) {
            const cplx v = bin.values[r * static_cast<std::size_t>(bin.cols) +
                                      static_cast<std::size_t>(c)];
            CHECK(text[r][1 + 2 * static_cast<std::size_t>(c)] == v.real());
            CHECK(text[r][2 + 2 * static_cast<std::size_t>(c)] == v.imag());
        }
}

TEST_CASE("re-running produces byte-identical text output") {
    const auto p = make_params(10, 6, 2, 1);
    const Scenario sc(p);
    const GridField g = solved(p, sc);
    const auto plan = make_output_plan(p);
    const auto p1 = (scratch_dir() / "rerun1.txt").string();
    const auto p2 = (scratch_dir() / "rerun2.txt").string();
    write_psi_text(g, plan, p1, {"# header"});
    write_psi_text(g, plan, p2, {"# header"});
    CHECK(fnv1a_file(p1) == fnv1a_file(p2));
}

TEST_CASE("truncated and foreign binary files raise structured errors") {
    const auto p = make_params(10, 6, 2, 0);
    const Scenario sc(p);
    const GridField g = solved(p, sc);
    const auto plan = make_output_plan(p);
    const auto path = (scratch_dir() / "trunc.bin").string();
    write_psi_binary(g, plan, path);

    std::filesystem::resize_file(path, 40);  // inside the header
    CHECK_THROWS_AS(read_psi_binary(path), IoError);

    write_psi_binary(g, plan, path);
    std::filesystem::resize_file(path, std::filesystem::file_size(path) - 8);
    CHECK_THROWS_AS(read_psi_binary(path), IoError);

    const auto bogus = (scratch_dir() / "bogus.bin").string();
    std::ofstream(bogus, std::ios::binary) << "not a dfdt file at all, padded to 64 bytes......"
                                           << "................";
    CHECK_THROWS_AS(read_psi_binary(bogus), IoError);
}

TEST_CASE("chi, integral and nm writers") {
    const auto dir = scratch_dir();

    std::vector<ChiSlice> slices(1);
    slices[0].t = 0.3;
    slices[0].tau_step = 0.1;
    slices[0].chi = {cplx(1.0, -2.0), cplx(0.25, 0.5)};
    const auto cpath = (dir / "chi.txt").string();
    write_chi_text(slices, cpath, {});
    const auto crows = parse_text_rows(cpath);
    REQUIRE(crows.size() == 2);
    CHECK(crows[0] == std::vector<double>{0.3, 0.0, 1.0, -2.0});
    CHECK(crows[1] == std::vector<double>{0.3, 0.1, 0.25, 0.5});

    const auto ipath = (dir / "integral.txt").string();
    write_integrals({{0.0, 1.0}, {0.1, 0.75}}, ipath, {"# h"});
    const auto irows = parse_text_rows(ipath);
    REQUIRE(irows.size() == 2);
    CHECK(irows[1] == std::vector<double>{0.1, 0.75});

    std::vector<NmRecord> recs(2);
    recs[0].t = 0.0;
    recs[0].mu = cplx(1.0, 0.0);
    recs[0].lambda = 1.0;
    recs[0].detM = 1.0;
    recs[0].e1 = cplx(1.0, 0.0);
    recs[1] = recs[0];
    recs[1].t = 0.1;
    recs[1].detM = 1.25;
    recs[1].n_geo_partial = 0.25;
    const auto npath = (dir / "nm.txt").string();
    write_nm(recs, npath, {});
    const auto nrows = parse_text_rows(npath);
    REQUIRE(nrows.size() == 2);
    REQUIRE(nrows[0].size() == 10);
    CHECK(nrows[1][5] >= nrows[0][5]);  // n_geo_partial column nondecreasing
}

TEST_CASE("manifest entries carry sizes and checksums") {
    const auto dir = scratch_dir();
    const auto fpath = (dir / "some.txt").string();
    std::ofstream(fpath) << "hello\n";
    const auto entry = manifest_entry(fpath, "some.txt");
    CHECK(entry.bytes == 6);
    CHECK(!entry.checksum.empty());

    const auto p = make_params(10, 6, 2, 0);
    const auto mpath = (dir / "manifest.txt").string();
    write_manifest(mpath, p, parameter_echo(p), {entry}, {{"solve", 0.125}});
    std::ifstream f(mpath);
    std::string all((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    CHECK(all.find("some.txt 6 " + entry.checksum) != std::string::npos);
    CHECK(all.find("# Tmax_rows") != std::string::npos);
    CHECK(all.find("solve 0.125") != std::string::npos);
}
