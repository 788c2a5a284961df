// dfdt: solve the delayed two-excitation transport equation on a spacetime
// grid, with analytic boundary generation, two scheduling strategies, and
// in-situ post-processing.

#include "dfdt/grid.hpp"
#include "dfdt/io.hpp"
#include "dfdt/kernel.hpp"
#include "dfdt/params.hpp"
#include "dfdt/postprocess.hpp"
#include "dfdt/schedulers.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace {

// Exit codes: 0 ok, 1 internal, 2 usage/validation, 3 allocation, 4 solver, 5 I/O.
enum ExitCode {
    kOk = 0,
    kInternal = 1,
    kUsage = 2,
    kAllocation = 3,
    kSolver = 4,
    kIo = 5,
};

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

dfdt::BenchMode bench_mode_from(const std::string& mode) {
    if (mode == "serial") return dfdt::BenchMode::Serial;
    if (mode == "serial-no-overhead") return dfdt::BenchMode::SerialNoOverhead;
    if (mode == "swarm") return dfdt::BenchMode::Swarm;
    if (mode == "wavefront") return dfdt::BenchMode::Wavefront;
    throw dfdt::ValidationError("unknown mode: " + mode);
}

int run(int argc, char** argv) {
    CLI::App app{"FDTD solver for the delayed two-excitation transport equation"};
    std::string input_path;
    std::string outdir = ".";
    std::string mode = "auto";
    int workers = -1;
    bool bench = false;
    int repeats = 1;
    bool check = false;
    double mem_limit_gb = 0.0;

    app.add_option("--input", input_path, "input parameter file (key=value lines)")
        ->required();
    app.add_option("--outdir", outdir, "output directory (created if missing)");
    app.add_option("--mode", mode,
                   "serial | swarm | wavefront (default: serial, or wavefront when "
                   "workers > 1); --bench also accepts serial-no-overhead")
        ->check(CLI::IsMember({"auto", "serial", "swarm", "wavefront", "serial-no-overhead"}));
    app.add_option("--workers", workers, "worker count (default: Nth from the input file)");
    app.add_flag("--bench", bench, "time the solve instead of writing outputs");
    app.add_option("--repeats", repeats, "benchmark repetitions")->check(CLI::PositiveNumber);
    app.add_flag("--check", check, "enable the write-once/read-after-write sentinel");
    app.add_option("--mem-limit-gb", mem_limit_gb,
                   "refuse to allocate more than this many GB (0 = no limit)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    std::ifstream input(input_path);
    if (!input) {
        std::cerr << "error: cannot open input file: " << input_path << "\n\n"
                  << app.help() << std::endl;
        return kUsage;
    }

    const dfdt::RawInput raw = dfdt::parse_input(input);
    std::vector<std::string> warnings;
    const dfdt::SimParams p = dfdt::validate(raw, &warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';

    if (workers < 0) workers = p.Nth;
    if (mode == "auto") mode = workers > 1 ? "wavefront" : "serial";
    if (mode == "serial-no-overhead" && !bench)
        throw dfdt::ValidationError("--mode serial-no-overhead is a benchmark-only mode");

    const auto echo = dfdt::parameter_echo(p);
    for (const auto& line : echo) std::cout << line << '\n';
    std::cout << "# mode = " << mode << ", workers = " << workers << '\n';

    const std::uint64_t bytes = dfdt::memory_estimate(p);
    std::cout << "# memory_estimate_bytes = " << bytes << '\n';
    if (mem_limit_gb > 0.0 &&
        static_cast<double>(bytes) > mem_limit_gb * 1024.0 * 1024.0 * 1024.0)
        throw dfdt::AllocationError("grid of " + std::to_string(bytes) +
                                    " bytes exceeds --mem-limit-gb");

    if (bench) {
        const auto samples = dfdt::benchmark(p, bench_mode_from(mode), workers, repeats);
        std::cout << "mode,workers,run_index,elapsed_seconds\n";
        char buf[64];
        for (std::size_t i = 0; i < samples.size(); ++i) {
            std::snprintf(buf, sizeof(buf), "%.6f", samples[i]);
            std::cout << mode << ',' << workers << ',' << i << ',' << buf << '\n';
        }
        return kOk;
    }

    std::filesystem::create_directories(outdir);
    const auto out = [&](const std::string& name) { return outdir + "/" + name; };

    const dfdt::Scenario sc(p);
    const dfdt::OutputPlan plan = dfdt::make_output_plan(p);

    Timer fill_timer;
    dfdt::GridField grid(p, check);
    dfdt::fill_initial_row(grid, sc);
    dfdt::fill_boundary(grid, sc);
    const double fill_seconds = fill_timer.seconds();

    // In-situ hooks: spatial integrals and the non-Markovianity measures are
    // collected per selected row while the march is still running.
    dfdt::RowHooks hooks;
    hooks.stride = p.Tstep + 1;
    std::vector<double> integral_slots(static_cast<std::size_t>(p.Ny), 0.0);
    std::vector<char> integral_present(static_cast<std::size_t>(p.Ny), 0);
    if (p.save_psi_square_integral) {
        hooks.on_row.push_back([&](std::int64_t row) {
            integral_slots[static_cast<std::size_t>(row)] = dfdt::psi_square_integral(grid, row);
            integral_present[static_cast<std::size_t>(row)] = 1;
        });
    }
    std::optional<dfdt::NmAccumulator> nm;
    if (p.measure_NM) {
        nm.emplace(p);
        hooks.on_row.push_back([&](std::int64_t row) {
            if (row <= nm->tmax_rows()) nm->compute_row(grid, row);
        });
    }

    Timer solve_timer;
    if (mode == "serial") {
        dfdt::march_serial(grid, sc, &hooks);
    } else if (mode == "swarm") {
        dfdt::SwarmOptions opts;
        opts.workers = workers;
        dfdt::run_swarm(grid, sc, opts, &hooks);
    } else {
        dfdt::run_wavefront(grid, sc, workers, &hooks);
    }
    const double solve_seconds = solve_timer.seconds();
    if (grid.checked() && grid.sentinel_violations() > 0)
        throw dfdt::SolverError("sentinel violations detected: " + grid.first_violation());

    Timer write_timer;
    std::vector<dfdt::ManifestEntry> files;
    if (p.save_psi) {
        dfdt::write_psi_text(grid, plan, out("psi.txt"), echo);
        files.push_back(dfdt::manifest_entry(out("psi.txt"), "psi.txt"));
    }
    if (p.save_psi_binary) {
        dfdt::write_psi_binary(grid, plan, out("psi.bin"));
        files.push_back(dfdt::manifest_entry(out("psi.bin"), "psi.bin"));
    }
    if (p.save_chi) {
        std::vector<dfdt::ChiSlice> slices;
        for (const std::int64_t row : dfdt::emitted_rows(p.Ny, plan.stride))
            slices.push_back(dfdt::chi_detector_slice(grid, sc, row));
        dfdt::write_chi_text(slices, out("chi.txt"), echo);
        files.push_back(dfdt::manifest_entry(out("chi.txt"), "chi.txt"));
    }
    if (p.save_psi_square_integral) {
        std::vector<std::pair<double, double>> records;
        for (std::int64_t i = 0; i < p.Ny; ++i)
            if (integral_present[static_cast<std::size_t>(i)])
                records.emplace_back(p.t_of_row(i), integral_slots[static_cast<std::size_t>(i)]);
        dfdt::write_integrals(records, out("psi_square_integral.txt"), echo);
        files.push_back(
            dfdt::manifest_entry(out("psi_square_integral.txt"), "psi_square_integral.txt"));
    }
    if (nm) {
        dfdt::write_nm(nm->finalize(), out("nm.txt"), echo);
        files.push_back(dfdt::manifest_entry(out("nm.txt"), "nm.txt"));
    }
    const double write_seconds = write_timer.seconds();

    dfdt::write_manifest(out("manifest.txt"), p, echo, files,
                         {{"fill", fill_seconds}, {"solve", solve_seconds},
                          {"write", write_seconds}});
    std::cout << "# solve_seconds = " << solve_seconds << '\n';
    std::cout << "# manifest = " << out("manifest.txt") << '\n';
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const dfdt::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const dfdt::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const dfdt::AllocationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kAllocation;
    } catch (const dfdt::SolverError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kSolver;
    } catch (const dfdt::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIo;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kInternal;
    }
}
