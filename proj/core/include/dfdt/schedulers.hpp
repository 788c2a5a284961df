#pragma once

#include "dfdt/kernel.hpp"

#include <chrono>
#include <cstdint>
#include <vector>

namespace dfdt {

struct DeadlockError : SolverError {
    using SolverError::SolverError;
};

struct SwarmOptions {
    int workers = 1;
    /// Minimum column lead the row-(r-1) worker must hold over the row-r
    /// worker. Defaults to nx, the smallest safe value; smaller values are
    /// only for the negative scheduling tests.
    std::int64_t lag = -1;
    std::chrono::milliseconds deadlock_timeout{30000};
};

/// Row-pipelined workers with the cyclic lag relation: rows are dealt
/// round-robin, each worker waits until its predecessor (one row below) is at
/// least `lag` columns ahead, publishes its own position after every cell,
/// and wraps onto the next row when done. Bit-identical to march_serial.
void run_swarm(GridField& g, const Scenario& sc, const SwarmOptions& opts,
               const RowHooks* hooks = nullptr);

/// Three-region sweep: x <= -a by anti-diagonal fronts, -a < x <= a by a
/// single worker row-by-row, x > a by fronts again. Cells on one front are
/// mutually independent; a barrier separates consecutive fronts. Bit-identical
/// to march_serial.
void run_wavefront(GridField& g, const Scenario& sc, int workers,
                   const RowHooks* hooks = nullptr);

/// Deterministic single-threaded replay of the swarm ordering: repeatedly
/// advances the most-advanced runnable worker by one cell, i.e. successors
/// push as close to the lag constraint as it allows. With a checked grid this
/// turns an unsafe lag into reproducible sentinel violations.
void simulate_swarm_interleaved(GridField& g, const Scenario& sc, int workers,
                                std::int64_t lag);

enum class BenchMode { Serial, SerialNoOverhead, Swarm, Wavefront };
const char* to_string(BenchMode m);

/// Wall-clock seconds of the solve phase (grid fill excluded), one sample per
/// repeat. Serial runs the swarm machinery with one worker; SerialNoOverhead
/// bypasses all synchronization.
std::vector<double> benchmark(const SimParams& p, BenchMode mode, int workers, int repeats);

} // namespace dfdt
