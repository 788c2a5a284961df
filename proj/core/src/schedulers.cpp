#include "dfdt/schedulers.hpp"

#include <algorithm>
#include <atomic>
#include <barrier>
#include <chrono>
#include <condition_variable>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

namespace dfdt {

namespace {

constexpr std::uint64_t kPosEnd = std::numeric_limits<std::uint64_t>::max();

/// Published solver position. A worker stores pack(r, j) *before* solving
/// (r, j): everything strictly earlier in its traversal is already written.
/// Each publish is a release store, each wait a (spin, then blocking) acquire.
class PositionSlot {
public:
    void init(std::uint64_t v) { pos_.store(v, std::memory_order_relaxed); }

    void publish(std::uint64_t v) {
        pos_.store(v, std::memory_order_release);
        if (waiters_.load(std::memory_order_acquire) > 0) {
            { std::lock_guard<std::mutex> lk(m_); }
            cv_.notify_all();
        }
    }

    std::uint64_t load() const { return pos_.load(std::memory_order_acquire); }

    /// Blocks until the published position reaches `need`. Returns false on
    /// timeout (deadlock suspicion) or when `abort` is raised.
    bool wait_for(std::uint64_t need, std::chrono::milliseconds timeout,
                  const std::atomic<bool>& abort) {
        for (int spin = 0; spin < 2048; ++spin) {
            if (pos_.load(std::memory_order_acquire) >= need) return true;
        }
        std::unique_lock<std::mutex> lk(m_);
        waiters_.fetch_add(1, std::memory_order_acq_rel);
        const auto deadline = std::chrono::steady_clock::now() + timeout;
        bool ok = true;
        while (pos_.load(std::memory_order_acquire) < need) {
            if (abort.load(std::memory_order_acquire)) { ok = false; break; }
            if (cv_.wait_until(lk, std::min(deadline, std::chrono::steady_clock::now() +
                                                          std::chrono::milliseconds(100))) ==
                    std::cv_status::timeout &&
                std::chrono::steady_clock::now() >= deadline) {
                ok = false;
                break;
            }
        }
        waiters_.fetch_sub(1, std::memory_order_acq_rel);
        return ok;
    }

    void kick() {
        { std::lock_guard<std::mutex> lk(m_); }
        cv_.notify_all();
    }

private:
    std::atomic<std::uint64_t> pos_{0};
    std::atomic<int> waiters_{0};
    std::mutex m_;
    std::condition_variable cv_;
};

struct SwarmShared {
    std::int64_t pack_stride = 0;
    std::uint64_t pack(std::int64_t r, std::int64_t j) const {
        return static_cast<std::uint64_t>(r) * static_cast<std::uint64_t>(pack_stride) +
               static_cast<std::uint64_t>(j);
    }
};

std::string positions_dump(const std::vector<PositionSlot>& slots, std::int64_t stride) {
    std::ostringstream os;
    os << "worker positions:";
    for (std::size_t w = 0; w < slots.size(); ++w) {
        const std::uint64_t v = slots[w].load();
        if (v == kPosEnd) {
            os << " #" << w << "=done";
        } else {
            os << " #" << w << "=(" << v / static_cast<std::uint64_t>(stride) << ","
               << v % static_cast<std::uint64_t>(stride) << ")";
        }
    }
    return os.str();
}

template <bool Checked>
void swarm_worker(GridField& g, const CellKernel& kernel, const RowHooks* hooks,
                  const SwarmOptions& opts, SwarmShared& shared,
                  std::vector<PositionSlot>& slots, int w, int n_workers,
                  std::atomic<bool>& abort) {
    const std::int64_t rows = g.rows();
    const std::int64_t cols = g.cols();
    const std::int64_t j0 = g.params().first_solved_col();
    const std::int64_t lag = opts.lag;
    PositionSlot& mine = slots[static_cast<std::size_t>(w)];
    PositionSlot& pred = slots[static_cast<std::size_t>((w + n_workers - 1) % n_workers)];

    for (std::int64_t r = 1 + w; r < rows; r += n_workers) {
        if (abort.load(std::memory_order_acquire))
            throw SolverError("swarm worker aborted after a peer failure");
        for (std::int64_t j = j0; j < cols; ++j) {
            mine.publish(shared.pack(r, j));
            if (r >= 2 && n_workers > 1) {
                const std::uint64_t need = shared.pack(r - 1, j + lag);
                if (pred.load() < need && !pred.wait_for(need, opts.deadlock_timeout, abort)) {
                    if (abort.load(std::memory_order_acquire))
                        throw SolverError("swarm worker aborted after a peer failure");
                    throw DeadlockError("swarm: no progress within timeout while waiting at (" +
                                        std::to_string(r) + "," + std::to_string(j) + "); " +
                                        positions_dump(slots, shared.pack_stride));
                }
            }
            kernel.update<Checked>(r, j);
        }
        mine.publish(shared.pack(r + 1, 0));  // row complete
        if (hooks) hooks->fire(r);
    }
    mine.publish(kPosEnd);
}

struct FrontRange {
    std::int64_t lo = 0;
    std::int64_t hi = -1;  // inclusive row range of cells (i, s - i)
};

FrontRange front_rows(std::int64_t s, std::int64_t j_lo, std::int64_t j_hi, std::int64_t rows) {
    FrontRange f;
    f.lo = std::max<std::int64_t>(1, s - j_hi);
    f.hi = std::min<std::int64_t>(rows - 1, s - j_lo);
    return f;
}

template <bool Checked>
void wavefront_region(GridField& g, const CellKernel& kernel, std::int64_t j_lo,
                      std::int64_t j_hi, int w, int n_workers, std::barrier<>& sync) {
    const std::int64_t rows = g.rows();
    for (std::int64_t s = 1 + j_lo; s <= rows - 1 + j_hi; ++s) {
        const FrontRange f = front_rows(s, j_lo, j_hi, rows);
        const std::int64_t len = f.hi - f.lo + 1;
        if (len > 0) {
            const std::int64_t chunk = (len + n_workers - 1) / n_workers;
            const std::int64_t lo = f.lo + static_cast<std::int64_t>(w) * chunk;
            const std::int64_t hi = std::min(f.hi, lo + chunk - 1);
            for (std::int64_t i = lo; i <= hi; ++i) kernel.update<Checked>(i, s - i);
        }
        sync.arrive_and_wait();
    }
}

template <bool Checked>
void wavefront_worker(GridField& g, const CellKernel& kernel, int w, int n_workers,
                      std::barrier<>& sync) {
    const SimParams& p = g.params();
    const std::int64_t rows = g.rows();
    const std::int64_t jL = p.Nx + p.nx / 2;        // last column with x <= -a
    const std::int64_t jM = p.Nx + 3 * p.nx / 2;    // last column with x <= a
    const std::int64_t last = g.cols() - 1;

    wavefront_region<Checked>(g, kernel, p.nx, jL, w, n_workers, sync);
    if (w == 0) {
        // Causality ties -a < x <= a to both couplings; one solver, row by row.
        for (std::int64_t i = 1; i < rows; ++i)
            for (std::int64_t j = jL + 1; j <= jM; ++j) kernel.update<Checked>(i, j);
    }
    sync.arrive_and_wait();
    wavefront_region<Checked>(g, kernel, jM + 1, last, w, n_workers, sync);
}

void join_all(std::vector<std::thread>& pool) {
    for (auto& t : pool)
        if (t.joinable()) t.join();
}

} // namespace

const char* to_string(BenchMode m) {
    switch (m) {
    case BenchMode::Serial: return "serial";
    case BenchMode::SerialNoOverhead: return "serial-no-overhead";
    case BenchMode::Swarm: return "swarm";
    case BenchMode::Wavefront: return "wavefront";
    }
    return "?";
}

void run_swarm(GridField& g, const Scenario& sc, const SwarmOptions& opts,
               const RowHooks* hooks) {
    if (opts.workers < 1) throw ValidationError("run_swarm: workers must be >= 1");
    SwarmOptions eff = opts;
    if (eff.lag < 0) eff.lag = g.params().nx;

    const CellKernel kernel(g, sc);
    if (hooks) hooks->fire(0);

    const int n_workers = eff.workers;
    SwarmShared shared;
    shared.pack_stride = g.cols() + eff.lag + 2;
    std::vector<PositionSlot> slots(static_cast<std::size_t>(n_workers));
    for (int w = 0; w < n_workers; ++w)
        slots[static_cast<std::size_t>(w)].init(shared.pack(1 + w, g.params().first_solved_col()));

    if (n_workers == 1) {
        std::atomic<bool> abort{false};
        if (g.checked())
            swarm_worker<true>(g, kernel, hooks, eff, shared, slots, 0, 1, abort);
        else
            swarm_worker<false>(g, kernel, hooks, eff, shared, slots, 0, 1, abort);
        return;
    }

    std::atomic<bool> abort{false};
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n_workers));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_workers));
    for (int w = 0; w < n_workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                if (g.checked())
                    swarm_worker<true>(g, kernel, hooks, eff, shared, slots, w, n_workers, abort);
                else
                    swarm_worker<false>(g, kernel, hooks, eff, shared, slots, w, n_workers, abort);
            } catch (...) {
                errors[static_cast<std::size_t>(w)] = std::current_exception();
                abort.store(true, std::memory_order_release);
                for (auto& s : slots) s.kick();
            }
        });
    }
    join_all(pool);
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

void run_wavefront(GridField& g, const Scenario& sc, int workers, const RowHooks* hooks) {
    if (workers < 1) throw ValidationError("run_wavefront: workers must be >= 1");
    const CellKernel kernel(g, sc);
    if (hooks) hooks->fire(0);

    std::barrier<> sync(workers);
    if (workers == 1) {
        if (g.checked())
            wavefront_worker<true>(g, kernel, 0, 1, sync);
        else
            wavefront_worker<false>(g, kernel, 0, 1, sync);
    } else {
        std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    if (g.checked())
                        wavefront_worker<true>(g, kernel, w, workers, sync);
                    else
                        wavefront_worker<false>(g, kernel, w, workers, sync);
                } catch (...) {
                    errors[static_cast<std::size_t>(w)] = std::current_exception();
                    // Keep the barrier protocol alive so peers can finish.
                    sync.arrive_and_drop();
                }
            });
        }
        join_all(pool);
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }

    if (hooks)
        for (std::int64_t i = 1; i < g.rows(); ++i) hooks->fire(i);
}

void simulate_swarm_interleaved(GridField& g, const Scenario& sc, int workers,
                                std::int64_t lag) {
    if (workers < 1) throw ValidationError("simulate_swarm_interleaved: workers must be >= 1");
    const CellKernel kernel(g, sc);
    const std::int64_t rows = g.rows();
    const std::int64_t cols = g.cols();
    const std::int64_t j0 = g.params().first_solved_col();

    struct State {
        std::int64_t row = 0;  // current row, >= rows when done
        std::int64_t col = 0;
    };
    std::vector<State> st(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        st[static_cast<std::size_t>(w)].row = 1 + w;
        st[static_cast<std::size_t>(w)].col = j0;
    }

    auto packed = [&](const State& s) {
        if (s.row >= rows) return kPosEnd;
        return static_cast<std::uint64_t>(s.row) * static_cast<std::uint64_t>(cols + lag + 2) +
               static_cast<std::uint64_t>(s.col);
    };
    auto runnable = [&](int w) {
        const State& s = st[static_cast<std::size_t>(w)];
        if (s.row >= rows) return false;
        if (s.row < 2 || workers == 1) return true;
        const State& pred = st[static_cast<std::size_t>((w + workers - 1) % workers)];
        const std::uint64_t need =
            static_cast<std::uint64_t>(s.row - 1) * static_cast<std::uint64_t>(cols + lag + 2) +
            static_cast<std::uint64_t>(s.col + lag);
        return packed(pred) >= need;
    };

    while (true) {
        int pick = -1;
        std::int64_t best_row = -1;
        for (int w = 0; w < workers; ++w) {
            const State& s = st[static_cast<std::size_t>(w)];
            if (s.row < rows && s.row > best_row && runnable(w)) {
                best_row = s.row;
                pick = w;
            }
        }
        if (pick < 0) {
            bool all_done = true;
            for (const auto& s : st) all_done = all_done && s.row >= rows;
            if (all_done) break;
            throw DeadlockError("simulate_swarm_interleaved: stuck with unfinished workers");
        }
        State& s = st[static_cast<std::size_t>(pick)];
        kernel.update_checked_dispatch(s.row, s.col);
        if (++s.col >= cols) {
            s.row += workers;
            s.col = j0;
        }
    }
}

std::vector<double> benchmark(const SimParams& p, BenchMode mode, int workers, int repeats) {
    if (repeats < 1) throw ValidationError("benchmark: repeats must be >= 1");
    const Scenario sc(p);
    std::vector<double> samples;
    samples.reserve(static_cast<std::size_t>(repeats));
    for (int r = 0; r < repeats; ++r) {
        GridField g(p, false);
        fill_initial_row(g, sc);
        fill_boundary(g, sc);
        const auto t0 = std::chrono::steady_clock::now();
        switch (mode) {
        case BenchMode::SerialNoOverhead:
            march_serial(g, sc);
            break;
        case BenchMode::Serial: {
            SwarmOptions opts;
            opts.workers = 1;
            run_swarm(g, sc, opts);
            break;
        }
        case BenchMode::Swarm: {
            SwarmOptions opts;
            opts.workers = workers;
            run_swarm(g, sc, opts);
            break;
        }
        case BenchMode::Wavefront:
            run_wavefront(g, sc, workers);
            break;
        }
        const auto t1 = std::chrono::steady_clock::now();
        samples.push_back(std::chrono::duration<double>(t1 - t0).count());
    }
    return samples;
}

} // namespace dfdt
