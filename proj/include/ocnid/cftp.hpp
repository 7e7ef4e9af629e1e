#pragma once

// Epsilon-perfect coupling from the past. Each attempt of depth n builds two
// trajectories at time -n — an upper one started by a single sweep from the
// all-at-upper-limit state and a lower one started from a scalar lower bound
// produced by a staggered single-component chain — then evolves both to time
// 0 with the same stored uniforms. When the squared componentwise gap at
// time 0 falls below epsilon the attempt succeeds and the midpoint of the
// bracket is returned. Failed attempts restart one step deeper in the past,
// reusing every previously generated uniform vector, which costs exactly one
// new vector per retry.

#include <algorithm>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "ocnid/gibbs.hpp"
#include "ocnid/rng.hpp"

namespace ocnid {

struct PerfectDraw {
    std::vector<double> values;  // componentwise bracket midpoints at time 0
    int bct;                     // backward coupling time: depth of the successful attempt
    double gap;                  // achieved squared gap (the quantity compared to epsilon)
};

struct CoupledState {
    std::vector<double> lower;
    std::vector<double> upper;
};

enum class Schedule {
    Linear,    // attempt depths 1, 2, 3, ...
    Doubling,  // attempt depths 1, 2, 4, 8, ...
};

class NonCoalescenceError : public std::runtime_error {
public:
    NonCoalescenceError(int max_n, double last_gap)
        : std::runtime_error("no coalescence within max depth " + std::to_string(max_n) +
                             " (last squared gap " + std::to_string(last_gap) + ")"),
          last_gap_(last_gap) {}
    double last_gap() const { return last_gap_; }

private:
    double last_gap_;
};

namespace detail {

inline double squared_gap(const CoupledState& st) {
    double s = 0.0;
    for (std::size_t i = 0; i < st.lower.size(); ++i) {
        double d = st.upper[i] - st.lower[i];
        if (!std::isfinite(d)) return kInf;
        s += d * d;
    }
    return s;
}

// Restores lower <= upper after an update. Exact arithmetic guarantees the
// sandwich, but the iterative inverse-gamma quantile can land the two chains
// a few ulps apart in the wrong order once they have essentially coalesced;
// such inversions are snapped onto the upper value. Anything beyond rounding
// noise is a genuine monotonicity violation and aborts.
inline void enforce_sandwich(CoupledState& st) {
    for (std::size_t i = 0; i < st.lower.size(); ++i) {
        if (st.lower[i] > st.upper[i]) {
            double diff = st.lower[i] - st.upper[i];
            double scale = std::max({1.0, std::fabs(st.lower[i]), std::fabs(st.upper[i])});
            if (diff > 1e-9 * scale) {
                char msg[160];
                std::snprintf(msg, sizeof msg,
                              "coupling invariant violated: lower above upper by %.3e at "
                              "component %zu (lower %.17g)",
                              diff, i, st.lower[i]);
                throw std::logic_error(msg);
            }
            st.lower[i] = st.upper[i];
        }
    }
}

}  // namespace detail

// Runs one attempt of depth n and leaves the time-0 states in `st`.
// Returns the squared gap at time 0.
template <class Store>
double run_attempt(const std::vector<Distribution>& dists, Store& store, int n, CoupledState& st) {
    const std::size_t m = dists.size();
    st.upper = upper_start(dists, store.row(n));
    st.lower.assign(m, lower_start(dists, store, n));
    detail::enforce_sandwich(st);
    for (int t = n - 1; t >= 0; --t) {
        const std::vector<double>& u = store.row(t);
        gibbs_sweep(dists, st.upper, u);
        gibbs_sweep(dists, st.lower, u);
        detail::enforce_sandwich(st);
    }
    return detail::squared_gap(st);
}

// One epsilon-perfect draw. `store` supplies (and retains) the uniform
// vectors; `final_state` optionally receives the terminal bracket.
template <class Store>
PerfectDraw perfect_draw(const std::vector<Distribution>& dists, double eps, Store& store,
                         int max_n = 10000, Schedule schedule = Schedule::Linear,
                         CoupledState* final_state = nullptr) {
    if (!(eps > 0.0) || !std::isfinite(eps))
        throw std::invalid_argument("perfect_draw: epsilon must be positive and finite");
    if (max_n < 1) throw std::invalid_argument("perfect_draw: max depth must be >= 1");
    validate_family(dists);

    CoupledState st;
    double gap = kInf;
    int n = 1;
    while (n <= max_n) {
        gap = run_attempt(dists, store, n, st);
        if (gap < eps) {
            PerfectDraw out;
            out.bct = n;
            out.gap = gap;
            out.values.resize(dists.size());
            for (std::size_t i = 0; i < dists.size(); ++i)
                out.values[i] = st.lower[i] + 0.5 * (st.upper[i] - st.lower[i]);
            if (final_state) *final_state = st;
            return out;
        }
        n = (schedule == Schedule::Doubling) ? 2 * n : n + 1;
    }
    throw NonCoalescenceError(max_n, gap);
}

struct BatchOptions {
    int max_n = 10000;
    Schedule schedule = Schedule::Linear;
    int threads = 1;
};

// Batch of independent perfect draws. Draw k uses substream k of `seed`, so
// the result is identical for any thread count and any execution order.
inline std::vector<PerfectDraw> draw_batch(const std::vector<Distribution>& dists, double eps,
                                           std::size_t count, std::uint64_t seed,
                                           const BatchOptions& opts = {}) {
    validate_family(dists);
    if (!(eps > 0.0) || !std::isfinite(eps))
        throw std::invalid_argument("draw_batch: epsilon must be positive and finite");

    std::vector<PerfectDraw> out(count);
    const int m = static_cast<int>(dists.size());

    auto worker = [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) {
            UniformStore store(m, seed, k);
            out[k] = perfect_draw(dists, eps, store, opts.max_n, opts.schedule);
        }
    };

    int threads = opts.threads;
    if (threads < 1) threads = 1;
    if (static_cast<std::size_t>(threads) > count && count > 0)
        threads = static_cast<int>(count);

    if (threads == 1) {
        worker(0, count);
    } else {
        // Exceptions (e.g. non-coalescence) must cross the join, so each
        // worker parks the first one it sees and the caller rethrows.
        std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
        std::vector<std::thread> pool;
        std::size_t chunk = (count + threads - 1) / threads;
        for (int w = 0; w < threads; ++w) {
            std::size_t begin = static_cast<std::size_t>(w) * chunk;
            std::size_t end = begin + chunk < count ? begin + chunk : count;
            if (begin >= end) break;
            pool.emplace_back([&, w, begin, end] {
                try {
                    worker(begin, end);
                } catch (...) {
                    errors[static_cast<std::size_t>(w)] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }
    return out;
}

struct BatchSummary {
    double mean_bct = 0.0;
    int min_bct = 0;
    int max_bct = 0;
    std::size_t n_draws = 0;
    double epsilon = 0.0;
    std::uint64_t seed = 0;
};

inline BatchSummary summarize_batch(const std::vector<PerfectDraw>& draws, double eps,
                                    std::uint64_t seed) {
    BatchSummary s;
    s.n_draws = draws.size();
    s.epsilon = eps;
    s.seed = seed;
    if (draws.empty()) return s;
    s.min_bct = draws.front().bct;
    s.max_bct = draws.front().bct;
    double total = 0.0;
    for (const auto& d : draws) {
        total += d.bct;
        if (d.bct < s.min_bct) s.min_bct = d.bct;
        if (d.bct > s.max_bct) s.max_bct = d.bct;
    }
    s.mean_bct = total / static_cast<double>(draws.size());
    return s;
}

}  // namespace ocnid
