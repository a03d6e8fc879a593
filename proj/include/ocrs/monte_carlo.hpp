#pragma once

// Monte Carlo aggregation. Trials are grouped into fixed-size blocks; each
// block is tallied independently and the block tallies are merged in block
// order, so the report is bit-identical for any number of workers.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>
#include <vector>

#include "ocrs/error.hpp"
#include "ocrs/rng.hpp"
#include "ocrs/trials.hpp"

namespace ocrs {

inline constexpr double kZ99 = 2.5758293035489004;
inline constexpr std::uint64_t kTrialBlock = 4096;

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double half() const { return 0.5 * (hi - lo); }
};

/// Wilson score interval for k successes in n trials.
inline Interval wilson(std::uint64_t k, std::uint64_t n, double z = kZ99) {
    if (n == 0) return {0.0, 1.0};
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(k) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double center = (p + z2 / (2.0 * nn)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

/// Running mean/variance in sum form.
struct Moment {
    double sum = 0.0;
    double sq = 0.0;

    void add(double v) {
        sum += v;
        sq += v * v;
    }
    void merge(const Moment& o) {
        sum += o.sum;
        sq += o.sq;
    }
    double mean(std::uint64_t n) const { return n ? sum / static_cast<double>(n) : 0.0; }
    /// Normal-approximation half-width of the mean at level z.
    double half(std::uint64_t n, double z = kZ99) const {
        if (n < 2) return std::numeric_limits<double>::infinity();
        const double nn = static_cast<double>(n);
        const double m = sum / nn;
        const double var = std::max(0.0, (sq - nn * m * m) / (nn - 1.0));
        return z * std::sqrt(var / nn);
    }
};

struct EdgeTally {
    std::uint64_t matched = 0, matched_r0 = 0, matched_r1 = 0;
    Moment cond, cond_r0, cond_r1;
};

struct Tally {
    std::uint64_t trials = 0;
    std::vector<EdgeTally> edges;
    Moment revenue, cond_revenue;
    std::uint64_t matching_violations = 0;
    std::uint64_t patience_violations = 0;

    explicit Tally(std::size_t m = 0) : edges(m) {}

    void merge(const Tally& o) {
        trials += o.trials;
        for (std::size_t e = 0; e < edges.size(); ++e) {
            edges[e].matched += o.edges[e].matched;
            edges[e].matched_r0 += o.edges[e].matched_r0;
            edges[e].matched_r1 += o.edges[e].matched_r1;
            edges[e].cond.merge(o.edges[e].cond);
            edges[e].cond_r0.merge(o.edges[e].cond_r0);
            edges[e].cond_r1.merge(o.edges[e].cond_r1);
        }
        revenue.merge(o.revenue);
        cond_revenue.merge(o.cond_revenue);
        matching_violations += o.matching_violations;
        patience_violations += o.patience_violations;
    }
};

struct EdgeReport {
    std::int64_t id = 0;
    double x = 0.0;
    std::uint64_t matched = 0;
    double freq = 0.0;
    Interval ci;
    double freq_r0 = 0.0, freq_r1 = 0.0;
    Interval ci_r0, ci_r1;
    double ratio = 0.0;  // freq / x, 0 when x = 0
    // Conditional estimates with normal-approximation half-widths.
    double cond = 0.0, cond_half = 0.0;
    double cond_r0 = 0.0, cond_r0_half = 0.0;
    double cond_r1 = 0.0, cond_r1_half = 0.0;
};

struct SimulationReport {
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    std::vector<EdgeReport> edges;
    double min_ratio = 0.0;       // over edges with x > 0, raw frequencies
    double min_ratio_cond = 0.0;  // same, conditional estimates
    std::size_t argmin = 0;
    std::size_t argmin_cond = 0;
    double revenue_mean = 0.0, revenue_half = 0.0;
    double cond_revenue_mean = 0.0, cond_revenue_half = 0.0;
    std::uint64_t matching_violations = 0;
    std::uint64_t patience_violations = 0;
};

/// Worker count from OCRS_WORKERS, else the hardware concurrency.
inline unsigned default_workers() {
    if (const char* env = std::getenv("OCRS_WORKERS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

namespace detail {

template <class Engine>
void tally_block(const Engine& engine, std::uint64_t seed, std::uint64_t first, std::uint64_t last,
                 const std::vector<int>* patience, Tally& t, TrialOutcome& out,
                 const std::vector<std::uint32_t>& eu, const std::vector<std::uint32_t>& ev) {
    const std::size_t m = engine.edge_count();
    std::vector<std::uint8_t> used(engine.vertex_count());
    for (std::uint64_t trial = first; trial < last; ++trial) {
        engine.run(TrialRng(seed, trial), out);
        ++t.trials;
        std::fill(used.begin(), used.end(), 0);
        for (std::size_t e = 0; e < m; ++e) {
            EdgeTally& et = t.edges[e];
            const double c = out.cond[e];
            et.cond.add(c);
            et.cond_r0.add(out.q[e] == 0 ? c : 0.0);
            et.cond_r1.add(out.q[e] == 1 ? c : 0.0);
            if (!out.matched[e]) continue;
            ++et.matched;
            if (out.q[e] == 0) ++et.matched_r0;
            if (out.q[e] == 1) ++et.matched_r1;
            if (used[eu[e]] || used[ev[e]]) ++t.matching_violations;
            used[eu[e]] = used[ev[e]] = 1;
        }
        if (patience)
            for (std::size_t w = 0; w < patience->size(); ++w)
                if ((*patience)[w] >= 0 && out.probes_used[w] > (*patience)[w]) ++t.patience_violations;
        t.revenue.add(out.revenue);
        t.cond_revenue.add(out.cond_revenue);
    }
}

template <class Engine>
concept HasPatience = requires(const Engine& e) { e.patience(); };

}  // namespace detail

/// Runs `trials` trials of `engine` keyed by (seed, trial index) and
/// aggregates them. `inst` must be the instance the engine was built from; its
/// endpoints drive the matching-invariant check.
template <class Engine>
SimulationReport monte_carlo(const Engine& engine, const PricingInstance& inst, std::uint64_t trials,
                             std::uint64_t seed, unsigned workers = 0) {
    if (trials < 1) throw InputError("trials must be >= 1");
    if (workers == 0) workers = default_workers();
    const std::size_t m = engine.edge_count();
    std::vector<std::uint32_t> eu, ev;
    for (const Edge& e : inst.edges) {
        eu.push_back(static_cast<std::uint32_t>(e.u));
        ev.push_back(static_cast<std::uint32_t>(e.v));
    }
    const std::vector<int>* patience = nullptr;
    if constexpr (detail::HasPatience<Engine>) patience = &engine.patience();

    const std::uint64_t blocks = (trials + kTrialBlock - 1) / kTrialBlock;
    std::vector<Tally> partial(blocks, Tally(m));
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    auto work = [&] {
        TrialOutcome out;
        try {
            for (std::uint64_t b; (b = next.fetch_add(1)) < blocks;) {
                std::uint64_t first = b * kTrialBlock;
                std::uint64_t last = std::min(trials, first + kTrialBlock);
                detail::tally_block(engine, seed, first, last, patience, partial[b], out, eu, ev);
            }
        } catch (...) {
            std::lock_guard lock(failure_mu);
            if (!failure) failure = std::current_exception();
        }
    };
    unsigned nthreads = static_cast<unsigned>(std::min<std::uint64_t>(workers, blocks));
    if (nthreads <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < nthreads; ++i) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);

    Tally total(m);
    for (const Tally& t : partial) total.merge(t);

    SimulationReport rep;
    rep.trials = trials;
    rep.seed = seed;
    rep.matching_violations = total.matching_violations;
    rep.patience_violations = total.patience_violations;
    rep.min_ratio = rep.min_ratio_cond = std::numeric_limits<double>::infinity();
    const auto& x = engine.marginal();
    const auto& ids = engine.edge_ids();
    for (std::size_t e = 0; e < m; ++e) {
        const EdgeTally& et = total.edges[e];
        EdgeReport r;
        r.id = ids[e];
        r.x = x[e];
        r.matched = et.matched;
        const double n = static_cast<double>(trials);
        r.freq = et.matched / n;
        r.ci = wilson(et.matched, trials);
        r.freq_r0 = et.matched_r0 / n;
        r.ci_r0 = wilson(et.matched_r0, trials);
        r.freq_r1 = et.matched_r1 / n;
        r.ci_r1 = wilson(et.matched_r1, trials);
        r.cond = et.cond.mean(trials);
        r.cond_half = et.cond.half(trials);
        r.cond_r0 = et.cond_r0.mean(trials);
        r.cond_r0_half = et.cond_r0.half(trials);
        r.cond_r1 = et.cond_r1.mean(trials);
        r.cond_r1_half = et.cond_r1.half(trials);
        if (x[e] > 0.0) {
            r.ratio = r.freq / x[e];
            if (r.ratio < rep.min_ratio) {
                rep.min_ratio = r.ratio;
                rep.argmin = e;
            }
            if (r.cond / x[e] < rep.min_ratio_cond) {
                rep.min_ratio_cond = r.cond / x[e];
                rep.argmin_cond = e;
            }
        }
        rep.edges.push_back(r);
    }
    if (!std::isfinite(rep.min_ratio)) rep.min_ratio = rep.min_ratio_cond = 0.0;
    rep.revenue_mean = total.revenue.mean(trials);
    rep.revenue_half = total.revenue.half(trials);
    rep.cond_revenue_mean = total.cond_revenue.mean(trials);
    rep.cond_revenue_half = total.cond_revenue.half(trials);
    return rep;
}

}  // namespace ocrs
