#pragma once

// Single-trial engines. Each engine is immutable after construction and can
// be shared by concurrent workers; per-trial scratch lives in TrialOutcome so
// repeated runs do not allocate.
//
// Besides the realized indicators, every engine records the conditional
// probability that an edge is matched given the history at its arrival
// (edge free, endpoints with patience left). Averaging that quantity over
// trials estimates the same match probability with far lower variance.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ocrs/attenuation.hpp"
#include "ocrs/error.hpp"
#include "ocrs/graph.hpp"
#include "ocrs/lp.hpp"
#include "ocrs/rng.hpp"

namespace ocrs {

struct TrialOutcome {
    std::vector<std::uint8_t> active;
    std::vector<std::uint8_t> realized;
    std::vector<std::uint8_t> probed;
    std::vector<std::uint8_t> matched;
    std::vector<int> q;               // realized neighbors arriving strictly earlier
    std::vector<int> probes_used;     // per vertex
    std::vector<double> cond;         // Pr[matched | history at arrival]
    double revenue = 0.0;
    double cond_revenue = 0.0;

    // scratch
    std::vector<double> key1, key2;
    std::vector<std::uint32_t> order, rank, choice;
    std::vector<std::uint8_t> vertex_matched;

    void reset(std::size_t edges, std::size_t vertices) {
        active.assign(edges, 0);
        realized.assign(edges, 0);
        probed.assign(edges, 0);
        matched.assign(edges, 0);
        q.assign(edges, 0);
        cond.assign(edges, 0.0);
        probes_used.assign(vertices, 0);
        vertex_matched.assign(vertices, 0);
        key1.resize(edges);
        key2.resize(edges);
        order.resize(edges);
        rank.resize(edges);
        choice.resize(edges);
        revenue = 0.0;
        cond_revenue = 0.0;
    }
};

namespace detail {

// Shared topology in flat arrays for the trial loops.
struct Topology {
    std::vector<std::uint32_t> u, v;
    std::vector<std::uint32_t> nb_start, nb;  // CSR neighbor lists
    std::vector<std::int64_t> ids;
    std::size_t vertices = 0;

    explicit Topology(const PricingInstance& inst) {
        Adjacency adj = adjacency(inst);
        vertices = inst.vertices.size();
        nb_start.push_back(0);
        for (std::size_t e = 0; e < inst.edges.size(); ++e) {
            u.push_back(static_cast<std::uint32_t>(inst.edges[e].u));
            v.push_back(static_cast<std::uint32_t>(inst.edges[e].v));
            ids.push_back(inst.edges[e].id);
            for (std::size_t f : adj.neighbors[e]) nb.push_back(static_cast<std::uint32_t>(f));
            nb_start.push_back(static_cast<std::uint32_t>(nb.size()));
        }
    }

    std::size_t edges() const { return u.size(); }

    // Sorts edges by (key1, key2, index) and fills rank.
    void arrange(TrialOutcome& out, bool two_keys) const {
        const std::size_t m = edges();
        for (std::size_t e = 0; e < m; ++e) out.order[e] = static_cast<std::uint32_t>(e);
        const double* k1 = out.key1.data();
        const double* k2 = out.key2.data();
        if (two_keys)
            std::sort(out.order.begin(), out.order.end(), [&](std::uint32_t a, std::uint32_t b) {
                if (k1[a] != k1[b]) return k1[a] < k1[b];
                if (k2[a] != k2[b]) return k2[a] < k2[b];
                return a < b;
            });
        else
            std::sort(out.order.begin(), out.order.end(), [&](std::uint32_t a, std::uint32_t b) {
                if (k1[a] != k1[b]) return k1[a] < k1[b];
                return a < b;
            });
        for (std::size_t i = 0; i < m; ++i) out.rank[out.order[i]] = static_cast<std::uint32_t>(i);
    }

    void count_realized_before(TrialOutcome& out) const {
        for (std::size_t e = 0; e < edges(); ++e) {
            int c = 0;
            for (std::uint32_t i = nb_start[e]; i < nb_start[e + 1]; ++i) {
                std::uint32_t f = nb[i];
                c += (out.realized[f] && out.rank[f] < out.rank[e]) ? 1 : 0;
            }
            out.q[e] = c;
        }
    }
};

inline std::vector<double> slacks(std::span<const double> x, const PricingInstance& inst) {
    std::vector<double> s;
    for (const EdgeStats& st : edge_stats(x, inst)) s.push_back(std::clamp(st.s, 0.0, 2.0));
    return s;
}

inline void require_polytope(std::span<const double> x, const PricingInstance& inst) {
    PolytopeCheck pc = check_polytope(x, inst);
    if (!pc.feasible) throw InputError("x is outside the matching polytope");
    for (double v : x)
        if (!(v <= 1.0 + kPolytopeTol)) throw InputError("x entries must lie in [0,1]");
}

}  // namespace detail

/// Random-order edge arrival with attenuation: an active, free edge is
/// matched when its attenuation coin succeeds.
class RoOcrsEngine {
public:
    RoOcrsEngine(const PricingInstance& inst, std::vector<double> x, AttenuationSpec spec)
        : topo_(inst), x_(std::move(x)), spec_(spec) {
        validate(spec_);
        detail::require_polytope(x_, inst);
        s_ = detail::slacks(x_, inst);
    }

    std::size_t edge_count() const { return topo_.edges(); }
    std::size_t vertex_count() const { return topo_.vertices; }
    const std::vector<double>& marginal() const { return x_; }
    const std::vector<std::int64_t>& edge_ids() const { return topo_.ids; }

    void run(const TrialRng& rng, TrialOutcome& out) const {
        const std::size_t m = edge_count();
        out.reset(m, topo_.vertices);
        for (std::size_t e = 0; e < m; ++e) {
            out.key1[e] = rng.uniform(e, Purpose::arrival);
            out.active[e] = rng.uniform(e, Purpose::active) < x_[e];
        }
        topo_.arrange(out, false);
        // a(e) depends on t_e only, so realized can be fixed before the pass.
        std::vector<double>& a = out.key2;
        for (std::size_t e = 0; e < m; ++e) {
            a[e] = attenuate(spec_, out.key1[e], x_[e], s_[e]);
            out.realized[e] = out.active[e] && rng.uniform(e, Purpose::coin) < a[e];
        }
        topo_.count_realized_before(out);
        for (std::uint32_t e : out.order) {
            const std::uint32_t u = topo_.u[e], v = topo_.v[e];
            if (out.vertex_matched[u] || out.vertex_matched[v]) continue;
            out.cond[e] = x_[e] * a[e];
            if (out.realized[e]) {
                out.matched[e] = 1;
                out.vertex_matched[u] = out.vertex_matched[v] = 1;
                out.revenue += 1.0;
            }
            out.cond_revenue += out.cond[e];
        }
    }

private:
    detail::Topology topo_;
    std::vector<double> x_, s_;
    AttenuationSpec spec_;
};

/// Probing with commitment under patience limits: a free edge whose endpoints
/// both have patience left is probed with probability y_e a(e), and a probed
/// edge is matched when it turns out active (probability p_e).
class StochasticEngine {
public:
    StochasticEngine(const PricingInstance& inst, std::vector<double> y, std::vector<double> p, AttenuationSpec spec)
        : topo_(inst), y_(std::move(y)), p_(std::move(p)), spec_(spec) {
        validate(spec_);
        const std::size_t m = inst.edges.size();
        if (y_.size() != m || p_.size() != m) throw InputError("y and p need one entry per edge");
        for (std::size_t e = 0; e < m; ++e) {
            if (!(y_[e] >= 0.0 && y_[e] <= 1.0 + kPolytopeTol)) throw InputError("y_e must lie in [0,1]");
            if (!(p_[e] >= 0.0 && p_[e] <= 1.0)) throw InputError("p_e must lie in [0,1]");
            x_.push_back(y_[e] * p_[e]);
        }
        detail::require_polytope(x_, inst);
        std::vector<double> probes(inst.vertices.size(), 0.0);
        for (std::size_t e = 0; e < m; ++e) {
            probes[inst.edges[e].u] += y_[e];
            probes[inst.edges[e].v] += y_[e];
        }
        for (std::size_t w = 0; w < inst.vertices.size(); ++w) {
            const auto& pat = inst.vertices[w].patience;
            patience_.push_back(pat ? *pat : -1);
            if (pat && probes[w] > *pat + kPolytopeTol)
                throw InputError("expected probes at vertex " + std::to_string(inst.vertices[w].id) +
                                 " exceed its patience");
        }
        s_ = detail::slacks(x_, inst);
    }

    std::size_t edge_count() const { return topo_.edges(); }
    std::size_t vertex_count() const { return topo_.vertices; }
    const std::vector<double>& marginal() const { return x_; }
    const std::vector<std::int64_t>& edge_ids() const { return topo_.ids; }
    const std::vector<int>& patience() const { return patience_; }

    void run(const TrialRng& rng, TrialOutcome& out) const {
        const std::size_t m = edge_count();
        out.reset(m, topo_.vertices);
        std::vector<double>& a = out.key2;
        for (std::size_t e = 0; e < m; ++e) out.key1[e] = rng.uniform(e, Purpose::arrival);
        topo_.arrange(out, false);
        std::vector<std::uint8_t>& coin = out.probed;  // reused: coin first, probed after the pass
        for (std::size_t e = 0; e < m; ++e) {
            a[e] = attenuate(spec_, out.key1[e], x_[e], s_[e]);
            coin[e] = rng.uniform(e, Purpose::coin) < y_[e] * a[e];
            out.active[e] = rng.uniform(e, Purpose::active) < p_[e];
            out.realized[e] = coin[e] && out.active[e];
        }
        topo_.count_realized_before(out);
        for (std::uint32_t e : out.order) {
            const std::uint32_t u = topo_.u[e], v = topo_.v[e];
            const bool had_coin = coin[e];
            coin[e] = 0;
            if (out.vertex_matched[u] || out.vertex_matched[v]) continue;
            if (!has_patience(out, u) || !has_patience(out, v)) continue;
            out.cond[e] = y_[e] * a[e] * p_[e];
            out.cond_revenue += out.cond[e];
            if (!had_coin) continue;
            out.probed[e] = 1;
            ++out.probes_used[u];
            ++out.probes_used[v];
            if (out.active[e]) {
                out.matched[e] = 1;
                out.vertex_matched[u] = out.vertex_matched[v] = 1;
                out.revenue += 1.0;
            }
        }
    }

private:
    bool has_patience(const TrialOutcome& out, std::uint32_t w) const {
        return patience_[w] < 0 || out.probes_used[w] < patience_[w];
    }

    detail::Topology topo_;
    std::vector<double> y_, p_, x_, s_;
    std::vector<int> patience_;
    AttenuationSpec spec_;
};

/// Online vertices arrive in random order; each brings its edges in random
/// order. Attenuation e^{-x_e t_e} ignores the vertex time.
class VertexArrivalEngine {
public:
    VertexArrivalEngine(const PricingInstance& inst, std::vector<double> x) : topo_(inst), x_(std::move(x)) {
        if (!is_bipartite(inst.mode)) throw InputError("vertex arrival needs a bipartite instance");
        for (const Edge& e : inst.edges) {
            Side a = inst.vertices[e.u].side, b = inst.vertices[e.v].side;
            if (a == Side::online && b == Side::offline)
                online_.push_back(static_cast<std::uint32_t>(e.u));
            else if (a == Side::offline && b == Side::online)
                online_.push_back(static_cast<std::uint32_t>(e.v));
            else
                throw InputError("vertex arrival: edge " + std::to_string(e.id) +
                                 " must join an online and an offline vertex");
        }
        detail::require_polytope(x_, inst);
    }

    std::size_t edge_count() const { return topo_.edges(); }
    std::size_t vertex_count() const { return topo_.vertices; }
    const std::vector<double>& marginal() const { return x_; }
    const std::vector<std::int64_t>& edge_ids() const { return topo_.ids; }

    void run(const TrialRng& rng, TrialOutcome& out) const {
        const std::size_t m = edge_count();
        out.reset(m, topo_.vertices);
        for (std::size_t e = 0; e < m; ++e) {
            out.key1[e] = rng.uniform(online_[e], Purpose::vertex_arrival);
            out.key2[e] = rng.uniform(e, Purpose::arrival);
            out.active[e] = rng.uniform(e, Purpose::active) < x_[e];
        }
        topo_.arrange(out, true);
        for (std::size_t e = 0; e < m; ++e) {
            double a = std::exp(-x_[e] * out.key2[e]);
            out.key1[e] = a;  // vertex times are no longer needed after sorting
            out.realized[e] = out.active[e] && rng.uniform(e, Purpose::coin) < a;
        }
        topo_.count_realized_before(out);
        for (std::uint32_t e : out.order) {
            const std::uint32_t u = topo_.u[e], v = topo_.v[e];
            if (out.vertex_matched[u] || out.vertex_matched[v]) continue;
            out.cond[e] = x_[e] * out.key1[e];
            out.cond_revenue += out.cond[e];
            if (out.realized[e]) {
                out.matched[e] = 1;
                out.vertex_matched[u] = out.vertex_matched[v] = 1;
                out.revenue += 1.0;
            }
        }
    }

private:
    detail::Topology topo_;
    std::vector<double> x_;
    std::vector<std::uint32_t> online_;
};

/// Sequential posted pricing driven by an LP point: each edge draws its price
/// (or no offer) from y, and on arrival makes the offer when free, both
/// endpoints have patience, and the attenuation coin succeeds. An offer uses
/// one unit of patience at both endpoints whether or not it is accepted.
class PricingEngine {
public:
    PricingEngine(const PricingInstance& inst, FractionalPoint y, AttenuationSpec spec, Objective obj)
        : topo_(inst), y_(std::move(y)), spec_(spec) {
        validate(spec_);
        PointCheck pc = check_fractional_point(y_, inst);
        if (!pc.feasible) throw InputError("LP point is infeasible: " + pc.worst);
        Marginals mg = marginals(y_, inst);
        x_ = mg.x;
        s_ = detail::slacks(x_, inst);
        for (std::size_t e = 0; e < inst.edges.size(); ++e) {
            double cum = 0.0, expected = 0.0;
            std::vector<double> c, pk, r;
            for (std::size_t k = 0; k < y_.y[e].size(); ++k) {
                cum += y_.y[e][k];
                c.push_back(cum);
                pk.push_back(inst.edges[e].menu[k].p);
                r.push_back(acceptance_reward(inst, e, k, obj));
                expected += y_.y[e][k] * pk.back() * r.back();
            }
            cum_.push_back(std::move(c));
            accept_.push_back(std::move(pk));
            reward_.push_back(std::move(r));
            expected_reward_.push_back(expected);
        }
        for (const Vertex& w : inst.vertices) patience_.push_back(w.patience ? *w.patience : -1);
    }

    std::size_t edge_count() const { return topo_.edges(); }
    std::size_t vertex_count() const { return topo_.vertices; }
    const std::vector<double>& marginal() const { return x_; }
    const std::vector<std::int64_t>& edge_ids() const { return topo_.ids; }
    const std::vector<int>& patience() const { return patience_; }

    void run(const TrialRng& rng, TrialOutcome& out) const {
        const std::size_t m = edge_count();
        out.reset(m, topo_.vertices);
        std::vector<double>& a = out.key2;
        for (std::size_t e = 0; e < m; ++e) out.key1[e] = rng.uniform(e, Purpose::arrival);
        topo_.arrange(out, false);
        std::vector<std::uint32_t>& price = out.choice;
        for (std::size_t e = 0; e < m; ++e) {
            const auto& c = cum_[e];
            double u = rng.uniform(e, Purpose::price);
            price[e] = static_cast<std::uint32_t>(std::upper_bound(c.begin(), c.end(), u) - c.begin());
            a[e] = attenuate(spec_, out.key1[e], x_[e], s_[e]);
            bool offered = price[e] < c.size() && rng.uniform(e, Purpose::coin) < a[e];
            out.probed[e] = offered;  // provisional: offer intent
            out.active[e] = offered && rng.uniform(e, Purpose::active) < accept_[e][price[e]];
            out.realized[e] = out.active[e];
        }
        topo_.count_realized_before(out);
        for (std::uint32_t e : out.order) {
            const std::uint32_t u = topo_.u[e], v = topo_.v[e];
            const bool intends = out.probed[e];
            out.probed[e] = 0;
            if (out.vertex_matched[u] || out.vertex_matched[v]) continue;
            if (!has_patience(out, u) || !has_patience(out, v)) continue;
            out.cond[e] = a[e] * x_[e];
            out.cond_revenue += a[e] * expected_reward_[e];
            if (!intends) continue;
            out.probed[e] = 1;
            ++out.probes_used[u];
            ++out.probes_used[v];
            if (out.active[e]) {
                out.matched[e] = 1;
                out.vertex_matched[u] = out.vertex_matched[v] = 1;
                out.revenue += reward_[e][price[e]];
            }
        }
    }

private:
    bool has_patience(const TrialOutcome& out, std::uint32_t w) const {
        return patience_[w] < 0 || out.probes_used[w] < patience_[w];
    }

    detail::Topology topo_;
    FractionalPoint y_;
    AttenuationSpec spec_;
    std::vector<double> x_, s_, expected_reward_;
    std::vector<std::vector<double>> cum_, accept_, reward_;
    std::vector<int> patience_;
};

template <class Engine>
TrialOutcome run_trial(const Engine& engine, std::uint64_t master_seed, std::uint64_t trial) {
    TrialOutcome out;
    engine.run(TrialRng(master_seed, trial), out);
    return out;
}

}  // namespace ocrs
