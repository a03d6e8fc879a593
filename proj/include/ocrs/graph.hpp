#pragma once

// Instance representation for the sequential pricing problem and the
// fractional-matching checks that every downstream module relies on.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ocrs/error.hpp"

namespace ocrs {

inline constexpr double kPolytopeTol = 1e-9;

enum class Side { none, offline, online };
enum class Mode { general, bipartite, bipartite_one_sided_patience, vertex_arrival };

inline std::string_view to_string(Side s) {
    switch (s) {
        case Side::offline: return "offline";
        case Side::online: return "online";
        default: return "none";
    }
}

inline std::string_view to_string(Mode m) {
    switch (m) {
        case Mode::bipartite: return "bipartite";
        case Mode::bipartite_one_sided_patience: return "bipartite-one-sided-patience";
        case Mode::vertex_arrival: return "vertex-arrival";
        default: return "general";
    }
}

inline std::optional<Side> parse_side(std::string_view s) {
    if (s == "offline") return Side::offline;
    if (s == "online") return Side::online;
    if (s == "none") return Side::none;
    return std::nullopt;
}

inline std::optional<Mode> parse_mode(std::string_view s) {
    if (s == "general") return Mode::general;
    if (s == "bipartite") return Mode::bipartite;
    if (s == "bipartite-one-sided-patience" || s == "bipartite_one_sided_patience")
        return Mode::bipartite_one_sided_patience;
    if (s == "vertex-arrival" || s == "vertex_arrival") return Mode::vertex_arrival;
    return std::nullopt;
}

inline bool is_bipartite(Mode m) { return m != Mode::general; }

struct Vertex {
    std::int64_t id = 0;
    Side side = Side::none;
    std::optional<double> value;   // job value v_j; absent on workers
    std::optional<int> patience;   // absent means unbounded
};

/// One offer option along an edge: price w accepted with probability p.
/// `c` is the reward collected on acceptance under a custom objective.
struct MenuEntry {
    double w = 0.0;
    double p = 0.0;
    std::optional<double> c;
};

/// Endpoints are vertex indices into PricingInstance::vertices; `id` is the
/// external label used by instance files.
struct Edge {
    std::int64_t id = 0;
    std::size_t u = 0;
    std::size_t v = 0;
    std::vector<MenuEntry> menu;
};

struct PricingInstance {
    Mode mode = Mode::general;
    std::vector<Vertex> vertices;
    std::vector<Edge> edges;

    std::size_t vertex_count() const { return vertices.size(); }
    std::size_t edge_count() const { return edges.size(); }

    /// Value collected when edge e is matched: the sum of its endpoints'
    /// job values (workers carry none).
    double job_value(std::size_t e) const {
        const Edge& ed = edges[e];
        return vertices[ed.u].value.value_or(0.0) + vertices[ed.v].value.value_or(0.0);
    }

    bool has_finite_patience(std::size_t v) const { return vertices[v].patience.has_value(); }
};

/// Instance plus an optional fractional point x (one entry per edge).
struct GeneratedInstance {
    PricingInstance instance;
    std::optional<std::vector<double>> x;
};

struct Violation {
    std::string subject;  // "edge 4", "vertex 2", "edge 4 menu[1]"
    std::string rule;
};

inline std::vector<Violation> validate_instance(const PricingInstance& inst) {
    std::vector<Violation> out;
    auto vname = [&](std::size_t i) { return "vertex " + std::to_string(inst.vertices[i].id); };
    auto ename = [&](std::size_t i) { return "edge " + std::to_string(inst.edges[i].id); };

    std::set<std::int64_t> seen;
    for (std::size_t i = 0; i < inst.vertices.size(); ++i) {
        const Vertex& v = inst.vertices[i];
        if (!seen.insert(v.id).second) out.push_back({vname(i), "duplicate vertex id"});
        if (v.patience && *v.patience < 1) out.push_back({vname(i), "patience must be >= 1 or unbounded"});
        if (v.value && !(std::isfinite(*v.value) && *v.value >= 0.0))
            out.push_back({vname(i), "job value must be finite and nonnegative"});
        if (is_bipartite(inst.mode) && v.side == Side::none)
            out.push_back({vname(i), "bipartite modes require a side tag"});
    }

    seen.clear();
    const std::size_t nv = inst.vertices.size();
    for (std::size_t i = 0; i < inst.edges.size(); ++i) {
        const Edge& e = inst.edges[i];
        if (!seen.insert(e.id).second) out.push_back({ename(i), "duplicate edge id"});
        if (e.u >= nv || e.v >= nv) {
            out.push_back({ename(i), "endpoint references a missing vertex"});
            continue;
        }
        if (e.u == e.v) out.push_back({ename(i), "endpoints must be distinct"});
        if (is_bipartite(inst.mode)) {
            Side a = inst.vertices[e.u].side;
            Side b = inst.vertices[e.v].side;
            if (a != Side::none && b != Side::none && a == b)
                out.push_back({ename(i), "bipartite edge must join opposite sides"});
        }
        for (std::size_t k = 0; k < e.menu.size(); ++k) {
            const MenuEntry& m = e.menu[k];
            std::string sub = ename(i) + " menu[" + std::to_string(k) + "]";
            if (!(m.p >= 0.0 && m.p <= 1.0)) out.push_back({sub, "acceptance probability outside [0,1]"});
            if (!std::isfinite(m.w)) out.push_back({sub, "price must be finite"});
            if (m.c && !std::isfinite(*m.c)) out.push_back({sub, "objective coefficient must be finite"});
        }
    }

    if (inst.mode == Mode::bipartite_one_sided_patience) {
        bool offline_unbounded = true, online_unbounded = true;
        for (const Vertex& v : inst.vertices) {
            if (!v.patience) continue;
            if (v.side == Side::offline) offline_unbounded = false;
            if (v.side == Side::online) online_unbounded = false;
        }
        if (!offline_unbounded && !online_unbounded)
            out.push_back({"instance", "one-sided patience requires one side with unbounded patience"});
    }
    return out;
}

/// Per-vertex incident edges and per-edge neighborhoods N_e.
struct Adjacency {
    std::vector<std::vector<std::size_t>> incident;
    std::vector<std::vector<std::size_t>> neighbors;
};

inline Adjacency adjacency(const PricingInstance& inst) {
    Adjacency adj;
    adj.incident.resize(inst.vertices.size());
    for (std::size_t e = 0; e < inst.edges.size(); ++e) {
        const Edge& ed = inst.edges[e];
        if (ed.u >= inst.vertices.size() || ed.v >= inst.vertices.size())
            throw InputError("edge " + std::to_string(ed.id) + " references a missing vertex");
        adj.incident[ed.u].push_back(e);
        if (ed.v != ed.u) adj.incident[ed.v].push_back(e);
    }
    adj.neighbors.resize(inst.edges.size());
    for (std::size_t e = 0; e < inst.edges.size(); ++e) {
        auto& nb = adj.neighbors[e];
        for (std::size_t w : {inst.edges[e].u, inst.edges[e].v})
            for (std::size_t f : adj.incident[w])
                if (f != e) nb.push_back(f);
        std::sort(nb.begin(), nb.end());
        nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    }
    return adj;
}

inline void require_point_size(std::span<const double> x, const PricingInstance& inst) {
    if (x.size() != inst.edges.size())
        throw InputError("fractional point has " + std::to_string(x.size()) + " entries for " +
                         std::to_string(inst.edges.size()) + " edges");
}

struct PolytopeCheck {
    bool feasible = true;
    double worst_excess = 0.0;              // max over rules of (lhs - rhs)
    std::optional<std::size_t> worst_vertex;  // vertex index with largest load excess
    std::optional<std::size_t> worst_edge;    // edge index with most negative entry
};

/// Membership in {x >= 0, sum_{e ni v} x_e <= 1} at kPolytopeTol.
inline PolytopeCheck check_polytope(std::span<const double> x, const PricingInstance& inst) {
    require_point_size(x, inst);
    std::vector<double> load(inst.vertices.size(), 0.0);
    PolytopeCheck out;
    double worst_neg = 0.0;
    for (std::size_t e = 0; e < x.size(); ++e) {
        const Edge& ed = inst.edges[e];
        if (ed.u >= load.size() || ed.v >= load.size())
            throw InputError("edge " + std::to_string(ed.id) + " references a missing vertex");
        load[ed.u] += x[e];
        load[ed.v] += x[e];
        if (-x[e] > worst_neg) {
            worst_neg = -x[e];
            out.worst_edge = e;
        }
    }
    double worst_load = -1.0;
    for (std::size_t v = 0; v < load.size(); ++v) {
        if (load[v] - 1.0 > worst_load) {
            worst_load = load[v] - 1.0;
            out.worst_vertex = v;
        }
    }
    out.worst_excess = std::max(worst_load, worst_neg);
    out.feasible = worst_load <= kPolytopeTol && worst_neg <= kPolytopeTol;
    if (worst_neg <= 0.0) out.worst_edge.reset();
    return out;
}

struct EdgeStats {
    double d = 0.0;  // sum of x_f over N_e
    double s = 0.0;  // slack 2 - d - x_e
    double m = 0.0;  // largest x_f over triangle partners f in N_e
    std::vector<std::size_t> neighbors;
};

inline std::vector<EdgeStats> edge_stats(std::span<const double> x, const PricingInstance& inst) {
    require_point_size(x, inst);
    Adjacency adj = adjacency(inst);

    std::set<std::pair<std::size_t, std::size_t>> pairs;
    for (const Edge& e : inst.edges) pairs.insert(std::minmax(e.u, e.v));
    auto joined = [&](std::size_t a, std::size_t b) { return pairs.count(std::minmax(a, b)) > 0; };

    std::vector<EdgeStats> out(inst.edges.size());
    for (std::size_t e = 0; e < inst.edges.size(); ++e) {
        EdgeStats& st = out[e];
        st.neighbors = adj.neighbors[e];
        const std::size_t a = inst.edges[e].u, b = inst.edges[e].v;
        for (std::size_t f : st.neighbors) {
            st.d += x[f];
            const Edge& fe = inst.edges[f];
            // f = (shared, far); a triangle needs far joined to e's other endpoint.
            std::size_t shared = (fe.u == a || fe.u == b) ? fe.u : fe.v;
            std::size_t far = (shared == fe.u) ? fe.v : fe.u;
            if (far == a || far == b) continue;  // parallel edge
            std::size_t other = (shared == a) ? b : a;
            if (joined(far, other)) st.m = std::max(st.m, x[f]);
        }
        st.s = 2.0 - st.d - x[e];
    }
    return out;
}

}  // namespace ocrs
