#pragma once

// The pricing LP over offer probabilities y_ew, its solution, per-edge
// marginals, and the two menu-support reductions.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ocrs/error.hpp"
#include "ocrs/graph.hpp"
#include "ocrs/simplex.hpp"

namespace ocrs {

enum class Objective { revenue, custom };

/// LP coefficient of y_ew. Revenue pays (job value - price) on acceptance;
/// the custom objective pays the menu entry's c on acceptance.
inline double objective_coefficient(const PricingInstance& inst, std::size_t e, std::size_t k, Objective obj) {
    const MenuEntry& m = inst.edges[e].menu[k];
    if (obj == Objective::revenue) return m.p * (inst.job_value(e) - m.w);
    if (!m.c) throw InputError("custom objective: edge " + std::to_string(inst.edges[e].id) + " menu[" +
                               std::to_string(k) + "] has no coefficient c");
    return m.p * *m.c;
}

/// Reward collected when the offer (e, k) is accepted.
inline double acceptance_reward(const PricingInstance& inst, std::size_t e, std::size_t k, Objective obj) {
    const MenuEntry& m = inst.edges[e].menu[k];
    if (obj == Objective::revenue) return inst.job_value(e) - m.w;
    if (!m.c) throw InputError("custom objective: missing coefficient c");
    return *m.c;
}

enum class RowKind { edge_budget, vertex_load, vertex_patience };

struct LpRow {
    RowKind kind = RowKind::edge_budget;
    std::size_t owner = 0;  // edge index or vertex index
    std::vector<std::pair<std::size_t, double>> coef;
    double rhs = 0.0;
};

struct VarKey {
    std::size_t edge = 0;
    std::size_t entry = 0;
};

struct LinearProgram {
    std::vector<VarKey> vars;
    std::vector<double> objective;
    std::vector<LpRow> rows;
    std::vector<std::size_t> menu_sizes;  // per edge, to rebuild y
};

/// y[e][k] is the probability edge e is offered at menu entry k.
struct FractionalPoint {
    std::vector<std::vector<double>> y;
    double objective = 0.0;
};

inline LinearProgram build_lp_pricing(const PricingInstance& inst, Objective obj) {
    LinearProgram lp;
    std::vector<std::vector<std::size_t>> var_of(inst.edges.size());
    for (std::size_t e = 0; e < inst.edges.size(); ++e) {
        lp.menu_sizes.push_back(inst.edges[e].menu.size());
        for (std::size_t k = 0; k < inst.edges[e].menu.size(); ++k) {
            var_of[e].push_back(lp.vars.size());
            lp.vars.push_back({e, k});
            lp.objective.push_back(objective_coefficient(inst, e, k, obj));
        }
    }
    for (std::size_t e = 0; e < inst.edges.size(); ++e) {
        LpRow row{RowKind::edge_budget, e, {}, 1.0};
        for (std::size_t j : var_of[e]) row.coef.push_back({j, 1.0});
        lp.rows.push_back(std::move(row));
    }
    Adjacency adj = adjacency(inst);
    for (std::size_t v = 0; v < inst.vertices.size(); ++v) {
        LpRow load{RowKind::vertex_load, v, {}, 1.0};
        for (std::size_t e : adj.incident[v])
            for (std::size_t k = 0; k < var_of[e].size(); ++k)
                load.coef.push_back({var_of[e][k], inst.edges[e].menu[k].p});
        lp.rows.push_back(std::move(load));
    }
    for (std::size_t v = 0; v < inst.vertices.size(); ++v) {
        if (!inst.vertices[v].patience) continue;
        LpRow pat{RowKind::vertex_patience, v, {}, static_cast<double>(*inst.vertices[v].patience)};
        for (std::size_t e : adj.incident[v])
            for (std::size_t j : var_of[e]) pat.coef.push_back({j, 1.0});
        lp.rows.push_back(std::move(pat));
    }
    return lp;
}

struct LpSolution {
    FractionalPoint point;
    double max_reduced_cost = 0.0;
    std::size_t iterations = 0;
};

inline LpSolution solve_lp(const LinearProgram& lp) {
    std::vector<std::vector<double>> A(lp.rows.size(), std::vector<double>(lp.vars.size(), 0.0));
    std::vector<double> b;
    for (std::size_t r = 0; r < lp.rows.size(); ++r) {
        for (auto [j, a] : lp.rows[r].coef) A[r][j] += a;
        b.push_back(lp.rows[r].rhs);
    }
    SimplexResult res = simplex_maximize(A, b, lp.objective);
    if (res.status != SimplexStatus::optimal) throw InternalError("pricing LP reported unbounded");

    LpSolution out;
    out.point.y.resize(lp.menu_sizes.size());
    for (std::size_t e = 0; e < lp.menu_sizes.size(); ++e) out.point.y[e].assign(lp.menu_sizes[e], 0.0);
    for (std::size_t j = 0; j < lp.vars.size(); ++j) out.point.y[lp.vars[j].edge][lp.vars[j].entry] = res.x[j];
    out.point.objective = res.objective;
    out.max_reduced_cost = res.max_reduced_cost;
    out.iterations = res.iterations;

    for (const LpRow& row : lp.rows) {
        double lhs = 0.0;
        for (auto [j, a] : row.coef) lhs += a * res.x[j];
        if (lhs > row.rhs + kPolytopeTol) throw InternalError("pricing LP solution violates a constraint");
    }
    return out;
}

inline void require_point_shape(const FractionalPoint& fp, const PricingInstance& inst) {
    if (fp.y.size() != inst.edges.size()) throw InputError("fractional point does not match the instance's edges");
    for (std::size_t e = 0; e < inst.edges.size(); ++e)
        if (fp.y[e].size() != inst.edges[e].menu.size())
            throw InputError("fractional point does not match the menu of edge " + std::to_string(inst.edges[e].id));
}

inline double pricing_objective(const FractionalPoint& fp, const PricingInstance& inst, Objective obj) {
    require_point_shape(fp, inst);
    double total = 0.0;
    for (std::size_t e = 0; e < inst.edges.size(); ++e)
        for (std::size_t k = 0; k < fp.y[e].size(); ++k) total += fp.y[e][k] * objective_coefficient(inst, e, k, obj);
    return total;
}

struct Marginals {
    std::vector<double> x;  // sum_w y_ew p_ew
    std::vector<double> y;  // sum_w y_ew
    std::vector<double> p;  // x / y, 0 when y = 0
};

inline Marginals marginals(const FractionalPoint& fp, const PricingInstance& inst) {
    require_point_shape(fp, inst);
    Marginals m;
    for (std::size_t e = 0; e < inst.edges.size(); ++e) {
        double xe = 0.0, ye = 0.0;
        for (std::size_t k = 0; k < fp.y[e].size(); ++k) {
            xe += fp.y[e][k] * inst.edges[e].menu[k].p;
            ye += fp.y[e][k];
        }
        m.x.push_back(xe);
        m.y.push_back(ye);
        m.p.push_back(ye > 0.0 ? xe / ye : 0.0);
    }
    return m;
}

struct PointCheck {
    bool feasible = true;
    double worst_excess = 0.0;
    std::string worst;  // human-readable location of the worst violation
};

/// Edge budgets, vertex loads, patience and nonnegativity at kPolytopeTol.
inline PointCheck check_fractional_point(const FractionalPoint& fp, const PricingInstance& inst) {
    require_point_shape(fp, inst);
    PointCheck out;
    out.worst_excess = -1.0;
    auto note = [&](double excess, std::string where) {
        if (excess > out.worst_excess) {
            out.worst_excess = excess;
            out.worst = std::move(where);
        }
    };
    std::vector<double> load(inst.vertices.size(), 0.0), probes(inst.vertices.size(), 0.0);
    for (std::size_t e = 0; e < inst.edges.size(); ++e) {
        double ye = 0.0, xe = 0.0;
        for (std::size_t k = 0; k < fp.y[e].size(); ++k) {
            note(-fp.y[e][k], "edge " + std::to_string(inst.edges[e].id) + " negative entry");
            ye += fp.y[e][k];
            xe += fp.y[e][k] * inst.edges[e].menu[k].p;
        }
        note(ye - 1.0, "edge " + std::to_string(inst.edges[e].id) + " budget");
        for (std::size_t v : {inst.edges[e].u, inst.edges[e].v}) {
            load[v] += xe;
            probes[v] += ye;
        }
    }
    for (std::size_t v = 0; v < inst.vertices.size(); ++v) {
        note(load[v] - 1.0, "vertex " + std::to_string(inst.vertices[v].id) + " load");
        if (inst.vertices[v].patience)
            note(probes[v] - *inst.vertices[v].patience, "vertex " + std::to_string(inst.vertices[v].id) + " patience");
    }
    out.feasible = out.worst_excess <= kPolytopeTol;
    return out;
}

/// Per edge, re-solve  max sum y'_w p_w c_w  s.t.  sum y'_w p_w <= x_e,
/// sum y'_w <= cap  at an extreme point, which has at most two nonzeros.
/// cap is 1 when both endpoints have unbounded patience and y_e otherwise, so
/// patience loads never grow. Edges already supported on <= 2 entries are kept.
inline FractionalPoint two_weight_reduction(const FractionalPoint& fp, const PricingInstance& inst, Objective obj) {
    require_point_shape(fp, inst);
    FractionalPoint out = fp;
    for (std::size_t e = 0; e < inst.edges.size(); ++e) {
        const auto& ye = fp.y[e];
        std::size_t support = std::count_if(ye.begin(), ye.end(), [](double v) { return v > 0.0; });
        if (support <= 2) continue;
        const Edge& ed = inst.edges[e];
        double xe = 0.0, total = 0.0;
        for (std::size_t k = 0; k < ye.size(); ++k) {
            xe += ye[k] * ed.menu[k].p;
            total += ye[k];
        }
        bool unbounded = !inst.vertices[ed.u].patience && !inst.vertices[ed.v].patience;
        double cap = unbounded ? 1.0 : total;
        std::vector<std::vector<double>> A(2, std::vector<double>(ye.size()));
        std::vector<double> c(ye.size());
        for (std::size_t k = 0; k < ye.size(); ++k) {
            A[0][k] = ed.menu[k].p;
            A[1][k] = 1.0;
            c[k] = objective_coefficient(inst, e, k, obj);
        }
        SimplexResult res = simplex_maximize(A, {std::max(0.0, xe), std::max(0.0, cap)}, c);
        if (res.status != SimplexStatus::optimal) throw InternalError("two-weight reduction: per-edge LP unbounded");
        out.y[e] = res.x;
    }
    out.objective = pricing_objective(out, inst, obj);
    return out;
}

/// Keeps, per edge, the entry with the largest contribution y_ew p_ew c_ew
/// (lowest index on ties) and zeroes the rest.
inline FractionalPoint single_weight_selection(const FractionalPoint& fp, const PricingInstance& inst, Objective obj) {
    require_point_shape(fp, inst);
    FractionalPoint out = fp;
    for (std::size_t e = 0; e < inst.edges.size(); ++e) {
        auto& ye = out.y[e];
        if (ye.empty()) continue;
        std::size_t best = 0;
        double best_val = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < ye.size(); ++k) {
            double v = ye[k] * objective_coefficient(inst, e, k, obj);
            if (v > best_val) {
                best_val = v;
                best = k;
            }
        }
        for (std::size_t k = 0; k < ye.size(); ++k)
            if (k != best) ye[k] = 0.0;
    }
    out.objective = pricing_objective(out, inst, obj);
    return out;
}

}  // namespace ocrs
