#pragma once

// Exact references for tiny instances: match probabilities of the
// unattenuated edge-arrival scheme, the optimal adaptive pricing policy, and
// greedy probing orders.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ocrs/error.hpp"
#include "ocrs/graph.hpp"
#include "ocrs/lp.hpp"

namespace ocrs {

inline constexpr std::size_t kOracleMaxEdges = 10;
inline constexpr std::size_t kDpMaxOptions = 12;

/// Exact Pr[e matched] when every active edge is accepted if free, edges
/// arrive in uniformly random order and e is active with probability x_e.
/// Inactive edges never change the matching, so it suffices to average over
/// the orders of the active set.
inline std::vector<double> exact_trivial_oracle(std::span<const double> x, const PricingInstance& inst) {
    require_point_size(x, inst);
    const std::size_t m = inst.edges.size();
    if (m > kOracleMaxEdges)
        throw RefusedError("exact oracle refuses " + std::to_string(m) + " edges (limit " +
                           std::to_string(kOracleMaxEdges) + ")");
    std::vector<double> prob(m, 0.0);
    std::vector<std::uint8_t> used(inst.vertices.size());
    std::vector<double> count(m);
    std::vector<std::size_t> perm;
    for (std::uint32_t S = 0; S < (1u << m); ++S) {
        double w = 1.0;
        perm.clear();
        for (std::size_t e = 0; e < m; ++e) {
            if (S >> e & 1u) {
                w *= x[e];
                perm.push_back(e);
            } else {
                w *= 1.0 - x[e];
            }
        }
        if (w == 0.0) continue;
        std::fill(count.begin(), count.end(), 0.0);
        double orders = 0.0;
        do {
            orders += 1.0;
            std::fill(used.begin(), used.end(), 0);
            for (std::size_t e : perm) {
                const Edge& ed = inst.edges[e];
                if (used[ed.u] || used[ed.v]) continue;
                used[ed.u] = used[ed.v] = 1;
                count[e] += 1.0;
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
        for (std::size_t e : perm) prob[e] += w * count[e] / orders;
    }
    return prob;
}

namespace detail {

inline void require_small_masks(const PricingInstance& inst) {
    if (inst.vertices.size() > 64 || inst.edges.size() > 64)
        throw RefusedError("oracle state encoding supports at most 64 vertices and 64 edges");
}

struct PairHash {
    std::size_t operator()(const std::pair<std::uint64_t, std::uint64_t>& k) const {
        return std::hash<std::uint64_t>{}(k.first * 0x9E3779B97F4A7C15ULL ^ k.second);
    }
};

// Each edge receives at most one offer; an offer uses one unit of patience at
// both endpoints.
inline bool can_offer(const PricingInstance& inst, std::uint64_t offered, std::uint64_t matched, std::size_t e) {
    const Edge& ed = inst.edges[e];
    if (offered >> e & 1u) return false;
    if ((matched >> ed.u & 1u) || (matched >> ed.v & 1u)) return false;
    for (std::size_t w : {ed.u, ed.v}) {
        const auto& pat = inst.vertices[w].patience;
        if (!pat) continue;
        int used = 0;
        for (std::size_t f = 0; f < inst.edges.size(); ++f)
            if ((offered >> f & 1u) && (inst.edges[f].u == w || inst.edges[f].v == w)) ++used;
        if (used >= *pat) return false;
    }
    return true;
}

}  // namespace detail

/// Optimal expected objective over all adaptive offer sequences (stopping
/// allowed), by memoized recursion over (offered edges, matched vertices).
inline double optimal_policy_dp(const PricingInstance& inst, Objective obj) {
    std::size_t options = 0;
    for (const Edge& e : inst.edges) options += e.menu.size();
    if (options > kDpMaxOptions) {
        double estimate = std::ldexp(1.0, static_cast<int>(std::min<std::size_t>(inst.edges.size(), 1000))) *
                          std::ldexp(1.0, static_cast<int>(std::min<std::size_t>(inst.vertices.size(), 1000)));
        throw RefusedError("DP oracle refuses " + std::to_string(options) + " offer options (limit " +
                           std::to_string(kDpMaxOptions) + "); state space up to ~" + std::to_string(estimate));
    }
    detail::require_small_masks(inst);
    std::unordered_map<std::pair<std::uint64_t, std::uint64_t>, double, detail::PairHash> memo;
    std::function<double(std::uint64_t, std::uint64_t)> value = [&](std::uint64_t offered, std::uint64_t matched) {
        auto key = std::make_pair(offered, matched);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        double best = 0.0;
        for (std::size_t e = 0; e < inst.edges.size(); ++e) {
            if (!detail::can_offer(inst, offered, matched, e)) continue;
            const Edge& ed = inst.edges[e];
            const std::uint64_t off2 = offered | (std::uint64_t{1} << e);
            const std::uint64_t mat2 = matched | (std::uint64_t{1} << ed.u) | (std::uint64_t{1} << ed.v);
            const double fail = value(off2, matched);
            const double succ = value(off2, mat2);
            for (std::size_t k = 0; k < ed.menu.size(); ++k) {
                const double p = ed.menu[k].p;
                best = std::max(best, p * (acceptance_reward(inst, e, k, obj) + succ) + (1.0 - p) * fail);
            }
        }
        memo.emplace(key, best);
        return best;
    };
    return value(0, 0);
}

struct Offer {
    std::size_t edge = 0;
    std::size_t entry = 0;
};

/// Exact expected objective of offering in the given fixed order, skipping
/// offers that are infeasible when reached (edge already offered, endpoint
/// matched or out of patience).
inline double expected_value_in_order(const PricingInstance& inst, std::span<const Offer> order, Objective obj) {
    detail::require_small_masks(inst);
    for (const Offer& o : order)
        if (o.edge >= inst.edges.size() || o.entry >= inst.edges[o.edge].menu.size())
            throw InputError("offer order references a missing edge or menu entry");
    using Memo = std::unordered_map<std::pair<std::uint64_t, std::uint64_t>, double, detail::PairHash>;
    std::vector<Memo> memos(order.size() + 1);  // one table per position in the order
    std::function<double(std::size_t, std::uint64_t, std::uint64_t)> value =
        [&](std::size_t i, std::uint64_t offered, std::uint64_t matched) -> double {
        while (i < order.size() && !detail::can_offer(inst, offered, matched, order[i].edge)) ++i;
        if (i == order.size()) return 0.0;
        auto key = std::make_pair(offered, matched);
        if (auto it = memos[i].find(key); it != memos[i].end()) return it->second;
        const Offer& o = order[i];
        const Edge& ed = inst.edges[o.edge];
        const std::uint64_t off2 = offered | (std::uint64_t{1} << o.edge);
        const std::uint64_t mat2 = matched | (std::uint64_t{1} << ed.u) | (std::uint64_t{1} << ed.v);
        const double p = ed.menu[o.entry].p;
        const double v = p * (acceptance_reward(inst, o.edge, o.entry, obj) + value(i + 1, off2, mat2)) +
                         (1.0 - p) * value(i + 1, off2, matched);
        memos[i].emplace(key, v);
        return v;
    };
    return value(0, 0, 0);
}

enum class GreedyRule { by_weight, by_expected_weight };

/// Offers sorted by decreasing reward (by_weight) or reward times acceptance
/// probability (by_expected_weight); ties go to the lower edge id, then the
/// lower menu index.
inline std::vector<Offer> greedy_order(const PricingInstance& inst, GreedyRule rule, Objective obj) {
    struct Keyed {
        double key;
        std::int64_t id;
        Offer offer;
    };
    std::vector<Keyed> all;
    for (std::size_t e = 0; e < inst.edges.size(); ++e)
        for (std::size_t k = 0; k < inst.edges[e].menu.size(); ++k) {
            double r = acceptance_reward(inst, e, k, obj);
            double key = rule == GreedyRule::by_weight ? r : r * inst.edges[e].menu[k].p;
            all.push_back({key, inst.edges[e].id, {e, k}});
        }
    std::stable_sort(all.begin(), all.end(), [](const Keyed& a, const Keyed& b) {
        if (a.key != b.key) return a.key > b.key;
        if (a.id != b.id) return a.id < b.id;
        return a.offer.entry < b.offer.entry;
    });
    std::vector<Offer> out;
    for (const Keyed& k : all) out.push_back(k.offer);
    return out;
}

inline double greedy_baseline(const PricingInstance& inst, GreedyRule rule, Objective obj) {
    std::vector<Offer> order = greedy_order(inst, rule, obj);
    return expected_value_in_order(inst, order, obj);
}

}  // namespace ocrs
