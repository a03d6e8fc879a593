#pragma once

// Scalar functions behind the match-probability lower bounds, and the
// per-edge bounds on Pr[e matched and no / one realized earlier neighbor].

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ocrs/error.hpp"
#include "ocrs/graph.hpp"
#include "ocrs/quadrature.hpp"

namespace ocrs {

/// (1 - e^{-x}) / x, with h(0) = 1.
inline double h(double x) {
    if (!(x >= 0.0)) throw InputError("h(x) needs x >= 0");
    if (x == 0.0) return 1.0;
    return -std::expm1(-x) / x;
}

namespace detail {
inline void require_unit(double v, const char* what) {
    if (!(v >= 0.0 && v <= 1.0)) throw InputError(std::string(what) + " must lie in [0,1]");
}
}  // namespace detail

/// z(0) in closed form: 1/8 - 1/(8e^4) - 1/(2e^2).
inline double z_at_zero() { return 0.125 - 0.125 * std::exp(-4.0) - 0.5 * std::exp(-2.0); }

/// z(x) = int_0^1 e^{-2a+ax} ((1-e^{-xa})/x - (1-e^{-a(x+2)})/(x+2)) da.
inline double z(double x, double tol = kQuadTol) {
    detail::require_unit(x, "z: x");
    if (x == 0.0) return z_at_zero();
    auto f = [x](double a) {
        return std::exp(-2.0 * a + a * x) * (-std::expm1(-x * a) / x + std::expm1(-a * (x + 2.0)) / (x + 2.0));
    };
    return integrate(f, 0.0, 1.0, tol);
}

/// The blocking kernel 4 - (3b+4) e^{-3b}.
inline double blocking_kernel(double b) { return 4.0 - (3.0 * b + 4.0) * std::exp(-3.0 * b); }

/// h1(a, x) = int_0^a e^{-bx} (4 - (3b+4) e^{-3b}) db by quadrature.
inline double h1(double a, double x, double tol = kQuadTol) {
    detail::require_unit(a, "h1: a");
    detail::require_unit(x, "h1: x");
    return integrate([x](double b) { return std::exp(-b * x) * blocking_kernel(b); }, 0.0, a, tol);
}

/// h1 in closed form, k = x + 3:
/// 4(1-e^{-ax})/x - 4(1-e^{-ka})/k - 3(1 - e^{-ka}(1+ka))/k^2.
inline double h1_closed(double a, double x) {
    const double k = x + 3.0;
    const double first = x == 0.0 ? 4.0 * a : -4.0 * std::expm1(-a * x) / x;
    const double eka = std::exp(-k * a);
    return first + 4.0 * std::expm1(-k * a) / k - 3.0 * (1.0 - eka * (1.0 + k * a)) / (k * k);
}

/// Pr[Pois(y(l-1)) <= l-1]; 1 for l = 1 or unbounded (nullopt).
inline double phi(std::optional<int> ell, double y) {
    if (!ell || *ell <= 1) return 1.0;
    const double lambda = y * (*ell - 1);
    double term = std::exp(-lambda), sum = term;
    for (int k = 1; k <= *ell - 1; ++k) {
        term *= lambda / k;
        sum += term;
    }
    return std::min(1.0, sum);
}

enum class Setting { general, bipartite, patience_general, patience_one_sided };

inline std::string_view to_string(Setting s) {
    switch (s) {
        case Setting::general: return "general";
        case Setting::bipartite: return "bipartite";
        case Setting::patience_general: return "patience_general";
        default: return "patience_one_sided";
    }
}

inline std::optional<Setting> parse_setting(std::string_view s) {
    if (s == "general") return Setting::general;
    if (s == "bipartite") return Setting::bipartite;
    if (s == "patience_general" || s == "patience-general" || s == "patience") return Setting::patience_general;
    if (s == "patience_one_sided" || s == "patience-one-sided" || s == "one-sided") return Setting::patience_one_sided;
    return std::nullopt;
}

/// Constants of the two lemma bounds per setting:
///   r0 = (1 - a s_e)(c0 + c1 (s_e + a sum x_f s_f)) x_e
///   r1 = (1 - a s_e)(1 - 2a)^2 sum x_f (1 - m_e - x_f - s_f)^+ c2 x_e
struct LemmaConstants {
    double c0 = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
    bool uses_m = true;   // triangle term m_e enters r1
    double alpha = 0.0;   // value used for the headline constant
    double target = 0.0;  // headline balancedness constant
};

inline LemmaConstants lemma_constants(Setting s) {
    switch (s) {
        case Setting::general: return {h(2.0), 0.14, 0.0275, true, 0.171, 0.450};
        case Setting::bipartite: return {h(2.0), 0.14, 0.0275, false, 0.171, 0.456};
        case Setting::patience_general: return {0.382, 0.117, 0.02, true, 0.16, 0.395};
        default: return {0.405, 0.131, 0.023, false, 0.162, 0.426};
    }
}

struct NeighborTerm {
    double x = 0.0;
    double s = 0.0;
};

inline double r0_bound(Setting setting, double x_e, double s_e, std::span<const NeighborTerm> nb, double alpha) {
    const LemmaConstants c = lemma_constants(setting);
    double weighted = 0.0;
    for (const NeighborTerm& f : nb) weighted += f.x * f.s;
    return (1.0 - alpha * s_e) * (c.c0 + c.c1 * (s_e + alpha * weighted)) * x_e;
}

inline double r1_bound(Setting setting, double x_e, double s_e, double m_e, std::span<const NeighborTerm> nb,
                       double alpha) {
    const LemmaConstants c = lemma_constants(setting);
    const double m = c.uses_m ? m_e : 0.0;
    double sum = 0.0;
    for (const NeighborTerm& f : nb) sum += f.x * std::max(0.0, 1.0 - m - f.x - f.s);
    const double shrink = (1.0 - 2.0 * alpha) * (1.0 - 2.0 * alpha);
    return (1.0 - alpha * s_e) * shrink * sum * c.c2 * x_e;
}

inline double lemma_r0_bound(double x_e, double s_e, std::span<const NeighborTerm> nb, double alpha) {
    return r0_bound(Setting::general, x_e, s_e, nb, alpha);
}
inline double lemma_r1_bound(double x_e, double s_e, double m_e, std::span<const NeighborTerm> nb, double alpha) {
    return r1_bound(Setting::general, x_e, s_e, m_e, nb, alpha);
}
inline double patience_r0_bound(double x_e, double s_e, std::span<const NeighborTerm> nb, double alpha) {
    return r0_bound(Setting::patience_general, x_e, s_e, nb, alpha);
}
inline double patience_r1_bound(double x_e, double s_e, double m_e, std::span<const NeighborTerm> nb, double alpha) {
    return r1_bound(Setting::patience_general, x_e, s_e, m_e, nb, alpha);
}
inline double one_sided_r0_bound(double x_e, double s_e, std::span<const NeighborTerm> nb, double alpha) {
    return r0_bound(Setting::patience_one_sided, x_e, s_e, nb, alpha);
}
inline double one_sided_r1_bound(double x_e, double s_e, std::span<const NeighborTerm> nb, double alpha) {
    return r1_bound(Setting::patience_one_sided, x_e, s_e, 0.0, nb, alpha);
}

struct EdgeBound {
    double r0 = 0.0;
    double r1 = 0.0;
};

/// Both bounds for every edge of an instance at point x.
inline std::vector<EdgeBound> edge_bounds(std::span<const double> x, const PricingInstance& inst, Setting setting,
                                          double alpha) {
    std::vector<EdgeStats> st = edge_stats(x, inst);
    std::vector<EdgeBound> out;
    std::vector<NeighborTerm> nb;
    for (std::size_t e = 0; e < st.size(); ++e) {
        nb.clear();
        for (std::size_t f : st[e].neighbors) nb.push_back({x[f], st[f].s});
        out.push_back({r0_bound(setting, x[e], st[e].s, nb, alpha), r1_bound(setting, x[e], st[e].s, st[e].m, nb, alpha)});
    }
    return out;
}

}  // namespace ocrs
