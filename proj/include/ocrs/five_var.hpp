#pragma once

// Minimum of the summed lemma bounds after eliminating the neighborhood:
//   (1 - a s)(c0 + c1 (s + a m^2 + a dbig (1 - m)/2) + c2 (1 - 2a)^2 (d - dbig)(1 - m))
// over s = 2 - x - d, 0 <= dbig <= d <= 2(1 - x), x, m in [0, 1].
// The box is parametrized by the unit cube (x, u, v[, m]) with d = 2u(1 - x)
// and dbig = v d, searched on a grid and polished with Nelder-Mead.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "ocrs/attenuation.hpp"
#include "ocrs/bounds.hpp"
#include "ocrs/error.hpp"
#include "ocrs/nelder_mead.hpp"
#include "ocrs/quadrature.hpp"

namespace ocrs {

struct FiveVarPoint {
    double s = 0.0, d = 0.0, dbig = 0.0, x = 0.0, m = 0.0;
};

struct BoundCertificate {
    Setting setting = Setting::general;
    double alpha = 0.0;
    FiveVarPoint point;
    double minimum = 0.0;
    int grid_resolution = 0;
    int refinements = 0;
    double quadrature_tol = kQuadTol;
    // c1 a - c2 (1-2a)^2 and c1 a - 2 c2 (1-2a)^2; the reduction to this
    // program assumes both are nonnegative.
    double sign_condition_1 = 0.0;
    double sign_condition_2 = 0.0;
    std::size_t evaluations = 0;
};

inline bool uses_m(Setting s) { return lemma_constants(s).uses_m; }

inline double five_var_objective(Setting setting, double alpha, const FiveVarPoint& p) {
    const LemmaConstants c = lemma_constants(setting);
    const double m = c.uses_m ? p.m : 0.0;
    const double shrink = (1.0 - 2.0 * alpha) * (1.0 - 2.0 * alpha);
    return (1.0 - alpha * p.s) *
           (c.c0 + c.c1 * (p.s + alpha * m * m + alpha * p.dbig * (1.0 - m) / 2.0) +
            c.c2 * shrink * (p.d - p.dbig) * (1.0 - m));
}

inline FiveVarPoint five_var_point(const std::vector<double>& cube) {
    FiveVarPoint p;
    p.x = cube[0];
    p.d = cube[1] * 2.0 * (1.0 - p.x);
    p.dbig = cube[2] * p.d;
    p.m = cube.size() > 3 ? cube[3] : 0.0;
    p.s = 2.0 - p.x - p.d;
    return p;
}

inline bool five_var_feasible(const FiveVarPoint& p, double tol = 1e-12) {
    return std::fabs(p.s + p.d - (2.0 - p.x)) <= tol && p.d <= 2.0 * (1.0 - p.x) + tol && p.dbig <= p.d + tol &&
           p.dbig >= -tol && p.m >= -tol && p.m <= 1.0 + tol && p.x >= -tol && p.x <= 1.0 + tol && p.s >= -tol;
}

inline BoundCertificate five_var_minimize(Setting setting, double alpha, int grid_resolution = 81,
                                          int refinements = 3, std::size_t starts = 8) {
    validate_alpha(alpha);
    if (grid_resolution < 2) throw InputError("grid resolution must be >= 2");
    if (refinements < 0) throw InputError("refinements must be >= 0");
    const LemmaConstants c = lemma_constants(setting);
    const std::size_t dims = c.uses_m ? 4 : 3;

    BoundCertificate cert;
    cert.setting = setting;
    cert.alpha = alpha;
    cert.grid_resolution = grid_resolution;
    cert.refinements = refinements;
    const double shrink = (1.0 - 2.0 * alpha) * (1.0 - 2.0 * alpha);
    cert.sign_condition_1 = c.c1 * alpha - c.c2 * shrink;
    cert.sign_condition_2 = c.c1 * alpha - 2.0 * c.c2 * shrink;

    auto f = [&](const std::vector<double>& u) {
        ++cert.evaluations;
        return five_var_objective(setting, alpha, five_var_point(u));
    };

    // Grid phase: keep the best `starts` cells, ties broken by lexicographic index.
    struct Cell {
        double value;
        std::array<int, 4> idx;
    };
    std::vector<Cell> best;
    const int G = grid_resolution;
    std::array<int, 4> idx{0, 0, 0, 0};
    std::vector<double> u(dims);
    auto worse = [](const Cell& a, const Cell& b) { return a.value < b.value || (a.value == b.value && a.idx < b.idx); };
    for (;;) {
        for (std::size_t k = 0; k < dims; ++k) u[k] = static_cast<double>(idx[k]) / (G - 1);
        Cell cell{f(u), idx};
        if (best.size() < starts || worse(cell, best.back())) {
            best.insert(std::upper_bound(best.begin(), best.end(), cell, worse), cell);
            if (best.size() > starts) best.pop_back();
        }
        std::size_t k = 0;
        while (k < dims && ++idx[k] == G) idx[k++] = 0;
        if (k == dims) break;
    }
    if (best.empty()) throw InternalError("five-variable program: empty feasible set");

    auto project = [](std::vector<double>& v) {
        for (double& t : v) t = std::clamp(t, 0.0, 1.0);
    };
    std::vector<double> best_u;
    double best_f = best.front().value;
    for (std::size_t k = 0; k < dims; ++k) u[k] = static_cast<double>(best.front().idx[k]) / (G - 1);
    best_u = u;
    const double cell = 1.0 / (G - 1);
    for (const Cell& start : best) {
        std::vector<double> x0(dims);
        for (std::size_t k = 0; k < dims; ++k) x0[k] = static_cast<double>(start.idx[k]) / (G - 1);
        NelderMeadOptions opt;
        opt.initial_step = cell;
        NelderMeadResult r = nelder_mead(f, x0, project, opt);
        if (r.f < best_f) {
            best_f = r.f;
            best_u = r.x;
        }
    }
    double step = cell;
    for (int i = 0; i < refinements; ++i) {
        step *= 0.1;
        NelderMeadOptions opt;
        opt.initial_step = std::max(step, 1e-9);
        NelderMeadResult r = nelder_mead(f, best_u, project, opt);
        if (r.f < best_f) {
            best_f = r.f;
            best_u = r.x;
        }
    }
    cert.point = five_var_point(best_u);
    if (!c.uses_m) cert.point.m = 0.0;
    cert.minimum = best_f;
    return cert;
}

}  // namespace ocrs
