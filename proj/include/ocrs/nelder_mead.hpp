#pragma once

// Nelder-Mead simplex search with a caller-supplied projection, used on boxes.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <vector>

namespace ocrs {

struct NelderMeadOptions {
    double initial_step = 0.05;
    double ftol = 1e-13;
    double xtol = 1e-10;
    std::size_t max_evals = 20000;
};

struct NelderMeadResult {
    std::vector<double> x;
    double f = 0.0;
    std::size_t evals = 0;
};

/// Minimizes f starting at x0. `project` maps any point back into the
/// feasible region and is applied to every trial point.
inline NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
                                    const std::function<void(std::vector<double>&)>& project,
                                    const NelderMeadOptions& opt = {}) {
    const std::size_t n = x0.size();
    NelderMeadResult res;
    auto eval = [&](std::vector<double>& p) {
        project(p);
        ++res.evals;
        return f(p);
    };

    std::vector<std::vector<double>> pts(n + 1, x0);
    std::vector<double> fv(n + 1);
    fv[0] = eval(pts[0]);
    for (std::size_t i = 0; i < n; ++i) {
        pts[i + 1][i] += opt.initial_step;
        fv[i + 1] = eval(pts[i + 1]);
        // A step pushed back onto the start point by the projection gives a
        // degenerate simplex; step the other way instead.
        if (pts[i + 1] == pts[0]) {
            pts[i + 1][i] -= 2.0 * opt.initial_step;
            fv[i + 1] = eval(pts[i + 1]);
        }
    }

    std::vector<std::size_t> idx(n + 1);
    std::vector<double> centroid(n), xr(n), xe(n), xc(n);
    while (res.evals < opt.max_evals) {
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
            return fv[a] < fv[b] || (fv[a] == fv[b] && a < b);
        });
        const std::size_t best = idx[0], worst = idx[n], second = idx[n - 1];

        double size = 0.0;
        for (std::size_t i = 0; i <= n; ++i)
            for (std::size_t j = 0; j < n; ++j) size = std::max(size, std::fabs(pts[i][j] - pts[best][j]));
        if (fv[worst] - fv[best] <= opt.ftol && size <= opt.xtol) break;
        if (size <= opt.xtol) break;

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t i = 0; i <= n; ++i)
            if (i != worst)
                for (std::size_t j = 0; j < n; ++j) centroid[j] += pts[i][j] / n;

        for (std::size_t j = 0; j < n; ++j) xr[j] = centroid[j] + (centroid[j] - pts[worst][j]);
        double fr = eval(xr);
        if (fr < fv[best]) {
            for (std::size_t j = 0; j < n; ++j) xe[j] = centroid[j] + 2.0 * (centroid[j] - pts[worst][j]);
            double fe = eval(xe);
            if (fe < fr) {
                pts[worst] = xe;
                fv[worst] = fe;
            } else {
                pts[worst] = xr;
                fv[worst] = fr;
            }
            continue;
        }
        if (fr < fv[second]) {
            pts[worst] = xr;
            fv[worst] = fr;
            continue;
        }
        const bool outside = fr < fv[worst];
        for (std::size_t j = 0; j < n; ++j)
            xc[j] = outside ? centroid[j] + 0.5 * (xr[j] - centroid[j]) : centroid[j] + 0.5 * (pts[worst][j] - centroid[j]);
        double fc = eval(xc);
        if (fc < (outside ? fr : fv[worst])) {
            pts[worst] = xc;
            fv[worst] = fc;
            continue;
        }
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == best) continue;
            for (std::size_t j = 0; j < n; ++j) pts[i][j] = pts[best][j] + 0.5 * (pts[i][j] - pts[best][j]);
            fv[i] = eval(pts[i]);
        }
    }
    std::size_t best = static_cast<std::size_t>(std::min_element(fv.begin(), fv.end()) - fv.begin());
    res.x = pts[best];
    res.f = fv[best];
    return res;
}

}  // namespace ocrs
