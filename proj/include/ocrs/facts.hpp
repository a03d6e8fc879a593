#pragma once

// Grid verification of the scalar inequalities the lower bounds rely on.
// Every row reports the worst margin (rhs slack) found over its grid.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "ocrs/bounds.hpp"
#include "ocrs/quadrature.hpp"
#include "ocrs/rng.hpp"

namespace ocrs {

struct FactRow {
    std::string id;
    bool holds = false;
    double margin = 0.0;
    std::string detail;  // where the worst margin occurred
};

/// Patience values scanned for the minimality claims: 1..20 and unbounded.
inline std::vector<std::optional<int>> scanned_patience() {
    std::vector<std::optional<int>> out;
    for (int l = 1; l <= 20; ++l) out.push_back(l);
    out.push_back(std::nullopt);
    return out;
}

inline std::string patience_label(std::optional<int> l) { return l ? std::to_string(*l) : "inf"; }

/// int_0^1 e^{-y(2-K)} phi_lu(y) phi_lv(y) dy: the no-earlier-neighbor integral
/// with both endpoints' patience.
inline double pair_patience_integral(double K, std::optional<int> lu, std::optional<int> lv) {
    return integrate([&](double y) { return std::exp(-y * (2.0 - K)) * phi(lu, y) * phi(lv, y); }, 0.0, 1.0);
}

/// int_0^b e^{-2c} phi_l(c) dc: mass of an early blocking edge at patience l.
inline double blocker_integral(double b, std::optional<int> l) {
    return integrate([&](double c) { return std::exp(-2.0 * c) * phi(l, c); }, 0.0, b);
}

namespace detail {

struct Worst {
    double margin = std::numeric_limits<double>::infinity();
    std::string where;
    void see(double m, const std::string& w) {
        if (m < margin) {
            margin = m;
            where = w;
        }
    }
    FactRow row(std::string id) const { return {std::move(id), margin >= 0.0, margin, where}; }
};

inline double grid_point(int i, int n, double lo, double hi) { return lo + (hi - lo) * i / n; }

}  // namespace detail

inline std::vector<FactRow> verify_facts() {
    using detail::grid_point;
    using detail::Worst;
    std::vector<FactRow> rows;
    constexpr int N = 10000;  // 1-D grids use N + 1 points

    {  // x (1 - e^{-a}) <= 1 - e^{-ax} on [0,1]^2, 101 x 101 grid
        Worst w;
        for (int i = 0; i <= 100; ++i)
            for (int j = 0; j <= 100; ++j) {
                double a = i / 100.0, x = j / 100.0;
                w.see(-std::expm1(-a * x) + x * std::expm1(-a), "a=" + std::to_string(a) + " x=" + std::to_string(x));
            }
        rows.push_back(w.row("concavity"));
    }
    {  // prod (1 - R_i) >= 1 - sum R_i on 10^4 seeded tuples
        Worst w;
        SplitMix64 rng(20240601);
        for (int t = 0; t < N; ++t) {
            int len = 1 + static_cast<int>(rng.next() % 10);
            double prod = 1.0, sum = 0.0;
            for (int i = 0; i < len; ++i) {
                double r = rng.uniform();
                prod *= 1.0 - r;
                sum += r;
            }
            w.see(prod - (1.0 - sum), "tuple " + std::to_string(t));
        }
        rows.push_back(w.row("product_union"));
    }
    {  // h(2 - x) >= h(2) + 0.14 x on [0, 2]
        Worst w;
        const double h2 = h(2.0);
        for (int i = 0; i <= N; ++i) {
            double x = grid_point(i, N, 0.0, 2.0);
            w.see(h(2.0 - x) - (h2 + 0.14 * x), "x=" + std::to_string(x));
        }
        rows.push_back(w.row("h_linear_floor"));
    }
    {  // x z(x) >= 0.055 x on [0, 1], margin in units of z
        Worst w;
        for (int i = 0; i <= N; ++i) {
            double x = grid_point(i, N, 0.0, 1.0);
            w.see(z(x) - 0.055, "x=" + std::to_string(x));
        }
        rows.push_back(w.row("z_floor"));
    }
    {  // int e^{-y(4-K)} (1+y)^2 >= 0.382 + 0.117 K for K in [0, 2]
        Worst w;
        for (int i = 0; i <= N; ++i) {
            double K = grid_point(i, N, 0.0, 2.0);
            double g = integrate([K](double y) { return std::exp(-y * (4.0 - K)) * (1.0 + y) * (1.0 + y); }, 0.0, 1.0);
            w.see(g - (0.382 + 0.117 * K), "K=" + std::to_string(K));
        }
        rows.push_back(w.row("pair_patience_floor"));
    }
    {  // int e^{-y(3-K)} (1+y) >= 0.405 + 0.131 K for K in [0, 2]
        Worst w;
        for (int i = 0; i <= N; ++i) {
            double K = grid_point(i, N, 0.0, 2.0);
            double g = integrate([K](double y) { return std::exp(-y * (3.0 - K)) * (1.0 + y); }, 0.0, 1.0);
            w.see(g - (0.405 + 0.131 * K), "K=" + std::to_string(K));
        }
        rows.push_back(w.row("one_sided_patience_floor"));
    }
    {  // int e^{-4a+ax} h1(a,x) (1+a)^2 >= 0.181 on x in [0, 1]
        Worst w;
        for (int i = 0; i <= N; ++i) {
            double x = grid_point(i, N, 0.0, 1.0);
            double g = integrate([x](double a) { return std::exp(-4.0 * a + a * x) * h1_closed(a, x) * (1.0 + a) * (1.0 + a); },
                                 0.0, 1.0);
            w.see(g - 0.181, "x=" + std::to_string(x));
        }
        rows.push_back(w.row("pair_blocking_floor"));
    }
    {  // int e^{-3a+ax} h1(a,x) (1+a) >= 0.209 on x in [0, 1]
        Worst w;
        for (int i = 0; i <= N; ++i) {
            double x = grid_point(i, N, 0.0, 1.0);
            double g = integrate([x](double a) { return std::exp(-3.0 * a + a * x) * h1_closed(a, x) * (1.0 + a); }, 0.0, 1.0);
            w.see(g - 0.209, "x=" + std::to_string(x));
        }
        rows.push_back(w.row("one_sided_blocking_floor"));
    }

    const auto ells = scanned_patience();
    {  // patience 2 at both endpoints minimizes the pair integral at K = 0
        Worst w;
        const double base = pair_patience_integral(0.0, 2, 2);
        for (auto lu : ells)
            for (auto lv : ells) {
                if (lu == 2 && lv == 2) continue;
                w.see(pair_patience_integral(0.0, lu, lv) - base, "l=(" + patience_label(lu) + "," + patience_label(lv) + ")");
            }
        rows.push_back(w.row("ell2_min_pair"));
    }
    {  // one bounded endpoint: patience 2 minimizes at K = 0
        Worst w;
        const double base = pair_patience_integral(0.0, 2, std::nullopt);
        for (auto l : ells) {
            if (l == 2) continue;
            w.see(pair_patience_integral(0.0, l, std::nullopt) - base, "l=" + patience_label(l));
        }
        rows.push_back(w.row("ell2_min_one_sided"));
    }
    {  // blocking-edge mass int_0^b e^{-2c} phi_l is smallest at l = 2, b in (0, 1]
        Worst w;
        for (int i = 1; i <= 100; ++i) {
            double b = i / 100.0;
            const double base = blocker_integral(b, 2);
            for (auto l : ells) {
                if (l == 2) continue;
                w.see(blocker_integral(b, l) - base, "b=" + std::to_string(b) + " l=" + patience_label(l));
            }
        }
        rows.push_back(w.row("ell2_min_blocking"));
    }
    {  // the linear floors hold for every scanned patience pair, K in [0, 2]
        Worst pair, one;
        for (int i = 0; i <= 40; ++i) {
            double K = grid_point(i, 40, 0.0, 2.0);
            for (std::size_t a = 0; a < ells.size(); ++a) {
                one.see(pair_patience_integral(K, ells[a], std::nullopt) - (0.405 + 0.131 * K),
                        "K=" + std::to_string(K) + " l=" + patience_label(ells[a]));
                for (std::size_t b = a; b < ells.size(); ++b)
                    pair.see(pair_patience_integral(K, ells[a], ells[b]) - (0.382 + 0.117 * K),
                             "K=" + std::to_string(K) + " l=(" + patience_label(ells[a]) + "," +
                                 patience_label(ells[b]) + ")");
            }
        }
        rows.push_back(pair.row("pair_floor_all_ell"));
        rows.push_back(one.row("one_sided_floor_all_ell"));
    }
    return rows;
}

}  // namespace ocrs
