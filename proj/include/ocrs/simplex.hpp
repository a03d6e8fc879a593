#pragma once

// Dense primal simplex for  max c'x  s.t.  Ax <= b, x >= 0, with b >= 0 so the
// slack basis is feasible from the start. Bland's rule picks both the entering
// and the leaving variable, which rules out cycling on degenerate pivots.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "ocrs/error.hpp"

namespace ocrs {

inline constexpr double kPivotTol = 1e-10;

enum class SimplexStatus { optimal, unbounded };

struct SimplexResult {
    SimplexStatus status = SimplexStatus::optimal;
    std::vector<double> x;
    double objective = 0.0;
    double max_reduced_cost = 0.0;  // <= kPivotTol certifies no improving pivot
    std::size_t iterations = 0;
};

/// A is row-major, m rows by n columns.
inline SimplexResult simplex_maximize(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
                                      const std::vector<double>& c, std::size_t max_iterations = 1000000) {
    const std::size_t m = b.size();
    const std::size_t n = c.size();
    if (A.size() != m) throw InputError("simplex: row count mismatch");
    for (const auto& row : A)
        if (row.size() != n) throw InputError("simplex: column count mismatch");
    for (double bi : b)
        if (!(bi >= 0.0)) throw InputError("simplex: right-hand sides must be nonnegative");

    // Tableau columns: n structural, m slack, then rhs. Row m holds reduced costs.
    const std::size_t w = n + m + 1;
    std::vector<double> T((m + 1) * w, 0.0);
    auto at = [&](std::size_t r, std::size_t col) -> double& { return T[r * w + col]; };
    std::vector<std::size_t> basis(m);
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t j = 0; j < n; ++j) at(r, j) = A[r][j];
        at(r, n + r) = 1.0;
        at(r, n + m) = b[r];
        basis[r] = n + r;
    }
    for (std::size_t j = 0; j < n; ++j) at(m, j) = c[j];

    SimplexResult out;
    for (;;) {
        std::size_t enter = w;
        for (std::size_t j = 0; j + 1 < w; ++j)
            if (at(m, j) > kPivotTol) {
                enter = j;
                break;
            }
        if (enter == w) break;
        if (++out.iterations > max_iterations) throw InternalError("simplex: iteration limit reached");

        std::size_t leave = m;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r < m; ++r) {
            double a = at(r, enter);
            if (a <= kPivotTol) continue;
            double ratio = at(r, n + m) / a;
            if (ratio < best - kPivotTol || (ratio <= best + kPivotTol && leave < m && basis[r] < basis[leave])) {
                if (ratio < best) best = ratio;
                leave = r;
            }
        }
        if (leave == m) {
            out.status = SimplexStatus::unbounded;
            return out;
        }

        const double piv = at(leave, enter);
        for (std::size_t j = 0; j < w; ++j) at(leave, j) /= piv;
        for (std::size_t r = 0; r <= m; ++r) {
            if (r == leave) continue;
            double f = at(r, enter);
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < w; ++j) at(r, j) -= f * at(leave, j);
            at(r, enter) = 0.0;
        }
        basis[leave] = enter;
    }

    out.x.assign(n, 0.0);
    for (std::size_t r = 0; r < m; ++r)
        if (basis[r] < n) out.x[basis[r]] = std::max(0.0, at(r, n + m));
    for (std::size_t j = 0; j < n; ++j) out.objective += c[j] * out.x[j];
    out.max_reduced_cost = 0.0;
    for (std::size_t j = 0; j + 1 < w; ++j) out.max_reduced_cost = std::max(out.max_reduced_cost, at(m, j));
    return out;
}

}  // namespace ocrs
