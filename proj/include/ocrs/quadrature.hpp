#pragma once

#include <cmath>
#include <string>

#include "ocrs/error.hpp"

namespace ocrs {

inline constexpr double kQuadTol = 1e-10;

namespace detail {

template <class F>
double checked(F& f, double x) {
    double v = f(x);
    if (!std::isfinite(v)) throw NumericError("integrand is not finite at " + std::to_string(x));
    return v;
}

template <class F>
double simpson_step(F& f, double a, double fa, double b, double fb, double m, double fm, double whole, double tol,
                    int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = checked(f, lm), frm = checked(f, rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return simpson_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           simpson_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson on [a, b] with absolute tolerance `tol`. The interval is
/// first cut into `panels` pieces so that narrow features are not skipped by
/// the initial five-point estimate.
template <class F>
double integrate(F&& f, double a, double b, double tol = kQuadTol, int panels = 8, int max_depth = 40) {
    if (!(tol > 0.0)) throw InputError("quadrature tolerance must be positive");
    if (a == b) return 0.0;
    if (!(std::isfinite(a) && std::isfinite(b))) throw InputError("quadrature bounds must be finite");
    double total = 0.0;
    const double step = (b - a) / panels;
    for (int i = 0; i < panels; ++i) {
        const double lo = a + i * step;
        const double hi = (i + 1 == panels) ? b : lo + step;
        const double mid = 0.5 * (lo + hi);
        const double flo = detail::checked(f, lo), fhi = detail::checked(f, hi), fmid = detail::checked(f, mid);
        const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
        total += detail::simpson_step(f, lo, flo, hi, fhi, mid, fmid, whole, tol / panels, max_depth);
    }
    return total;
}

}  // namespace ocrs
