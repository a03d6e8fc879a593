#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "ocrs/acceptance.hpp"
#include "ocrs/bounds.hpp"
#include "ocrs/facts.hpp"
#include "ocrs/five_var.hpp"
#include "ocrs/nelder_mead.hpp"
#include "ocrs/quadrature.hpp"

using namespace ocrs;

namespace {

const Setting kSettings[] = {Setting::general, Setting::bipartite, Setting::patience_general,
                             Setting::patience_one_sided};

// Direct evaluation of the summed bound, written out per setting.
double summed_bound(double c0, double c1, double c2, double a, double x, double d, double dbig, double m) {
    const double s = 2.0 - x - d;
    return (1.0 - a * s) * (c0 + c1 * (s + a * m * m + a * dbig * (1.0 - m) / 2.0) +
                            c2 * (1.0 - 2.0 * a) * (1.0 - 2.0 * a) * (d - dbig) * (1.0 - m));
}

// Brute-force grid minimum over x, d, dbig (and m when used).
double grid_minimum(Setting setting, int n) {
    const LemmaConstants c = lemma_constants(setting);
    double best = std::numeric_limits<double>::infinity();
    const int mn = c.uses_m ? n : 0;
    for (int i = 0; i <= n; ++i) {
        const double x = static_cast<double>(i) / n;
        for (int j = 0; j <= n; ++j) {
            const double d = 2.0 * (1.0 - x) * j / n;
            for (int k = 0; k <= n; ++k) {
                const double dbig = d * k / n;
                for (int l = 0; l <= mn; ++l) {
                    const double m = mn ? static_cast<double>(l) / n : 0.0;
                    best = std::min(best, summed_bound(c.c0, c.c1, c.c2, c.alpha, x, d, dbig, m));
                }
            }
        }
    }
    return best;
}

}  // namespace

TEST(Scalars, HValues) {
    EXPECT_EQ(h(0.0), 1.0);
    EXPECT_NEAR(h(1.0), 1.0 - std::exp(-1.0), 1e-15);
    EXPECT_NEAR(h(2.0), 0.4323323583816936, 1e-15);
    EXPECT_NEAR(h(1e-12), 1.0, 1e-12);
    EXPECT_THROW(h(-1.0), InputError);
}

TEST(Scalars, QuadratureExamples) {
    EXPECT_NEAR(integrate([](double t) { return t * t; }, 0.0, 1.0), 1.0 / 3.0, 1e-12);
    EXPECT_NEAR(integrate([](double t) { return std::exp(-2.0 * t); }, 0.0, 1.0), h(2.0), 1e-12);
    EXPECT_NEAR(integrate([](double t) { return std::sqrt(t); }, 0.0, 1.0), 2.0 / 3.0, 1e-8);
}

TEST(Scalars, ZAtZeroAndMonotone) {
    EXPECT_NEAR(z(0.0), 0.125 - 0.125 * std::exp(-4.0) - 0.5 * std::exp(-2.0), 1e-15);
    // The integrand's x -> 0 limit is e^{-2a}(a - (1 - e^{-2a})/2).
    double limit = integrate([](double a) { return std::exp(-2.0 * a) * (a + 0.5 * std::expm1(-2.0 * a)); }, 0.0, 1.0);
    EXPECT_NEAR(z(0.0), limit, 1e-10);
    EXPECT_NEAR(z(1e-6), z(0.0), 1e-6);
    double prev = z(0.0);
    for (int i = 1; i <= 50; ++i) {
        double cur = z(i / 50.0);
        EXPECT_GE(cur, prev - 1e-12) << "x=" << i / 50.0;
        prev = cur;
    }
    EXPECT_THROW(z(1.5), InputError);
}

TEST(Scalars, H1ClosedFormAgrees) {
    EXPECT_EQ(h1(0.0, 0.4), 0.0);
    for (double a : {0.1, 0.5, 1.0})
        for (double x : {0.0, 0.3, 1.0}) EXPECT_NEAR(h1(a, x), h1_closed(a, x), 1e-9) << a << "," << x;
}

TEST(Scalars, PhiTail) {
    EXPECT_EQ(phi(std::nullopt, 0.7), 1.0);
    EXPECT_EQ(phi(1, 0.7), 1.0);
    for (double y : {0.0, 0.3, 1.0}) EXPECT_NEAR(phi(2, y), std::exp(-y) * (1.0 + y), 1e-15);
    // Nonincreasing in y.
    EXPECT_GE(phi(5, 0.2), phi(5, 0.6));
}

TEST(LemmaBounds, IsolatedEdgeValues) {
    std::vector<NeighborTerm> none;
    EXPECT_NEAR(r0_bound(Setting::general, 1.0, 1.0, none, 0.0), h(2.0) + 0.14, 1e-15);
    EXPECT_NEAR(r0_bound(Setting::patience_general, 1.0, 1.0, none, 0.0), 0.499, 1e-15);
    EXPECT_NEAR(one_sided_r0_bound(0.6, 0.0, none, 0.162), 0.405 * 0.6, 1e-15);
    EXPECT_EQ(r1_bound(Setting::general, 1.0, 1.0, 0.0, none, 0.171), 0.0);
}

TEST(LemmaBounds, R1UsesTriangleTermOnlyWhereItShould) {
    std::vector<NeighborTerm> nb{{0.3, 0.2}};
    const double a = 0.171;
    const double shrink = (1 - 2 * a) * (1 - 2 * a);
    EXPECT_NEAR(r1_bound(Setting::general, 0.5, 0.5, 0.1, nb, a),
                (1 - a * 0.5) * shrink * 0.3 * (1 - 0.1 - 0.3 - 0.2) * 0.0275 * 0.5, 1e-15);
    EXPECT_NEAR(r1_bound(Setting::bipartite, 0.5, 0.5, 0.1, nb, a),
                (1 - a * 0.5) * shrink * 0.3 * (1 - 0.3 - 0.2) * 0.0275 * 0.5, 1e-15);
    std::vector<NeighborTerm> big{{0.6, 0.6}};
    EXPECT_EQ(r1_bound(Setting::general, 0.5, 0.5, 0.0, big, a), 0.0);
}

TEST(LemmaBounds, EdgeBoundsOnAPath) {
    PricingInstance g;
    for (int i = 0; i < 3; ++i) g.vertices.push_back({i, Side::none, std::nullopt, std::nullopt});
    g.edges.push_back({0, 0, 1, {{0.0, 1.0, 1.0}}});
    g.edges.push_back({1, 1, 2, {{0.0, 1.0, 1.0}}});
    std::vector<double> x{0.4, 0.5};
    auto b = edge_bounds(x, g, Setting::general, 0.171);
    std::vector<NeighborTerm> nb0{{0.5, 2.0 - 0.4 - 0.5}};
    EXPECT_NEAR(b[0].r0, r0_bound(Setting::general, 0.4, 2.0 - 0.5 - 0.4, nb0, 0.171), 1e-15);
    EXPECT_NEAR(b[0].r1, r1_bound(Setting::general, 0.4, 1.1, 0.0, nb0, 0.171), 1e-15);
}

TEST(FiveVar, CertificatesMeetTheirTargets) {
    for (Setting s : kSettings) {
        const LemmaConstants c = lemma_constants(s);
        BoundCertificate cert = five_var_minimize(s, c.alpha);
        EXPECT_TRUE(five_var_feasible(cert.point)) << to_string(s);
        EXPECT_GE(cert.sign_condition_1, 0.0);
        EXPECT_GE(cert.sign_condition_2, 0.0);
        EXPECT_GE(cert.minimum, c.target - acceptance::kCertificateTol) << to_string(s);
        EXPECT_NEAR(cert.minimum, five_var_objective(s, c.alpha, cert.point), 1e-12);
        // The polished minimum is at or below any grid point.
        const double grid = grid_minimum(s, 20);
        EXPECT_LE(cert.minimum, grid + 1e-12);
        EXPECT_GE(cert.minimum, grid - 5e-3);
    }
}

TEST(FiveVar, GridResolutionConverges) {
    for (Setting s : kSettings) {
        const double a = lemma_constants(s).alpha;
        EXPECT_NEAR(five_var_minimize(s, a, 41).minimum, five_var_minimize(s, a, 81).minimum, 1e-3);
    }
}

TEST(FiveVar, ObjectiveMatchesDirectFormula) {
    const LemmaConstants c = lemma_constants(Setting::general);
    FiveVarPoint p{0.0, 0.9, 0.4, 0.3, 0.2};
    p.s = 2.0 - p.x - p.d;
    EXPECT_NEAR(five_var_objective(Setting::general, 0.2, p), summed_bound(c.c0, c.c1, c.c2, 0.2, 0.3, 0.9, 0.4, 0.2),
                1e-15);
    EXPECT_THROW(five_var_minimize(Setting::general, 0.7), InputError);
    EXPECT_THROW(five_var_minimize(Setting::general, 0.2, 1), InputError);
}

TEST(FiveVar, InstanceBoundsNeverUndercutTheCertificate) {
    // Per-edge (r0 + r1) / x on the suite instances stays above the program
    // minimum for the settings without patience.
    for (Setting s : {Setting::general, Setting::bipartite}) {
        const LemmaConstants c = lemma_constants(s);
        const double cert = five_var_minimize(s, c.alpha).minimum;
        for (const acceptance::SuiteCase& sc : acceptance::suite_cases()) {
            if (s == Setting::bipartite && !is_bipartite(sc.inst.mode)) continue;
            auto b = edge_bounds(sc.x, sc.inst, s, c.alpha);
            for (std::size_t e = 0; e < b.size(); ++e) {
                if (sc.x[e] < 1e-12) continue;
                EXPECT_GE((b[e].r0 + b[e].r1) / sc.x[e], cert - 1e-6) << sc.name << " edge " << e;
            }
        }
    }
}

TEST(Facts, EveryRowHolds) {
    auto rows = verify_facts();
    EXPECT_GE(rows.size(), 10u);
    for (const FactRow& r : rows) {
        EXPECT_TRUE(r.holds) << r.id << ": " << r.detail;
        EXPECT_GE(r.margin, -1e-12) << r.id;
    }
}

TEST(Facts, PairIntegralWithoutPatienceIsH) {
    EXPECT_NEAR(pair_patience_integral(0.5, std::nullopt, std::nullopt), h(1.5), 1e-9);
    EXPECT_NEAR(blocker_integral(0.0, 3), 0.0, 1e-15);
}

TEST(NelderMead, FindsQuadraticMinimum) {
    auto f = [](const std::vector<double>& v) { return (v[0] - 0.3) * (v[0] - 0.3) + 2.0 * (v[1] + 0.1) * (v[1] + 0.1); };
    NelderMeadResult r = nelder_mead(f, {1.0, 1.0}, [](std::vector<double>&) {});
    EXPECT_NEAR(r.x[0], 0.3, 1e-5);
    EXPECT_NEAR(r.x[1], -0.1, 1e-5);
    NelderMeadResult boxed = nelder_mead(f, {1.0, 1.0}, [](std::vector<double>& v) {
        for (double& t : v) t = std::clamp(t, 0.0, 1.0);
    });
    EXPECT_NEAR(boxed.x[1], 0.0, 1e-6);
}
