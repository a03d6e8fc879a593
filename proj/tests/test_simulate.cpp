#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "ocrs/bounds.hpp"
#include "ocrs/generators.hpp"
#include "ocrs/lp.hpp"
#include "ocrs/monte_carlo.hpp"
#include "ocrs/oracles.hpp"
#include "ocrs/quadrature.hpp"
#include "ocrs/trials.hpp"

using namespace ocrs;

namespace {

const AttenuationSpec kTrivial{AttenuationKind::trivial, 0.0};
const AttenuationSpec kA1{AttenuationKind::a1, 0.0};

PricingInstance path(int edges, Mode mode = Mode::general) {
    PricingInstance g;
    g.mode = mode;
    for (int i = 0; i <= edges; ++i) {
        Side s = mode == Mode::general ? Side::none : (i % 2 ? Side::online : Side::offline);
        g.vertices.push_back({i, s, std::nullopt, std::nullopt});
    }
    for (int i = 0; i < edges; ++i)
        g.edges.push_back({i, static_cast<std::size_t>(i), static_cast<std::size_t>(i + 1), {{0.0, 1.0, 1.0}}});
    return g;
}

PricingInstance star(int k) {
    FamilyParams fp;
    fp.k = k;
    return generate_family(Family::star, fp).instance;
}

// |estimate - truth| within k half-widths (with a floor for zero-variance runs).
void expect_within(double estimate, double half, double truth, double k, const char* what) {
    EXPECT_LE(std::fabs(estimate - truth), k * half + 1e-12) << what << ": " << estimate << " vs " << truth;
}

}  // namespace

TEST(RoOcrs, SingleEdgeFullWeightAlwaysMatches) {
    PricingInstance g = path(1);
    RoOcrsEngine eng(g, {1.0}, kTrivial);
    SimulationReport r = monte_carlo(eng, g, 1000, 3, 1);
    EXPECT_EQ(r.edges[0].matched, 1000u);
}

TEST(RoOcrs, TwoEdgePathHalfHalf) {
    PricingInstance g = path(2);
    std::vector<double> x{0.5, 0.5};
    // Two orders x four active patterns: e1 matched iff active and (first or e2 inactive).
    const double truth = 0.5 * (0.5 * 1.0 + 0.5 * 0.5);
    EXPECT_DOUBLE_EQ(truth, 0.375);
    EXPECT_NEAR(exact_trivial_oracle(x, g)[0], truth, 1e-15);
    SimulationReport r = monte_carlo(RoOcrsEngine(g, x, kTrivial), g, 200000, 11, 1);
    expect_within(r.edges[0].freq, r.edges[0].ci.half(), truth, 4.0, "raw");
    expect_within(r.edges[0].cond, r.edges[0].cond_half, truth, 4.0, "conditional");
}

TEST(RoOcrs, StarTrivialMatchesClosedForm) {
    // Star with equal weights x: e is matched iff active and no active edge
    // arrives before it, so Pr = x (1/k) sum_{j<k} (1-x)^j.
    const int k = 4;
    PricingInstance g = star(k);
    std::vector<double> x(k, 0.25);
    double truth = 0.0;
    for (int j = 0; j < k; ++j) truth += std::pow(0.75, j);
    truth *= 0.25 / k;
    auto exact = exact_trivial_oracle(x, g);
    for (double v : exact) EXPECT_NEAR(v, truth, 1e-14);
    SimulationReport r = monte_carlo(RoOcrsEngine(g, x, kTrivial), g, 200000, 5, 1);
    for (const EdgeReport& e : r.edges) expect_within(e.freq, e.ci.half(), truth, 4.0, "star trivial");
}

TEST(RoOcrs, StarA1MatchesQuadrature) {
    // Pr[e matched] = x int_0^1 e^{-tx} prod_f (1 - x_f int_0^t e^{-s x_f} ds) dt.
    const int k = 3;
    PricingInstance g = star(k);
    std::vector<double> x{0.5, 0.3, 0.2};
    SimulationReport r = monte_carlo(RoOcrsEngine(g, x, kA1), g, 200000, 17, 1);
    for (int e = 0; e < k; ++e) {
        double truth = x[e] * integrate(
                                  [&](double t) {
                                      double v = std::exp(-t * x[e]);
                                      for (int f = 0; f < k; ++f)
                                          if (f != e) v *= 1.0 - (-std::expm1(-t * x[f]));
                                      return v;
                                  },
                                  0.0, 1.0);
        expect_within(r.edges[e].cond, r.edges[e].cond_half, truth, 4.0, "star a1");
        EXPECT_GE(truth / x[e], 1.0 - std::exp(-1.0) - 1e-12);
    }
}

TEST(RoOcrs, TriangleSymmetry) {
    FamilyParams fp;
    fp.x = std::vector<double>(3, 1.0 / 3.0);
    GeneratedInstance t = generate_family(Family::triangle, fp);
    auto exact = exact_trivial_oracle(*t.x, t.instance);
    EXPECT_NEAR(exact[0], exact[1], 1e-15);
    EXPECT_NEAR(exact[1], exact[2], 1e-15);
    EXPECT_GE(exact[0], (1.0 / 3.0) * (1.0 / 3.0));
}

TEST(RoOcrs, RejectsPointsOutsideThePolytope) {
    PricingInstance g = path(2);
    EXPECT_THROW(RoOcrsEngine(g, {0.6, 0.6}, kTrivial), InputError);
    EXPECT_THROW(RoOcrsEngine(g, {0.5}, kTrivial), InputError);
}

TEST(Oracle, SingleEdgeAndRefusal) {
    PricingInstance g = path(1);
    EXPECT_NEAR(exact_trivial_oracle(std::vector<double>{0.37}, g)[0], 0.37, 1e-15);
    PricingInstance big = path(11);
    std::vector<double> x(11, 0.4);
    EXPECT_THROW(exact_trivial_oracle(x, big), RefusedError);
}

TEST(Oracle, MonteCarloAgreesOnRandomGraph) {
    FamilyParams fp;
    fp.n = 4;
    fp.density = 0.8;
    fp.seed = 3;
    GeneratedInstance g = generate_family(Family::random_general, fp);
    ASSERT_LE(g.instance.edge_count(), 6u);
    auto exact = exact_trivial_oracle(*g.x, g.instance);
    SimulationReport r = monte_carlo(RoOcrsEngine(g.instance, *g.x, kTrivial), g.instance, 300000, 8, 1);
    for (std::size_t e = 0; e < exact.size(); ++e) {
        expect_within(r.edges[e].freq, r.edges[e].ci.half(), exact[e], 4.0, "raw");
        expect_within(r.edges[e].cond, r.edges[e].cond_half, exact[e], 4.0, "conditional");
    }
}

TEST(VertexArrival, SingleEdge) {
    PricingInstance g = path(1, Mode::bipartite);
    SimulationReport r = monte_carlo(VertexArrivalEngine(g, {1.0}), g, 200000, 4, 1);
    const double truth = integrate([](double t) { return std::exp(-t); }, 0.0, 1.0);
    EXPECT_NEAR(truth, 1.0 - std::exp(-1.0), 1e-12);
    expect_within(r.edges[0].freq, r.edges[0].ci.half(), truth, 4.0, "vertex single edge");
}

TEST(VertexArrival, ZeroWeightNeverMatches) {
    PricingInstance g = path(2, Mode::bipartite);
    SimulationReport r = monte_carlo(VertexArrivalEngine(g, {0.0, 0.7}), g, 20000, 4, 1);
    EXPECT_EQ(r.edges[0].matched, 0u);
}

TEST(VertexArrival, SharedOfflineVertexMeetsItsFloor) {
    // Two online vertices competing for one offline vertex.
    PricingInstance g = star(2);
    SimulationReport r = monte_carlo(VertexArrivalEngine(g, {0.5, 0.5}), g, 200000, 9, 1);
    const double floor = (1.0 - std::exp(-1.0)) * (1.0 - std::exp(-1.0));
    for (const EdgeReport& e : r.edges) EXPECT_GE((e.cond + 3.0 * e.cond_half) / e.x, floor);
}

TEST(VertexArrival, RejectsGeneralGraphs) {
    PricingInstance g = path(2);
    EXPECT_THROW(VertexArrivalEngine(g, {0.5, 0.5}), InputError);
}

TEST(Stochastic, SingleEdgeMatchesAtAcceptanceRate) {
    PricingInstance g = path(1);
    SimulationReport r = monte_carlo(StochasticEngine(g, {1.0}, {0.7}, kTrivial), g, 200000, 2, 1);
    expect_within(r.edges[0].freq, r.edges[0].ci.half(), 0.7, 4.0, "single edge");
}

TEST(Stochastic, UnitPatienceProbesCenterOnce) {
    PricingInstance g = star(2);
    for (Vertex& v : g.vertices) v.patience = 1;
    // Center probes sum to 1 = patience.
    StochasticEngine eng(g, {0.5, 0.5}, {0.5, 0.5}, kTrivial);
    for (std::uint64_t t = 0; t < 2000; ++t) EXPECT_LE(run_trial(eng, 6, t).probes_used[0], 1);
    SimulationReport r = monte_carlo(eng, g, 20000, 6, 1);
    EXPECT_EQ(r.patience_violations, 0u);
}

TEST(Stochastic, PatienceInfeasibleInputsRejected) {
    PricingInstance g = star(2);
    for (Vertex& v : g.vertices) v.patience = 1;
    EXPECT_THROW(StochasticEngine(g, {1.0, 1.0}, {0.5, 0.5}, kTrivial), InputError);
    EXPECT_THROW(StochasticEngine(g, {0.5, 0.5}, {1.5, 0.5}, kTrivial), InputError);
}

TEST(Stochastic, ZeroAcceptanceEdgesUsePatienceButNeverMatch) {
    PricingInstance g = path(2);
    for (Vertex& v : g.vertices) v.patience = 1;
    StochasticEngine eng(g, {0.5, 0.5}, {0.0, 1.0}, kTrivial);
    SimulationReport r = monte_carlo(eng, g, 50000, 1, 1);
    EXPECT_EQ(r.edges[0].matched, 0u);
    // Edge 1 is blocked exactly when edge 0 is probed first: Pr = 0.5 * (1 - 0.5/2).
    expect_within(r.edges[1].freq, r.edges[1].ci.half(), 0.5 * (1.0 - 0.25), 4.0, "blocked by probe");
}

TEST(Stochastic, UnitPatienceFallsBelowTheFloor) {
    // Diagnostic: with patience 1, zero-acceptance neighbors that are almost
    // surely probed exhaust the middle edge's endpoints. For a2 the middle
    // ratio is a (1 - a t)^2 integrated, a = 1 - 2 alpha (slack ~ 2):
    // about 0.322, below the 0.395 floor that holds from patience 2 up.
    const double alpha = 0.16, delta = 1e-3;
    PricingInstance g = path(3);
    for (Vertex& v : g.vertices) v.patience = 1;
    StochasticEngine eng(g, {1.0 - delta, delta, 1.0 - delta}, {0.0, 1.0, 0.0}, {AttenuationKind::a2, alpha});
    SimulationReport r = monte_carlo(eng, g, 400000, 12, 1);
    auto st = edge_stats(eng.marginal(), g);
    const double ab = 1.0 - alpha * st[1].s, aa = 1.0 - alpha * st[0].s;
    const double truth =
        ab * integrate([&](double t) { return std::exp(-t * delta) * std::pow(1.0 - t * aa * (1.0 - delta), 2); }, 0.0, 1.0);
    const EdgeReport& mid = r.edges[1];
    expect_within(mid.cond / mid.x, mid.cond_half / mid.x, truth, 4.0, "middle ratio");
    EXPECT_LT(truth, 0.395);
    EXPECT_NEAR(truth, 0.322, 0.002);
}

TEST(Pricing, DeterministicAcceptancePaysOne) {
    PricingInstance g = path(1, Mode::bipartite);
    g.vertices[1].value = 2.0;
    g.edges[0].menu = {{1.0, 1.0, std::nullopt}};
    PricingEngine eng(g, FractionalPoint{{{1.0}}, 1.0}, kTrivial, Objective::revenue);
    SimulationReport r = monte_carlo(eng, g, 1000, 1, 1);
    EXPECT_DOUBLE_EQ(r.revenue_mean, 1.0);
    PricingEngine none(g, FractionalPoint{{{0.0}}, 0.0}, kTrivial, Objective::revenue);
    EXPECT_DOUBLE_EQ(monte_carlo(none, g, 1000, 1, 1).revenue_mean, 0.0);
}

TEST(Pricing, NoOfferUsesNoPatience) {
    PricingInstance g = path(1, Mode::bipartite);
    g.vertices[0].patience = 1;
    g.edges[0].menu = {{0.0, 0.5, 1.0}};
    PricingEngine eng(g, FractionalPoint{{{0.3}}, 0.0}, kTrivial, Objective::custom);
    for (std::uint64_t t = 0; t < 500; ++t) {
        TrialOutcome o = run_trial(eng, 4, t);
        EXPECT_EQ(o.probes_used[0], o.probed[0] ? 1 : 0);
    }
}

TEST(Pricing, D1LpPointBeatsGreedy) {
    FamilyParams fp;
    fp.eps = 0.01;
    PricingInstance g = generate_family(Family::d1, fp).instance;
    LpSolution lp = solve_lp(build_lp_pricing(g, Objective::custom));
    SimulationReport r = monte_carlo(PricingEngine(g, lp.point, kTrivial, Objective::custom), g, 100000, 3, 1);
    EXPECT_GE(r.revenue_mean, greedy_baseline(g, GreedyRule::by_weight, Objective::custom));
}

TEST(Pricing, RejectsInfeasiblePoints) {
    PricingInstance g = path(1, Mode::bipartite);
    g.edges[0].menu = {{0.0, 1.0, 1.0}};
    EXPECT_THROW(PricingEngine(g, FractionalPoint{{{1.2}}, 0.0}, kTrivial, Objective::custom), InputError);
}

TEST(Pricing, RevenueTracksOcrsBalancedness) {
    // Revenue of the pricing scheme is at least the matching scheme's
    // balancedness on the induced marginals times the LP value.
    FamilyParams fp;
    fp.n = 3;
    fp.m = 3;
    fp.density = 0.8;
    fp.seed = 4;
    fp.menu_size = 3;
    PricingInstance g = generate_family(Family::random_bipartite, fp).instance;
    LpSolution lp = solve_lp(build_lp_pricing(g, Objective::revenue));
    const AttenuationSpec a2{AttenuationKind::a2, 0.171};
    SimulationReport price = monte_carlo(PricingEngine(g, lp.point, a2, Objective::revenue), g, 200000, 5, 1);
    std::vector<double> x = marginals(lp.point, g).x;
    SimulationReport ocrs = monte_carlo(RoOcrsEngine(g, x, a2), g, 200000, 5, 1);
    double c = std::numeric_limits<double>::infinity();
    for (const EdgeReport& e : ocrs.edges)
        if (e.x > 1e-12) c = std::min(c, (e.cond - 3.0 * e.cond_half) / e.x);
    EXPECT_GE(price.cond_revenue_mean + 3.0 * price.cond_revenue_half, c * lp.point.objective);
}

TEST(MonteCarlo, OneTrialEqualsTheOutcome) {
    FamilyParams fp;
    fp.k = 3;
    GeneratedInstance g = generate_family(Family::star, fp);
    RoOcrsEngine eng(g.instance, *g.x, kA1);
    TrialOutcome o = run_trial(eng, 77, 0);
    SimulationReport r = monte_carlo(eng, g.instance, 1, 77, 1);
    for (std::size_t e = 0; e < 3; ++e) {
        EXPECT_EQ(r.edges[e].freq, o.matched[e] ? 1.0 : 0.0);
        EXPECT_EQ(r.edges[e].freq_r0, (o.matched[e] && o.q[e] == 0) ? 1.0 : 0.0);
        EXPECT_EQ(r.edges[e].cond, o.cond[e]);
    }
    EXPECT_EQ(r.revenue_mean, o.revenue);
}

TEST(MonteCarlo, WorkerCountDoesNotChangeTheReport) {
    FamilyParams fp;
    fp.n = 5;
    fp.density = 0.7;
    fp.seed = 2;
    GeneratedInstance g = generate_family(Family::random_general, fp);
    RoOcrsEngine eng(g.instance, *g.x, {AttenuationKind::a2, 0.171});
    SimulationReport a = monte_carlo(eng, g.instance, 50000, 42, 1);
    SimulationReport b = monte_carlo(eng, g.instance, 50000, 42, 8);
    ASSERT_EQ(a.edges.size(), b.edges.size());
    for (std::size_t e = 0; e < a.edges.size(); ++e) {
        EXPECT_EQ(a.edges[e].matched, b.edges[e].matched);
        EXPECT_EQ(a.edges[e].freq_r0, b.edges[e].freq_r0);
        EXPECT_EQ(a.edges[e].freq_r1, b.edges[e].freq_r1);
        EXPECT_EQ(a.edges[e].cond, b.edges[e].cond);
        EXPECT_EQ(a.edges[e].cond_half, b.edges[e].cond_half);
    }
    EXPECT_EQ(a.min_ratio, b.min_ratio);
    EXPECT_EQ(a.revenue_mean, b.revenue_mean);
}

TEST(MonteCarlo, InvariantsAndDecomposition) {
    FamilyParams fp;
    fp.n = 6;
    fp.density = 0.6;
    fp.seed = 5;
    GeneratedInstance g = generate_family(Family::random_general, fp);
    SimulationReport r = monte_carlo(RoOcrsEngine(g.instance, *g.x, kTrivial), g.instance, 30000, 1, 1);
    EXPECT_EQ(r.matching_violations, 0u);
    for (const EdgeReport& e : r.edges) {
        EXPECT_GE(e.freq, 0.0);
        EXPECT_LE(e.freq, 1.0);
        EXPECT_LE(e.freq_r0 + e.freq_r1, e.freq + 1e-15);
        EXPECT_LE(e.ci.lo, e.freq);
        EXPECT_GE(e.ci.hi, e.freq);
    }
    EXPECT_THROW(monte_carlo(RoOcrsEngine(g.instance, *g.x, kTrivial), g.instance, 0, 1, 1), InputError);
}

TEST(MonteCarlo, WilsonInterval) {
    Interval a = wilson(0, 100);
    EXPECT_EQ(a.lo, 0.0);
    EXPECT_GT(a.hi, 0.0);
    Interval b = wilson(50, 100);
    EXPECT_NEAR(0.5 * (b.lo + b.hi), 0.5, 1e-12);
    // Large-n width approaches the normal one.
    Interval c = wilson(500000, 1000000);
    EXPECT_NEAR(c.half(), kZ99 * std::sqrt(0.25 / 1e6), 1e-6);
}

TEST(Dp, SmallInstances) {
    PricingInstance g = path(1, Mode::bipartite);
    g.vertices[1].value = 2.0;
    g.edges[0].menu = {{1.0, 1.0, std::nullopt}};
    EXPECT_NEAR(optimal_policy_dp(g, Objective::revenue), 1.0, 1e-15);

    FamilyParams fp;
    fp.eps = 0.01;
    EXPECT_NEAR(optimal_policy_dp(generate_family(Family::d1, fp).instance, Objective::custom), 1.0, 1e-15);

    FamilyParams h;
    h.k = 10;
    h.grid = {0, 2.5, 5, 7.5, 9};
    PricingInstance se = generate_family(Family::single_edge_hard, h).instance;
    // Every price earns p (k - w) = 1 and only one offer fits on the edge.
    EXPECT_NEAR(optimal_policy_dp(se, Objective::revenue), 1.0, 1e-12);
}

TEST(Dp, TwoEdgesSharingAVertexByHand) {
    // Offer e0 (p=0.5, reward 1) then e1 (p=1, reward 0.8) if e0 refused:
    // 0.5 + 0.5 * 0.8 = 0.9, better than e1 alone (0.8).
    PricingInstance g = star(2);
    g.edges[0].menu = {{0.0, 0.5, 1.0}};
    g.edges[1].menu = {{0.0, 1.0, 0.8}};
    EXPECT_NEAR(optimal_policy_dp(g, Objective::custom), 0.9, 1e-15);
    g.vertices[0].patience = 1;
    EXPECT_NEAR(optimal_policy_dp(g, Objective::custom), 0.8, 1e-15);
}

TEST(Dp, RefusesLargeMenus) {
    FamilyParams h;
    h.k = 20;
    for (int w = 0; w < 13; ++w) h.grid.push_back(w);
    EXPECT_THROW(optimal_policy_dp(generate_family(Family::single_edge_hard, h).instance, Objective::revenue),
                 RefusedError);
}

TEST(Greedy, Counterexamples) {
    FamilyParams fp;
    fp.eps = 0.01;
    PricingInstance d1 = generate_family(Family::d1, fp).instance;
    EXPECT_EQ(greedy_baseline(d1, GreedyRule::by_weight, Objective::custom), 0.02);
    fp.N = 10;
    fp.k = 3;
    PricingInstance d2 = generate_family(Family::d2, fp).instance;
    EXPECT_NEAR(greedy_baseline(d2, GreedyRule::by_expected_weight, Objective::custom), 1.01, 1e-12);
    // High to low: each e_i accepted with probability N^-i and pays N^i.
    double high_low = 0.0, reach = 1.0;
    for (int i = 3; i >= 1; --i) {
        high_low += reach;  // N^-i * N^i
        reach *= 1.0 - std::pow(10.0, -i);
    }
    high_low += reach * 1.01;
    EXPECT_NEAR(greedy_baseline(d2, GreedyRule::by_weight, Objective::custom), high_low, 1e-12);
}

TEST(Greedy, SingleOptionIgnoresTheRule) {
    PricingInstance g = path(1, Mode::bipartite);
    g.edges[0].menu = {{0.0, 0.3, 2.0}};
    EXPECT_NEAR(greedy_baseline(g, GreedyRule::by_weight, Objective::custom), 0.6, 1e-15);
    EXPECT_NEAR(greedy_baseline(g, GreedyRule::by_expected_weight, Objective::custom), 0.6, 1e-15);
}
