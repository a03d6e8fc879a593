#pragma once

// The acceptance battery: a fixed instance suite and one check per
// criterion. Shared by the `suite` CLI command and the acceptance test.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ocrs/attenuation.hpp"
#include "ocrs/bounds.hpp"
#include "ocrs/facts.hpp"
#include "ocrs/five_var.hpp"
#include "ocrs/generators.hpp"
#include "ocrs/lp.hpp"
#include "ocrs/monte_carlo.hpp"
#include "ocrs/oracles.hpp"
#include "ocrs/trials.hpp"

namespace ocrs::acceptance {

// Tolerances and floors, pinned here so every run uses the same numbers.
inline constexpr double kCertificateTol = 0.002;
inline constexpr double kTightTarget = 0.4323323583816936;  // (1 - e^{-2}) / 2
inline constexpr double kTightTol = 0.006;
inline constexpr double kStarTol = 0.006;
inline constexpr double kCiMultiple = 3.0;
inline constexpr double kOracleCiMultiple = 4.0;
inline constexpr double kLpDominanceTol = 1e-8;
inline constexpr double kFactsSeconds = 30.0;
inline constexpr double kBoundsSeconds = 120.0;
inline constexpr double kTightSeconds = 60.0;
inline constexpr double kFloorsSeconds = 1800.0;
inline constexpr std::size_t kOracleMaxSuiteEdges = 6;

inline constexpr double kFloorGeneral = 0.45;
inline constexpr double kFloorBipartite = 0.456;
inline constexpr double kFloorPatience = 0.395;
inline constexpr double kFloorOneSided = 0.426;
inline constexpr double kFloorVertex = 0.399;
inline constexpr double kFloorTrivial = 1.0 / 3.0;

struct SuiteCase {
    std::string name;
    PricingInstance inst;
    std::vector<double> x;
};

inline SuiteCase make_case(std::string name, Family f, FamilyParams fp) {
    GeneratedInstance g = generate_family(f, fp);
    return {std::move(name), std::move(g.instance), *g.x};
}

/// The fixed 20-instance suite: paths, stars, triangles, seeded random graphs.
inline std::vector<SuiteCase> suite_cases() {
    std::vector<SuiteCase> out;
    auto path = [](int n) {
        FamilyParams fp;
        fp.n = n;
        return fp;
    };
    auto star = [](int k) {
        FamilyParams fp;
        fp.k = k;
        return fp;
    };
    auto tri = [](double v) {
        FamilyParams fp;
        fp.x = std::vector<double>(3, v);
        return fp;
    };
    auto rb = [](int n, int m, double density, std::uint64_t seed) {
        FamilyParams fp;
        fp.n = n;
        fp.m = m;
        fp.density = density;
        fp.seed = seed;
        return fp;
    };
    auto rg = [](int n, double density, std::uint64_t seed) {
        FamilyParams fp;
        fp.n = n;
        fp.density = density;
        fp.seed = seed;
        return fp;
    };
    out.push_back(make_case("tight_path3(n=100)", Family::tight_path3, path(100)));
    out.push_back(make_case("tight_path3(n=10)", Family::tight_path3, path(10)));
    for (int k : {2, 3, 5, 10}) out.push_back(make_case("star(k=" + std::to_string(k) + ")", Family::star, star(k)));
    out.push_back(make_case("triangle(x=1/2)", Family::triangle, tri(0.5)));
    out.push_back(make_case("triangle(x=1/3)", Family::triangle, tri(1.0 / 3.0)));
    struct B {
        int n, m;
        double d;
        std::uint64_t seed;
    };
    for (B b : {B{3, 3, 0.7, 1}, B{4, 4, 0.5, 2}, B{4, 5, 0.6, 3}, B{5, 5, 0.4, 4}, B{3, 4, 1.0, 5}, B{6, 6, 0.3, 6}})
        out.push_back(make_case("random_bipartite(" + std::to_string(b.n) + "," + std::to_string(b.m) +
                                    ",seed=" + std::to_string(b.seed) + ")",
                                Family::random_bipartite, rb(b.n, b.m, b.d, b.seed)));
    struct G {
        int n;
        double d;
        std::uint64_t seed;
    };
    for (G g : {G{4, 0.8, 7}, G{5, 0.6, 8}, G{5, 0.8, 9}, G{6, 0.5, 10}, G{7, 0.4, 11}, G{4, 1.0, 12}})
        out.push_back(make_case("random_general(" + std::to_string(g.n) + ",seed=" + std::to_string(g.seed) + ")",
                                Family::random_general, rg(g.n, g.d, g.seed)));
    return out;
}

/// Probing inputs derived from a suite point: per-edge acceptance
/// probabilities p_e in (0.5, 1] (raised to x_e where needed), y_e = x_e / p_e,
/// and patience max(2, ceil(sum of y)) per vertex. With `one_sided` only the
/// offline side of a bipartite instance gets patience.
struct StochasticInputs {
    PricingInstance inst;
    std::vector<double> y, p;
};

inline StochasticInputs stochastic_inputs(const SuiteCase& c, bool one_sided) {
    if (one_sided && !is_bipartite(c.inst.mode)) throw InputError("one-sided patience needs a bipartite instance");
    StochasticInputs s{c.inst, {}, {}};
    const std::size_t m = c.x.size();
    std::vector<double> probes(c.inst.vertices.size(), 0.0);
    for (std::size_t e = 0; e < m; ++e) {
        double frac = std::fmod(0.6180339887498949 * static_cast<double>(e + 1), 1.0);
        double p = std::max(c.x[e], 1.0 - 0.5 * frac);
        s.p.push_back(p);
        s.y.push_back(std::min(1.0, c.x[e] / p));
        probes[c.inst.edges[e].u] += s.y.back();
        probes[c.inst.edges[e].v] += s.y.back();
    }
    for (std::size_t v = 0; v < s.inst.vertices.size(); ++v) {
        Vertex& w = s.inst.vertices[v];
        w.patience = std::nullopt;
        if (one_sided && w.side != Side::offline) continue;
        w.patience = std::max(2, static_cast<int>(std::ceil(probes[v] - 1e-9)));
    }
    if (one_sided) s.inst.mode = Mode::bipartite_one_sided_patience;
    return s;
}

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

struct Options {
    std::uint64_t trials = 1000000;
    std::uint64_t seed = 42;
    unsigned workers = 0;
    std::function<void(const std::string&)> log;  // progress lines, may be empty
};

inline std::string fmt(double v, int prec = 5) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", prec, v);
    return buf;
}

inline std::string format_line(const CriterionResult& r) {
    std::string detail = r.detail;
    while (!detail.empty() && (detail.back() == ' ' || detail.back() == ';')) detail.pop_back();
    return std::string(r.pass ? "PASS" : "FAIL") + " criterion " + std::to_string(r.id) + " (" + r.name +
           "): " + detail + " [" + fmt(r.seconds, 1) + " s]";
}

namespace detail {

using Clock = std::chrono::steady_clock;

inline double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// Minimum over edges with x > 0 of (estimate + k * half) / x, using the
// conditional estimator, plus the raw-frequency minimum for reference. A floor
// c passes when this is >= c, i.e. every ratio is >= c - k CI.
struct FloorCheck {
    double lower = std::numeric_limits<double>::infinity();  // min (cond + k half) / x
    double cond_min = std::numeric_limits<double>::infinity();
    double raw_min = std::numeric_limits<double>::infinity();
    std::string where;

    void see(const SimulationReport& r, const std::string& name, double k) {
        for (const EdgeReport& e : r.edges) {
            if (!(e.x > 0.0)) continue;
            double lo = (e.cond + k * e.cond_half) / e.x;
            if (lo < lower) {
                lower = lo;
                where = name + " edge " + std::to_string(e.id);
            }
            cond_min = std::min(cond_min, e.cond / e.x);
            raw_min = std::min(raw_min, e.ratio);
        }
    }
};

}  // namespace detail

/// Runs the whole battery. Results arrive in criterion order; `on_result`
/// (if set) sees each one as soon as it is decided.
class Battery {
public:
    explicit Battery(Options opt) : opt_(std::move(opt)), cases_(suite_cases()) {}

    std::vector<CriterionResult> run_all(const std::function<void(const CriterionResult&)>& on_result = {}) {
        std::vector<CriterionResult> out;
        auto push = [&](CriterionResult r) {
            if (on_result) on_result(r);
            out.push_back(std::move(r));
        };
        push(facts());
        push(certificates());
        push(tightness());
        push(stars());
        push(floors());
        push(oracle_equivalence());
        push(lp_dominance());
        push(greedy_separations());
        push(decomposition());
        return out;
    }

    CriterionResult facts() {
        auto t0 = detail::Clock::now();
        CriterionResult r{1, "facts battery", false, {}, 0.0};
        std::vector<FactRow> rows = verify_facts();
        r.seconds = detail::since(t0);
        std::string failed;
        double worst = std::numeric_limits<double>::infinity();
        for (const FactRow& f : rows) {
            worst = std::min(worst, f.margin);
            if (!f.holds) failed += " " + f.id;
        }
        r.pass = failed.empty() && r.seconds < kFactsSeconds;
        r.detail = std::to_string(rows.size()) + " rows, min margin " + fmt(worst, 8) +
                   (failed.empty() ? "" : ", failing:" + failed);
        return r;
    }

    CriterionResult certificates() {
        auto t0 = detail::Clock::now();
        CriterionResult r{2, "bound certificates", false, {}, 0.0};
        bool ok = true;
        for (Setting s : {Setting::general, Setting::bipartite, Setting::patience_general, Setting::patience_one_sided}) {
            LemmaConstants c = lemma_constants(s);
            BoundCertificate cert = five_var_minimize(s, c.alpha);
            bool hit = std::fabs(cert.minimum - c.target) <= kCertificateTol;
            ok = ok && hit;
            r.detail += std::string(to_string(s)) + "=" + fmt(cert.minimum) + " (target " + fmt(c.target, 3) + ") ";
        }
        r.seconds = detail::since(t0);
        r.pass = ok && r.seconds < kBoundsSeconds;
        return r;
    }

    CriterionResult tightness() {
        auto t0 = detail::Clock::now();
        CriterionResult r{3, "tightness on the 3-edge path", false, {}, 0.0};
        const SuiteCase& c = cases_.at(0);
        RoOcrsEngine eng(c.inst, c.x, {AttenuationKind::a1, 0.0});
        SimulationReport rep = monte_carlo(eng, c.inst, opt_.trials, opt_.seed, opt_.workers);
        const EdgeReport& mid = rep.edges.at(1);
        const double ratio = mid.cond / mid.x;
        r.seconds = detail::since(t0);
        r.pass = std::fabs(ratio - kTightTarget) <= kTightTol && r.seconds < kTightSeconds;
        r.detail = "middle-edge ratio " + fmt(ratio) + " (raw " + fmt(mid.ratio) + "), target " + fmt(kTightTarget) +
                   " +- " + fmt(kTightTol, 3);
        return r;
    }

    CriterionResult stars() {
        auto t0 = detail::Clock::now();
        CriterionResult r{4, "star optimality", false, {}, 0.0};
        const double target = 1.0 - std::exp(-1.0);
        double worst = std::numeric_limits<double>::infinity(), worst_raw = worst;
        std::string where;
        for (const SuiteCase& c : cases_) {
            if (c.name.rfind("star", 0) != 0) continue;
            RoOcrsEngine eng(c.inst, c.x, {AttenuationKind::a1, 0.0});
            SimulationReport rep = monte_carlo(eng, c.inst, opt_.trials, opt_.seed, opt_.workers);
            for (const EdgeReport& e : rep.edges) {
                if (e.cond / e.x < worst) {
                    worst = e.cond / e.x;
                    where = c.name;
                }
                worst_raw = std::min(worst_raw, e.ratio);
            }
        }
        r.seconds = detail::since(t0);
        r.pass = worst >= target - kStarTol;
        r.detail = "min edge ratio " + fmt(worst) + " on " + where + " (raw " + fmt(worst_raw) + "), floor " +
                   fmt(target - kStarTol);
        return r;
    }

    CriterionResult floors() {
        auto t0 = detail::Clock::now();
        CriterionResult r{5, "balancedness floors", false, {}, 0.0};
        struct Row {
            const char* label;
            double floor;
            detail::FloorCheck check;
        };
        Row general{"a2 general", kFloorGeneral, {}}, bip{"a2 bipartite", kFloorBipartite, {}},
            trivial{"trivial", kFloorTrivial, {}}, vertex{"vertex arrival", kFloorVertex, {}},
            patience{"patience", kFloorPatience, {}}, one_sided{"one-sided patience", kFloorOneSided, {}};
        const AttenuationSpec a2{AttenuationKind::a2, lemma_constants(Setting::general).alpha};
        const AttenuationSpec a2p{AttenuationKind::a2, lemma_constants(Setting::patience_general).alpha};
        const AttenuationSpec a2o{AttenuationKind::a2, lemma_constants(Setting::patience_one_sided).alpha};
        for (std::size_t i = 0; i < cases_.size(); ++i) {
            const SuiteCase& c = cases_[i];
            log("floors: " + c.name);
            const bool bipartite = is_bipartite(c.inst.mode);
            a2_[i] = monte_carlo(RoOcrsEngine(c.inst, c.x, a2), c.inst, opt_.trials, opt_.seed, opt_.workers);
            general.check.see(a2_[i], c.name, kCiMultiple);
            if (bipartite) bip.check.see(a2_[i], c.name, kCiMultiple);
            trivial_[i] = monte_carlo(RoOcrsEngine(c.inst, c.x, {AttenuationKind::trivial, 0.0}), c.inst, opt_.trials,
                                      opt_.seed, opt_.workers);
            trivial.check.see(trivial_[i], c.name, kCiMultiple);
            if (bipartite) {
                SimulationReport v = monte_carlo(VertexArrivalEngine(c.inst, c.x), c.inst, opt_.trials, opt_.seed,
                                                 opt_.workers);
                vertex.check.see(v, c.name, kCiMultiple);
            }
            StochasticInputs s = stochastic_inputs(c, false);
            patience_[i] = monte_carlo(StochasticEngine(s.inst, s.y, s.p, a2p), s.inst, opt_.trials, opt_.seed,
                                       opt_.workers);
            patience.check.see(patience_[i], c.name, kCiMultiple);
            violations_ += patience_[i].patience_violations + patience_[i].matching_violations;
            if (bipartite) {
                StochasticInputs o = stochastic_inputs(c, true);
                one_sided_[i] = monte_carlo(StochasticEngine(o.inst, o.y, o.p, a2o), o.inst, opt_.trials, opt_.seed,
                                            opt_.workers);
                one_sided.check.see(one_sided_[i], c.name, kCiMultiple);
                violations_ += one_sided_[i].patience_violations + one_sided_[i].matching_violations;
            }
            violations_ += a2_[i].matching_violations + trivial_[i].matching_violations;
        }
        r.seconds = detail::since(t0);
        bool ok = violations_ == 0 && r.seconds < kFloorsSeconds;
        for (const Row* row : {&general, &bip, &trivial, &vertex, &patience, &one_sided}) {
            bool hit = row->check.lower >= row->floor;
            ok = ok && hit;
            r.detail += std::string(row->label) + " " + fmt(row->check.cond_min) + " (+3CI " + fmt(row->check.lower) + ")" +
                        (hit ? " >= " : " < ") + fmt(row->floor, 3) + " (raw " + fmt(row->check.raw_min) + "); ";
        }
        r.detail += "invariant violations " + std::to_string(violations_);
        r.pass = ok;
        floors_done_ = true;
        return r;
    }

    CriterionResult oracle_equivalence() {
        auto t0 = detail::Clock::now();
        CriterionResult r{6, "oracle equivalence", false, {}, 0.0};
        ensure_floors();
        double worst = 0.0;
        std::string where;
        int checked = 0;
        for (std::size_t i = 0; i < cases_.size(); ++i) {
            const SuiteCase& c = cases_[i];
            if (c.inst.edges.size() > kOracleMaxSuiteEdges) continue;
            ++checked;
            std::vector<double> exact = exact_trivial_oracle(c.x, c.inst);
            const SimulationReport& rep = trivial_.at(i);
            for (std::size_t e = 0; e < exact.size(); ++e) {
                const EdgeReport& er = rep.edges[e];
                double half = std::max(er.ci.half(), 1e-300);
                double score = std::fabs(er.freq - exact[e]) / half;
                if (score > worst) {
                    worst = score;
                    where = c.name + " edge " + std::to_string(er.id);
                }
            }
        }
        r.seconds = detail::since(t0);
        r.pass = worst <= kOracleCiMultiple && checked > 0;
        r.detail = std::to_string(checked) + " instances, worst |freq - exact| = " + fmt(worst, 3) +
                   " half-widths" + (where.empty() ? "" : " (" + where + ")") + ", limit " + fmt(kOracleCiMultiple, 1);
        return r;
    }

    CriterionResult lp_dominance() {
        auto t0 = detail::Clock::now();
        CriterionResult r{7, "LP dominance and end-to-end approximation", false, {}, 0.0};
        struct Case {
            std::string name;
            PricingInstance inst;
            Objective obj;
        };
        std::vector<Case> cases;
        {
            FamilyParams fp;
            fp.eps = 0.01;
            cases.push_back({"d1(eps=0.01)", generate_family(Family::d1, fp).instance, Objective::custom});
        }
        {
            FamilyParams fp;
            fp.N = 10;
            fp.k = 3;
            cases.push_back({"d2(N=10,k=3)", generate_family(Family::d2, fp).instance, Objective::custom});
        }
        {
            FamilyParams fp;
            fp.k = 10;
            for (int w = 0; w <= 8; ++w) fp.grid.push_back(w);
            cases.push_back({"single_edge_hard(k=10)", generate_family(Family::single_edge_hard, fp).instance,
                             Objective::revenue});
        }
        for (std::uint64_t seed : {21, 22, 23}) {
            FamilyParams fp;
            fp.n = 2;
            fp.m = 2;
            fp.density = 1.0;
            fp.seed = seed;
            fp.menu_size = 3;
            cases.push_back({"random_bipartite(2,2,menu=3,seed=" + std::to_string(seed) + ")",
                             generate_family(Family::random_bipartite, fp).instance, Objective::revenue});
        }
        for (std::uint64_t seed : {31, 32}) {
            FamilyParams fp;
            fp.n = 3;
            fp.density = 1.0;
            fp.seed = seed;
            fp.menu_size = 4;
            cases.push_back({"random_general(3,menu=4,seed=" + std::to_string(seed) + ")",
                             generate_family(Family::random_general, fp).instance, Objective::revenue});
        }
        for (int ell : {1, 2}) {
            FamilyParams fp;
            fp.n = 2;
            fp.m = 3;
            fp.density = 1.0;
            fp.seed = 40 + ell;
            fp.menu_size = 2;
            fp.patience = ell;
            cases.push_back({"random_bipartite(2,3,menu=2,patience=" + std::to_string(ell) + ")",
                             generate_family(Family::random_bipartite, fp).instance, Objective::revenue});
        }
        double worst_gap = std::numeric_limits<double>::infinity();
        double worst_ratio = std::numeric_limits<double>::infinity();
        std::string gap_where, ratio_where;
        const AttenuationSpec a2{AttenuationKind::a2, lemma_constants(Setting::general).alpha};
        for (const Case& c : cases) {
            LpSolution lp = solve_lp(build_lp_pricing(c.inst, c.obj));
            double dp = optimal_policy_dp(c.inst, c.obj);
            double gap = lp.point.objective - dp;
            if (gap < worst_gap) {
                worst_gap = gap;
                gap_where = c.name;
            }
            bool no_patience = true;
            for (std::size_t v = 0; v < c.inst.vertices.size(); ++v) no_patience = no_patience && !c.inst.has_finite_patience(v);
            if (!no_patience || !(lp.point.objective > 0.0)) continue;
            PricingEngine eng(c.inst, lp.point, a2, c.obj);
            SimulationReport rep = monte_carlo(eng, c.inst, opt_.trials, opt_.seed, opt_.workers);
            double margin = (rep.cond_revenue_mean + kCiMultiple * rep.cond_revenue_half) / lp.point.objective;
            if (margin < worst_ratio) {
                worst_ratio = margin;
                ratio_where = c.name + " revenue " + fmt(rep.cond_revenue_mean) + " (raw " + fmt(rep.revenue_mean) +
                              ") vs LP " + fmt(lp.point.objective);
            }
        }
        r.seconds = detail::since(t0);
        r.pass = worst_gap >= -kLpDominanceTol && worst_ratio >= kFloorGeneral;
        r.detail = std::to_string(cases.size()) + " instances; min LP - DP = " + fmt(worst_gap, 10) + " (" + gap_where +
                   "); min (revenue + 3CI) / LP = " + fmt(worst_ratio) + " on " + ratio_where + ", floor " +
                   fmt(kFloorGeneral, 2);
        return r;
    }

    CriterionResult greedy_separations() {
        auto t0 = detail::Clock::now();
        CriterionResult r{8, "greedy separations", false, {}, 0.0};
        FamilyParams f1;
        f1.eps = 0.01;
        PricingInstance d1 = generate_family(Family::d1, f1).instance;
        const double g1 = greedy_baseline(d1, GreedyRule::by_weight, Objective::custom);
        const double opt1 = optimal_policy_dp(d1, Objective::custom);
        bool ok = g1 == 2.0 * f1.eps && std::fabs(opt1 - 1.0) <= 1e-12;
        r.detail = "d1: greedy_by_weight " + fmt(g1, 12) + ", DP " + fmt(opt1, 12) + "; ";
        double prev_ratio = 0.0;
        for (int k : {3, 6}) {
            FamilyParams f2;
            f2.N = 10;
            f2.k = k;
            PricingInstance d2 = generate_family(Family::d2, f2).instance;
            double by_expected = greedy_baseline(d2, GreedyRule::by_expected_weight, Objective::custom);
            double high_low = greedy_baseline(d2, GreedyRule::by_weight, Objective::custom);
            double ratio = high_low / by_expected;
            ok = ok && std::fabs(by_expected - (1.0 + f2.eps)) <= 1e-12 && ratio > prev_ratio;
            if (k == 6) ok = ok && high_low >= 5.0;
            prev_ratio = ratio;
            r.detail += "d2(k=" + std::to_string(k) + "): by_expected_weight " + fmt(by_expected, 6) +
                        ", high-to-low " + fmt(high_low, 6) + ", ratio " + fmt(ratio, 4) + "; ";
        }
        r.seconds = detail::since(t0);
        r.pass = ok;
        return r;
    }

    CriterionResult decomposition() {
        auto t0 = detail::Clock::now();
        CriterionResult r{9, "R0/R1 decomposition", false, {}, 0.0};
        ensure_floors();
        struct Worst {
            double margin = std::numeric_limits<double>::infinity();
            std::string where;
            void see(double m, const std::string& w) {
                if (m < margin) {
                    margin = m;
                    where = w;
                }
            }
        };
        Worst general, patience;
        auto check = [&](Worst& w, const SimulationReport& rep, std::span<const double> x, const PricingInstance& inst,
                         Setting setting, const std::string& name) {
            std::vector<EdgeBound> b = edge_bounds(x, inst, setting, lemma_constants(setting).alpha);
            for (std::size_t e = 0; e < b.size(); ++e) {
                const EdgeReport& er = rep.edges[e];
                std::string tag = name + " edge " + std::to_string(er.id);
                w.see(er.cond_r0 + kCiMultiple * er.cond_r0_half - b[e].r0, tag + " R0");
                w.see(er.cond_r1 + kCiMultiple * er.cond_r1_half - b[e].r1, tag + " R1");
            }
        };
        for (std::size_t i = 0; i < cases_.size(); ++i) {
            const SuiteCase& c = cases_[i];
            check(general, a2_.at(i), c.x, c.inst, Setting::general, c.name);
            StochasticInputs s = stochastic_inputs(c, false);
            std::vector<double> xs = marginal_of(s);
            check(patience, patience_.at(i), xs, s.inst, Setting::patience_general, c.name);
        }
        r.seconds = detail::since(t0);
        r.pass = general.margin >= 0.0 && patience.margin >= 0.0;
        r.detail = "min (estimate + 3CI - bound): a2 " + fmt(general.margin, 6) + " (" + general.where +
                   "), patience " + fmt(patience.margin, 6) + " (" + patience.where + ")";
        return r;
    }

private:
    static std::vector<double> marginal_of(const StochasticInputs& s) {
        std::vector<double> x;
        for (std::size_t e = 0; e < s.y.size(); ++e) x.push_back(s.y[e] * s.p[e]);
        return x;
    }

    void log(const std::string& s) const {
        if (opt_.log) opt_.log(s);
    }

    void ensure_floors() {
        if (!floors_done_) floors();
    }

    Options opt_;
    std::vector<SuiteCase> cases_;
    std::map<std::size_t, SimulationReport> a2_, trivial_, patience_, one_sided_;
    std::uint64_t violations_ = 0;
    bool floors_done_ = false;
};

}  // namespace ocrs::acceptance
