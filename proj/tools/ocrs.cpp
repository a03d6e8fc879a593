// ocrs: command-line front end for instance generation, the pricing LP,
// Monte Carlo simulation, bound certificates and the acceptance suite.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "io.hpp"
#include "ocrs/ocrs.hpp"

namespace {

using namespace ocrs;
using ocrs::io::json;

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-")
        std::cout << text;
    else
        io::write_text_file(path, text);
}

std::string summary_path(const std::string& csv) {
    if (csv.empty() || csv == "-") return {};
    auto dot = csv.rfind(".csv");
    return (dot != std::string::npos && dot + 4 == csv.size() ? csv.substr(0, dot) : csv) + ".json";
}

struct GenArgs {
    std::string family;
    FamilyParams fp;
    std::vector<double> x;
    int patience = 0;
    std::string out;
};

int cmd_gen(const GenArgs& a) {
    auto fam = parse_family(a.family);
    if (!fam) throw InputError("unknown family '" + a.family + "'");
    FamilyParams fp = a.fp;
    if (!a.x.empty()) fp.x = a.x;
    if (a.patience > 0) fp.patience = a.patience;
    GeneratedInstance g = generate_family(*fam, fp);
    std::string text = io::instance_to_json(g.instance, g.x).dump(2) + "\n";
    emit(a.out, text);
    std::cerr << "|V|=" << g.instance.vertex_count() << " |E|=" << g.instance.edge_count()
              << " mode=" << to_string(g.instance.mode) << "\n";
    return 0;
}

Objective parse_objective(const std::string& s) {
    if (s == "revenue") return Objective::revenue;
    if (s == "custom") return Objective::custom;
    throw InputError("objective must be revenue or custom");
}

struct LpArgs {
    std::string instance, objective = "revenue", reduce = "none", out;
};

int cmd_lp(const LpArgs& a) {
    GeneratedInstance g = io::instance_from_json(io::read_json_file(a.instance));
    const Objective obj = parse_objective(a.objective);
    LpSolution sol = solve_lp(build_lp_pricing(g.instance, obj));
    FractionalPoint fp = sol.point;
    std::cout << "objective " << io::num(fp.objective) << "\n";
    if (a.reduce == "two-weight" || a.reduce == "single-weight") {
        fp = two_weight_reduction(fp, g.instance, obj);
        std::cout << "two-weight objective " << io::num(fp.objective) << "\n";
    } else if (a.reduce != "none") {
        throw InputError("reduce must be none, two-weight or single-weight");
    }
    if (a.reduce == "single-weight") {
        fp = single_weight_selection(fp, g.instance, obj);
        double kept = sol.point.objective > 0.0 ? fp.objective / sol.point.objective : 1.0;
        std::cout << "single-weight objective " << io::num(fp.objective) << " retained fraction " << io::num(kept)
                  << "\n";
    }
    emit(a.out.empty() ? std::string() : a.out, a.out.empty() ? std::string() : io::point_to_json(fp, g.instance).dump(2) + "\n");
    return 0;
}

struct SimArgs {
    std::string instance, scheme = "ro-ocrs", attenuation = "a1", point, objective = "revenue", out, summary;
    double alpha = 0.0;
    std::uint64_t trials = 100000, seed = 42;
    unsigned workers = 0;
};

int cmd_simulate(const SimArgs& a) {
    GeneratedInstance g = io::instance_from_json(io::read_json_file(a.instance));
    const PricingInstance& inst = g.instance;
    auto kind = parse_attenuation(a.attenuation);
    if (!kind) throw InputError("attenuation must be trivial, a1 or a2");
    const AttenuationSpec spec{*kind, a.alpha};
    validate(spec);
    const Objective obj = parse_objective(a.objective);

    std::optional<FractionalPoint> lp_point;
    auto point = [&]() -> const FractionalPoint& {
        if (!lp_point) {
            if (!a.point.empty()) {
                lp_point = io::point_from_json(io::read_json_file(a.point), inst);
                lp_point->objective = pricing_objective(*lp_point, inst, obj);
            } else {
                lp_point = solve_lp(build_lp_pricing(inst, obj)).point;
            }
        }
        return *lp_point;
    };
    auto matching_x = [&]() { return g.x ? *g.x : marginals(point(), inst).x; };

    SimulationReport rep;
    if (a.scheme == "ro-ocrs") {
        rep = monte_carlo(RoOcrsEngine(inst, matching_x(), spec), inst, a.trials, a.seed, a.workers);
    } else if (a.scheme == "vertex") {
        rep = monte_carlo(VertexArrivalEngine(inst, matching_x()), inst, a.trials, a.seed, a.workers);
    } else if (a.scheme == "stochastic") {
        std::vector<double> y, p;
        if (g.x) {
            // Probe each edge with y_e = x_e / p_e, p_e taken from its first menu entry.
            for (std::size_t e = 0; e < inst.edges.size(); ++e) {
                if (inst.edges[e].menu.empty()) throw InputError("stochastic scheme needs a menu entry on every edge");
                double pe = inst.edges[e].menu[0].p;
                if ((*g.x)[e] > pe + kPolytopeTol) throw InputError("x_e exceeds p_e; no probe rate reaches it");
                p.push_back(pe);
                y.push_back(pe > 0.0 ? std::min(1.0, (*g.x)[e] / pe) : 0.0);
            }
        } else {
            Marginals m = marginals(point(), inst);
            y = m.y;
            p = m.p;
        }
        rep = monte_carlo(StochasticEngine(inst, y, p, spec), inst, a.trials, a.seed, a.workers);
    } else if (a.scheme == "pricing") {
        rep = monte_carlo(PricingEngine(inst, point(), spec, obj), inst, a.trials, a.seed, a.workers);
    } else {
        throw InputError("scheme must be ro-ocrs, stochastic, vertex or pricing");
    }

    if (!a.out.empty()) emit(a.out, io::report_csv(rep));
    json summary = io::report_summary(rep);
    summary["scheme"] = a.scheme;
    summary["attenuation"] = a.attenuation;
    summary["alpha"] = a.alpha;
    if (a.scheme == "pricing") {
        summary["lp_objective"] = point().objective;
        if (point().objective > 0.0) summary["revenue_over_lp"] = rep.revenue_mean / point().objective;
    }
    std::string sp = a.summary.empty() ? summary_path(a.out) : a.summary;
    if (!sp.empty()) io::write_json_file(sp, summary);

    std::cout << "trials " << rep.trials << " seed " << rep.seed << "\n";
    if (!rep.edges.empty())
        std::cout << "min ratio " << io::num(rep.min_ratio) << " (edge " << rep.edges[rep.argmin].id
                  << "), conditional " << io::num(rep.min_ratio_cond) << "\n";
    if (a.scheme == "pricing") {
        std::cout << "revenue " << io::num(rep.revenue_mean) << " +- " << io::num(rep.revenue_half)
                  << " lp objective " << io::num(point().objective);
        if (point().objective > 0.0) std::cout << " ratio " << io::num(rep.revenue_mean / point().objective);
        std::cout << "\n";
    }
    if (rep.matching_violations || rep.patience_violations) {
        std::cerr << "invariant violations: matching " << rep.matching_violations << ", patience "
                  << rep.patience_violations << "\n";
        return 3;
    }
    return 0;
}

struct BoundsArgs {
    std::string setting = "general", out;
    std::optional<double> alpha;
    int grid = 81, refinements = 3;
};

int cmd_bounds(const BoundsArgs& a) {
    auto s = parse_setting(a.setting);
    if (!s) throw InputError("unknown setting '" + a.setting + "'");
    double alpha = a.alpha ? *a.alpha : lemma_constants(*s).alpha;
    BoundCertificate c = five_var_minimize(*s, alpha, a.grid, a.refinements);
    std::cout << "minimum " << io::num(c.minimum) << " at x=" << io::num(c.point.x) << " d=" << io::num(c.point.d)
              << " dbig=" << io::num(c.point.dbig) << " m=" << io::num(c.point.m) << "\n";
    if (c.sign_condition_1 < 0.0 || c.sign_condition_2 < 0.0)
        std::cerr << "warning: sign conditions fail at alpha " << alpha << " (" << io::num(c.sign_condition_1) << ", "
                  << io::num(c.sign_condition_2) << ")\n";
    if (!a.out.empty()) io::write_json_file(a.out, io::certificate_to_json(c));
    return 0;
}

int cmd_verify_facts(const std::string& out) {
    std::vector<FactRow> rows = verify_facts();
    emit(out, io::facts_csv(rows));
    bool ok = true;
    for (const FactRow& r : rows) ok = ok && r.holds;
    if (!out.empty() && out != "-")
        for (const FactRow& r : rows)
            std::cout << (r.holds ? "ok   " : "FAIL ") << r.id << " margin " << io::num(r.margin) << "\n";
    return ok ? 0 : 1;
}

struct ScanArgs {
    std::string setting = "general";
    double from = 0.12, to = 0.2, step = 0.001;
    int grid = 41;
};

int cmd_scan_alpha(const ScanArgs& a) {
    auto s = parse_setting(a.setting);
    if (!s) throw InputError("unknown setting '" + a.setting + "'");
    if (!(a.step > 0.0) || a.to < a.from) throw InputError("scan needs step > 0 and to >= from");
    std::cout << "alpha,minimum,sign_condition_1,sign_condition_2\n";
    const int n = static_cast<int>(std::floor((a.to - a.from) / a.step + 1e-9));
    for (int i = 0; i <= n; ++i) {
        double alpha = a.from + i * a.step;
        BoundCertificate c = five_var_minimize(*s, alpha, a.grid, 2);
        std::cout << io::num(alpha) << ',' << io::num(c.minimum) << ',' << io::num(c.sign_condition_1) << ','
                  << io::num(c.sign_condition_2) << '\n';
    }
    return 0;
}

int cmd_suite(const acceptance::Options& opt) {
    acceptance::Battery battery(opt);
    bool ok = true;
    battery.run_all([&](const acceptance::CriterionResult& r) {
        ok = ok && r.pass;
        std::cout << acceptance::format_line(r) << std::endl;
    });
    std::cout << (ok ? "suite: PASS" : "suite: FAIL") << "\n";
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Online contention resolution and sequential pricing experiments"};
    app.require_subcommand(1);
    int rc = 0;

    GenArgs gen;
    auto* g = app.add_subcommand("gen", "generate an instance family");
    g->add_option("--family", gen.family, "tight-path3|star|triangle|random-bipartite|random-general|d1|d2|single-edge-hard")
        ->required();
    g->add_option("--n", gen.fp.n, "path parameter / vertex count");
    g->add_option("--m", gen.fp.m, "second side size (random-bipartite)");
    g->add_option("--k", gen.fp.k, "star size, d2 edge count, single-edge-hard job value");
    g->add_option("--density", gen.fp.density, "edge probability for random families");
    g->add_option("--seed", gen.fp.seed, "generator seed");
    g->add_option("--eps", gen.fp.eps, "epsilon for d1/d2");
    g->add_option("--N", gen.fp.N, "base for d2");
    g->add_option("--grid", gen.fp.grid, "price grid (single-edge-hard)")->delimiter(',');
    g->add_option("--x", gen.x, "explicit x for star/triangle")->delimiter(',');
    g->add_option("--p", gen.fp.p, "acceptance probability on matching families");
    g->add_option("--patience", gen.patience, "patience for every vertex (or the offline side)");
    g->add_flag("--one-sided", gen.fp.one_sided, "patience on the offline side only");
    g->add_option("--menu-size", gen.fp.menu_size, "menu entries per edge (random families)");
    g->add_option("--out", gen.out, "output file (default stdout)");
    g->callback([&] { rc = cmd_gen(gen); });

    LpArgs lp;
    auto* l = app.add_subcommand("lp", "solve the pricing LP");
    l->add_option("--instance", lp.instance)->required();
    l->add_option("--objective", lp.objective, "revenue|custom");
    l->add_option("--reduce", lp.reduce, "none|two-weight|single-weight");
    l->add_option("--out", lp.out, "fractional point JSON");
    l->callback([&] { rc = cmd_lp(lp); });

    SimArgs sim;
    auto* s = app.add_subcommand("simulate", "Monte Carlo simulation of a scheme");
    s->add_option("--instance", sim.instance)->required();
    s->add_option("--scheme", sim.scheme, "ro-ocrs|stochastic|vertex|pricing");
    s->add_option("--attenuation", sim.attenuation, "trivial|a1|a2");
    s->add_option("--alpha", sim.alpha);
    s->add_option("--trials", sim.trials)->check(CLI::PositiveNumber);
    s->add_option("--seed", sim.seed);
    s->add_option("--workers", sim.workers, "default: OCRS_WORKERS or hardware threads");
    s->add_option("--point", sim.point, "LP point JSON (pricing/stochastic; default: solve the LP)");
    s->add_option("--objective", sim.objective, "revenue|custom");
    s->add_option("--out", sim.out, "per-edge CSV; the summary goes next to it as .json");
    s->add_option("--summary", sim.summary, "summary JSON path");
    s->callback([&] { rc = cmd_simulate(sim); });

    BoundsArgs bounds;
    auto* b = app.add_subcommand("bounds", "minimize the five-variable program");
    b->add_option("--setting", bounds.setting, "general|bipartite|patience_general|patience_one_sided");
    b->add_option("--alpha", bounds.alpha);
    b->add_option("--grid", bounds.grid);
    b->add_option("--refinements", bounds.refinements);
    b->add_option("--out", bounds.out, "certificate JSON");
    b->callback([&] { rc = cmd_bounds(bounds); });

    std::string facts_out;
    auto* f = app.add_subcommand("verify-facts", "check the scalar inequalities on grids");
    f->add_option("--out", facts_out, "CSV path (default stdout)");
    f->callback([&] { rc = cmd_verify_facts(facts_out); });

    acceptance::Options suite;
    auto* su = app.add_subcommand("suite", "run the acceptance battery");
    su->add_option("--trials", suite.trials)->check(CLI::PositiveNumber);
    su->add_option("--seed", suite.seed);
    su->add_option("--workers", suite.workers);
    su->callback([&] { rc = cmd_suite(suite); });

    ScanArgs scan;
    auto* sc = app.add_subcommand("scan-alpha", "five-variable minimum over a range of alpha");
    sc->add_option("--setting", scan.setting);
    sc->add_option("--from", scan.from);
    sc->add_option("--to", scan.to);
    sc->add_option("--step", scan.step);
    sc->add_option("--grid", scan.grid);
    sc->callback([&] { rc = cmd_scan_alpha(scan); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const RefusedError& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << "\n";
        return 3;
    }
    return rc;
}
