#pragma once

// Instance families: the tight 3-edge path, stars, triangles, seeded random
// graphs, the greedy counterexamples and the single-edge hard instance.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ocrs/error.hpp"
#include "ocrs/graph.hpp"
#include "ocrs/rng.hpp"

namespace ocrs {

enum class Family {
    tight_path3,
    star,
    triangle,
    random_bipartite,
    random_general,
    d1,
    d2,
    single_edge_hard,
};

struct FamilyParams {
    int n = 0;           // tight_path3 n; random_* vertex counts
    int m = 0;           // random_bipartite right side
    int k = 0;           // star size; d2 edge count; single_edge_hard job value
    double density = 0.5;
    std::uint64_t seed = 0;
    double eps = 0.01;
    double N = 10.0;     // d2 base
    std::vector<double> grid;               // single_edge_hard price grid
    std::optional<std::vector<double>> x;   // override for triangle / star
    double p = 1.0;                         // acceptance probability on OCRS-family menus
    std::optional<int> patience;            // applied to every vertex (or one side)
    bool one_sided = false;                 // patience only on the offline side
    int menu_size = 1;                      // random families: entries per edge
};

inline std::optional<Family> parse_family(std::string_view s) {
    if (s == "tight-path3" || s == "tight_path3") return Family::tight_path3;
    if (s == "star") return Family::star;
    if (s == "triangle") return Family::triangle;
    if (s == "random-bipartite" || s == "random_bipartite") return Family::random_bipartite;
    if (s == "random-general" || s == "random_general") return Family::random_general;
    if (s == "d1" || s == "greedy-counterexample-d1") return Family::d1;
    if (s == "d2" || s == "greedy-counterexample-d2") return Family::d2;
    if (s == "single-edge-hard" || s == "single_edge_hard") return Family::single_edge_hard;
    return std::nullopt;
}

namespace detail {

inline std::size_t add_vertex(PricingInstance& g, Side side = Side::none) {
    Vertex v;
    v.id = static_cast<std::int64_t>(g.vertices.size());
    v.side = side;
    g.vertices.push_back(v);
    return g.vertices.size() - 1;
}

inline void add_edge(PricingInstance& g, std::size_t u, std::size_t v, std::vector<MenuEntry> menu) {
    Edge e;
    e.id = static_cast<std::int64_t>(g.edges.size());
    e.u = u;
    e.v = v;
    e.menu = std::move(menu);
    g.edges.push_back(std::move(e));
}

// Matching-size menu used by the OCRS families: free offer, reward 1.
inline std::vector<MenuEntry> unit_menu(double p) { return {MenuEntry{0.0, p, 1.0}}; }

inline void check_p(double p) {
    if (!(p > 0.0 && p <= 1.0)) throw InputError("acceptance probability p must lie in (0,1]");
}

inline void apply_patience(PricingInstance& g, const FamilyParams& fp) {
    if (!fp.patience) return;
    if (*fp.patience < 1) throw InputError("patience must be >= 1");
    for (Vertex& v : g.vertices)
        if (!fp.one_sided || v.side == Side::offline) v.patience = fp.patience;
    if (fp.one_sided) g.mode = Mode::bipartite_one_sided_patience;
}

// Random menus on job-valued edges: increasing prices, decreasing acceptance.
inline std::vector<MenuEntry> random_menu(SplitMix64& rng, double value, int size) {
    std::vector<double> prices;
    for (int i = 0; i < size; ++i) prices.push_back(rng.uniform(0.0, value));
    std::sort(prices.begin(), prices.end());
    std::vector<MenuEntry> menu;
    for (double w : prices) menu.push_back({w, std::clamp(1.0 - w / (value + 0.5), 0.0, 1.0), std::nullopt});
    return menu;
}

// Random weights in [0.2,1] scaled so the heaviest vertex load is exactly 1.
inline std::vector<double> random_point(SplitMix64& rng, const PricingInstance& g) {
    std::vector<double> x(g.edges.size());
    std::vector<double> load(g.vertices.size(), 0.0);
    for (std::size_t e = 0; e < x.size(); ++e) {
        x[e] = rng.uniform(0.2, 1.0);
        load[g.edges[e].u] += x[e];
        load[g.edges[e].v] += x[e];
    }
    double worst = *std::max_element(load.begin(), load.end());
    for (double& v : x) v /= worst;
    return x;
}

inline void check_density(double d) {
    if (!(d > 0.0 && d <= 1.0)) throw InputError("density must lie in (0,1]");
}

}  // namespace detail

inline GeneratedInstance generate_family(Family family, const FamilyParams& fp) {
    using namespace detail;
    GeneratedInstance out;
    PricingInstance& g = out.instance;

    switch (family) {
        case Family::tight_path3: {
            if (fp.n < 2) throw InputError("tight_path3 needs n >= 2");
            check_p(fp.p);
            g.mode = Mode::bipartite;
            for (int i = 0; i < 4; ++i) add_vertex(g, i % 2 == 0 ? Side::offline : Side::online);
            for (std::size_t i = 0; i < 3; ++i) add_edge(g, i, i + 1, unit_menu(fp.p));
            const double n = fp.n;
            out.x = std::vector<double>{1.0 - 1.0 / n, 1.0 / n, 1.0 - 1.0 / n};
            break;
        }
        case Family::star: {
            if (fp.k < 1) throw InputError("star needs k >= 1");
            check_p(fp.p);
            g.mode = Mode::bipartite;
            std::size_t c = add_vertex(g, Side::offline);
            for (int i = 0; i < fp.k; ++i) add_edge(g, c, add_vertex(g, Side::online), unit_menu(fp.p));
            if (fp.x && fp.x->size() != static_cast<std::size_t>(fp.k)) throw InputError("star x override needs k entries");
            out.x = fp.x ? *fp.x : std::vector<double>(fp.k, 1.0 / fp.k);
            break;
        }
        case Family::triangle: {
            check_p(fp.p);
            for (int i = 0; i < 3; ++i) add_vertex(g);
            add_edge(g, 0, 1, unit_menu(fp.p));
            add_edge(g, 1, 2, unit_menu(fp.p));
            add_edge(g, 0, 2, unit_menu(fp.p));
            if (fp.x && fp.x->size() != 3) throw InputError("triangle x override needs 3 entries");
            out.x = fp.x ? *fp.x : std::vector<double>(3, 0.5);
            break;
        }
        case Family::random_bipartite: {
            if (fp.n < 1 || fp.m < 1 || fp.n + fp.m < 2) throw InputError("random_bipartite needs n, m >= 1");
            check_density(fp.density);
            if (fp.menu_size < 1) throw InputError("menu_size must be >= 1");
            g.mode = Mode::bipartite;
            SplitMix64 rng(fp.seed);
            for (int i = 0; i < fp.n; ++i) add_vertex(g, Side::offline);
            for (int j = 0; j < fp.m; ++j) {
                std::size_t v = add_vertex(g, Side::online);
                g.vertices[v].value = rng.uniform(1.0, 2.0);
            }
            for (int i = 0; i < fp.n; ++i)
                for (int j = 0; j < fp.m; ++j)
                    if (rng.uniform() < fp.density) {
                        std::size_t job = static_cast<std::size_t>(fp.n + j);
                        add_edge(g, i, job, random_menu(rng, *g.vertices[job].value, fp.menu_size));
                    }
            if (g.edges.empty())
                add_edge(g, 0, static_cast<std::size_t>(fp.n),
                         random_menu(rng, *g.vertices[fp.n].value, fp.menu_size));
            out.x = random_point(rng, g);
            break;
        }
        case Family::random_general: {
            if (fp.n < 2) throw InputError("random_general needs n >= 2");
            check_density(fp.density);
            if (fp.menu_size < 1) throw InputError("menu_size must be >= 1");
            SplitMix64 rng(fp.seed);
            for (int i = 0; i < fp.n; ++i) {
                std::size_t v = add_vertex(g);
                g.vertices[v].value = rng.uniform(0.5, 1.0);
            }
            for (int i = 0; i < fp.n; ++i)
                for (int j = i + 1; j < fp.n; ++j)
                    if (rng.uniform() < fp.density) {
                        std::size_t a = i, b = j;
                        double value = *g.vertices[a].value + *g.vertices[b].value;
                        add_edge(g, a, b, random_menu(rng, value, fp.menu_size));
                    }
            if (g.edges.empty()) add_edge(g, 0, 1, random_menu(rng, 1.0, fp.menu_size));
            out.x = random_point(rng, g);
            break;
        }
        case Family::d1: {
            if (!(fp.eps > 0.0 && fp.eps <= 1.0)) throw InputError("d1 needs eps in (0,1]");
            g.mode = Mode::bipartite;
            add_vertex(g, Side::offline);
            add_vertex(g, Side::online);
            add_edge(g, 0, 1, {MenuEntry{1.0, 1.0, 1.0}, MenuEntry{2.0, fp.eps, 2.0}});
            break;
        }
        case Family::d2: {
            if (fp.k < 1) throw InputError("d2 needs k >= 1");
            if (!(fp.N > 1.0)) throw InputError("d2 needs N > 1");
            if (!(fp.eps > 0.0)) throw InputError("d2 needs eps > 0");
            g.mode = Mode::bipartite;
            std::size_t c = add_vertex(g, Side::offline);
            double w0 = 1.0 + fp.eps;
            add_edge(g, c, add_vertex(g, Side::online), {MenuEntry{w0, 1.0, w0}});
            for (int i = 1; i <= fp.k; ++i) {
                double w = std::pow(fp.N, i);
                add_edge(g, c, add_vertex(g, Side::online), {MenuEntry{w, 1.0 / w, w}});
            }
            break;
        }
        case Family::single_edge_hard: {
            if (fp.k < 2) throw InputError("single_edge_hard needs k >= 2");
            if (fp.grid.empty()) throw InputError("single_edge_hard needs a nonempty price grid");
            g.mode = Mode::bipartite;
            add_vertex(g, Side::offline);
            std::size_t job = add_vertex(g, Side::online);
            g.vertices[job].value = static_cast<double>(fp.k);
            std::vector<MenuEntry> menu;
            for (double w : fp.grid) {
                if (!(w >= 0.0 && w <= fp.k - 1.0)) throw InputError("single_edge_hard grid must lie in [0, k-1]");
                menu.push_back({w, 1.0 / (fp.k - w), std::nullopt});
            }
            add_edge(g, 0, job, std::move(menu));
            break;
        }
    }
    apply_patience(g, fp);
    return out;
}

}  // namespace ocrs
