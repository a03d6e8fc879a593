#pragma once

// File formats for the command-line tool: instances, LP points and bound
// certificates as JSON; simulation reports and fact tables as CSV.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ocrs/ocrs.hpp"

namespace ocrs::io {

using nlohmann::json;

inline std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

// nlohmann writes non-finite doubles as null; keep that explicit.
inline json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline json instance_to_json(const PricingInstance& inst, const std::optional<std::vector<double>>& x = std::nullopt) {
    json j;
    j["mode"] = std::string(to_string(inst.mode));
    json vs = json::array();
    for (const Vertex& v : inst.vertices) {
        json o{{"id", v.id}};
        if (v.side != Side::none) o["side"] = std::string(to_string(v.side));
        if (v.value) o["value"] = *v.value;
        if (v.patience) o["patience"] = *v.patience;
        vs.push_back(o);
    }
    j["vertices"] = vs;
    json es = json::array();
    for (const Edge& e : inst.edges) {
        json menu = json::array();
        for (const MenuEntry& m : e.menu) {
            json o{{"w", m.w}, {"p", m.p}};
            if (m.c) o["c"] = *m.c;
            menu.push_back(o);
        }
        es.push_back({{"id", e.id}, {"u", inst.vertices[e.u].id}, {"v", inst.vertices[e.v].id}, {"menu", menu}});
    }
    j["edges"] = es;
    if (x) {
        json xs = json::array();
        for (std::size_t e = 0; e < x->size(); ++e) xs.push_back({{"edge", inst.edges[e].id}, {"value", (*x)[e]}});
        j["x"] = xs;
    }
    return j;
}

namespace detail {

template <class T>
T field(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) throw InputError(where + ": missing '" + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw InputError(where + ": bad value for '" + key + "'");
    }
}

}  // namespace detail

inline GeneratedInstance instance_from_json(const json& j) {
    using detail::field;
    if (!j.is_object()) throw InputError("instance: top level must be an object");
    GeneratedInstance out;
    PricingInstance& inst = out.instance;
    std::string mode = field<std::string>(j, "mode", "instance");
    auto m = parse_mode(mode);
    if (!m) throw InputError("instance: unknown mode '" + mode + "'");
    inst.mode = *m;

    std::map<std::int64_t, std::size_t> index;
    for (const json& v : field<json>(j, "vertices", "instance")) {
        Vertex w;
        w.id = field<std::int64_t>(v, "id", "vertex");
        std::string where = "vertex " + std::to_string(w.id);
        if (v.contains("side")) {
            auto s = parse_side(field<std::string>(v, "side", where));
            if (!s) throw InputError(where + ": unknown side");
            w.side = *s;
        }
        if (v.contains("value") && !v["value"].is_null()) w.value = field<double>(v, "value", where);
        if (v.contains("patience") && !v["patience"].is_null()) w.patience = field<int>(v, "patience", where);
        if (!index.emplace(w.id, inst.vertices.size()).second) throw InputError(where + ": duplicate id");
        inst.vertices.push_back(w);
    }
    for (const json& e : field<json>(j, "edges", "instance")) {
        Edge ed;
        ed.id = field<std::int64_t>(e, "id", "edge");
        std::string where = "edge " + std::to_string(ed.id);
        auto endpoint = [&](const char* key) {
            std::int64_t vid = field<std::int64_t>(e, key, where);
            auto it = index.find(vid);
            if (it == index.end()) throw InputError(where + ": unknown vertex " + std::to_string(vid));
            return it->second;
        };
        ed.u = endpoint("u");
        ed.v = endpoint("v");
        for (const json& mm : field<json>(e, "menu", where)) {
            MenuEntry me;
            me.w = field<double>(mm, "w", where);
            me.p = field<double>(mm, "p", where);
            if (mm.contains("c") && !mm["c"].is_null()) me.c = field<double>(mm, "c", where);
            ed.menu.push_back(me);
        }
        inst.edges.push_back(std::move(ed));
    }
    std::vector<Violation> bad = validate_instance(inst);
    if (!bad.empty()) {
        std::string msg = "invalid instance:";
        for (const Violation& v : bad) msg += " [" + v.subject + ": " + v.rule + "]";
        throw InputError(msg);
    }
    if (j.contains("x")) {
        std::map<std::int64_t, std::size_t> eidx;
        for (std::size_t e = 0; e < inst.edges.size(); ++e) eidx[inst.edges[e].id] = e;
        std::vector<double> x(inst.edges.size(), 0.0);
        for (const json& xe : j["x"]) {
            std::int64_t id = field<std::int64_t>(xe, "edge", "x");
            auto it = eidx.find(id);
            if (it == eidx.end()) throw InputError("x: unknown edge " + std::to_string(id));
            x[it->second] = field<double>(xe, "value", "x");
        }
        out.x = std::move(x);
    }
    return out;
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError(path + ": " + e.what());
    }
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path);
    out << text;
}

inline void write_json_file(const std::string& path, const json& j) { write_text_file(path, j.dump(2) + "\n"); }

inline json point_to_json(const FractionalPoint& fp, const PricingInstance& inst) {
    json entries = json::array();
    for (std::size_t e = 0; e < fp.y.size(); ++e)
        for (std::size_t k = 0; k < fp.y[e].size(); ++k)
            entries.push_back({{"edge", inst.edges[e].id}, {"entry", k}, {"weight", inst.edges[e].menu[k].w},
                               {"y", fp.y[e][k]}});
    return {{"objective", fp.objective}, {"point", entries}};
}

/// Reads {edge, weight, y} triples; `entry` (menu index) disambiguates
/// repeated weights when present.
inline FractionalPoint point_from_json(const json& j, const PricingInstance& inst) {
    using detail::field;
    FractionalPoint fp;
    for (const Edge& e : inst.edges) fp.y.emplace_back(e.menu.size(), 0.0);
    std::map<std::int64_t, std::size_t> eidx;
    for (std::size_t e = 0; e < inst.edges.size(); ++e) eidx[inst.edges[e].id] = e;
    for (const json& t : field<json>(j, "point", "point file")) {
        std::int64_t id = field<std::int64_t>(t, "edge", "point");
        auto it = eidx.find(id);
        if (it == eidx.end()) throw InputError("point: unknown edge " + std::to_string(id));
        const Edge& ed = inst.edges[it->second];
        std::size_t k = ed.menu.size();
        if (t.contains("entry")) {
            k = field<std::size_t>(t, "entry", "point");
        } else {
            double w = field<double>(t, "weight", "point");
            for (std::size_t i = 0; i < ed.menu.size(); ++i)
                if (ed.menu[i].w == w) {
                    k = i;
                    break;
                }
        }
        if (k >= ed.menu.size()) throw InputError("point: no matching menu entry on edge " + std::to_string(id));
        fp.y[it->second][k] = field<double>(t, "y", "point");
    }
    fp.objective = j.contains("objective") ? field<double>(j, "objective", "point") : 0.0;
    return fp;
}

inline json certificate_to_json(const BoundCertificate& c) {
    return {{"setting", std::string(to_string(c.setting))},
            {"alpha", c.alpha},
            {"minimum", c.minimum},
            {"point", {{"s", c.point.s}, {"d", c.point.d}, {"dbig", c.point.dbig}, {"x", c.point.x}, {"m", c.point.m}}},
            {"grid_resolution", c.grid_resolution},
            {"refinements", c.refinements},
            {"quadrature_tol", c.quadrature_tol},
            {"sign_condition_1", c.sign_condition_1},
            {"sign_condition_2", c.sign_condition_2},
            {"evaluations", c.evaluations}};
}

inline std::string report_csv(const SimulationReport& r) {
    std::ostringstream out;
    out << "edge_id,x_e,freq,ci_lo,ci_hi,freq_r0,freq_r1,ratio,cond,cond_half,cond_r0,cond_r1\n";
    for (const EdgeReport& e : r.edges)
        out << e.id << ',' << num(e.x) << ',' << num(e.freq) << ',' << num(e.ci.lo) << ',' << num(e.ci.hi) << ','
            << num(e.freq_r0) << ',' << num(e.freq_r1) << ',' << num(e.ratio) << ',' << num(e.cond) << ','
            << num(e.cond_half) << ',' << num(e.cond_r0) << ',' << num(e.cond_r1) << '\n';
    return out.str();
}

inline json report_summary(const SimulationReport& r) {
    json j{{"min_ratio", r.min_ratio},
           {"min_ratio_cond", r.min_ratio_cond},
           {"revenue_mean", r.revenue_mean},
           {"revenue_ci", finite_or_null(r.revenue_half)},
           {"cond_revenue_mean", r.cond_revenue_mean},
           {"cond_revenue_ci", finite_or_null(r.cond_revenue_half)},
           {"trials", r.trials},
           {"seed", r.seed},
           {"matching_violations", r.matching_violations},
           {"patience_violations", r.patience_violations}};
    if (!r.edges.empty()) j["argmin_edge"] = r.edges[r.argmin].id;
    return j;
}

inline std::string facts_csv(const std::vector<FactRow>& rows) {
    std::ostringstream out;
    out << "fact_id,holds,margin\n";
    for (const FactRow& f : rows) out << f.id << ',' << (f.holds ? "true" : "false") << ',' << num(f.margin) << '\n';
    return out.str();
}

}  // namespace ocrs::io
