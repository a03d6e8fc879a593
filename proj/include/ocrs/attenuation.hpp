#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string_view>

#include "ocrs/error.hpp"
#include "ocrs/graph.hpp"

namespace ocrs {

enum class AttenuationKind { trivial, a1, a2 };

struct AttenuationSpec {
    AttenuationKind kind = AttenuationKind::a1;
    double alpha = 0.0;  // used by a2 only
};

inline std::optional<AttenuationKind> parse_attenuation(std::string_view s) {
    if (s == "trivial") return AttenuationKind::trivial;
    if (s == "a1") return AttenuationKind::a1;
    if (s == "a2") return AttenuationKind::a2;
    return std::nullopt;
}

inline std::string_view to_string(AttenuationKind k) {
    switch (k) {
        case AttenuationKind::trivial: return "trivial";
        case AttenuationKind::a1: return "a1";
        default: return "a2";
    }
}

inline void validate_alpha(double alpha) {
    if (!(alpha >= 0.0 && alpha <= 0.5)) throw InputError("alpha must lie in [0, 0.5]");
}

inline void validate(const AttenuationSpec& spec) { validate_alpha(spec.alpha); }

/// Unchecked evaluation for the trial loops.
inline double attenuate(const AttenuationSpec& spec, double t, double x, double s) {
    switch (spec.kind) {
        case AttenuationKind::trivial: return 1.0;
        case AttenuationKind::a1: return std::exp(-t * x);
        default: return std::exp(-t * x) * std::clamp(1.0 - spec.alpha * s, 0.0, 1.0);
    }
}

inline double attenuation_value(const AttenuationSpec& spec, double t, const EdgeStats& stats, double x_e) {
    constexpr double tol = kPolytopeTol;
    validate(spec);
    if (!(t >= 0.0 && t <= 1.0)) throw InputError("arrival time must lie in [0,1]");
    if (!(x_e >= -tol && x_e <= 1.0 + tol)) throw InputError("x_e must lie in [0,1]");
    if (!(stats.s >= -tol && stats.s <= 2.0 + tol)) throw InputError("slack s_e must lie in [0,2]");
    return attenuate(spec, t, std::clamp(x_e, 0.0, 1.0), std::clamp(stats.s, 0.0, 2.0));
}

}  // namespace ocrs
