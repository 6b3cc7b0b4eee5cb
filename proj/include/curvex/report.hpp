#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "constant_width.hpp"
#include "errors.hpp"
#include "line_system.hpp"
#include "tangent_census.hpp"
#include "trig_series.hpp"

namespace curvex {

using json = nlohmann::ordered_json;

inline json to_json(const TrigSeries& s) {
    json hs = json::array();
    for (const auto& h : s.harmonics()) hs.push_back({h.k, h.a, h.b});
    return {{"parity", to_string(s.parity())}, {"constant", s.constant()}, {"harmonics", hs}};
}

inline TrigSeries series_from_json(const json& j) {
    try {
        if (!j.is_object()) throw Error(ErrorKind::ParseError, "series must be an object");
        std::string parity = j.at("parity").get<std::string>();
        Parity p;
        if (parity == "periodic")
            p = Parity::Periodic;
        else if (parity == "antiperiodic")
            p = Parity::Antiperiodic;
        else
            throw Error(ErrorKind::ParseError, "unknown parity '" + parity + "'");
        double c = j.value("constant", 0.0);
        std::vector<Harmonic> hs;
        for (const auto& h : j.at("harmonics")) {
            if (!h.is_array() || h.size() != 3) throw Error(ErrorKind::ParseError, "harmonic must be [k, a, b]");
            hs.push_back({h[0].get<int>(), h[1].get<double>(), h[2].get<double>()});
        }
        return TrigSeries(p, c, std::move(hs));
    } catch (const json::exception& e) {
        throw Error(ErrorKind::ParseError, e.what());
    }
}

inline json to_json(const VectorSeries& v) { return {{"x", to_json(v.x)}, {"y", to_json(v.y)}, {"z", to_json(v.z)}}; }

inline VectorSeries curve_from_json(const json& j) {
    try {
        return {series_from_json(j.at("x")), series_from_json(j.at("y")), series_from_json(j.at("z"))};
    } catch (const json::exception& e) {
        throw Error(ErrorKind::ParseError, e.what());
    }
}

struct SupportSpec {
    double d = 0.0;
    TrigSeries f;
};

inline SupportSpec support_from_json(const json& j) {
    try {
        return {j.at("d").get<double>(), series_from_json(j.at("f"))};
    } catch (const json::exception& e) {
        throw Error(ErrorKind::ParseError, e.what());
    }
}

inline json to_json(const SupportSpec& s) { return {{"d", s.d}, {"f", to_json(s.f)}}; }

inline json points_json(const std::vector<CyclicPoint>& pts) {
    json a = json::array();
    for (auto p : pts) a.push_back(p.value());
    return a;
}

inline json to_json(const CircularSet& s) {
    json a = json::array();
    for (const auto& c : s.components()) a.push_back({c.start().value(), c.end().value()});
    return a;
}

inline json to_json(const AxiomReport& r) {
    json a = json::array();
    for (const auto& x : r.results) {
        json e = {{"axiom", x.axiom}, {"pass", x.pass}, {"witness", {{"points", x.witness}}}, {"checked", x.checked}};
        if (!x.detail.empty()) e["detail"] = x.detail;
        a.push_back(e);
    }
    return a;
}

inline json to_json(const CensusReport& r) {
    json infl = json::array();
    for (const auto& x : r.inflections)
        infl.push_back({{"t", x.arc.start().value()}, {"sign", x.positive ? "positive" : "negative"}});
    json dts = json::array();
    for (const auto& d : r.double_tangents)
        dts.push_back({{"a", d.a}, {"b", d.b}, {"residual", d.pair.residual}, {"off_chord", d.off_chord}});
    json out = {{"i", r.i},
                {"delta", r.delta},
                {"identity_holds", r.identity_holds},
                {"inflections", infl},
                {"clean_points", points_json(r.clean_points)},
                {"clean_points_ok", r.clean_points_ok},
                {"double_tangents", dts},
                {"family", r.family},
                {"greedy_family_sizes", r.greedy_sizes},
                {"newton_failures", r.newton_failures},
                {"indeterminate", r.indeterminate}};
    if (r.additivity) {
        const auto& a = *r.additivity;
        out["additivity"] = {{"a", a.a}, {"b", a.b}, {"i", a.i}, {"i1", a.i1}, {"i2", a.i2},
                             {"anti_convex1", a.anti_convex1}, {"anti_convex2", a.anti_convex2}, {"holds", a.holds}};
    }
    return out;
}

inline json to_json(const CleanFlexes& f) {
    json a = json::array();
    for (int k = 0; k < 3; ++k)
        a.push_back({{"t", f.t[k]}, {"base", f.base[k]}, {"crossing", to_string(f.pattern[k])},
                     {"contact", to_json(f.contacts[k])}});
    return {{"flexes", a}, {"pattern_ok", f.pattern_ok}, {"disjoint_ok", f.disjoint_ok}};
}

inline json to_json(const WidthCensusReport& r) {
    json dts = json::array();
    for (const auto& d : r.double_tangents)
        dts.push_back({{"a", d.a}, {"b", d.b}, {"residual", d.pair.residual}, {"phi", to_json(d.phi)}});
    json out = {{"i", r.i},
                {"delta", r.delta},
                {"identity_holds", r.identity_holds},
                {"clean_flexes", to_json(r.flexes)},
                {"double_tangents", dts},
                {"family", r.family},
                {"greedy_family_sizes", r.greedy_sizes},
                {"newton_failures", r.newton_failures},
                {"indeterminate", r.indeterminate}};
    if (r.additivity) {
        const auto& a = *r.additivity;
        out["additivity"] = {{"a", a.a}, {"b", a.b}, {"i", a.i}, {"i1", a.i1}, {"i2", a.i2}, {"holds", a.holds}};
    }
    return out;
}

inline json to_json(const TheoremCCertificate& c) {
    return {{"t", c.t},
            {"center", {c.circle.center.x(), c.circle.center.y()}},
            {"radius", c.circle.radius},
            {"support", {{"b", c.circle.b}, {"c", c.circle.c}}},
            {"contact_components", c.contact_components},
            {"tangential", c.tangential},
            {"radius_error", c.radius_error},
            {"support_crossings", c.support_crossings},
            {"geometric_crossings", c.geometric_crossings},
            {"ok", c.ok()}};
}

}  // namespace curvex
