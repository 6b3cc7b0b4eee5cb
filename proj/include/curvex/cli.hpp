#pragma once

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>

#include "constant_width.hpp"
#include "errors.hpp"
#include "line_system.hpp"
#include "parallel.hpp"
#include "plot.hpp"
#include "report.hpp"
#include "tangent_census.hpp"

namespace curvex {

inline constexpr const char* kVersion = "0.1.0";

enum class Mode { SphereCensus, WidthCensus, Flexes, Axioms, TheoremC, Truncate };

inline const char* to_string(Mode m) {
    switch (m) {
        case Mode::SphereCensus: return "sphere-census";
        case Mode::WidthCensus: return "width-census";
        case Mode::Flexes: return "flexes";
        case Mode::Axioms: return "axioms";
        case Mode::TheoremC: return "theorem-c";
        case Mode::Truncate: return "truncate";
    }
    return "?";
}

inline std::optional<Mode> parse_mode(const std::string& s) {
    for (Mode m : {Mode::SphereCensus, Mode::WidthCensus, Mode::Flexes, Mode::Axioms, Mode::TheoremC, Mode::Truncate})
        if (s == to_string(m)) return m;
    return std::nullopt;
}

struct RunConfig {
    std::string input;
    Mode mode = Mode::SphereCensus;
    int grid = 4096;
    int axiom_grid = 256;
    double eps_contact = Tolerances{}.contact;
    double eps_root = Tolerances{}.root;
    std::string out_report, out_csv, out_svg;
    int truncate_n = 0;
};

inline bool is_valid_grid(long n) { return n >= 256 && n <= 65536 && (n & (n - 1)) == 0; }

inline void validate(const RunConfig& c) {
    if (c.input.empty()) throw Error(ErrorKind::ParseError, "--input is required");
    if (!is_valid_grid(c.grid)) throw Error(ErrorKind::ParseError, "--grid must be a power of two in [256, 65536]");
    if (!is_valid_grid(c.axiom_grid)) throw Error(ErrorKind::ParseError, "axiom grid must be a power of two in [256, 65536]");
    if (!(c.eps_contact > 0.0)) throw Error(ErrorKind::ParseError, "--eps-contact must be positive");
    if (!(c.eps_root > 0.0)) throw Error(ErrorKind::ParseError, "--eps-root must be positive");
    if (c.mode == Mode::Truncate && c.truncate_n < 1) throw Error(ErrorKind::ParseError, "truncate mode needs --truncate-n >= 1");
}

using InputSpec = std::variant<VectorSeries, SupportSpec>;

inline InputSpec parse_input(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::ParseError, std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) throw Error(ErrorKind::ParseError, "input must be a JSON object");
    if (j.contains("d") && j.contains("f")) return support_from_json(j);
    if (j.contains("x") && j.contains("y") && j.contains("z")) return curve_from_json(j);
    throw Error(ErrorKind::ParseError, "input is neither a curve spec {x, y, z} nor a support spec {d, f}");
}

inline InputSpec load_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::ParseError, "cannot read input '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_input(ss.str());
}

// Errors caused by the input rather than by a failed computation.
inline bool is_input_error(ErrorKind k) {
    return k == ErrorKind::ParseError || k == ErrorKind::InvalidParity || k == ErrorKind::NotConvex ||
           k == ErrorKind::DegeneratePoint || k == ErrorKind::IllConditioned;
}

struct RunOutcome {
    json report;
    bool pass = false;
    std::string csv, svg;
};

namespace detail {

inline Tolerances tolerances_of(const RunConfig& c) {
    Tolerances t;
    t.contact = c.eps_contact;
    t.root = c.eps_root;
    return t;
}

inline json config_json(const RunConfig& c) {
    return {{"mode", to_string(c.mode)}, {"grid", c.grid}, {"eps_contact", c.eps_contact}, {"eps_root", c.eps_root}};
}

inline std::vector<double> inflection_ts(const ProjectiveCurve& c) {
    std::vector<double> out;
    for (const auto& x : c.true_inflections()) out.push_back(x.arc.start().value());
    return out;
}

inline std::vector<double> d_inflection_ts(const SupportFunction& sf) {
    std::vector<double> out;
    for (auto p : d_inflections(sf)) out.push_back(p.value());
    return out;
}

inline json flexes_json(const ProjectiveCurve& c) {
    json infl = json::array();
    for (const auto& x : c.true_inflections())
        infl.push_back({{"t", x.arc.start().value()}, {"sign", x.positive ? "positive" : "negative"}});
    auto three = three_clean_inflections(make_line_system(c));
    json clean = json::array();
    for (int k = 0; k < 3; ++k)
        clean.push_back({{"t", three.points[k].value()}, {"contact", to_json(three.contacts[k])}});
    return {{"inflections", infl}, {"clean_inflections", clean}, {"placement_ok", three.placement_ok},
            {"disjoint_ok", three.disjoint_ok}};
}

// Largest distance between matched sorted location lists mod pi, or infinity.
inline double location_shift(std::vector<double> a, std::vector<double> b) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    for (auto& x : a) x = wrap_angle(2.0 * x);
    for (auto& x : b) x = wrap_angle(2.0 * x);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double best = std::numeric_limits<double>::infinity();
    const std::size_t n = a.size();
    if (n == 0) return 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        double worst = 0.0;
        for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, circle_distance(a[i], b[(i + r) % n]));
        best = std::min(best, worst);
    }
    return 0.5 * best;
}

struct TruncSummary {
    int i = 0, delta = 0;
    bool identity = false;
    std::vector<double> flexes;
    json census;
};

inline TruncSummary summarize(const VectorSeries& F, const RunConfig& cfg) {
    ProjectiveCurve c(F, cfg.grid, tolerances_of(cfg));
    auto rep = census(c);
    TruncSummary s{rep.i, rep.delta, rep.identity_holds, {}, to_json(rep)};
    for (const auto& x : rep.inflections) s.flexes.push_back(x.arc.start().value());
    return s;
}

inline TruncSummary summarize(const SupportSpec& spec, const RunConfig& cfg) {
    SupportFunction sf(spec.d, spec.f, cfg.grid, tolerances_of(cfg));
    auto rep = census_fn(sf);
    TruncSummary s{rep.i, rep.delta, rep.identity_holds, {}, to_json(rep)};
    for (double t : rep.flexes.t) s.flexes.push_back(t);
    return s;
}

inline VectorSeries truncated(const VectorSeries& F, int n) { return truncate(F, n); }
inline SupportSpec truncated(const SupportSpec& s, int n) { return {s.d, truncate(s.f, n)}; }

inline RunOutcome run_curve(const VectorSeries& F, const RunConfig& cfg) {
    RunOutcome out;
    json& r = out.report;
    r["config"] = config_json(cfg);
    r["input"] = {{"kind", "curve"}, {"spec", to_json(F)}};
    ProjectiveCurve curve(F, cfg.grid, tolerances_of(cfg));
    std::vector<Chord> chords;
    switch (cfg.mode) {
        case Mode::SphereCensus: {
            auto rep = census(curve);
            r["census"] = to_json(rep);
            for (const auto& d : rep.double_tangents) chords.push_back(d.chord);
            out.pass = rep.identity_holds && rep.clean_points_ok;
            break;
        }
        case Mode::Flexes: {
            r["flexes"] = flexes_json(curve);
            out.pass = r["flexes"]["placement_ok"].get<bool>() && r["flexes"]["disjoint_ok"].get<bool>();
            break;
        }
        case Mode::Axioms: {
            auto rep = check_axioms(make_line_system(curve), cfg.axiom_grid);
            r["axiom_grid"] = cfg.axiom_grid;
            r["axioms"] = to_json(rep);
            out.pass = rep.all_pass();
            break;
        }
        default:
            throw Error(ErrorKind::ParseError, std::string("mode ") + to_string(cfg.mode) + " needs a support spec {d, f}");
    }
    out.csv = samples_csv(curve, cfg.grid);
    out.svg = sphere_svg(curve, inflection_ts(curve), chords);
    return out;
}

inline RunOutcome run_support(const SupportSpec& spec, const RunConfig& cfg) {
    RunOutcome out;
    json& r = out.report;
    r["config"] = config_json(cfg);
    r["input"] = {{"kind", "support"}, {"spec", to_json(spec)}};
    SupportFunction sf(spec.d, spec.f, cfg.grid, tolerances_of(cfg));
    std::vector<DCircle> circles;
    switch (cfg.mode) {
        case Mode::WidthCensus: {
            auto rep = census_fn(sf);
            r["census"] = to_json(rep);
            for (const auto& d : rep.double_tangents) circles.push_back(d_circle(d.phi, sf.width()));
            out.pass = rep.identity_holds && rep.flexes.pattern_ok && rep.flexes.disjoint_ok;
            break;
        }
        case Mode::Flexes: {
            auto fl = clean_flexes(sf);
            json infl = json::array();
            for (double t : d_inflection_ts(sf)) infl.push_back(t);
            r["d_inflections"] = infl;
            r["flexes"] = to_json(fl);
            out.pass = fl.pattern_ok && fl.disjoint_ok;
            break;
        }
        case Mode::Axioms: {
            auto rep = check_axioms(make_line_system(sf), cfg.axiom_grid);
            r["axiom_grid"] = cfg.axiom_grid;
            r["axioms"] = to_json(rep);
            out.pass = rep.all_pass();
            break;
        }
        case Mode::TheoremC: {
            auto certs = theorem_c_certificates(sf, false);
            json a = json::array();
            bool ok = certs.size() >= 3;
            for (const auto& c : certs) {
                json e = to_json(c);
                if (!c.ok()) e["failed_clause"] = c.failed_clause();
                a.push_back(e);
                ok = ok && c.ok();
                circles.push_back(c.circle);
            }
            r["certificates"] = a;
            out.pass = ok;
            break;
        }
        default:
            throw Error(ErrorKind::ParseError, std::string("mode ") + to_string(cfg.mode) + " needs a curve spec {x, y, z}");
    }
    out.csv = samples_csv(sf, cfg.grid);
    out.svg = width_svg(sf, circles, d_inflection_ts(sf));
    return out;
}

template <class Spec>
RunOutcome run_truncate(const Spec& spec, const RunConfig& cfg) {
    RunOutcome out;
    json& r = out.report;
    r["config"] = config_json(cfg);
    r["config"]["truncate_n"] = cfg.truncate_n;
    r["input"] = {{"kind", std::is_same_v<Spec, SupportSpec> ? "support" : "curve"}, {"spec", to_json(spec)}};
    const int n = cfg.truncate_n;
    TruncSummary a = summarize(truncated(spec, n), cfg);
    TruncSummary b = summarize(truncated(spec, n + 2), cfg);
    double shift = location_shift(a.flexes, b.flexes);
    bool agree = a.i == b.i && a.delta == b.delta && shift <= 1e-4;
    r["at_n"] = {{"n", n}, {"census", a.census}};
    r["at_n_plus_2"] = {{"n", n + 2}, {"census", b.census}};
    r["comparison"] = {{"same_i", a.i == b.i},
                       {"same_delta", a.delta == b.delta},
                       {"max_flex_shift", std::isfinite(shift) ? json(shift) : json(nullptr)},
                       {"agree", agree}};
    out.pass = agree && a.identity && b.identity;
    if constexpr (std::is_same_v<Spec, SupportSpec>) {
        SupportFunction sf(spec.d, truncate(spec.f, n + 2), cfg.grid, tolerances_of(cfg));
        out.csv = samples_csv(sf, cfg.grid);
        out.svg = width_svg(sf, {}, d_inflection_ts(sf));
    } else {
        ProjectiveCurve c(truncate(spec, n + 2), cfg.grid, tolerances_of(cfg));
        out.csv = samples_csv(c, cfg.grid);
        out.svg = sphere_svg(c, inflection_ts(c), {});
    }
    return out;
}

}  // namespace detail

inline RunOutcome evaluate(const InputSpec& spec, const RunConfig& cfg) {
    return std::visit(
        [&](const auto& s) -> RunOutcome {
            if (cfg.mode == Mode::Truncate) return detail::run_truncate(s, cfg);
            if constexpr (std::is_same_v<std::decay_t<decltype(s)>, SupportSpec>)
                return detail::run_support(s, cfg);
            else
                return detail::run_curve(s, cfg);
        },
        spec);
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

// Runs one configuration: 0 when every asserted identity or certificate holds,
// 1 when one fails (the report is still written), 2 on input or usage errors.
inline int run(const RunConfig& cfg, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    auto started = std::chrono::steady_clock::now();
    int code = 0;
    json report;
    RunOutcome result;
    try {
        validate(cfg);
        InputSpec spec = load_input(cfg.input);
        try {
            result = evaluate(spec, cfg);
            report = result.report;
            report["pass"] = result.pass;
            code = result.pass ? 0 : 1;
        } catch (const Error& e) {
            if (is_input_error(e.kind())) throw;
            report = {{"config", detail::config_json(cfg)},
                      {"pass", false},
                      {"error", {{"kind", to_string(e.kind())}, {"message", e.what()}}}};
            err << "curvex: " << to_string(e.kind()) << ": " << e.what() << "\n";
            code = 1;
        }
    } catch (const Error& e) {
        err << "curvex: " << to_string(e.kind()) << ": " << e.what() << "\n";
        return 2;
    }
    try {
        if (cfg.out_report.empty())
            out << dump(report);
        else
            write_file(cfg.out_report, dump(report));
        if (!cfg.out_csv.empty() && !result.csv.empty()) write_file(cfg.out_csv, result.csv);
        if (!cfg.out_svg.empty() && !result.svg.empty()) write_file(cfg.out_svg, result.svg);
        if (!cfg.out_report.empty()) {
            double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
            auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
            char stamp[32];
            std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
            json meta = {{"tool", "curvex"},  {"version", kVersion},      {"input", cfg.input},
                         {"mode", to_string(cfg.mode)}, {"threads", worker_count()}, {"started_utc", stamp},
                         {"elapsed_seconds", secs},      {"exit_code", code}};
            write_file(cfg.out_report + ".meta.json", dump(meta));
        }
    } catch (const std::exception& e) {
        err << "curvex: " << e.what() << "\n";
        return 2;
    }
    return code;
}

}  // namespace curvex
