#pragma once

#include <array>
#include <cmath>
#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "circle_domain.hpp"
#include "errors.hpp"
#include "line_system.hpp"
#include "profile.hpp"
#include "tangency.hpp"
#include "trig_series.hpp"

namespace curvex {

// Support function h = d/2 + f of a strictly convex curve of constant width d,
// with f antiperiodic.
class SupportFunction {
public:
    SupportFunction(double d, TrigSeries f, int grid = 4096, Tolerances tol = {})
        : d_(d), f_(std::move(f)), l2_(apply_flex_operator(f_, 2)), grid_(grid), tol_(tol) {
        if (f_.parity() != Parity::Antiperiodic)
            throw Error(ErrorKind::InvalidParity, "f must be antiperiodic");
        if (!(d_ > 0.0)) throw Error(ErrorKind::NotConvex, "width must be positive");
        for (int j = 0; j < grid_; ++j) {
            double t = kTwoPi * j / grid_;
            if (radius_of_curvature(t) <= 0.0)
                throw Error(ErrorKind::NotConvex, "h + h'' <= 0 near t = " + std::to_string(t));
        }
        nodes_ = detail::profile_nodes(grid_ / 2);
    }

    double width() const { return d_; }
    const TrigSeries& f() const { return f_; }
    const TrigSeries& l2f() const { return l2_; }
    int grid() const { return grid_; }
    const Tolerances& tolerances() const { return tol_; }

    double h(double t, int order = 0) const { return (order == 0 ? 0.5 * d_ : 0.0) + f_.derivative(t, order); }
    double radius_of_curvature(double t) const { return 0.5 * d_ + l2_(t); }

    // gamma(t) = h'(t) e(t) - h(t) n(t), e = (cos t, sin t), n = (-sin t, cos t).
    Eigen::Vector2d curve_point(double t) const {
        if (radius_of_curvature(t) <= 0.0) throw Error(ErrorKind::NotConvex, "h + h'' <= 0");
        Eigen::Vector2d e(std::cos(t), std::sin(t)), n(-std::sin(t), std::cos(t));
        return h(t, 1) * e - h(t) * n;
    }

private:
    friend struct SupportAccess;
    double d_;
    TrigSeries f_, l2_;
    int grid_;
    Tolerances tol_;
    std::vector<double> nodes_;

public:
    const std::vector<double>& profile_nodes() const { return nodes_; }
};

inline Eigen::Vector2d curve_point(const SupportFunction& sf, double t) { return sf.curve_point(t); }

// Sign-changing zeros of L_2 f = f'' + f on S^1; they come in antipodal pairs.
inline std::vector<CyclicPoint> d_inflections(const SupportFunction& sf) {
    if (sf.l2f().is_zero()) throw Error(ErrorKind::IdenticallyZero, "f lies in A_2");
    std::vector<CyclicPoint> out;
    for (const auto& z : transversal_only(isolate_sign_changes(sf.l2f(), Domain::FullPeriod, sf.grid(),
                                                               sf.tolerances().root)))
        out.emplace_back(z.root);
    return out;
}

// psi_p = f(p) cos(t-p) + s0 sin(t-p): the member of V_p with the smallest
// slope s0 that stays above f on (p, p + pi).
struct LimitingFunction {
    CyclicPoint base;
    TrigSeries psi;
    double s0 = 0.0;
    CircularSet contact;
    bool osculating = false;  // psi_p = phi_p, i.e. s0 = f'(p)
};

inline LimitingFunction limiting_function(const SupportFunction& sf, double p) {
    const auto& f = sf.f();
    const auto& tol = sf.tolerances();
    OsculationRemainder rem(f, p);
    const auto& nodes = sf.profile_nodes();
    // G(u) - f'(p) = D(u)/sin u, the slope needed to clear f at p + u.
    auto value = [&](double u) { return rem.value(u) / std::sin(u); };
    auto slope = [&](double u) {
        double s = std::sin(u), c = std::cos(u);
        return (rem.derivative(u) * s - rem.value(u) * c) / (s * s);
    };
    auto residual = [&](double u, double gap) { return gap * std::sin(u); };
    std::vector<double> samples(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) samples[i] = value(nodes[i]);
    auto sup = detail::sup_profile(nodes, samples, value, slope, residual, tol.contact);
    LimitingFunction lf;
    lf.base = CyclicPoint(p);
    double fp = f(p), dfp = f.derivative(p, 1);
    lf.s0 = dfp + sup.sup;
    lf.psi = TrigSeries(Parity::Antiperiodic, 0.0,
                        {{1, fp * std::cos(p) - lf.s0 * std::sin(p), fp * std::sin(p) + lf.s0 * std::cos(p)}});
    lf.osculating = sup.sup == 0.0;
    std::vector<double> pts{p, p + kPi};
    for (double u : sup.contacts) {
        pts.push_back(p + u);
        pts.push_back(p + u + kPi);
    }
    lf.contact = CircularSet::from_points(pts, tol.group);
    return lf;
}

inline LineSystem make_line_system(const SupportFunction& sf) {
    auto s = std::make_shared<const SupportFunction>(sf);
    return LineSystem([s](double p) { return limiting_function(*s, p).contact; },
                      [s](double t) { return s->l2f()(t); }, s->tolerances());
}

struct CleanFlexes {
    std::array<double, 3> t{};                 // t1 < t2 < t3 < t1 + pi
    std::array<double, 3> base{};              // the positive clean point over t_i (t_i or t_i + pi)
    std::array<Direction, 3> pattern{};        // sign change of f - phi_{t_i} at t_i
    std::array<CircularSet, 3> contacts;
    bool pattern_ok = false;                   // (-+, +-, -+)
    bool disjoint_ok = false;
};

inline Direction osculation_crossing(const SupportFunction& sf, double t) {
    TrigSeries phi = osculating_in_Am(sf.f(), t, 2);
    double before = sf.f()(t - kPi / 2) - phi(t - kPi / 2);
    double after = sf.f()(t + kPi / 2) - phi(t + kPi / 2);
    if (before < 0.0 && after > 0.0) return Direction::NegToPos;
    if (before > 0.0 && after < 0.0) return Direction::PosToNeg;
    return Direction::None;
}

// Three clean flexes of order 2 in a half period, from the line-system search;
// the window is chosen so the crossing pattern reads (-+, +-, -+).
inline CleanFlexes clean_flexes(const SupportFunction& sf) {
    if (sf.l2f().is_zero()) throw Error(ErrorKind::IdenticallyZero, "f lies in A_2");
    auto three = three_clean_inflections(make_line_system(sf));
    struct Found {
        double t, base;
        CircularSet contact;
    };
    std::array<Found, 3> c;
    for (int i = 0; i < 3; ++i)
        c[i] = {wrap_half(three.points[i].value()), three.points[i].value(), three.contacts[i]};
    std::sort(c.begin(), c.end(), [](const Found& x, const Found& y) { return x.t < y.t; });
    CleanFlexes best;
    for (int start = 0; start < 3; ++start) {
        CleanFlexes cand;
        for (int k = 0; k < 3; ++k) {
            int idx = (start + k) % 3;
            cand.t[k] = c[idx].t + (start + k >= 3 ? kPi : 0.0);
            cand.base[k] = c[idx].base;
            cand.contacts[k] = c[idx].contact;
            cand.pattern[k] = osculation_crossing(sf, cand.t[k]);
        }
        cand.pattern_ok = cand.pattern[0] == Direction::NegToPos && cand.pattern[1] == Direction::PosToNeg &&
                          cand.pattern[2] == Direction::NegToPos;
        cand.disjoint_ok = three.disjoint_ok;
        if (start == 0 || cand.pattern_ok) best = cand;
        if (cand.pattern_ok) break;
    }
    return best;
}

struct A2DoubleTangent {
    double a = 0.0, b = 0.0;  // b = a + u on P^1
    TrigSeries phi;           // the double tangent function
    TangencyPair pair;
    double off_contact = 0.0; // max |f - phi| over [a, b]

    ProjectiveInterval interval() const { return {wrap_half(a), b - a}; }
};

struct A2Scan {
    std::vector<A2DoubleTangent> intervals;
    std::vector<TangencyPair> rejected;
    int newton_failures = 0;
    int indeterminate = 0;
};

inline A2Scan a2_double_tangents(const SupportFunction& sf, TangencyOptions opt = {}) {
    if (sf.l2f().is_zero()) throw Error(ErrorKind::IdenticallyZero, "f lies in A_2");
    const TrigSeries& f = sf.f();
    auto solve = solve_tangencies([&f](double) { return f; }, opt);
    A2Scan scan;
    scan.newton_failures = solve.newton_failures;
    for (const auto& p : solve.pairs) {
        if (p.indeterminate) ++scan.indeterminate;
        if (!p.accepted) {
            scan.rejected.push_back(p);
            continue;
        }
        A2DoubleTangent d;
        d.a = p.a;
        d.b = p.a + p.u;
        d.pair = p;
        d.phi = osculating_in_Am(f, p.a, 2);
        for (int j = 0; j <= 256; ++j) {
            double t = d.a + p.u * j / 256.0;
            d.off_contact = std::max(d.off_contact, std::abs(f(t) - d.phi(t)));
        }
        if (d.off_contact <= 1e-7) {
            scan.rejected.push_back(p);
            continue;
        }
        scan.intervals.push_back(d);
    }
    return scan;
}

// f with phi substituted over [a, b] (or over the complement), extended
// antiperiodically; C^1 with piecewise L_2.
class ReducedFunction {
public:
    ReducedFunction(const SupportFunction& sf, const A2DoubleTangent& d, bool complement)
        : f_(sf.f()), l2_(sf.l2f()), phi_(d.phi), a_(d.a), u_(d.b - d.a), complement_(complement) {}

    double value(double t) const { return uses_phi(t) ? phi_(t) : f_(t); }
    double l2(double t) const { return uses_phi(t) ? 0.0 : l2_(t); }

private:
    bool uses_phi(double t) const {
        double r = wrap_half(t - a_);
        bool inside = r <= u_;
        return complement_ ? !inside : inside;
    }

    TrigSeries f_, l2_, phi_;
    double a_, u_;
    bool complement_;
};

inline int flex_count(const ReducedFunction& g, int n = 8192) {
    return count_sign_changes_antiperiodic([&](double t) { return g.l2(t); }, n, 1e-12);
}

struct WidthAdditivity {
    double a = 0.0, b = 0.0;
    int i = 0, i1 = 0, i2 = 0;
    bool holds = false;
};

struct WidthCensusReport {
    int i = 0;
    int delta = 0;
    CleanFlexes flexes;
    std::vector<A2DoubleTangent> double_tangents;
    std::vector<std::size_t> family;
    std::vector<std::size_t> greedy_sizes;
    std::optional<WidthAdditivity> additivity;
    int newton_failures = 0;
    int indeterminate = 0;
    bool identity_holds = false;
};

inline int flex_count(const SupportFunction& sf) {
    if (sf.l2f().is_zero()) throw Error(ErrorKind::IdenticallyZero, "f lies in A_2");
    return static_cast<int>(
        transversal_only(isolate_sign_changes(sf.l2f(), Domain::HalfPeriod, sf.grid(), sf.tolerances().root))
            .size());
}

inline WidthCensusReport census_fn(const SupportFunction& sf, TangencyOptions opt = {}) {
    WidthCensusReport rep;
    rep.i = flex_count(sf);
    rep.flexes = clean_flexes(sf);
    auto scan = a2_double_tangents(sf, opt);
    rep.double_tangents = scan.intervals;
    rep.newton_failures = scan.newton_failures;
    rep.indeterminate = scan.indeterminate;
    std::vector<ProjectiveInterval> iv;
    for (const auto& d : rep.double_tangents) iv.push_back(d.interval());
    rep.family = maximal_independent_family(iv);
    rep.delta = static_cast<int>(rep.family.size());
    for (std::size_t r = 0; r < iv.size(); ++r) rep.greedy_sizes.push_back(greedy_independent_family(iv, r).size());
    rep.identity_holds = rep.i - 2 * rep.delta == 3;
    if (!rep.double_tangents.empty()) {
        const auto& d = rep.double_tangents.front();
        WidthAdditivity add;
        add.a = d.a;
        add.b = d.b;
        add.i = rep.i;
        add.i1 = flex_count(ReducedFunction(sf, d, false));
        add.i2 = flex_count(ReducedFunction(sf, d, true));
        add.holds = add.i == add.i1 + add.i2 - 1;
        rep.additivity = add;
    }
    return rep;
}

// Circle of diameter d with support d/2 + b cos t + c sin t; its center is (c, -b).
struct DCircle {
    Eigen::Vector2d center;
    double radius = 0.0;
    double b = 0.0, c = 0.0;
};

// The d-circle whose support function is d/2 + psi for psi in A_2.
inline DCircle d_circle(const TrigSeries& psi, double d) {
    DCircle out;
    for (const auto& h : psi.harmonics())
        if (h.k == 1) {
            out.b = h.a;
            out.c = h.b;
        }
    out.center = Eigen::Vector2d(out.c, -out.b);
    out.radius = 0.5 * d;
    return out;
}

struct TheoremCCertificate {
    double t = 0.0;
    DCircle circle;
    int contact_components = 0;
    bool tangential = false;      // value and slope agree at t, sign change across t
    double radius_error = 0.0;    // |h + h'' - d/2| at t
    int support_crossings = 0;    // sign changes of (d/2 + psi) - h on S^1
    int geometric_crossings = 0;  // sign changes of |gamma - center| - d/2 on S^1

    bool contact_ok() const { return contact_components == 2; }
    bool radius_ok() const { return radius_error <= 1e-8; }
    bool crossings_ok() const { return support_crossings == 2 && geometric_crossings == 2; }
    bool ok() const { return contact_ok() && tangential && radius_ok() && crossings_ok(); }
    std::string failed_clause() const {
        if (!contact_ok()) return "contact components";
        if (!tangential) return "tangential crossing";
        if (!radius_ok()) return "curvature radius";
        if (!crossings_ok()) return "crossing count";
        return "";
    }
};

inline TheoremCCertificate certificate_at(const SupportFunction& sf, double t) {
    TheoremCCertificate cert;
    cert.t = t;
    LimitingFunction lf = limiting_function(sf, t);
    cert.circle = d_circle(lf.psi, sf.width());
    cert.contact_components = static_cast<int>(lf.contact.size());
    TrigSeries gap = lf.psi - sf.f();
    double scale = std::max(1.0, sf.f().magnitude());
    bool touches = std::abs(gap(t)) <= 1e-9 * scale && std::abs(gap.derivative(t, 1)) <= 1e-9 * scale;
    bool flips = (gap(t - kPi / 2) > 0.0) != (gap(t + kPi / 2) > 0.0);
    cert.tangential = touches && flips;
    cert.radius_error = std::abs(sf.radius_of_curvature(t) - 0.5 * sf.width());
    // Sign changes around S^1 on a grid offset by half a step from t, so the
    // contact points t and t + pi are never sampled.
    auto cyclic_sign_changes = [&](auto&& value, double zero) {
        const int n = sf.grid();
        int count = 0, last = 0, first = 0;
        for (int j = 0; j < n; ++j) {
            double v = value(t + kTwoPi * (j + 0.5) / n);
            int sg = std::abs(v) <= zero ? 0 : (v > 0.0 ? 1 : -1);
            if (sg == 0) continue;
            if (first == 0) first = sg;
            if (last != 0 && sg != last) ++count;
            last = sg;
        }
        if (first != 0 && last != first) ++count;
        return count;
    };
    cert.support_crossings = cyclic_sign_changes([&](double s) { return gap(s); }, 1e-13 * scale);
    cert.geometric_crossings = cyclic_sign_changes(
        [&](double s) { return (sf.curve_point(s) - cert.circle.center).norm() - cert.circle.radius; },
        1e-11 * scale);
    return cert;
}

// One certificate per clean flex; throws CertificateFailed naming the clause.
inline std::vector<TheoremCCertificate> theorem_c_certificates(const SupportFunction& sf, bool strict = true) {
    CleanFlexes flexes = clean_flexes(sf);
    std::vector<TheoremCCertificate> out;
    for (double t : flexes.base) out.push_back(certificate_at(sf, t));
    if (strict)
        for (const auto& c : out)
            if (!c.ok())
                throw Error(ErrorKind::CertificateFailed,
                            c.failed_clause() + " at t = " + std::to_string(c.t));
    return out;
}

}  // namespace curvex
