#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "circle_domain.hpp"
#include "errors.hpp"
#include "line_system.hpp"
#include "sphere_curve.hpp"
#include "tangency.hpp"

namespace curvex {

// The segment between gamma(a) and gamma(b) that, together with gamma([a, b]),
// lies in one affine chart {x : k.x > 0}. The chart is cut out by the Barner
// circle at the midpoint of the complementary interval.
struct Chord {
    double a = 0.0, b = 0.0;    // b = a + u lifted, 0 < u < pi
    Eigen::Vector3d A, B;       // unit lifts at a and b on the k > 0 side
    Eigen::Vector3d k;          // chart normal
    Eigen::Vector3d m;          // normal of the great circle through A and B

    // Point at chart-linear parameter lambda in [0, 1].
    Eigen::Vector3d point(double lambda) const {
        Eigen::Vector3d v = (1.0 - lambda) * A / k.dot(A) + lambda * B / k.dot(B);
        return v.normalized();
    }
    // Affine chart coordinates of a point with k.x != 0.
    Eigen::Vector2d chart(const Eigen::Vector3d& x) const {
        Eigen::Vector3d e1 = (A - k.dot(A) * k).normalized();
        Eigen::Vector3d e2 = k.cross(e1);
        return Eigen::Vector2d(e1.dot(x), e2.dot(x)) / k.dot(x);
    }
    // Position of a point of the chord's line in chart-linear units (0 at A, 1 at B).
    double chord_parameter(const Eigen::Vector3d& x) const {
        Eigen::Vector2d ca = chart(A), cb = chart(B), cx = chart(x);
        return (cx - ca).dot(cb - ca) / (cb - ca).squaredNorm();
    }
    Chord reversed() const {
        Chord c = *this;
        std::swap(c.a, c.b);
        std::swap(c.A, c.B);
        c.m = -m;
        return c;
    }
};

inline Chord chord(const ProjectiveCurve& curve, double a, double b) {
    double u = ccw_offset(a, b);
    if (u >= kPi) u -= kPi;
    Chord c;
    c.a = a;
    c.b = a + u;
    Eigen::Vector3d A = curve.lift(c.a), B = curve.lift(c.b);
    if (A.cross(B).norm() < curve.tolerances().norm || u <= 0.0)
        throw Error(ErrorKind::DegenerateChord, "gamma(a) and gamma(b) coincide");
    double mid = c.b + 0.5 * (kPi - u);
    BarnerSet bs = curve.barner_arc(mid);
    if (bs.empty()) throw Error(ErrorKind::NotAntiConvex, "no Barner circle for the chord chart");
    c.k = bs.mid_normal();
    // gamma((mid - pi, mid)) lies on the positive side of the Barner normal.
    for (int j = 0; j <= 64; ++j) {
        double s = c.a + u * j / 64.0;
        if (c.k.dot(curve.lift(s)) <= 0.0)
            throw Error(ErrorKind::DegenerateChord, "gamma([a, b]) leaves the affine chart");
    }
    c.A = A;
    c.B = B;
    c.m = A.cross(B).normalized();
    return c;
}

// Parameters in (a, b) where gamma meets the chord's line, with their positions
// along the chord; for a double tangent they are increasing.
struct ChordCrossing {
    double t = 0.0;
    double lambda = 0.0;
};

inline std::vector<ChordCrossing> chord_crossings(const ProjectiveCurve& curve, const Chord& c) {
    double u = c.b - c.a, pad = 1e-4 * u;
    auto side = [&](double s) { return c.m.dot(curve.lift(c.a + pad + s)); };
    auto zeros = isolate_sign_changes(side, u - 2 * pad, 4096, 1e-14);
    std::vector<ChordCrossing> out;
    for (const auto& z : zeros) {
        double t = c.a + pad + z.root;
        out.push_back({t, c.chord_parameter(curve.lift(t))});
    }
    return out;
}

// gamma with the arc over [a, b] replaced by its chord, extended antiperiodically.
class ReducedCurve {
public:
    ReducedCurve(const ProjectiveCurve& base, Chord c) : base_(base), chord_(std::move(c)) {}

    const Chord& chord() const { return chord_; }
    const ProjectiveCurve& base() const { return base_; }
    CircularArc replaced() const { return CircularArc(CyclicPoint(chord_.a), chord_.b - chord_.a); }

    Eigen::Vector3d point(double t) const {
        double r = wrap_angle(t - chord_.a);
        double sign = 1.0;
        if (r >= kPi) {
            r -= kPi;
            sign = -1.0;
        }
        double u = chord_.b - chord_.a;
        if (r <= u) return sign * chord_.point(r / u);
        return sign * base_.lift(chord_.a + r);
    }

    Eigen::Vector3d tangent(double t) const {
        const double h = 1e-6;
        Eigen::Vector3d d = point(t + h) - point(t - h);
        Eigen::Vector3d p = point(t);
        return (d - d.dot(p) * p).normalized();
    }

private:
    ProjectiveCurve base_;
    Chord chord_;
};

// Reduction with respect to [a, b]: the chord replaces gamma over [a, b].
// Throws SelfIntersection when the kept arc meets the chord segment.
inline ReducedCurve reduction(const ProjectiveCurve& curve, double a, double b) {
    Chord c = chord(curve, a, b);
    double u = c.b - c.a, rest = kPi - u, pad = 1e-4 * rest;
    auto side = [&](double s) { return c.m.dot(curve.lift(c.b + pad + s)); };
    for (const auto& z : isolate_sign_changes(side, rest - 2 * pad, 4096, 1e-14)) {
        Eigen::Vector3d x = curve.lift(c.b + pad + z.root);
        for (const Eigen::Vector3d& y : {x, Eigen::Vector3d(-x)}) {
            if (c.k.dot(y) <= 0.0) continue;
            double lam = c.chord_parameter(y);
            if (lam > 1e-9 && lam < 1.0 - 1e-9)
                throw Error(ErrorKind::SelfIntersection, "kept arc crosses the chord");
        }
    }
    return ReducedCurve(curve, c);
}

// Barner test for any lifted evaluator: some great circle through +-x(t) meets
// the curve only there, for every sampled t.
template <class Point, class Tangent>
double min_barner_width(const Point& point, const Tangent& tangent, int n_base = 256, int n_arc = 2048) {
    double worst = kPi;
    for (int i = 0; i < n_base; ++i) {
        double t = kPi * i / n_base;
        Eigen::Vector3d p = point(t), tau = tangent(t);
        tau = (tau - tau.dot(p) * p).normalized();
        Eigen::Vector3d nu = p.cross(tau);
        double lo = 0.0, hi = 0.0, prev = 0.0;
        for (int j = 1; j < n_arc; ++j) {
            Eigen::Vector3d x = point(t + kPi * j / n_arc);
            double a = std::atan2(nu.dot(x), tau.dot(x));
            if (j > 1) a += kTwoPi * std::round((prev - a) / kTwoPi);
            prev = a;
            lo = std::min(lo, a);
            hi = std::max(hi, a);
        }
        worst = std::min(worst, kPi - (hi - lo));
    }
    return worst;
}

inline bool is_anti_convex(const ReducedCurve& g) {
    return min_barner_width([&](double t) { return g.point(t); }, [&](double t) { return g.tangent(t); }) > 0.0;
}

// Topological inflection count on P^1: sign changes of the discrete turning
// det(x_{j-1}, x_j, x_{j+1}); runs on great-circle arcs (chords) give zeros and
// are merged, so a chord counts once iff the curve crosses it.
template <class Point>
int topological_inflections(const Point& point, int n = 8192) {
    const double h = kPi / n;
    auto turn = [&](double t) {
        Eigen::Matrix3d M;
        M.col(0) = point(t - h);
        M.col(1) = point(t);
        M.col(2) = point(t + h);
        return M.determinant();
    };
    return count_sign_changes_antiperiodic(turn, n, 1e-15);
}

inline int topological_inflections(const ReducedCurve& g, int n = 8192) {
    return topological_inflections([&](double t) { return g.point(t); }, n);
}
inline int topological_inflections(const ProjectiveCurve& c, int n = 8192) {
    return topological_inflections([&](double t) { return c.lift(t); }, n);
}

struct DoubleTangentInterval {
    double a = 0.0, b = 0.0;  // b = a + u, on P^1
    Chord chord;
    TangencyPair pair;
    double off_chord = 0.0;   // max distance of gamma([a, b]) from the chord line
    bool same_direction = false;

    ProjectiveInterval interval() const { return {wrap_half(a), b - a}; }
};

struct DoubleTangentScan {
    std::vector<DoubleTangentInterval> intervals;
    std::vector<TangencyPair> rejected;  // solutions failing one of the conditions
    int newton_failures = 0;
    int indeterminate = 0;
};

// Conormal family: S_a = m(a).F with m(a) the unit normal of the tangent circle at a.
inline auto tangent_family(const ProjectiveCurve& curve) {
    return [&curve](double a) {
        const auto& F = curve.series();
        Eigen::Vector3d m = F(a).cross(F.derivative(a, 1)).normalized();
        return F.dot(m);
    };
}

inline DoubleTangentScan detect_double_tangents(const ProjectiveCurve& curve, TangencyOptions opt = {}) {
    auto solve = solve_tangencies(tangent_family(curve), opt);
    DoubleTangentScan scan;
    scan.newton_failures = solve.newton_failures;
    for (const auto& p : solve.pairs) {
        if (p.indeterminate) {
            ++scan.indeterminate;
            scan.rejected.push_back(p);
            continue;
        }
        if (!p.accepted) {
            scan.rejected.push_back(p);
            continue;
        }
        DoubleTangentInterval d;
        d.a = p.a;
        d.b = p.a + p.u;
        d.pair = p;
        d.chord = chord(curve, d.a, d.b);
        const Chord& c = d.chord;
        for (int j = 0; j <= 256; ++j) {
            Eigen::Vector3d x = curve.lift(d.a + p.u * j / 256.0);
            d.off_chord = std::max(d.off_chord, std::abs(c.m.dot(x)));
        }
        Eigen::Vector2d dir = c.chart(c.B) - c.chart(c.A);
        auto chart_velocity = [&](double t) {
            const double h = 1e-6;
            return Eigen::Vector2d(c.chart(curve.lift(t + h)) - c.chart(curve.lift(t - h)));
        };
        d.same_direction = (chart_velocity(d.a).dot(dir) > 0.0) == (chart_velocity(d.b).dot(dir) > 0.0);
        // Not an inflection interval of the reduction: the curve leaves the chord
        // on the same side at both ends.
        double eta = std::min(1e-3, p.u / 8.0);
        double sa = c.m.dot(curve.lift(d.a - eta)), sb = c.m.dot(curve.lift(d.b + eta));
        bool same_side = (sa > 0.0) == (sb > 0.0);
        if (d.off_chord <= 1e-7 || !same_side || !d.same_direction) {
            scan.rejected.push_back(p);
            continue;
        }
        scan.intervals.push_back(d);
    }
    return scan;
}

struct Additivity {
    double a = 0.0, b = 0.0;
    int i = 0, i1 = 0, i2 = 0;
    bool anti_convex1 = false, anti_convex2 = false;
    bool holds = false;  // i = i1 + i2 - 1
};

inline Additivity additivity_check(const ProjectiveCurve& curve, const DoubleTangentInterval& d) {
    Additivity r;
    r.a = d.a;
    r.b = d.b;
    ReducedCurve g1 = reduction(curve, d.a, d.b);
    ReducedCurve g2 = reduction(curve, d.b, d.a + kPi);
    r.i = topological_inflections(curve);
    r.i1 = topological_inflections(g1);
    r.i2 = topological_inflections(g2);
    r.anti_convex1 = is_anti_convex(g1);
    r.anti_convex2 = is_anti_convex(g2);
    r.holds = r.i == r.i1 + r.i2 - 1;
    return r;
}

struct CensusReport {
    int i = 0;
    int delta = 0;
    std::vector<Inflection> inflections;
    std::vector<CyclicPoint> clean_points;
    bool clean_points_ok = false;  // placement and disjointness verified
    std::vector<DoubleTangentInterval> double_tangents;
    std::vector<std::size_t> family;     // indices into double_tangents
    std::vector<std::size_t> greedy_sizes;
    std::optional<Additivity> additivity;
    int newton_failures = 0;
    int indeterminate = 0;
    bool identity_holds = false;  // i - 2 delta = 3
};

inline std::vector<ProjectiveInterval> intervals_of(const std::vector<DoubleTangentInterval>& d) {
    std::vector<ProjectiveInterval> out;
    for (const auto& x : d) out.push_back(x.interval());
    return out;
}

inline void fill_family(CensusReport& rep) {
    auto iv = intervals_of(rep.double_tangents);
    rep.family = maximal_independent_family(iv);
    rep.delta = static_cast<int>(rep.family.size());
    rep.greedy_sizes.clear();
    for (std::size_t r = 0; r < iv.size(); ++r) rep.greedy_sizes.push_back(greedy_independent_family(iv, r).size());
    rep.identity_holds = rep.i - 2 * rep.delta == 3;
}

inline CensusReport census(const ProjectiveCurve& curve, TangencyOptions opt = {}) {
    if (!curve.is_anti_convex()) throw Error(ErrorKind::NotAntiConvex, "curve fails the Barner test");
    CensusReport rep;
    rep.inflections = curve.true_inflections();
    rep.i = static_cast<int>(rep.inflections.size());
    auto three = three_clean_inflections(make_line_system(curve));
    rep.clean_points.assign(three.points.begin(), three.points.end());
    rep.clean_points_ok = three.placement_ok && three.disjoint_ok;
    auto scan = detect_double_tangents(curve, opt);
    rep.double_tangents = scan.intervals;
    rep.newton_failures = scan.newton_failures;
    rep.indeterminate = scan.indeterminate;
    fill_family(rep);
    if (!rep.double_tangents.empty()) rep.additivity = additivity_check(curve, rep.double_tangents.front());
    return rep;
}

}  // namespace curvex
