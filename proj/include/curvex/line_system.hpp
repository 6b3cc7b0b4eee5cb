#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "circle_domain.hpp"
#include "errors.hpp"
#include "parallel.hpp"
#include "sphere_curve.hpp"

namespace curvex {

// A family p -> F(p) of closed subsets of S^1 together with an optional smooth
// indicator whose sign changes locate the inflections exactly; the indicator is
// only used to polish search results below the contact resolution.
class LineSystem {
public:
    using ContactMap = std::function<CircularSet(double)>;
    using Indicator = std::function<double(double)>;

    LineSystem(ContactMap map, Indicator indicator = {}, Tolerances tol = {})
        : map_(std::move(map)), indicator_(std::move(indicator)), tol_(tol) {}

    CircularSet contact(double p) const { return map_(wrap_angle(p)); }
    CircularSet contact(CyclicPoint p) const { return map_(p.value()); }
    const Indicator& indicator() const { return indicator_; }
    const Tolerances& tolerances() const { return tol_; }

private:
    ContactMap map_;
    Indicator indicator_;
    Tolerances tol_;
};

inline LineSystem make_line_system(const ProjectiveCurve& curve) {
    auto c = std::make_shared<const ProjectiveCurve>(curve);
    return LineSystem([c](double p) { return c->contact_set(p); },
                      [c](double t) { return c->inflection_indicator(t); }, c->tolerances());
}

// Containment tolerance for "x in F(p)": contacts are located to far better than
// the grouping tolerance, so the grouping tolerance itself is used.
inline double membership_eps(const Tolerances& tol) { return 10.0 * tol.group; }

// F0(p): the component of F(p) containing p.
inline CircularArc f0_component(const CircularSet& F, CyclicPoint p, const Tolerances& tol) {
    auto idx = F.component_of(p, membership_eps(tol));
    if (!idx) throw Error(ErrorKind::AxiomViolation, "L1: p not in F(p) at p = " + std::to_string(p.value()));
    return F.components()[*idx];
}

inline CircularArc f0(const LineSystem& sys, CyclicPoint p) {
    return f0_component(sys.contact(p), p, sys.tolerances());
}

inline bool is_positive_clean(const CircularSet& F, CyclicPoint p, const Tolerances& tol) {
    CircularArc base = f0_component(F, p, tol);
    return projective_equal(F, CircularSet({base}, F.eps_group()), membership_eps(tol));
}

inline bool is_positive_clean(const LineSystem& sys, CyclicPoint p) {
    return is_positive_clean(sys.contact(p), p, sys.tolerances());
}

// Y(p) = F(p) minus F0(p) and TF0(p).
inline CircularSet y_set(const CircularSet& F, CyclicPoint p, const Tolerances& tol) {
    CircularArc base = f0_component(F, p, tol);
    CircularSet excluded({base, base.antipode()}, F.eps_group());
    return F.without_components_meeting(excluded, membership_eps(tol));
}

struct CleanSearchResult {
    CyclicPoint point;
    CircularSet contact;
    std::vector<double> lengths;  // interval length before each iteration
    int iterations = 0;
};

namespace detail {

// Signed position along the search direction measured from an origin.
struct Axis {
    CyclicPoint origin;
    int dir = 1;

    double coord(CyclicPoint x) const {
        return dir > 0 ? ccw_offset(origin.value(), x.value()) : ccw_offset(x.value(), origin.value());
    }
    CyclicPoint at(double c) const { return origin.shifted(dir * c); }
};

inline void polish_with_indicator(const LineSystem& sys, const Axis& ax, double lo, double hi,
                                  double& best) {
    const auto& w = sys.indicator();
    if (!w) return;
    double pad = std::max(1e-6, 4.0 * (hi - lo));
    double a = std::max(0.0, lo - pad), b = hi + pad;
    auto f = [&](double c) { return w(ax.at(c).value()); };
    // Sub-sample the bracket so a sign change next to best is not missed.
    const int n = 16;
    double prev = a, fprev = f(a);
    double found = std::numeric_limits<double>::quiet_NaN();
    for (int i = 1; i <= n; ++i) {
        double c = a + (b - a) * i / n, fc = f(c);
        if (fprev == 0.0) {
            found = prev;
        } else if ((fprev < 0.0) != (fc < 0.0) && fc != 0.0) {
            double r = bisect_root(f, prev, c, fprev, sys.tolerances().root);
            if (std::isnan(found) || std::abs(r - best) < std::abs(found - best)) found = r;
        }
        prev = c;
        fprev = fc;
    }
    if (!std::isnan(found)) best = found;
}

// The halving iteration on an interval known to satisfy the hypotheses of the
// search: r is the midpoint; if r is not clean the next interval runs from the
// extremal point of F0(r) to the nearest contact beyond it, on whichever side
// of r the remaining contacts fall.
inline CleanSearchResult clean_search(const LineSystem& sys, CyclicPoint p, CyclicPoint q, int dir) {
    const auto& tol = sys.tolerances();
    const double eps = membership_eps(tol);
    Axis ax{p, dir};
    double lo = 0.0, hi = ax.coord(q);
    CleanSearchResult res;
    for (int it = 0; it < 200; ++it) {
        res.lengths.push_back(hi - lo);
        res.iterations = it + 1;
        double mid = 0.5 * (lo + hi);
        CyclicPoint r = ax.at(mid);
        CircularSet Fr = sys.contact(r);
        CircularArc base = f0_component(Fr, r, tol);
        bool clean = projective_equal(Fr, CircularSet({base}, Fr.eps_group()), eps);
        if (clean || hi - lo < tol.search) {
            double best = mid;
            polish_with_indicator(sys, ax, lo, hi, best);
            CyclicPoint s = ax.at(best);
            CircularSet Fs = sys.contact(s);
            if (best != mid && is_positive_clean(Fs, s, tol)) {
                res.point = s;
                res.contact = Fs;
            } else {
                res.point = r;
                res.contact = Fr;
            }
            return res;
        }
        // Base component in axis coordinates, around mid.
        double b0 = mid - ax.coord(dir > 0 ? base.start() : base.end());
        double b1 = ax.coord(dir > 0 ? base.end() : base.start()) - mid;
        b0 = mid - std::abs(std::remainder(b0, kTwoPi));
        b1 = mid + std::abs(std::remainder(b1, kTwoPi));
        std::vector<double> right, left;
        CircularSet Yr = y_set(Fr, r, tol);
        for (double x : Yr.endpoints()) {
            for (double y : {x, x + kPi}) {
                double c = ax.coord(CyclicPoint(y));
                if (c > hi + eps || c < lo - eps) continue;
                if (c > b1 + eps) right.push_back(std::min(c, hi));
                if (c < b0 - eps) left.push_back(std::max(c, lo));
            }
        }
        if (right.empty() && left.empty())
            throw Error(ErrorKind::NoConvergence,
                        "contact set escapes the search interval at r = " + std::to_string(r.value()));
        double nlo = lo, nhi = hi, best_len = std::numeric_limits<double>::infinity();
        if (!right.empty()) {
            double q1 = *std::min_element(right.begin(), right.end());
            if (q1 - b1 < best_len) { best_len = q1 - b1; nlo = b1; nhi = q1; }
        }
        if (!left.empty()) {
            double q1 = *std::max_element(left.begin(), left.end());
            if (b0 - q1 < best_len) { best_len = b0 - q1; nlo = q1; nhi = b0; }
        }
        lo = nlo;
        hi = nhi;
    }
    throw Error(ErrorKind::SearchFailed, "clean search exceeded the iteration cap");
}

}  // namespace detail

// Positive clean inflection s in (p, q) with pi(F(s)) inside pi((p, q)), for q in
// F(p) with (p, q) free of F0(p). Works for q on either side of p (the mirrored
// statement uses the reversed orientation).
inline CleanSearchResult find_clean_inflection(const LineSystem& sys, CyclicPoint p, CyclicPoint q) {
    const auto& tol = sys.tolerances();
    const double eps = membership_eps(tol);
    CircularSet Fp = sys.contact(p);
    if (!Fp.contains(q, eps))
        throw Error(ErrorKind::PreconditionFailed, "q is not in F(p)");
    if (same_point(q, p.antipode(), eps))
        throw Error(ErrorKind::PreconditionFailed, "q equals Tp");
    CircularArc base = f0_component(Fp, p, tol);
    if (base.contains(q, eps))
        throw Error(ErrorKind::PreconditionFailed, "q lies in F0(p)");
    int dir = cyclic_between(p, q, p.antipode()) ? 1 : -1;
    detail::Axis ax{p, dir};
    // (p, q) must not meet F0(p) away from p itself.
    CyclicPoint far = dir > 0 ? base.end() : base.start();
    double reach = ax.coord(far);
    if (reach > eps && reach < ax.coord(q))
        throw Error(ErrorKind::PreconditionFailed, "(p, q) meets F0(p)");
    return detail::clean_search(sys, p, q, dir);
}

// Clean point between p and any q in F(p) outside F0(p) and different from Tp:
// start from the extremal point of F0(p) towards q and the first contact after it.
inline CleanSearchResult clean_point_between(const LineSystem& sys, CyclicPoint p, CyclicPoint q) {
    const auto& tol = sys.tolerances();
    const double eps = membership_eps(tol);
    CircularSet Fp = sys.contact(p);
    CircularArc base = f0_component(Fp, p, tol);
    if (!Fp.contains(q, eps) || base.contains(q, eps) || same_point(q, p.antipode(), eps))
        throw Error(ErrorKind::PreconditionFailed, "q must be a contact outside F0(p) and not Tp");
    int dir = cyclic_between(p, q, p.antipode()) ? 1 : -1;
    detail::Axis ax{p, dir};
    CyclicPoint start = dir > 0 ? base.end() : base.start();
    double s0 = ax.coord(start);
    if (s0 > kPi) s0 = 0.0;
    double target = ax.coord(q), first = target;
    for (double x : Fp.endpoints()) {
        double c = ax.coord(CyclicPoint(x));
        if (c > s0 + eps && c < first) first = c;
    }
    return detail::clean_search(sys, ax.at(s0), ax.at(first), dir);
}

struct ThreeCleanResult {
    std::array<CyclicPoint, 3> points;
    std::array<CircularSet, 3> contacts;
    bool placement_ok = false;  // s2 in (s1, Ts1) and s3 in (Ts1, s1)
    bool disjoint_ok = false;   // F(s_i) pairwise disjoint
};

inline bool sets_disjoint(const CircularSet& a, const CircularSet& b, double eps) {
    for (const auto& x : a.components())
        for (const auto& y : b.components())
            if (CircularSet::arcs_meet(x, y, eps)) return false;
    return true;
}

// Three positive clean inflections with pairwise disjoint contact sets.
inline ThreeCleanResult three_clean_inflections(const LineSystem& sys, int scan = 64) {
    const auto& tol = sys.tolerances();
    const double eps = membership_eps(tol);
    auto sets = parallel_map(scan, [&](std::size_t j) { return sys.contact(kTwoPi * j / scan); });
    std::size_t best = 0;
    for (std::size_t j = 1; j < sets.size(); ++j)
        if (sets[j].size() > sets[best].size()) best = j;
    CyclicPoint p0(kTwoPi * best / scan);
    CircularSet Y0 = y_set(sets[best], p0, tol);
    if (Y0.empty()) throw Error(ErrorKind::SearchFailed, "no non-clean starting point on the scan grid");
    CleanSearchResult r1 = clean_point_between(sys, p0, Y0.components().front().start());
    CyclicPoint s1 = r1.point, ts1 = s1.antipode();
    CircularSet Ft = sys.contact(ts1);
    CircularArc bt = f0_component(Ft, ts1, tol);
    std::optional<CyclicPoint> u;
    for (const auto& c : Ft.components()) {
        if (CircularSet::arcs_meet(c, bt, eps) || CircularSet::arcs_meet(c, bt.antipode(), eps)) continue;
        for (CyclicPoint x : {c.start(), c.end()}) {
            if (cyclic_between(s1, x, ts1) && !same_point(x, s1, eps) && !same_point(x, ts1, eps)) {
                u = x;
                break;
            }
        }
        if (u) break;
    }
    if (!u) throw Error(ErrorKind::SearchFailed, "F(Ts1) has no contact inside (s1, Ts1)");
    CleanSearchResult r2 = clean_point_between(sys, ts1, *u);
    CleanSearchResult r3 = clean_point_between(sys, ts1, u->antipode());
    ThreeCleanResult out;
    out.points = {s1, r2.point, r3.point};
    out.contacts = {r1.contact, r2.contact, r3.contact};
    out.placement_ok = cyclic_between(s1, r2.point, ts1) && cyclic_between(ts1, r3.point, s1);
    out.disjoint_ok = sets_disjoint(r1.contact, r2.contact, eps) &&
                      sets_disjoint(r1.contact, r3.contact, eps) &&
                      sets_disjoint(r2.contact, r3.contact, eps);
    return out;
}

// Positive clean inflections on S^1, located as indicator zeros that pass the
// cleanliness test.
inline std::vector<CyclicPoint> positive_clean_points(const LineSystem& sys, int n_scan = 4096) {
    const auto& w = sys.indicator();
    if (!w) throw Error(ErrorKind::PreconditionFailed, "line system has no indicator");
    auto zeros = transversal_only(isolate_sign_changes(w, kTwoPi, n_scan, sys.tolerances().root));
    std::vector<double> roots;
    for (const auto& z : zeros) roots.push_back(z.root);
    auto clean = parallel_map(roots.size(), [&](std::size_t i) {
        return is_positive_clean(sys, CyclicPoint(roots[i])) ? 1 : 0;
    });
    std::vector<CyclicPoint> out;
    for (std::size_t i = 0; i < roots.size(); ++i)
        if (clean[i]) out.emplace_back(roots[i]);
    return out;
}

// Open interval (a, b) with b in (a, Ta) and no positive clean inflection inside.
class AdmissibleInterval {
public:
    AdmissibleInterval(CyclicPoint a, CyclicPoint b) : a_(a), b_(b) {
        if (!cyclic_between(a, b, a.antipode()))
            throw Error(ErrorKind::PreconditionFailed, "b must lie in (a, Ta)");
    }
    CyclicPoint a() const { return a_; }
    CyclicPoint b() const { return b_; }
    double length() const { return ccw_offset(a_.value(), b_.value()); }
    // Position of x measured counterclockwise from a.
    double coord(CyclicPoint x) const { return ccw_offset(a_.value(), x.value()); }
    CyclicPoint at(double c) const { return a_.shifted(c); }

private:
    CyclicPoint a_, b_;
};

// Consecutive positive clean points closer than pi bound admissible intervals.
inline std::vector<AdmissibleInterval> admissible_intervals(const std::vector<CyclicPoint>& clean) {
    std::vector<AdmissibleInterval> out;
    for (std::size_t i = 0; i < clean.size(); ++i) {
        CyclicPoint a = clean[i], b = clean[(i + 1) % clean.size()];
        double len = ccw_offset(a.value(), b.value());
        if (len > 0.0 && len < kPi) out.emplace_back(a, b);
    }
    return out;
}

struct MuBounds {
    CyclicPoint mu_minus, mu_plus;
};

// mu_-(p) = inf Y+(p), mu_+(p) = sup Y+(p) over (p, Tp); at a clean endpoint a
// the lower bound uses TF0(a), at a clean endpoint b the upper bound uses F0(b).
inline MuBounds mu_bounds(const LineSystem& sys, const AdmissibleInterval& I, CyclicPoint p) {
    const auto& tol = sys.tolerances();
    const double eps = membership_eps(tol);
    double cp = I.coord(p);
    if (cp > I.length() + eps && cp < kTwoPi - eps)
        throw Error(ErrorKind::PreconditionFailed, "p outside [a, b]");
    CircularSet F = sys.contact(p);
    CircularArc base = f0_component(F, p, tol);
    bool clean = projective_equal(F, CircularSet({base}, F.eps_group()), eps);
    CircularSet Y = y_set(F, p, tol);
    CircularArc window(p, kPi);
    bool at_a = same_point(p, I.a(), eps), at_b = same_point(p, I.b(), eps);
    MuBounds mb;
    if (!Y.empty()) {
        mb.mu_minus = extremum_in_interval(Y, window, Extremum::Inf, WindowBounds::Closed);
        mb.mu_plus = extremum_in_interval(Y, window, Extremum::Sup, WindowBounds::Closed);
    }
    if (clean && at_a) {
        CircularSet tb({base.antipode()}, F.eps_group());
        mb.mu_minus = extremum_in_interval(tb, window, Extremum::Inf, WindowBounds::Closed);
        if (Y.empty()) mb.mu_plus = extremum_in_interval(tb, window, Extremum::Sup, WindowBounds::Closed);
        return mb;
    }
    if (clean && at_b) {
        CircularSet b0({base}, F.eps_group());
        mb.mu_plus = extremum_in_interval(b0, window, Extremum::Sup, WindowBounds::Closed);
        if (Y.empty()) mb.mu_minus = extremum_in_interval(b0, window, Extremum::Inf, WindowBounds::Closed);
        return mb;
    }
    if (Y.empty()) throw Error(ErrorKind::EmptyY, "Y+(p) is empty at p = " + std::to_string(p.value()));
    return mb;
}

// p in (a, b) with mu_-(p) <= q <= mu_+(p), found as inf {x : mu_+(x) <= q}.
inline CyclicPoint intermediate_point(const LineSystem& sys, const AdmissibleInterval& I, CyclicPoint q) {
    const double eps = membership_eps(sys.tolerances());
    double lo_bound = I.coord(mu_bounds(sys, I, I.b()).mu_plus);
    double hi_bound = I.coord(mu_bounds(sys, I, I.a()).mu_minus);
    double cq = I.coord(q);
    if (!(lo_bound < hi_bound) || !(cq > lo_bound && cq < hi_bound))
        throw Error(ErrorKind::PreconditionFailed, "q outside the window (mu_+(b), mu_-(a))");
    auto below = [&](double x) { return I.coord(mu_bounds(sys, I, I.at(x)).mu_plus) <= cq; };
    double lo = 0.0, hi = I.length();
    for (int it = 0; it < 60 && hi - lo > 1e-15; ++it) {
        double mid = 0.5 * (lo + hi);
        if (below(mid))
            hi = mid;
        else
            lo = mid;
    }
    for (double x : {hi, lo, 0.5 * (lo + hi)}) {
        if (x <= 0.0 || x >= I.length()) continue;
        MuBounds mb = mu_bounds(sys, I, I.at(x));
        if (I.coord(mb.mu_minus) <= cq + eps && cq <= I.coord(mb.mu_plus) + eps) return I.at(x);
    }
    throw Error(ErrorKind::NoConvergence, "intermediate value not attained within tolerance");
}

struct AxiomResult {
    std::string axiom;
    bool pass = true;
    std::vector<double> witness;  // offending points, empty on success
    std::string detail;
    long checked = 0;             // number of instances examined
};

struct AxiomReport {
    std::vector<AxiomResult> results;

    bool all_pass() const {
        for (const auto& r : results)
            if (!r.pass) return false;
        return true;
    }
    const AxiomResult& operator[](const std::string& name) const {
        for (const auto& r : results)
            if (r.axiom == name) return r;
        throw Error(ErrorKind::PreconditionFailed, "unknown axiom " + name);
    }
};

// Extensional check of L1-L7 on a uniform grid. L4 runs over grid pairs and
// their contacts in both cyclic configurations (tuples within the comparison
// tolerance of a boundary are skipped as indeterminate); L6 checks both
// directions at every contact of every grid point; L7 is a spot check along
// dyadic refinement sequences.
inline AxiomReport check_axioms(const LineSystem& sys, int grid_size = 256) {
    const auto& tol = sys.tolerances();
    const double eps = membership_eps(tol);
    const double same = 1e-6;  // set comparison tolerance
    const std::size_t n = grid_size;
    std::vector<CyclicPoint> P(n);
    for (std::size_t j = 0; j < n; ++j) P[j] = CyclicPoint(kTwoPi * j / n);
    auto F = parallel_map(n, [&](std::size_t j) { return sys.contact(P[j]); });

    AxiomReport rep;
    auto fail = [](AxiomResult& r, std::vector<double> w, std::string d) {
        if (r.pass) {
            r.witness = std::move(w);
            r.detail = std::move(d);
        }
        r.pass = false;
    };

    AxiomResult l1, l2, l3, l4, l5, l6, l7;
    l1.axiom = "L1", l2.axiom = "L2", l3.axiom = "L3", l4.axiom = "L4";
    l5.axiom = "L5", l6.axiom = "L6", l7.axiom = "L7";
    std::vector<int> clean(n, 0);
    for (std::size_t j = 0; j < n; ++j) {
        ++l1.checked;
        ++l2.checked;
        ++l3.checked;
        if (!F[j].contains(P[j], eps)) {
            fail(l1, {P[j].value()}, "p not in F(p)");
            continue;
        }
        if (F[j].empty() || F[j].components().front().is_full() || F[j].size() > 1000)
            fail(l2, {P[j].value()}, "F(p) not a proper finite union of arcs");
        if (!approx_equal(F[j], F[j].antipodal_image(), same))
            fail(l3, {P[j].value()}, "F(p) not T-symmetric");
        clean[j] = is_positive_clean(F[j], P[j], tol);
    }
    rep.results.push_back(l1);
    rep.results.push_back(l2);
    rep.results.push_back(l3);
    if (!l1.pass) return rep;

    // L4 in both orientations: p <= q <= p' <= q' <= Tp with p' in F(p), q' in F(q).
    // Besides grid pairs, q is probed at fixed fractions of (p, p').
    auto l4_probe = [&](std::size_t i, const detail::Axis& ax, double cpp, const CircularSet& Fq,
                        CyclicPoint q) {
        ++l4.checked;
        for (double x : Fq.endpoints()) {
            double cqq = ax.coord(CyclicPoint(x));
            if (cqq < cpp + same || cqq > kPi - same) continue;
            if (!approx_equal(F[i], Fq, same))
                fail(l4, {P[i].value(), q.value(), ax.at(cpp).value(), ax.at(cqq).value()},
                     "nested contacts but F(p) != F(q)");
        }
    };
    for (int dir : {1, -1}) {
        for (std::size_t i = 0; i < n; ++i) {
            detail::Axis ax{P[i], dir};
            std::vector<double> pc;
            for (double x : F[i].endpoints()) {
                double c = ax.coord(CyclicPoint(x));
                if (c > same && c <= kPi + same) pc.push_back(c);
            }
            for (std::size_t j = 0; j < n; ++j) {
                double cq = ax.coord(P[j]);
                if (j == i || cq <= 0.0 || cq >= kPi) continue;
                for (double cpp : pc)
                    if (cq < cpp - same) l4_probe(i, ax, cpp, F[j], P[j]);
            }
        }
    }
    {
        struct Off {
            std::size_t i;
            int dir;
            double cpp, cq;
        };
        std::vector<Off> offs;
        for (std::size_t i = 0; i < n; i += std::max<std::size_t>(1, n / 64)) {
            for (int dir : {1, -1}) {
                detail::Axis ax{P[i], dir};
                for (double x : F[i].endpoints()) {
                    double c = ax.coord(CyclicPoint(x));
                    if (c <= same || c >= kPi - same) continue;
                    for (double frac : {0.25, 0.5, 0.75}) offs.push_back({i, dir, c, frac * c});
                }
            }
        }
        auto Foff = parallel_map(offs.size(), [&](std::size_t k) {
            return sys.contact(detail::Axis{P[offs[k].i], offs[k].dir}.at(offs[k].cq));
        });
        for (std::size_t k = 0; k < offs.size(); ++k) {
            detail::Axis ax{P[offs[k].i], offs[k].dir};
            l4_probe(offs[k].i, ax, offs[k].cpp, Foff[k], ax.at(offs[k].cq));
        }
    }
    rep.results.push_back(l4);

    for (std::size_t j = 0; j < n; ++j) {
        if (!clean[j]) continue;
        ++l5.checked;
        CyclicPoint tp = P[j].antipode();
        CircularSet Ft = sys.contact(tp);
        if (is_positive_clean(Ft, tp, tol)) fail(l5, {P[j].value()}, "p and Tp both positive clean");
    }
    rep.results.push_back(l5);

    // L6: for x in F(p), F(x) = F(p) iff x in F0(p).
    struct Probe {
        std::size_t j;
        double x;
        bool in_base;
    };
    std::vector<Probe> probes;
    for (std::size_t j = 0; j < n; ++j) {
        CircularArc base = f0_component(F[j], P[j], tol);
        for (double x : F[j].endpoints())
            probes.push_back({j, x, base.contains(CyclicPoint(x), eps)});
    }
    auto probe_sets = parallel_map(probes.size(), [&](std::size_t k) { return sys.contact(probes[k].x); });
    for (std::size_t k = 0; k < probes.size(); ++k) {
        ++l6.checked;
        bool eq = approx_equal(probe_sets[k], F[probes[k].j], same);
        if (eq != probes[k].in_base)
            fail(l6, {P[probes[k].j].value(), probes[k].x},
                 probes[k].in_base ? "x in F0(p) but F(x) != F(p)" : "x outside F0(p) but F(x) = F(p)");
    }
    rep.results.push_back(l6);

    // L7: contacts of F(p +- h 2^-k) accumulate inside F(p).
    const std::size_t stride = std::max<std::size_t>(1, n / 32);
    std::vector<std::pair<std::size_t, double>> seq;
    for (std::size_t j = 0; j < n; j += stride)
        for (double sgn : {1.0, -1.0}) seq.push_back({j, sgn * (kTwoPi / n) * std::ldexp(1.0, -12)});
    auto nearby = parallel_map(seq.size(), [&](std::size_t k) {
        return sys.contact(P[seq[k].first].shifted(seq[k].second));
    });
    for (std::size_t k = 0; k < seq.size(); ++k) {
        const auto& Fp = F[seq[k].first];
        for (double s : nearby[k].endpoints()) {
            ++l7.checked;
            if (Fp.distance_to(CyclicPoint(s)) > 1e-3)
                fail(l7, {P[seq[k].first].value(), s}, "limit contact outside F(p)");
        }
    }
    rep.results.push_back(l7);
    return rep;
}

}  // namespace curvex
