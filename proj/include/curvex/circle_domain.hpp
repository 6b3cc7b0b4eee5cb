#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "errors.hpp"

namespace curvex {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Canonical representative of an angle in [0, 2pi).
inline double wrap_angle(double x) {
    double r = std::fmod(x, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    if (r >= kTwoPi) r = 0.0;
    return r;
}

// Canonical representative of a point of R/piZ in [0, pi).
inline double wrap_half(double x) {
    double r = std::fmod(x, kPi);
    if (r < 0.0) r += kPi;
    if (r >= kPi) r = 0.0;
    return r;
}

// Counterclockwise distance from `from` to `to`, in [0, 2pi).
inline double ccw_offset(double from, double to) { return wrap_angle(to - from); }

// Shortest distance between two circle points, in [0, pi].
inline double circle_distance(double a, double b) {
    double d = ccw_offset(a, b);
    return std::min(d, kTwoPi - d);
}

// Shortest distance between two points of P^1 = R/piZ, in [0, pi/2].
inline double projective_distance(double a, double b) {
    double d = wrap_half(b - a);
    return std::min(d, kPi - d);
}

class CyclicPoint {
public:
    CyclicPoint() = default;
    explicit CyclicPoint(double angle) : value_(wrap_angle(angle)) {}

    double value() const { return value_; }
    CyclicPoint antipode() const { return CyclicPoint(value_ + kPi); }
    CyclicPoint shifted(double delta) const { return CyclicPoint(value_ + delta); }

    friend bool operator==(const CyclicPoint&, const CyclicPoint&) = default;

private:
    double value_ = 0.0;
};

inline bool same_point(CyclicPoint a, CyclicPoint b, double eps = Tolerances{}.angle) {
    return circle_distance(a.value(), b.value()) <= eps;
}

// True iff b lies in the open counterclockwise arc (a, c). For a == c the arc is
// the whole circle minus a.
inline bool cyclic_between(CyclicPoint a, CyclicPoint b, CyclicPoint c) {
    double ab = ccw_offset(a.value(), b.value());
    double ac = ccw_offset(a.value(), c.value());
    if (ac == 0.0) ac = kTwoPi;
    return ab > 0.0 && ab < ac;
}

inline bool cyclic_between(double a, double b, double c) {
    return cyclic_between(CyclicPoint(a), CyclicPoint(b), CyclicPoint(c));
}

// Counterclockwise arc from start of the given length; length 0 is a point and
// length 2pi the full circle.
class CircularArc {
public:
    CircularArc() = default;
    CircularArc(CyclicPoint start, double length)
        : start_(start), length_(std::clamp(length, 0.0, kTwoPi)) {}

    static CircularArc from_endpoints(CyclicPoint start, CyclicPoint end) {
        return CircularArc(start, ccw_offset(start.value(), end.value()));
    }
    static CircularArc point(double t) { return CircularArc(CyclicPoint(t), 0.0); }
    static CircularArc full() { return CircularArc(CyclicPoint(0.0), kTwoPi); }

    CyclicPoint start() const { return start_; }
    CyclicPoint end() const { return start_.shifted(length_); }
    double length() const { return length_; }
    bool is_point() const { return length_ == 0.0; }
    bool is_full() const { return length_ >= kTwoPi; }
    CyclicPoint midpoint() const { return start_.shifted(0.5 * length_); }

    // Closed-arc membership with tolerance eps at both ends.
    bool contains(CyclicPoint x, double eps = Tolerances{}.angle) const {
        if (is_full()) return true;
        double off = ccw_offset(start_.value(), x.value());
        return off <= length_ + eps || off >= kTwoPi - eps;
    }

    CircularArc antipode() const { return CircularArc(start_.antipode(), length_); }

    friend bool operator==(const CircularArc&, const CircularArc&) = default;

private:
    CyclicPoint start_{};
    double length_ = 0.0;
};

enum class Extremum { Sup, Inf };

// Closed subset of the circle as finitely many disjoint closed arcs. The
// components are maximal: arcs closer than the grouping tolerance are merged.
class CircularSet {
public:
    CircularSet() = default;
    explicit CircularSet(std::vector<CircularArc> arcs, double eps_group = Tolerances{}.group)
        : eps_group_(eps_group) {
        normalize(std::move(arcs));
    }

    static CircularSet from_points(const std::vector<double>& points,
                                   double eps_group = Tolerances{}.group) {
        std::vector<CircularArc> arcs;
        arcs.reserve(points.size());
        for (double t : points) arcs.push_back(CircularArc::point(t));
        return CircularSet(std::move(arcs), eps_group);
    }

    bool empty() const { return arcs_.empty(); }
    std::size_t size() const { return arcs_.size(); }
    double eps_group() const { return eps_group_; }

    // Maximal arcs in cyclic order, starting from the one containing or following 0.
    const std::vector<CircularArc>& components() const { return arcs_; }

    bool contains(CyclicPoint x, double eps) const {
        return std::any_of(arcs_.begin(), arcs_.end(),
                           [&](const CircularArc& a) { return a.contains(x, eps); });
    }
    bool contains(CyclicPoint x) const { return contains(x, eps_group_); }
    bool contains(double x) const { return contains(CyclicPoint(x)); }

    // Index of the component containing x (within eps), if any.
    std::optional<std::size_t> component_of(CyclicPoint x, double eps) const {
        for (std::size_t i = 0; i < arcs_.size(); ++i)
            if (arcs_[i].contains(x, eps)) return i;
        return std::nullopt;
    }
    std::optional<std::size_t> component_of(CyclicPoint x) const {
        return component_of(x, eps_group_);
    }

    // Distance from x to the set (infinity for the empty set).
    double distance_to(CyclicPoint x) const {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& a : arcs_) {
            if (a.contains(x, 0.0)) return 0.0;
            best = std::min({best, circle_distance(x.value(), a.start().value()),
                             circle_distance(x.value(), a.end().value())});
        }
        return best;
    }

    CircularSet antipodal_image() const {
        std::vector<CircularArc> arcs;
        arcs.reserve(arcs_.size());
        for (const auto& a : arcs_) arcs.push_back(a.antipode());
        return CircularSet(std::move(arcs), eps_group_);
    }

    CircularSet united(const CircularSet& other) const {
        std::vector<CircularArc> arcs = arcs_;
        arcs.insert(arcs.end(), other.arcs_.begin(), other.arcs_.end());
        return CircularSet(std::move(arcs), std::max(eps_group_, other.eps_group_));
    }

    // Components of this set that do not meet `other` (within eps).
    CircularSet without_components_meeting(const CircularSet& other, double eps) const {
        std::vector<CircularArc> kept;
        for (const auto& a : arcs_) {
            bool meets = false;
            for (const auto& b : other.arcs_)
                if (arcs_meet(a, b, eps)) meets = true;
            if (!meets) kept.push_back(a);
        }
        return CircularSet(std::move(kept), eps_group_);
    }

    // All component endpoints, as the finite set of representative points.
    std::vector<double> endpoints() const {
        std::vector<double> out;
        for (const auto& a : arcs_) {
            out.push_back(a.start().value());
            if (!a.is_point()) out.push_back(a.end().value());
        }
        return out;
    }

    static bool arcs_meet(const CircularArc& a, const CircularArc& b, double eps) {
        return a.contains(b.start(), eps) || a.contains(b.end(), eps) ||
               b.contains(a.start(), eps) || b.contains(a.end(), eps);
    }

private:
    void normalize(std::vector<CircularArc> arcs) {
        arcs_.clear();
        if (arcs.empty()) return;
        struct Lin {
            double lo, hi;
        };
        std::vector<Lin> lin;
        for (const auto& a : arcs) {
            if (a.is_full()) {
                arcs_ = {CircularArc::full()};
                return;
            }
            lin.push_back({a.start().value(), a.start().value() + a.length()});
        }
        std::sort(lin.begin(), lin.end(), [](const Lin& x, const Lin& y) { return x.lo < y.lo; });
        std::vector<Lin> merged{lin.front()};
        for (std::size_t i = 1; i < lin.size(); ++i) {
            if (lin[i].lo <= merged.back().hi + eps_group_)
                merged.back().hi = std::max(merged.back().hi, lin[i].hi);
            else
                merged.push_back(lin[i]);
        }
        // The last arc may reach past 2pi onto the first ones.
        while (merged.size() > 1 && merged.back().hi + eps_group_ >= merged.front().lo + kTwoPi) {
            merged.back().hi = std::max(merged.back().hi, merged.front().hi + kTwoPi);
            merged.erase(merged.begin());
        }
        for (const auto& m : merged) {
            if (m.hi - m.lo >= kTwoPi - eps_group_) {
                arcs_ = {CircularArc::full()};
                return;
            }
        }
        if (merged.size() == 1 && merged.front().hi - merged.front().lo >= kTwoPi - eps_group_) {
            arcs_ = {CircularArc::full()};
            return;
        }
        for (const auto& m : merged) arcs_.emplace_back(CyclicPoint(m.lo), m.hi - m.lo);
        // Cyclic order starting from the component containing or following 0.
        std::sort(arcs_.begin(), arcs_.end(), [](const CircularArc& x, const CircularArc& y) {
            return x.start().value() < y.start().value();
        });
        const auto& last = arcs_.back();
        if (last.start().value() + last.length() >= kTwoPi)
            std::rotate(arcs_.begin(), arcs_.end() - 1, arcs_.end());
    }

    std::vector<CircularArc> arcs_;
    double eps_group_ = Tolerances{}.group;
};

// Whether two sets agree up to tolerance: every endpoint of each lies in the other.
inline bool approx_equal(const CircularSet& a, const CircularSet& b, double eps) {
    for (double x : a.endpoints())
        if (!b.contains(CyclicPoint(x), eps)) return false;
    for (double x : b.endpoints())
        if (!a.contains(CyclicPoint(x), eps)) return false;
    return a.empty() == b.empty();
}

// pi(A) = pi(B) for the projection S^1 -> P^1, i.e. A u TA = B u TB.
inline bool projective_equal(const CircularSet& a, const CircularSet& b, double eps) {
    return approx_equal(a.united(a.antipodal_image()), b.united(b.antipodal_image()), eps);
}

enum class WindowBounds { Open, Closed };

// Sup or inf of s intersected with the window, in the linear order the window
// inherits from its start point.
inline CyclicPoint extremum_in_interval(const CircularSet& s, const CircularArc& window,
                                        Extremum which,
                                        WindowBounds bounds = WindowBounds::Open,
                                        double eps = Tolerances{}.angle) {
    const double ws = window.start().value();
    const double wl = window.length();
    bool found = false;
    double best = 0.0;
    auto consider = [&](double lo, double hi) {
        double clo = std::max(lo, 0.0);
        double chi = std::min(hi, wl);
        if (bounds == WindowBounds::Open) {
            if (hi <= eps || lo >= wl - eps || clo > chi) return;
        } else if (clo > chi + eps) {
            return;
        }
        double v = which == Extremum::Sup ? chi : clo;
        if (!found || (which == Extremum::Sup ? v > best : v < best)) best = v;
        found = true;
    };
    for (const auto& a : s.components()) {
        if (a.is_full()) {
            consider(0.0, wl);
            continue;
        }
        double lo = ccw_offset(ws, a.start().value());
        double hi = lo + a.length();
        consider(lo, hi);
        consider(lo - kTwoPi, hi - kTwoPi);
    }
    if (!found) throw Error(ErrorKind::EmptyIntersection, "set does not meet the window");
    return CyclicPoint(ws + best);
}

}  // namespace curvex
