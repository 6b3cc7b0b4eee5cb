#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "circle_domain.hpp"

namespace curvex::detail {

// Nodes on (0, pi): a uniform grid plus geometric refinements towards both
// ends, where profiles degenerate like u^2 and uniform sampling is too coarse.
inline std::vector<double> profile_nodes(int half_grid) {
    std::vector<double> u;
    u.reserve(half_grid + 100);
    for (int j = 1; j < half_grid; ++j) u.push_back(kPi * j / half_grid);
    double first = kPi / half_grid;
    for (double e = 0.5 * first; e > 1e-13; e *= 0.5) {
        u.push_back(e);
        u.push_back(kPi - e);
    }
    std::sort(u.begin(), u.end());
    return u;
}

struct ProfilePeak {
    double u = 0.0;
    double value = 0.0;
};

struct ProfileSup {
    double sup = 0.0;               // supremum over (0, pi), at least the boundary value 0
    std::vector<ProfilePeak> peaks; // refined interior local maxima
    std::vector<double> contacts;   // peak locations whose residual gap is within eps
    double sampled_max = 0.0;
};

// Supremum of a profile g on (0, pi) with g -> 0 at both ends, given its samples
// v at the nodes. `slope` is g'.
// `residual(u, gap)` converts the gap sup - g(u) into the geometric distance
// used for the contact decision.
template <class Value, class Slope, class Residual>
ProfileSup sup_profile(const std::vector<double>& nodes, const std::vector<double>& v,
                       const Value& value, const Slope& slope, const Residual& residual,
                       double eps_contact) {
    const std::size_t n = nodes.size();
    ProfileSup out;
    out.sampled_max = *std::max_element(v.begin(), v.end());
    out.sup = std::max(0.0, out.sampled_max);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (!(v[i] >= v[i - 1] && v[i] >= v[i + 1])) continue;
        double lo = nodes[i - 1], hi = nodes[i + 1];
        double x = nodes[i], gx = v[i];
        // Bisection on the sign of g' inside the bracket around the sampled peak.
        double slo = slope(lo), shi = slope(hi);
        if (slo >= 0.0 && shi <= 0.0) {
            for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
                double mid = 0.5 * (lo + hi);
                if (slope(mid) > 0.0)
                    lo = mid;
                else
                    hi = mid;
            }
            double cand = 0.5 * (lo + hi);
            double gc = value(cand);
            if (gc >= gx) {
                x = cand;
                gx = gc;
            }
        }
        out.peaks.push_back({x, gx});
        out.sup = std::max(out.sup, gx);
    }
    for (const auto& p : out.peaks)
        if (residual(p.u, out.sup - p.value) <= eps_contact) out.contacts.push_back(p.u);
    return out;
}

}  // namespace curvex::detail
