#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "circle_domain.hpp"
#include "parallel.hpp"
#include "trig_series.hpp"

namespace curvex {

// A solution of S_a(a+u) = S_a'(a+u) = 0 where S_a is the A_2-osculation gap at a
// (the tangent line at a is tangent again at b = a + u).
struct TangencyPair {
    double a = 0.0;
    double u = 0.0;
    double residual = 0.0;      // |D(u)| + |D'(u)|
    double side_a = 0.0;        // Q_a(0+) = L_2 S_a(a)/2: sign of the gap next to a
    double side_b = 0.0;        // D''(u): sign of the gap next to b
    bool accepted = false;      // both local minima or both local maxima
    bool indeterminate = false; // a side sign is below resolution

    double b() const { return a + u; }
};

struct TangencyOptions {
    int grid = 512;
    double u_margin = 0.01;
    double merge = 1e-6;
    double residual = 1e-11;
};

struct TangencySolve {
    std::vector<TangencyPair> pairs;
    int newton_failures = 0;
};

// Solves Q_a(u) = dQ_a/du(u) = 0 on P^1 x (0, pi) for a family a -> S_a of
// antiperiodic series, Q_a(u) = D_a(u)/sin^2 u.
template <class Family>
TangencySolve solve_tangencies(const Family& family, TangencyOptions opt = {}) {
    const int N = opt.grid;
    const double u0 = opt.u_margin, u1 = kPi - opt.u_margin;
    std::vector<double> us(N);
    for (int j = 0; j < N; ++j) us[j] = u0 + (u1 - u0) * j / (N - 1);
    struct Row {
        std::vector<double> q, dq;
    };
    auto rows = parallel_map(N + 1, [&](std::size_t i) {
        double a = kPi * static_cast<double>(i) / N;
        OsculationRemainder rem(family(a), a);
        Row r;
        r.q.resize(N);
        r.dq.resize(N);
        for (int j = 0; j < N; ++j) {
            r.q[j] = rem.q(us[j]);
            r.dq[j] = rem.dq(us[j]);
        }
        return r;
    });
    double sq = 0.0, sdq = 0.0;
    for (const auto& r : rows)
        for (int j = 0; j < N; ++j) {
            sq = std::max(sq, std::abs(r.q[j]));
            sdq = std::max(sdq, std::abs(r.dq[j]));
        }
    sq = std::max(sq, 1e-300);
    sdq = std::max(sdq, 1e-300);
    auto changes = [](double a, double b, double c, double d) {
        double lo = std::min({a, b, c, d}), hi = std::max({a, b, c, d});
        return lo <= 0.0 && hi >= 0.0;
    };
    std::vector<Eigen::Vector2d> seeds;
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j + 1 < N; ++j) {
            const auto &A = rows[i], &B = rows[i + 1];
            if (changes(A.q[j], A.q[j + 1], B.q[j], B.q[j + 1]) &&
                changes(A.dq[j], A.dq[j + 1], B.dq[j], B.dq[j + 1]))
                seeds.emplace_back(kPi * (i + 0.5) / N, 0.5 * (us[j] + us[j + 1]));
        }
    }
    // Residual local minima catch tangential solutions without sign changes.
    for (int i = 1; i < N; ++i) {
        for (int j = 1; j + 1 < N; ++j) {
            auto r = [&](int ii, int jj) {
                return std::abs(rows[ii].q[jj]) / sq + std::abs(rows[ii].dq[jj]) / sdq;
            };
            double c = r(i, j);
            if (c >= 1e-2) continue;
            bool minimum = true;
            for (int di = -1; di <= 1 && minimum; ++di)
                for (int dj = -1; dj <= 1; ++dj)
                    if ((di || dj) && r(i + di, j + dj) < c) {
                        minimum = false;
                        break;
                    }
            if (minimum) seeds.emplace_back(kPi * i / N, us[j]);
        }
    }

    auto residual_vec = [&](double a, double u) {
        OsculationRemainder rem(family(a), a);
        return Eigen::Vector2d(rem.q(u), rem.dq(u));
    };
    struct Outcome {
        bool ok = false;
        TangencyPair pair;
    };
    auto refine = [&](const Eigen::Vector2d& seed) {
        Outcome out;
        Eigen::Vector2d x = seed;
        const double h = 1e-7;
        for (int it = 0; it < 60; ++it) {
            Eigen::Vector2d r = residual_vec(x(0), x(1));
            Eigen::Matrix2d J;
            J.col(0) = (residual_vec(x(0) + h, x(1)) - residual_vec(x(0) - h, x(1))) / (2 * h);
            J.col(1) = (residual_vec(x(0), x(1) + h) - residual_vec(x(0), x(1) - h)) / (2 * h);
            if (std::abs(J.determinant()) < 1e-300) return out;
            Eigen::Vector2d step = J.fullPivLu().solve(r);
            double len = step.norm();
            if (len > 0.05) step *= 0.05 / len;
            x -= step;
            if (x(1) <= 0.5 * u0 || x(1) >= kPi - 0.5 * u0) return out;
            if (step.norm() < 1e-14) break;
        }
        OsculationRemainder rem(family(x(0)), x(0));
        double res = std::abs(rem.value(x(1))) + std::abs(rem.derivative(x(1)));
        double scale = std::max(1.0, family(x(0)).magnitude());
        if (!(res <= opt.residual * scale)) return out;
        out.ok = true;
        auto& p = out.pair;
        p.a = wrap_half(x(0));
        p.u = x(1);
        p.residual = res;
        OsculationRemainder rp(family(p.a), p.a);
        p.side_a = rp.q_at_zero();
        p.side_b = rp.second_derivative(p.u);
        double tiny = 1e-9 * scale;
        p.indeterminate = std::abs(p.side_a) < tiny || std::abs(p.side_b) < tiny;
        p.accepted = !p.indeterminate && (p.side_a > 0.0) == (p.side_b > 0.0);
        return out;
    };
    auto outcomes = parallel_map(seeds.size(), [&](std::size_t k) { return refine(seeds[k]); });
    TangencySolve solve;
    for (const auto& o : outcomes) {
        if (!o.ok) {
            ++solve.newton_failures;
            continue;
        }
        bool dup = false;
        for (const auto& q : solve.pairs)
            if (projective_distance(q.a, o.pair.a) < opt.merge && std::abs(q.u - o.pair.u) < opt.merge)
                dup = true;
        if (!dup) solve.pairs.push_back(o.pair);
    }
    std::sort(solve.pairs.begin(), solve.pairs.end(), [](const TangencyPair& x, const TangencyPair& y) {
        return x.a != y.a ? x.a < y.a : x.u < y.u;
    });
    return solve;
}

// Open interval (start, start + length) of P^1 = R/piZ.
struct ProjectiveInterval {
    double start = 0.0;   // in [0, pi)
    double length = 0.0;  // in (0, pi)

    double end() const { return start + length; }
};

// Laminar relation: disjoint, or the closure of one inside the other.
inline bool independent(const ProjectiveInterval& I, const ProjectiveInterval& J, double eps = 1e-9) {
    double ij = wrap_half(J.start - I.start);  // J's start seen from I's start
    double ji = wrap_half(I.start - J.start);
    bool disjoint = ij >= I.length - eps && ji >= J.length - eps;
    bool j_in_i = ij + J.length <= I.length + eps;
    bool i_in_j = ji + I.length <= J.length + eps;
    return disjoint || j_in_i || i_in_j;
}

// Maximum-cardinality laminar subfamily by exact branch and bound; shorter
// intervals are tried first, so ties resolve towards shorter members.
inline std::vector<std::size_t> maximal_independent_family(const std::vector<ProjectiveInterval>& iv) {
    const std::size_t n = iv.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return iv[x].length < iv[y].length; });
    std::vector<std::vector<char>> ok(n, std::vector<char>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) ok[i][j] = i != j && independent(iv[i], iv[j]);
    std::vector<std::size_t> best, cur;
    auto rec = [&](auto&& self, std::size_t k) -> void {
        if (cur.size() + (n - k) <= best.size()) return;
        if (k == n) {
            best = cur;
            return;
        }
        std::size_t v = order[k];
        bool fits = std::all_of(cur.begin(), cur.end(), [&](std::size_t w) { return ok[v][w]; });
        if (fits) {
            cur.push_back(v);
            self(self, k + 1);
            cur.pop_back();
        }
        self(self, k + 1);
    };
    rec(rec, 0);
    std::sort(best.begin(), best.end());
    return best;
}

// Inclusion-maximal laminar family built greedily from a rotated order.
inline std::vector<std::size_t> greedy_independent_family(const std::vector<ProjectiveInterval>& iv,
                                                          std::size_t rotation) {
    std::vector<std::size_t> out;
    const std::size_t n = iv.size();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t v = (k + rotation) % n;
        if (std::all_of(out.begin(), out.end(), [&](std::size_t w) { return independent(iv[v], iv[w]); }))
            out.push_back(v);
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Number of sign changes around P^1 = [0, pi) of a function that flips sign
// under t -> t + pi, sampled at t_j = j pi/n. Samples of magnitude below `zero`
// are skipped (zero runs merged); the sequence closes with the flipped first sign.
template <class Fn>
int count_sign_changes_antiperiodic(const Fn& f, int n, double zero) {
    std::vector<int> signs;
    for (int j = 0; j < n; ++j) {
        double v = f(kPi * j / n);
        if (std::abs(v) > zero) signs.push_back(v > 0.0 ? 1 : -1);
    }
    if (signs.empty()) return 0;
    int count = 0;
    for (std::size_t j = 1; j < signs.size(); ++j) count += signs[j] != signs[j - 1];
    count += signs.back() != -signs.front();
    return count;
}

}  // namespace curvex
