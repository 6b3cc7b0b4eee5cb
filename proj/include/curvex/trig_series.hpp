#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "circle_domain.hpp"
#include "errors.hpp"

namespace curvex {

enum class Parity { Periodic, Antiperiodic };

inline const char* to_string(Parity p) {
    return p == Parity::Periodic ? "periodic" : "antiperiodic";
}

struct Harmonic {
    int k = 1;
    double a = 0.0;  // coefficient of cos kt
    double b = 0.0;  // coefficient of sin kt

    friend bool operator==(const Harmonic&, const Harmonic&) = default;
};

// Finite trigonometric polynomial c + sum a_k cos kt + b_k sin kt. Antiperiodic
// series (f(t + pi) = -f(t)) carry only odd harmonics and no constant.
class TrigSeries {
public:
    TrigSeries() = default;
    TrigSeries(Parity parity, double constant, std::vector<Harmonic> harmonics)
        : parity_(parity), constant_(constant) {
        std::map<int, Harmonic> merged;
        for (const auto& h : harmonics) {
            if (h.k <= 0) throw Error(ErrorKind::InvalidParity, "harmonic index must be positive");
            auto& m = merged[h.k];
            m.k = h.k;
            m.a += h.a;
            m.b += h.b;
        }
        for (const auto& [k, h] : merged)
            if (h.a != 0.0 || h.b != 0.0) harmonics_.push_back(h);
        if (parity_ == Parity::Antiperiodic) {
            if (constant_ != 0.0)
                throw Error(ErrorKind::InvalidParity, "antiperiodic series has a constant term");
            for (const auto& h : harmonics_)
                if (h.k % 2 == 0)
                    throw Error(ErrorKind::InvalidParity,
                                "antiperiodic series has even harmonic " + std::to_string(h.k));
        }
    }

    static TrigSeries sine(int k, double amplitude = 1.0) {
        return TrigSeries(k % 2 ? Parity::Antiperiodic : Parity::Periodic, 0.0,
                          {{k, 0.0, amplitude}});
    }
    static TrigSeries cosine(int k, double amplitude = 1.0) {
        return TrigSeries(k % 2 ? Parity::Antiperiodic : Parity::Periodic, 0.0,
                          {{k, amplitude, 0.0}});
    }
    static TrigSeries zero(Parity parity) { return TrigSeries(parity, 0.0, {}); }

    Parity parity() const { return parity_; }
    double constant() const { return constant_; }
    const std::vector<Harmonic>& harmonics() const { return harmonics_; }
    int degree() const { return harmonics_.empty() ? 0 : harmonics_.back().k; }
    bool is_zero() const { return constant_ == 0.0 && harmonics_.empty(); }

    double operator()(double t) const { return derivative(t, 0); }

    // Exact term-wise derivative of the given order.
    double derivative(double t, int order) const {
        double sum = order == 0 ? constant_ : 0.0;
        for (const auto& h : harmonics_) {
            double c = std::cos(h.k * t), s = std::sin(h.k * t);
            double scale = std::pow(static_cast<double>(h.k), order);
            // d^n/dt^n of (a cos + b sin) rotates (a, b) by n quarter turns.
            double v = 0.0;
            switch (order % 4) {
                case 0: v = h.a * c + h.b * s; break;
                case 1: v = -h.a * s + h.b * c; break;
                case 2: v = -h.a * c - h.b * s; break;
                case 3: v = h.a * s - h.b * c; break;
            }
            sum += scale * v;
        }
        return sum;
    }

    // Largest coefficient magnitude; a cheap scale for relative thresholds.
    double magnitude() const {
        double m = std::abs(constant_);
        for (const auto& h : harmonics_) m = std::max({m, std::abs(h.a), std::abs(h.b)});
        return m;
    }

    friend TrigSeries operator+(const TrigSeries& x, const TrigSeries& y) {
        auto hs = x.harmonics_;
        hs.insert(hs.end(), y.harmonics_.begin(), y.harmonics_.end());
        Parity p = x.parity_ == y.parity_ ? x.parity_ : Parity::Periodic;
        return TrigSeries(p, x.constant_ + y.constant_, std::move(hs));
    }
    friend TrigSeries operator*(double c, const TrigSeries& x) {
        auto hs = x.harmonics_;
        for (auto& h : hs) {
            h.a *= c;
            h.b *= c;
        }
        return TrigSeries(x.parity_, c * x.constant_, std::move(hs));
    }
    friend TrigSeries operator-(const TrigSeries& x, const TrigSeries& y) { return x + (-1.0) * y; }

    friend bool operator==(const TrigSeries&, const TrigSeries&) = default;

private:
    Parity parity_ = Parity::Periodic;
    double constant_ = 0.0;
    std::vector<Harmonic> harmonics_;
};

inline double eval_derivative(const TrigSeries& s, double t, int order) {
    return s.derivative(t, order);
}

// Three antiperiodic series, the coordinates of F with gamma(t) = [F(t)].
struct VectorSeries {
    TrigSeries x, y, z;

    Eigen::Vector3d operator()(double t) const { return derivative(t, 0); }
    Eigen::Vector3d derivative(double t, int order) const {
        return {x.derivative(t, order), y.derivative(t, order), z.derivative(t, order)};
    }
    // The scalar series c . F.
    TrigSeries dot(const Eigen::Vector3d& c) const { return c.x() * x + c.y() * y + c.z() * z; }
    int degree() const { return std::max({x.degree(), y.degree(), z.degree()}); }

    friend bool operator==(const VectorSeries&, const VectorSeries&) = default;
};

// The plane-curve form (cos t, sin t, g(t)) used throughout the corpus.
inline VectorSeries planar_perturbation(const TrigSeries& g) {
    return {TrigSeries::cosine(1), TrigSeries::sine(1), g};
}

// Multiplier of L_m on the harmonic k (L_m acts diagonally on cos kt, sin kt
// up to the extra D of odd orders).
inline double flex_multiplier(int m, int k) {
    double r = 1.0;
    if (m % 2 == 0) {
        for (int j = 1; j <= m / 2; ++j) r *= static_cast<double>((2 * j - 1) * (2 * j - 1) - k * k);
    } else {
        for (int j = 1; j <= m / 2; ++j) r *= static_cast<double>(j * j - k * k);
    }
    return r;
}

// L_{2n} = (D^2+1)(D^2+9)...(D^2+(2n-1)^2) and L_{2n+1} = D(D^2+1)...(D^2+n^2);
// ker L_m is exactly A_m.
inline TrigSeries apply_flex_operator(const TrigSeries& s, int m) {
    if (m <= 0) throw Error(ErrorKind::PreconditionFailed, "flex operator order must be positive");
    std::vector<Harmonic> out;
    for (const auto& h : s.harmonics()) {
        double mult = flex_multiplier(m, h.k);
        if (mult == 0.0) continue;
        if (m % 2 == 0) {
            out.push_back({h.k, mult * h.a, mult * h.b});
        } else {
            // D maps a cos kt + b sin kt to k b cos kt - k a sin kt.
            out.push_back({h.k, mult * h.k * h.b, -mult * h.k * h.a});
        }
    }
    double c = 0.0;
    if (m % 2 == 0) c = flex_multiplier(m, 0) * s.constant();
    return TrigSeries(s.parity(), c, std::move(out));
}

// Basis of A_m: odd harmonics up to 2n-1 for m = 2n, and 1, cos jt, sin jt for
// j <= n when m = 2n+1.
inline std::vector<Harmonic> am_basis(int m) {
    std::vector<Harmonic> basis;
    if (m % 2 == 0) {
        for (int j = 1; j <= m / 2; ++j) {
            basis.push_back({2 * j - 1, 1.0, 0.0});
            basis.push_back({2 * j - 1, 0.0, 1.0});
        }
    } else {
        basis.push_back({0, 1.0, 0.0});
        for (int j = 1; j <= m / 2; ++j) {
            basis.push_back({j, 1.0, 0.0});
            basis.push_back({j, 0.0, 1.0});
        }
    }
    return basis;
}

// The member of A_m matching s to order m-1 at p.
inline TrigSeries osculating_in_Am(const TrigSeries& s, double p, int m) {
    if (m <= 0 || m > 15) throw Error(ErrorKind::PreconditionFailed, "osculation order must be in 1..15");
    if (m == 2) {
        double f = s(p), df = s.derivative(p, 1);
        return TrigSeries(Parity::Antiperiodic, 0.0,
                          {{1, f * std::cos(p) - df * std::sin(p), f * std::sin(p) + df * std::cos(p)}});
    }
    auto basis = am_basis(m);
    Eigen::MatrixXd W(m, m);
    Eigen::VectorXd rhs(m);
    for (int r = 0; r < m; ++r) {
        rhs(r) = s.derivative(p, r);
        for (int c = 0; c < m; ++c) {
            const auto& b = basis[c];
            if (b.k == 0) {
                W(r, c) = r == 0 ? 1.0 : 0.0;
            } else {
                W(r, c) = TrigSeries(Parity::Periodic, 0.0, {b}).derivative(p, r);
            }
        }
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(W);
    if (!lu.isInvertible() || lu.rcond() < 1e-14)
        throw Error(ErrorKind::SingularSystem, "Wronskian of the A_m basis is singular");
    Eigen::VectorXd coef = lu.solve(rhs);
    double constant = 0.0;
    std::vector<Harmonic> hs;
    for (int c = 0; c < m; ++c) {
        const auto& b = basis[c];
        if (b.k == 0)
            constant = coef(c);
        else
            hs.push_back({b.k, b.a * coef(c), b.b * coef(c)});
    }
    Parity parity = m % 2 == 0 ? Parity::Antiperiodic : Parity::Periodic;
    return TrigSeries(parity, constant, std::move(hs));
}

// Drops every harmonic beyond the N-th retained group: k <= N for periodic
// series, odd k <= 2N-1 for antiperiodic ones.
inline TrigSeries truncate(const TrigSeries& s, int N) {
    if (N <= 0) throw Error(ErrorKind::PreconditionFailed, "truncation index must be positive");
    int kmax = s.parity() == Parity::Antiperiodic ? 2 * N - 1 : N;
    std::vector<Harmonic> hs;
    for (const auto& h : s.harmonics())
        if (h.k <= kmax) hs.push_back(h);
    return TrigSeries(s.parity(), s.constant(), std::move(hs));
}

inline VectorSeries truncate(const VectorSeries& v, int N) {
    return {truncate(v.x, N), truncate(v.y, N), truncate(v.z, N)};
}

enum class Direction { NegToPos, PosToNeg, None };

inline const char* to_string(Direction d) {
    switch (d) {
        case Direction::NegToPos: return "neg-to-pos";
        case Direction::PosToNeg: return "pos-to-neg";
        case Direction::None: return "none";
    }
    return "none";
}

struct SignChange {
    double root = 0.0;
    Direction direction = Direction::None;
};

enum class Domain { FullPeriod, HalfPeriod };

// Bisection on a bracketing interval until |f| <= eps or the bracket is exhausted.
template <class Fn>
double bisect_root(const Fn& f, double lo, double hi, double flo, double eps) {
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        double fm = f(mid);
        if (std::abs(fm) <= eps && hi - lo < 1e-9) return mid;
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Zeros of a smooth function on [0, L): sign changes refined by bisection,
// plus tangential zeros (local minima of |f| below eps) with direction None.
template <class Fn>
std::vector<SignChange> isolate_sign_changes(const Fn& f, double L, int n_scan, double eps) {
    std::vector<double> t(n_scan + 2), v(n_scan + 2);
    const double h = L / n_scan;
    double vmax = 0.0;
    for (int j = -1; j <= n_scan; ++j) {
        t[j + 1] = j * h;
        v[j + 1] = f(j * h);
        vmax = std::max(vmax, std::abs(v[j + 1]));
    }
    if (vmax < eps) throw Error(ErrorKind::IdenticallyZero, "function vanishes on the sample grid");
    auto sgn = [](double x) { return (x > 0.0) - (x < 0.0); };
    std::vector<SignChange> out;
    for (int j = 0; j < n_scan; ++j) {
        const int i = j + 1;
        if (v[i] == 0.0) {
            int sl = sgn(v[i - 1]), sr = sgn(v[i + 1]);
            if (sl != 0 && sr != 0 && sl != sr)
                out.push_back({t[i], sl < 0 ? Direction::NegToPos : Direction::PosToNeg});
            else
                out.push_back({t[i], Direction::None});
            continue;
        }
        if (v[i + 1] != 0.0 && sgn(v[i]) != sgn(v[i + 1])) {
            double r = bisect_root(f, t[i], t[i + 1], v[i], eps);
            out.push_back({r, v[i] < 0.0 ? Direction::NegToPos : Direction::PosToNeg});
            continue;
        }
        // Tangential zero: |f| has a local minimum at a grid point without a flip.
        if (v[i - 1] != 0.0 && sgn(v[i - 1]) == sgn(v[i]) && sgn(v[i]) == sgn(v[i + 1]) &&
            std::abs(v[i]) <= std::abs(v[i - 1]) && std::abs(v[i]) <= std::abs(v[i + 1])) {
            double lo = t[i - 1], hi = t[i + 1];
            const double g = 0.5 * (std::sqrt(5.0) - 1.0);
            double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
            double f1 = std::abs(f(x1)), f2 = std::abs(f(x2));
            for (int it = 0; it < 100 && hi - lo > 1e-15; ++it) {
                if (f1 < f2) {
                    hi = x2; x2 = x1; f2 = f1; x1 = hi - g * (hi - lo); f1 = std::abs(f(x1));
                } else {
                    lo = x1; x1 = x2; f1 = f2; x2 = lo + g * (hi - lo); f2 = std::abs(f(x2));
                }
            }
            double x = 0.5 * (lo + hi);
            if (std::abs(f(x)) <= eps * std::max(1.0, vmax) && x >= 0.0 && x < L)
                out.push_back({x, Direction::None});
        }
    }
    std::sort(out.begin(), out.end(),
              [](const SignChange& a, const SignChange& b) { return a.root < b.root; });
    return out;
}

inline std::vector<SignChange> isolate_sign_changes(const TrigSeries& s, Domain domain,
                                                    int n_scan = 4096,
                                                    double eps = Tolerances{}.root) {
    if (s.is_zero()) throw Error(ErrorKind::IdenticallyZero, "zero series");
    double L = domain == Domain::FullPeriod ? kTwoPi : kPi;
    int n = domain == Domain::FullPeriod ? n_scan : n_scan / 2;
    return isolate_sign_changes([&](double t) { return s(t); }, L, std::max(n, 16), eps);
}

inline std::vector<SignChange> transversal_only(std::vector<SignChange> v) {
    v.erase(std::remove_if(v.begin(), v.end(),
                           [](const SignChange& c) { return c.direction == Direction::None; }),
            v.end());
    return v;
}

// Remainder D(u) = S(a+u) - S(a) cos u - S'(a) sin u of the A_2 osculation of
// S at a, evaluated without cancellation near u = 0 (and near u = pi for
// antiperiodic S) through the product formulas
//   cos ku - cos u = -2 sin((k+1)u/2) sin((k-1)u/2),
//   sin ku - k sin u = -4 sin(u/2) sum_{j<k} sin((j+1)u/2) sin(ju/2).
class OsculationRemainder {
public:
    OsculationRemainder(const TrigSeries& s, double a) : parity_(s.parity()), base_(a) {
        const double c0 = s.constant();
        constant_ = c0;
        for (const auto& h : s.harmonics()) {
            double c = std::cos(h.k * a), sn = std::sin(h.k * a);
            // S(a+u) = sum A_k cos ku + B_k sin ku.
            terms_.push_back({h.k, h.a * c + h.b * sn, h.b * c - h.a * sn});
        }
        series_ = s;
    }

    double base() const { return base_; }
    const TrigSeries& series() const { return series_; }

    double value(double u) const {
        if (parity_ == Parity::Antiperiodic) {
            double v = std::remainder(u, kPi);  // |v| <= pi/2
            double q = std::round((u - v) / kPi);
            double sign = std::fmod(std::abs(q), 2.0) == 1.0 ? -1.0 : 1.0;
            return sign * raw_value(v);
        }
        return raw_value(std::remainder(u, kTwoPi));
    }

    double derivative(double u) const {
        if (parity_ == Parity::Antiperiodic) {
            double v = std::remainder(u, kPi);
            double q = std::round((u - v) / kPi);
            double sign = std::fmod(std::abs(q), 2.0) == 1.0 ? -1.0 : 1.0;
            return sign * raw_derivative(v);
        }
        return raw_derivative(std::remainder(u, kTwoPi));
    }

    // D''(u) = S''(a+u) + S(a) cos u + S'(a) sin u; no cancellation issue away from 0.
    double second_derivative(double u) const {
        return series_.derivative(base_ + u, 2) + s0() * std::cos(u) + s1() * std::sin(u);
    }

    // Q(u) = D(u)/sin^2 u, the normalized osculation gap, and its u-derivative.
    double q(double u) const {
        double s = std::sin(u);
        return value(u) / (s * s);
    }
    double dq(double u) const {
        double s = std::sin(u), c = std::cos(u);
        return (derivative(u) * s - 2.0 * value(u) * c) / (s * s * s);
    }

    // Limit of Q at u -> 0: (S''(a) + S(a))/2.
    double q_at_zero() const { return 0.5 * (series_.derivative(base_, 2) + series_(base_)); }

private:
    struct Term {
        int k;
        double A, B;
    };

    double s0() const {
        double v = constant_;
        for (const auto& t : terms_) v += t.A;
        return v;
    }
    double s1() const {
        double v = 0.0;
        for (const auto& t : terms_) v += t.k * t.B;
        return v;
    }

    static double cos_gap(int k, double u) {  // cos ku - cos u
        return -2.0 * std::sin(0.5 * (k + 1) * u) * std::sin(0.5 * (k - 1) * u);
    }
    static double sin_gap(int k, double u) {  // sin ku - k sin u
        double acc = 0.0;
        for (int j = 1; j < k; ++j) acc += std::sin(0.5 * (j + 1) * u) * std::sin(0.5 * j * u);
        return -4.0 * std::sin(0.5 * u) * acc;
    }

    // D(u) = c (1 - cos u) + sum A_k (cos ku - cos u) + B_k (sin ku - k sin u).
    double raw_value(double u) const {
        double v = constant_ * 2.0 * std::sin(0.5 * u) * std::sin(0.5 * u);
        for (const auto& t : terms_) v += t.A * cos_gap(t.k, u) + t.B * sin_gap(t.k, u);
        return v;
    }
    // D'(u) = c sin u + sum A_k (sin u - k sin ku) + B_k k (cos ku - cos u), with
    // sin u - k sin ku = -k (sin ku - k sin u) - (k^2 - 1) sin u.
    double raw_derivative(double u) const {
        double v = constant_ * std::sin(u);
        for (const auto& t : terms_) {
            double sg = -t.k * sin_gap(t.k, u) - (t.k * t.k - 1.0) * std::sin(u);
            v += t.A * sg + t.B * t.k * cos_gap(t.k, u);
        }
        return v;
    }

    Parity parity_;
    double base_;
    double constant_ = 0.0;
    std::vector<Term> terms_;
    TrigSeries series_;
};

}  // namespace curvex
