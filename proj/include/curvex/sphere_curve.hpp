#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "circle_domain.hpp"
#include "errors.hpp"
#include "profile.hpp"
#include "trig_series.hpp"

namespace curvex {

// Oriented great circle {u : n.u = 0}; H+ is the closed hemisphere n.u >= 0.
struct GreatCircle {
    Eigen::Vector3d normal = Eigen::Vector3d::UnitZ();

    double side(const Eigen::Vector3d& u) const { return normal.dot(u); }
};

// Orthonormal frame at a curve point: p = lift, tau = unit tangent, nu = p x tau.
// Great circles through +-p are parametrized by their normal
// n(theta) = cos(theta) nu - sin(theta) tau; theta = 0 is the tangent circle.
struct PointFrame {
    Eigen::Vector3d p, tau, nu;

    Eigen::Vector3d normal(double theta) const {
        return std::cos(theta) * nu - std::sin(theta) * tau;
    }
};

// Admissible normals through +-gamma(t): theta in (theta_lo, theta_hi), where
// n(theta).gamma(s) < 0 for all s in (t, t + pi).
struct BarnerSet {
    PointFrame frame;
    double theta_lo = 0.0;
    double theta_hi = 0.0;

    bool empty() const { return theta_hi <= theta_lo; }
    double width() const { return std::max(0.0, theta_hi - theta_lo); }
    std::optional<CircularArc> arc() const {
        if (empty()) return std::nullopt;
        return CircularArc(CyclicPoint(theta_lo), theta_hi - theta_lo);
    }
    Eigen::Vector3d mid_normal() const { return frame.normal(0.5 * (theta_lo + theta_hi)); }
};

struct ContactData {
    GreatCircle circle;        // C_p
    CircularSet contact;       // F(p)
    CyclicPoint base;          // p
    double theta = 0.0;        // rotation angle of C_p away from the tangent circle
    bool tangent = false;      // C_p is the tangent great circle at p
    double side_violation = 0; // max of n.gamma over the sampled open arc (p, Tp)
};

struct Inflection {
    CircularArc arc;
    bool positive = true;
};

// gamma(t) = [F(t)] with F antiperiodic; the sphere lift is F/|F|.
class ProjectiveCurve {
public:
    explicit ProjectiveCurve(VectorSeries F, int grid = 4096, Tolerances tol = {})
        : F_(std::move(F)), grid_(grid), tol_(tol) {
        for (const auto* s : {&F_.x, &F_.y, &F_.z})
            if (s->parity() != Parity::Antiperiodic)
                throw Error(ErrorKind::InvalidParity, "curve coordinates must be antiperiodic");
        for (int j = 0; j < grid_; ++j) {
            double t = kTwoPi * j / grid_;
            if (F_(t).norm() < tol_.norm)
                throw Error(ErrorKind::DegeneratePoint, "|F| vanishes near t = " + std::to_string(t));
        }
        nodes_ = detail::profile_nodes(grid_ / 2);
    }

    const VectorSeries& series() const { return F_; }
    int grid() const { return grid_; }
    const Tolerances& tolerances() const { return tol_; }

    Eigen::Vector3d lift(double t) const {
        Eigen::Vector3d v = F_(t);
        double n = v.norm();
        if (n < tol_.norm) throw Error(ErrorKind::DegeneratePoint, "|F(t)| below threshold");
        return v / n;
    }

    // Unit tangent of the lift at t.
    Eigen::Vector3d lift_tangent(double t) const { return frame(t).tau; }

    PointFrame frame(double t) const {
        Eigen::Vector3d f = F_(t), df = F_.derivative(t, 1);
        PointFrame fr;
        fr.p = f.normalized();
        Eigen::Vector3d tau = df - df.dot(fr.p) * fr.p;
        if (tau.norm() < tol_.norm) throw Error(ErrorKind::DegeneratePoint, "singular lift");
        fr.tau = tau.normalized();
        fr.nu = fr.p.cross(fr.tau);
        return fr;
    }

    // w(t) = det(F, F', F''); its sign changes are the true inflections.
    double inflection_indicator(double t) const {
        Eigen::Matrix3d m;
        m.col(0) = F_(t);
        m.col(1) = F_.derivative(t, 1);
        m.col(2) = F_.derivative(t, 2);
        return m.determinant();
    }

    // The indicator as an explicit (periodic in general) series is not needed;
    // callers sample it through this callable view.
    auto indicator() const {
        return [this](double t) { return inflection_indicator(t); };
    }

    BarnerSet barner_arc(double t) const { return profile_at(t).barner; }

    ContactData limiting_circle(double t) const {
        auto prof = profile_at(t);
        if (prof.barner.empty())
            throw Error(ErrorKind::NotAntiConvex, "no admissible great circle at t = " + std::to_string(t));
        ContactData cd;
        cd.base = CyclicPoint(t);
        cd.theta = prof.barner.theta_lo;
        cd.circle.normal = prof.barner.frame.normal(cd.theta);
        cd.tangent = std::abs(cd.theta) <= tol_.tangent;
        std::vector<double> pts{t, t + kPi};
        for (double u : prof.sup.contacts) {
            pts.push_back(t + u);
            pts.push_back(t + u + kPi);
        }
        cd.contact = CircularSet::from_points(pts, tol_.group);
        double viol = -1.0;
        for (std::size_t i = 0; i < nodes_.size(); i += 7)
            viol = std::max(viol, cd.circle.side(lift(t + nodes_[i])));
        cd.side_violation = viol;
        return cd;
    }

    CircularSet contact_set(double t) const { return limiting_circle(t).contact; }

    // Sign-changing zeros of w on P^1 = [0, pi); positive when the tangent great
    // circle crosses the lift from right to left, i.e. w goes from + to -.
    std::vector<Inflection> true_inflections() const {
        auto w = indicator();
        double scale = 0.0;
        for (int j = 0; j < 256; ++j) scale = std::max(scale, std::abs(w(kPi * j / 256)));
        if (scale < 1e3 * tol_.root * std::max(1.0, F_(0.0).squaredNorm()))
            throw Error(ErrorKind::LineCurve, "inflection indicator vanishes identically");
        auto zeros = transversal_only(isolate_sign_changes(w, kPi, grid_ / 2, tol_.root));
        std::vector<Inflection> out;
        for (const auto& z : zeros)
            out.push_back({CircularArc::point(z.root), z.direction == Direction::PosToNeg});
        return out;
    }

    int inflection_count() const { return static_cast<int>(true_inflections().size()); }

    bool is_anti_convex() const {
        for (int j = 0; j < grid_ / 2; j += std::max(1, grid_ / 512))
            if (barner_arc(kPi * j / (grid_ / 2)).empty()) return false;
        return true;
    }

private:
    struct Profile {
        BarnerSet barner;
        detail::ProfileSup sup;
    };

    // Rotation-angle profile lambda(u) = atan2(nu.F(t+u), tau.F(t+u)) on (0, pi).
    Profile profile_at(double t) const {
        Profile out;
        out.barner.frame = frame(t);
        const auto& fr = out.barner.frame;
        OsculationRemainder ynu(F_.dot(fr.nu), t);
        const TrigSeries xs = F_.dot(fr.tau);
        const std::size_t n = nodes_.size();
        std::vector<double> lam(n);
        double prev = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double y = ynu.value(nodes_[i]), x = xs(t + nodes_[i]);
            double a = std::atan2(y, x);
            if (i > 0) a += kTwoPi * std::round((prev - a) / kTwoPi);
            lam[i] = a;
            prev = a;
        }
        // Unwrapped samples are looked up by node index; refinement between
        // nodes stays on the branch of the bracketing samples.
        auto value_at = [&](double u) {
            auto it = std::lower_bound(nodes_.begin(), nodes_.end(), u);
            std::size_t i = std::min<std::size_t>(it - nodes_.begin(), n - 1);
            double a = std::atan2(ynu.value(u), xs(t + u));
            return a + kTwoPi * std::round((lam[i] - a) / kTwoPi);
        };
        auto slope = [&](double u) {
            double y = ynu.value(u), x = xs(t + u);
            double dy = ynu.derivative(u), dx = xs.derivative(t + u, 1);
            return (dy * x - y * dx) / (x * x + y * y);
        };
        auto residual = [&](double u, double gap) {
            double y = ynu.value(u), x = xs(t + u);
            return std::hypot(x, y) * std::sin(std::min(gap, kPi / 2)) / F_(t + u).norm();
        };
        out.sup = detail::sup_profile(nodes_, lam, value_at, slope, residual, tol_.contact);
        double lo = *std::min_element(lam.begin(), lam.end());
        out.barner.theta_lo = out.sup.sup;
        out.barner.theta_hi = std::min(0.0, lo) + kPi;
        return out;
    }

    VectorSeries F_;
    int grid_;
    Tolerances tol_;
    std::vector<double> nodes_;
};

}  // namespace curvex
