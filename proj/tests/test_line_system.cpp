#include <gtest/gtest.h>

#include "curvex/constant_width.hpp"
#include "curvex/line_system.hpp"

using namespace curvex;

namespace {

const ProjectiveCurve& sphere_i3() {
    static ProjectiveCurve c(planar_perturbation(TrigSeries::sine(3, 0.1)));
    return c;
}
const ProjectiveCurve& sphere_i5() {
    static ProjectiveCurve c(planar_perturbation(TrigSeries::sine(3, 0.05) + TrigSeries::sine(5, 0.05)));
    return c;
}
const SupportFunction& width_sin3() {
    static SupportFunction sf(20.0, TrigSeries::sine(3));
    return sf;
}
const SupportFunction& width_i5() {
    static SupportFunction sf(40.0, TrigSeries::sine(3) + TrigSeries::sine(5, 0.5));
    return sf;
}

template <class Fn>
ErrorKind kind_of(Fn&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "expected an exception";
    return ErrorKind::ParseError;
}

// First contact of F(p) in (p, Tp) outside F0(p).
CyclicPoint next_contact(const LineSystem& sys, CyclicPoint p) {
    auto F = sys.contact(p);
    auto base = f0(sys, p);
    double best = kPi;
    for (double x : F.endpoints()) {
        double c = ccw_offset(p.value(), x);
        if (c > ccw_offset(p.value(), base.end().value()) + 1e-6 && c < kPi - 1e-6) best = std::min(best, c);
    }
    return p.shifted(best);
}

bool in_pi_interval(double x, double p, double q) {
    // x in pi([p, q]) for the counterclockwise arc p -> q.
    const double eps = 1e-6;
    for (double y : {x, x + kPi}) {
        double c = ccw_offset(p, y);
        if (c <= ccw_offset(p, q) + eps || c >= kTwoPi - eps) return true;
    }
    return false;
}

}  // namespace

TEST(F0, ComponentContainingP) {
    Tolerances tol;
    CircularSet clean({CircularArc(CyclicPoint(1.0), 0.0), CircularArc(CyclicPoint(1.0 + kPi), 0.0)});
    auto a = f0_component(clean, CyclicPoint(1.0), tol);
    EXPECT_TRUE(a.is_point());
    EXPECT_NEAR(a.start().value(), 1.0, 1e-15);
    CircularSet three({CircularArc(CyclicPoint(0.5), 0.0), CircularArc(CyclicPoint(2.0), 0.0),
                       CircularArc(CyclicPoint(0.5 + kPi), 0.0)});
    EXPECT_NEAR(f0_component(three, CyclicPoint(2.0), tol).start().value(), 2.0, 1e-15);
    CircularSet arc({CircularArc(CyclicPoint(1.0), 0.3)});
    auto whole = f0_component(arc, CyclicPoint(1.1), tol);
    EXPECT_NEAR(whole.start().value(), 1.0, 1e-15);
    EXPECT_NEAR(whole.length(), 0.3, 1e-15);
    EXPECT_EQ(kind_of([&] { f0_component(arc, CyclicPoint(3.0), tol); }), ErrorKind::AxiomViolation);
}

TEST(Clean, WidthSin3) {
    auto sys = make_line_system(width_sin3());
    EXPECT_TRUE(is_positive_clean(sys, CyclicPoint(0.0)));
    EXPECT_FALSE(is_positive_clean(sys, CyclicPoint(kPi)));
    EXPECT_FALSE(is_positive_clean(sys, CyclicPoint(0.5)));
    EXPECT_GE(sys.contact(0.5).size(), 3u);
}

TEST(Clean, AntipodeReversesSign) {
    auto sys = make_line_system(sphere_i5());
    auto clean = positive_clean_points(sys);
    ASSERT_EQ(clean.size(), 5u);
    for (auto p : clean) EXPECT_FALSE(is_positive_clean(sys, p.antipode()));
}

TEST(FindClean, SphereSin3) {
    auto sys = make_line_system(sphere_i3());
    const double analytic[3] = {0.0, 2 * kPi / 3, 4 * kPi / 3};
    for (double p0 : {0.3, 1.2, 2.5, 3.6, 5.0}) {
        CyclicPoint p(p0);
        CyclicPoint q = next_contact(sys, p);
        auto res = find_clean_inflection(sys, p, q);
        EXPECT_TRUE(cyclic_between(p, res.point, q));
        EXPECT_TRUE(is_positive_clean(sys, res.point));
        double err = 10.0;
        for (double a : analytic) err = std::min(err, circle_distance(res.point.value(), a));
        EXPECT_LE(err, 1e-9) << p0;
        // pi(F(s)) lies in pi((p, q)).
        for (double x : res.contact.endpoints()) EXPECT_TRUE(in_pi_interval(x, p.value(), q.value()));
        // Interval lengths at least halve.
        for (std::size_t i = 1; i < res.lengths.size(); ++i)
            EXPECT_LE(res.lengths[i], 0.5 * res.lengths[i - 1] + 1e-12);
    }
}

TEST(FindClean, WidthStraddlingPiOver3) {
    auto sys = make_line_system(width_sin3());
    // Clean points of the width system on S^1 are 0, 2pi/3, 4pi/3; pi/3 is their antipode mod pi.
    CyclicPoint p(kPi / 3 + kPi - 0.4);
    auto res = find_clean_inflection(sys, p, next_contact(sys, p));
    EXPECT_LE(projective_distance(res.point.value(), kPi / 3), 1e-9);
}

TEST(FindClean, Preconditions) {
    auto sys = make_line_system(sphere_i3());
    CyclicPoint p(0.3);
    EXPECT_EQ(kind_of([&] { find_clean_inflection(sys, p, p); }), ErrorKind::PreconditionFailed);
    EXPECT_EQ(kind_of([&] { find_clean_inflection(sys, p, CyclicPoint(0.9)); }), ErrorKind::PreconditionFailed);
    EXPECT_EQ(kind_of([&] { find_clean_inflection(sys, p, p.antipode()); }), ErrorKind::PreconditionFailed);
}

TEST(IntermediateContacts, StayInsideTheInterval) {
    auto sys = make_line_system(sphere_i5());
    for (double p0 : {0.5, 1.9, 3.1}) {
        CyclicPoint p(p0);
        CyclicPoint q = next_contact(sys, p);
        auto base = f0(sys, p);
        double len = ccw_offset(p0, q.value());
        for (double s : {0.2, 0.5, 0.8}) {
            CyclicPoint r = p.shifted(s * len);
            if (base.contains(r, 1e-6)) continue;
            for (double x : sys.contact(r).endpoints()) EXPECT_TRUE(in_pi_interval(x, p0, q.value())) << p0 << " " << s;
        }
    }
}

TEST(ThreeClean, SphereSin3) {
    auto sys = make_line_system(sphere_i3());
    auto r = three_clean_inflections(sys);
    EXPECT_TRUE(r.placement_ok);
    EXPECT_TRUE(r.disjoint_ok);
    for (double a : {0.0, 2 * kPi / 3, 4 * kPi / 3}) {
        double err = 10.0;
        for (auto p : r.points) err = std::min(err, circle_distance(p.value(), a));
        EXPECT_LE(err, 1e-9) << a;
    }
    for (auto p : r.points) {
        EXPECT_TRUE(is_positive_clean(sys, p));
        EXPECT_FALSE(is_positive_clean(sys, p.antipode()));
    }
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) EXPECT_TRUE(sets_disjoint(r.contacts[i], r.contacts[j], 1e-6));
}

TEST(ThreeClean, WidthSin3ModPi) {
    auto r = three_clean_inflections(make_line_system(width_sin3()));
    EXPECT_TRUE(r.placement_ok && r.disjoint_ok);
    for (double a : {0.0, kPi / 3, 2 * kPi / 3}) {
        double err = 10.0;
        for (auto p : r.points) err = std::min(err, projective_distance(p.value(), a));
        EXPECT_LE(err, 1e-9) << a;
    }
}

TEST(AdmissibleInterval, Construction) {
    EXPECT_EQ(kind_of([] { AdmissibleInterval(CyclicPoint(0.0), CyclicPoint(4.0)); }), ErrorKind::PreconditionFailed);
    AdmissibleInterval I(CyclicPoint(6.0), CyclicPoint(0.5));
    EXPECT_NEAR(I.length(), 0.5 + kTwoPi - 6.0, 1e-14);
}

class MuTest : public ::testing::TestWithParam<int> {};

TEST_P(MuTest, RangeMonotonicityAndIntermediateValue) {
    LineSystem sys = GetParam() == 0 ? make_line_system(sphere_i5()) : make_line_system(width_i5());
    const double eps = Tolerances{}.group;
    auto intervals = admissible_intervals(positive_clean_points(sys));
    ASSERT_FALSE(intervals.empty());
    for (const auto& I : intervals) {
        const double L = I.length();
        const double Ta = kPi;  // coordinate of Ta measured from a
        double prev_minus = 1e9, prev_plus = 1e9;
        for (int j = 0; j <= 128; ++j) {
            auto m = mu_bounds(sys, I, I.at(L * j / 128.0));
            double lo = I.coord(m.mu_minus), hi = I.coord(m.mu_plus);
            // Range: b <= mu_+ < Ta and b < mu_- <= Ta (closed at the clean endpoints).
            EXPECT_GE(hi, L - eps);
            EXPECT_LE(lo, Ta + eps);
            EXPECT_LE(lo, hi + eps);
            EXPECT_LE(lo, prev_minus + eps);
            EXPECT_LE(hi, prev_plus + eps);
            if (j > 0 && j < 128) {
                EXPECT_LE(lo, prev_plus + eps);  // mu_-(q) <= mu_+(p) for p < q
            }
            prev_minus = lo;
            prev_plus = hi;
        }
        // Semicontinuity at b: mu_+(x) -> mu_+(b) as x -> b-.
        double at_b = I.coord(mu_bounds(sys, I, I.b()).mu_plus);
        double near_b = I.coord(mu_bounds(sys, I, I.at(L * (1.0 - 1e-6))).mu_plus);
        EXPECT_NEAR(near_b, at_b, 1e-4);
        // Intermediate value over the window (mu_+(b), mu_-(a)).
        double w0 = at_b, w1 = I.coord(mu_bounds(sys, I, I.a()).mu_minus);
        ASSERT_LT(w0, w1);
        for (int k = 1; k <= 16; ++k) {
            CyclicPoint q = I.at(w0 + (w1 - w0) * k / 17.0);
            CyclicPoint p = intermediate_point(sys, I, q);
            EXPECT_TRUE(cyclic_between(I.a(), p, I.b()));
            auto m = mu_bounds(sys, I, p);
            EXPECT_LE(I.coord(m.mu_minus), I.coord(q) + 10 * eps);
            EXPECT_LE(I.coord(q), I.coord(m.mu_plus) + 10 * eps);
        }
        // q just above mu_+(b) gives p close to b.
        CyclicPoint pe = intermediate_point(sys, I, I.at(w0 + 1e-6));
        EXPECT_LE(L - I.coord(pe), 1e-3);
        // Outside the window the construction does not apply.
        EXPECT_EQ(kind_of([&] { intermediate_point(sys, I, I.at(0.5 * w0)); }), ErrorKind::PreconditionFailed);
    }
}

INSTANTIATE_TEST_SUITE_P(Corpus, MuTest, ::testing::Values(0, 1));

TEST(MuBounds, PointOutsideInterval) {
    auto sys = make_line_system(sphere_i5());
    auto I = admissible_intervals(positive_clean_points(sys)).front();
    EXPECT_EQ(kind_of([&] { mu_bounds(sys, I, I.at(I.length() + 0.5)); }), ErrorKind::PreconditionFailed);
}

TEST(Axioms, SphereSin3) {
    auto rep = check_axioms(make_line_system(sphere_i3()), 256);
    ASSERT_EQ(rep.results.size(), 7u);
    for (const auto& r : rep.results) {
        EXPECT_TRUE(r.pass) << r.axiom << ": " << r.detail;
        EXPECT_TRUE(r.witness.empty());
        EXPECT_GT(r.checked, 0) << r.axiom;
    }
    EXPECT_TRUE(rep.all_pass());
}

TEST(Axioms, WidthSin3PlusQuarterSin5) {
    SupportFunction sf(40.0, TrigSeries::sine(3) + TrigSeries::sine(5, 0.25));
    auto rep = check_axioms(make_line_system(sf), 256);
    for (const auto& r : rep.results) EXPECT_TRUE(r.pass) << r.axiom << ": " << r.detail;
}

TEST(Axioms, CorruptedSymmetryFailsL3) {
    auto c = std::make_shared<ProjectiveCurve>(sphere_i3());
    LineSystem broken(
        [c](double p) {
            // Keep only the contacts in [p, p + pi): drops T-symmetry.
            auto F = c->contact_set(p);
            std::vector<CircularArc> kept;
            for (const auto& a : F.components())
                if (ccw_offset(p, a.start().value()) < kPi - 1e-6) kept.push_back(a);
            return CircularSet(kept);
        },
        {}, c->tolerances());
    auto rep = check_axioms(broken, 256);
    EXPECT_FALSE(rep["L3"].pass);
    EXPECT_FALSE(rep["L3"].witness.empty());
    EXPECT_FALSE(rep.all_pass());
    EXPECT_TRUE(rep["L1"].pass);
}

TEST(Axioms, MissingBasePointFailsL1) {
    LineSystem broken([](double p) { return CircularSet::from_points({p + 0.5, p + 0.5 + kPi}); });
    auto rep = check_axioms(broken, 256);
    EXPECT_FALSE(rep["L1"].pass);
    EXPECT_FALSE(rep["L1"].witness.empty());
}
