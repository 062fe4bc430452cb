#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "milnor/certfind.hpp"
#include "support/random_poly.hpp"
#include "support/sturm.hpp"

using namespace milnor;

namespace {

Polynomial P1(const std::string& s) { return parse_polynomial(s, {"x"}); }
Polynomial P2(const std::string& s) { return parse_polynomial(s, {"x", "y"}); }

// Real roots of x^3 + p x + q with three real roots (trigonometric form).
std::vector<double> depressed_cubic_roots(double p, double q) {
    double r = 2 * std::sqrt(-p / 3);
    double phi = std::acos(3 * q / (p * r));
    std::vector<double> roots;
    for (int k = 0; k < 3; ++k) roots.push_back(r * std::cos((phi - 2 * M_PI * k) / 3) / 1.0);
    std::sort(roots.begin(), roots.end());
    return roots;
}

DeformationFamily family2(const std::string& base, const std::string& def) {
    return make_family(P2(base), parse_polynomial(def, {"x", "y", "t"}), {"x", "y"}, {"t"});
}

bool contains(const CertifiedCriticalPoint& p, std::span<const double> x) {
    for (std::size_t i = 0; i < x.size(); ++i)
        if (!p.enclosure[i].contains(x[i])) return false;
    return true;
}

// Random inputs may have non-isolated critical sets; give up on those early.
CertConfig small_budget() {
    CertConfig cfg;
    cfg.max_boxes = 20'000;
    return cfg;
}

}  // namespace

TEST(FindCriticalPoints, WeakQuarticSinglePoint) {
    auto pts = find_critical_points(P1("x^4 - 1/10*x"), 1.0);
    ASSERT_EQ(pts.size(), 1u);
    double root = std::cbrt(0.1 / 4);  // f' = 4x^3 - t
    EXPECT_NEAR(pts[0].midpoint[0], root, 1e-8);
    EXPECT_NEAR(pts[0].midpoint[0], 0.29240, 1e-5);
    EXPECT_EQ(pts[0].certificate, Certificate::NewtonUnique);
    EXPECT_EQ(morse_index(P1("x^4 - 1/10*x"), pts[0]), 0);
}

TEST(FindCriticalPoints, StrongQuarticThreePoints) {
    Polynomial f = P1("x^4 - 2*x^2 + x");
    auto pts = find_morse_points(f, 2.0);
    ASSERT_EQ(pts.size(), 3u);
    // f'/4 = x^3 - x + 1/4
    auto roots = depressed_cubic_roots(-1.0, 0.25);
    for (double r : roots) {
        std::vector<double> x{r};
        EXPECT_EQ(std::count_if(pts.begin(), pts.end(), [&](const auto& p) { return contains(p, x); }), 1)
            << "root " << r;
    }
    // Sorted by value: the two minima come first, then the local maximum.
    EXPECT_EQ(*pts[0].index, 0);
    EXPECT_EQ(*pts[1].index, 0);
    EXPECT_EQ(*pts[2].index, 1);
}

TEST(FindCriticalPoints, QuadraticAtOrigin) {
    auto pts = find_critical_points(P2("x^2 + y^2"), 1.0);
    ASSERT_EQ(pts.size(), 1u);
    EXPECT_TRUE(pts[0].value.contains(0.0));
    EXPECT_LT(pts[0].value.width(), 1e-12);
    std::vector<double> o{0, 0};
    EXPECT_TRUE(contains(pts[0], o));
}

TEST(FindCriticalPoints, RootsOutsideBallAreDropped) {
    // Critical points at x = 0, +-sqrt(2)/2 ~ 0.707; ball of radius 1/2 keeps only 0.
    auto pts = find_critical_points(P1("x^4 - x^2"), 0.5);
    ASSERT_EQ(pts.size(), 1u);
    EXPECT_NEAR(pts[0].midpoint[0], 0.0, 1e-9);
    // Square [-1,1]^2 contains (0.9, 0.9), outside the unit disc.
    auto q = find_critical_points(P2("(x - 9/10)^2 + (y - 9/10)^2"), 1.0);
    EXPECT_TRUE(q.empty());
}

TEST(FindCriticalPoints, SphereStraddleIsAnError) {
    EXPECT_THROW(find_critical_points(P1("(x - 1/2)^2"), 0.5), SphereStraddle);
}

TEST(FindCriticalPoints, ValueCollision) {
    // Symmetric double well: two minima with equal value.
    EXPECT_THROW(find_critical_points(P1("x^4 - x^2"), 1.0), ValueCollision);
}

TEST(FindCriticalPoints, Errors) {
    EXPECT_THROW(find_critical_points(P1("3"), 1.0), Error);
    EXPECT_THROW(find_critical_points(P1("x^2"), 0.0), Error);
}

TEST(MorseIndex, CuspFamilyIndices) {
    // g_t = y^2 - x^3 + t x, t = 1/10: p1 = (sqrt(t/3), 0) has index 1, p2 = -p1 index 0.
    Polynomial g = P2("y^2 - x^3 + 1/10*x");
    auto pts = find_morse_points(g, 1.0);
    ASSERT_EQ(pts.size(), 2u);
    double r = std::sqrt(0.1 / 3);
    std::vector<double> p1{r, 0}, p2{-r, 0};
    for (const auto& p : pts) {
        if (contains(p, p1)) EXPECT_EQ(*p.index, 1);
        else if (contains(p, p2)) EXPECT_EQ(*p.index, 0);
        else ADD_FAILURE() << "unexpected critical point";
    }
}

TEST(MorseIndex, DiagonalForms) {
    auto pts = find_morse_points(P2("x^2 + y^2"), 1.0);
    EXPECT_EQ(*pts[0].index, 0);
    std::vector<std::string> v{"a", "b", "c", "d"};
    auto q = find_morse_points(parse_polynomial("a^2 + b^2 - c^2 - d^2", v), 1.0);
    ASSERT_EQ(q.size(), 1u);
    EXPECT_EQ(*q[0].index, 2);
}

TEST(MorseIndex, OffDiagonalSaddle) {
    auto pts = find_morse_points(P2("x*y"), 1.0);
    ASSERT_EQ(pts.size(), 1u);
    EXPECT_EQ(*pts[0].index, 1);
}

TEST(MorseIndex, DegenerateCubicIsReported) {
    Polynomial f = P1("x^3");
    try {
        find_critical_points(f, 1.0);
        FAIL() << "x^3 has a degenerate critical point";
    } catch (const MaxDepthExceeded& e) {
        EXPECT_THROW(diagnose_residual(f, e.residual()), DegenerateHessian);
    }
    CertifiedCriticalPoint cand;
    cand.enclosure = {Interval(-1e-6, 1e-6)};
    EXPECT_THROW(morse_index(f, cand), DegenerateHessian);
}

TEST(Soundness, EnclosuresRecheck) {
    Polynomial g = P2("y^2 - x^3 + 1/10*x + 1/50*y*x^2");
    auto pts = find_critical_points(g, 1.0);
    ASSERT_FALSE(pts.empty());
    detail::CriticalSystem sys(g);
    for (const auto& p : pts) {
        EXPECT_EQ(p.certificate, Certificate::NewtonUnique);
        EXPECT_TRUE(detail::krawczyk_unique(sys, p.region));
        for (const auto& gi : gradient(g)) EXPECT_TRUE(gi.evaluate(std::span<const Interval>(p.enclosure)).contains_zero());
        EXPECT_TRUE(box_subset(p.enclosure, p.region));
        EXPECT_LT(max_width(p.enclosure), 1e-8 + 1e-12);
    }
}

TEST(Ordering, ValuesStrictlyIncreasingAndDisjoint) {
    std::mt19937_64 rng(5);
    int checked = 0;
    for (int trial = 0; trial < 60; ++trial) {
        Polynomial p = test_support::random_polynomial(rng, 2, 4, 5);
        if (p.degree() < 2) continue;
        std::vector<CertifiedCriticalPoint> pts;
        try {
            pts = find_critical_points(p, 1.0, small_budget());
        } catch (const CertificationError&) {
            continue;
        }
        ++checked;
        for (std::size_t i = 1; i < pts.size(); ++i) {
            EXPECT_LT(pts[i - 1].value.mid(), pts[i].value.mid());
            EXPECT_LT(pts[i - 1].value.hi(), pts[i].value.lo());
        }
    }
    EXPECT_GT(checked, 20);
}

TEST(Completeness, UnivariateMatchesSturmCount) {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> coef(-12, 12), deg(2, 7);
    int checked = 0;
    for (int trial = 0; trial < 300 && checked < 60; ++trial) {
        int d = deg(rng);
        test_support::UPoly f(d + 1);
        for (auto& c : f) c = Rational(coef(rng), 4);
        f[0] = 0;
        if (f.back() == 0) f.back() = 1;
        Polynomial p(1);
        for (int i = 0; i <= d; ++i) p.add_term(Exponent{static_cast<std::uint16_t>(i)}, f[i]);
        auto fp = test_support::derivative(f);
        // Skip inputs with repeated critical points or critical points on the boundary.
        auto chain = test_support::sturm_chain(fp);
        if (chain.back().size() > 1) continue;
        if (test_support::eval(fp, -1) == 0 || test_support::eval(fp, 1) == 0) continue;
        int expected = test_support::count_roots(fp, -1, 1);
        try {
            auto pts = find_critical_points(p, 1.0);
            EXPECT_EQ(static_cast<int>(pts.size()), expected) << p.to_string(std::vector<std::string>{"x"});
            ++checked;
        } catch (const ValueCollision&) {
        } catch (const SphereStraddle&) {
        }
    }
    EXPECT_GE(checked, 40);
}

TEST(Determinism, IdenticalRuns) {
    Polynomial g = P2("x^3 - 3*x*y^2 + 1/7*x + 1/9*y + 1/2*x^2*y");
    auto a = find_morse_points(g, 1.0);
    auto b = find_morse_points(g, 1.0);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].enclosure, b[i].enclosure);
        EXPECT_EQ(a[i].value, b[i].value);
        EXPECT_EQ(a[i].index, b[i].index);
    }
}

TEST(IndexBounds, AlwaysWithinRange) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 40; ++trial) {
        std::size_t n = 1 + trial % 3;
        Polynomial p = test_support::random_polynomial(rng, n, 4, 6);
        if (p.degree() < 2) continue;
        try {
            for (const auto& pt : find_morse_points(p, 1.0, small_budget())) {
                EXPECT_GE(*pt.index, 0);
                EXPECT_LE(*pt.index, static_cast<int>(n));
            }
        } catch (const CertificationError&) {
        }
    }
}

TEST(SelectScales, SaddleGenericFamily) {
    auto fam = make_generic_linear_family(P2("x*y"), 1, {"x", "y"});
    auto s = select_scales(fam);
    EXPECT_TRUE(s.validation.all_ok());
    ASSERT_EQ(s.points.size(), 1u);
    EXPECT_GT(s.points[0].value.lo(), -s.eta);
    EXPECT_LT(s.points[0].value.hi(), s.eta);
}

TEST(SelectScales, CuspPlusFamilyKeepsBothPoints) {
    auto fam = family2("y^2 - x^3", "y^2 - x^3 + t*x");
    auto s = select_scales(fam);
    ASSERT_EQ(s.points.size(), 2u);
    double r = std::sqrt(s.t[0].get_d() / 3);
    EXPECT_LT(r, s.delta);
    for (const auto& p : s.points) EXPECT_NEAR(std::abs(p.midpoint[0]), r, 1e-8);
}

TEST(SelectScales, Transversality) {
    auto fam = make_generic_linear_family(P2("x*y"), 1, {"x", "y"});
    ScaleOverrides ov;
    ov.check_transversality = true;
    auto s = select_scales(fam, ov);
    EXPECT_EQ(s.validation.sphere_transversality_ok, true);
    // The hyperbola xy = 1/2 is tangent to the unit circle at (1/sqrt2, 1/sqrt2).
    EXPECT_FALSE(check_sphere_transversality(P2("x*y"), 1.0, 0.5));
}

TEST(SelectScales, RejectsConstantGerm) {
    DeformationFamily fam;
    fam.base = P2("0");
    fam.deformation = parse_polynomial("t*x", {"x", "y", "t"});
    fam.space_vars = {"x", "y"};
    fam.param_vars = {"t"};
    EXPECT_THROW(select_scales(fam), Error);
}

TEST(SelectScales, NonIsolatedSingularityExhaustsBudget) {
    auto fam = family2("x^2", "x^2 + t*y");  // singular along the y-axis
    ScaleOverrides ov;
    ov.budget = 3;
    EXPECT_THROW(select_scales(fam, ov), BudgetExhausted);
}

TEST(StabilityScan, CuspFamilies) {
    auto plus = family2("y^2 - x^3", "y^2 - x^3 + t*x");
    auto sp = select_scales(plus);
    auto scan = stability_scan(plus, sp, 5);
    EXPECT_TRUE(scan.stable);
    for (const auto& s : scan.samples) {
        EXPECT_EQ(s.m, 2u);
        EXPECT_NE(s.t, 0);
    }

    auto minus = family2("y^2 - x^3", "y^2 - x^3 - t*x");
    auto sm = select_scales(minus);
    auto scan2 = stability_scan(minus, sm, 5);
    EXPECT_TRUE(scan2.stable);
    for (const auto& s : scan2.samples) EXPECT_EQ(s.m, 0u);
    EXPECT_THROW(stability_scan(minus, sm, 1), Error);
}
