#include <gtest/gtest.h>

#include <cmath>

#include "milnor/morsify.hpp"

using namespace milnor;

namespace {

Rational Q(long a, long b = 1) {
    Rational q(a, b);
    q.canonicalize();
    return q;
}

// Independent staircase count: monomials x^a y^b outside (x^p, y^q).
int box_staircase(int p, int q) {
    int count = 0;
    for (int a = 0; a < 16; ++a)
        for (int b = 0; b < 16; ++b)
            if (a < p && b < q) ++count;
    return count;
}

}  // namespace

TEST(LinearFamily, QuarticWithNegativeDirection) {
    Polynomial f = parse_polynomial("x^4", {"x"});
    std::vector<Rational> a{-1};
    auto fam = make_linear_family(f, a, {"x"});
    EXPECT_EQ(fam.deformation, parse_polynomial("x^4 - t*x", {"x", "t"}));
    EXPECT_EQ(fam.param_dim(), 1u);
    EXPECT_EQ(fam.fibre_dim(), 0u);
}

TEST(LinearFamily, CuspWithNegativeDirection) {
    Polynomial f = parse_polynomial("y^2 - x^3", {"x", "y"});
    std::vector<Rational> a{-1, 0};
    auto fam = make_linear_family(f, a, {"x", "y"});
    EXPECT_EQ(fam.deformation, parse_polynomial("y^2 - x^3 - t*x", {"x", "y", "t"}));
}

TEST(GenericFamily, DeterministicUnitDirection) {
    Polynomial f = parse_polynomial("x^2 + y^2 - z^2", {"x", "y", "z"});
    auto a = make_generic_linear_family(f, 42, {"x", "y", "z"});
    auto b = make_generic_linear_family(f, 42, {"x", "y", "z"});
    auto c = make_generic_linear_family(f, 43, {"x", "y", "z"});
    ASSERT_TRUE(a.direction && b.direction && c.direction);
    EXPECT_EQ(*a.direction, *b.direction);
    EXPECT_EQ(a.deformation, b.deformation);
    EXPECT_NE(*a.direction, *c.direction);
}

TEST(GenericFamily, UnitNormProperty) {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        std::size_t d = 1 + seed % 4;
        auto v = unit_sphere_direction(d, seed);
        double s = 0;
        for (double x : v) s += x * x;
        EXPECT_NEAR(std::sqrt(s), 1.0, 1e-12);
    }
}

TEST(GenericFamily, RejectsConstantAndLinear) {
    EXPECT_THROW(make_generic_linear_family(parse_polynomial("0", {"x"}), 1, {"x"}), Error);
    EXPECT_THROW(make_generic_linear_family(parse_polynomial("3*x + y", {"x", "y"}), 1, {"x", "y"}), Error);
    EXPECT_THROW(make_generic_linear_family(parse_polynomial("x^2 + x", {"x"}), 1, {"x"}), Error);
}

TEST(Specialize, Examples) {
    auto weak = make_family(parse_polynomial("x^4", {"x"}), parse_polynomial("x^4 - t*x", {"x", "t"}), {"x"},
                            {"t"});
    EXPECT_EQ(specialize(weak, Q(0)), parse_polynomial("x^4", {"x"}));

    auto strong = make_family(parse_polynomial("x^4", {"x"}),
                              parse_polynomial("x^4 - 4*t*x^2 + 4*t^2*x", {"x", "t"}), {"x"}, {"t"});
    EXPECT_EQ(specialize(strong, Q(1, 2)), parse_polynomial("x^4 - 2*x^2 + x", {"x"}));

    auto cusp = make_family(parse_polynomial("y^2 - x^3", {"x", "y"}),
                            parse_polynomial("y^2 - x^3 - t*x", {"x", "y", "t"}), {"x", "y"}, {"t"});
    EXPECT_EQ(specialize(cusp, Q(3, 10)), parse_polynomial("y^2 - x^3 - 3/10*x", {"x", "y"}));

    std::vector<Rational> two{1, 2};
    EXPECT_THROW(specialize(cusp, std::span<const Rational>(two)), DimensionMismatch);
}

TEST(Family, InvariantsEnforced) {
    // F(x, 0) != f
    EXPECT_THROW(make_family(parse_polynomial("x^4", {"x"}), parse_polynomial("x^4 + x - t", {"x", "t"}), {"x"},
                             {"t"}),
                 Error);
    // f(0) != 0
    EXPECT_THROW(make_family(parse_polynomial("x^2 + 1", {"x"}), parse_polynomial("x^2 + 1 + t*x", {"x", "t"}),
                             {"x"}, {"t"}),
                 Error);
}

TEST(Family, SpecializeAtZeroIsBaseForConstructedFamilies) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto fam = make_generic_linear_family(parse_polynomial("x^3*y - y^3 + x^2", {"x", "y"}), seed, {"x", "y"});
        EXPECT_EQ(specialize(fam, Q(0)), fam.base);
    }
}

TEST(Strength, ClassifyExamples) {
    auto weak = make_family(parse_polynomial("x^4", {"x"}), parse_polynomial("x^4 - t*x", {"x", "t"}), {"x"},
                            {"t"}, std::nullopt, "A3");
    auto v = classify_strength(weak, 1);
    EXPECT_EQ(v.kind, Strength::Weak);
    EXPECT_EQ(v.mu, 3);

    auto strong = make_family(parse_polynomial("x^4", {"x"}),
                              parse_polynomial("x^4 - 4*t*x^2 + 4*t^2*x", {"x", "t"}), {"x"}, {"t"}, 3);
    EXPECT_EQ(classify_strength(strong, 3).kind, Strength::Strong);

    // No explicit mu and a non-monomial gradient ideal: unknown.
    auto nomu = make_family(parse_polynomial("x^3 + x*y^2", {"x", "y"}),
                            parse_polynomial("x^3 + x*y^2 + t*y", {"x", "y", "t"}), {"x", "y"}, {"t"});
    auto u = classify_strength(nomu, 2);
    EXPECT_EQ(u.kind, Strength::Unknown);
    EXPECT_FALSE(u.mu.has_value());

    EXPECT_THROW(classify_strength(weak, 4), Error);
}

TEST(Strength, MonotoneInObservedCount) {
    auto fam = make_family(parse_polynomial("x^6", {"x"}), parse_polynomial("x^6 - t*x", {"x", "t"}), {"x"},
                           {"t"});
    Strength prev = Strength::Weak;
    for (std::size_t m = 0; m <= 5; ++m) {
        Strength s = classify_strength(fam, m).kind;
        EXPECT_FALSE(prev == Strength::Strong && s == Strength::Weak);
        prev = s;
    }
    EXPECT_EQ(prev, Strength::Strong);
}

TEST(Ade, Lookup) {
    EXPECT_EQ(ade_milnor_number("A3"), 3);
    EXPECT_EQ(ade_milnor_number("A_1"), 1);
    EXPECT_EQ(ade_milnor_number("D4"), 4);
    EXPECT_EQ(ade_milnor_number("E6"), 6);
    EXPECT_EQ(ade_milnor_number("E7"), 7);
    EXPECT_EQ(ade_milnor_number("E8"), 8);
    EXPECT_THROW(ade_milnor_number("A0"), Error);
    EXPECT_THROW(ade_milnor_number("D3"), Error);
    EXPECT_THROW(ade_milnor_number("E9"), Error);
    EXPECT_THROW(ade_milnor_number("Q7"), Error);
    EXPECT_THROW(ade_milnor_number(""), Error);
}

TEST(Ade, E8MatchesStaircaseOfGradientIdeal) {
    // x^3 + y^5 has gradient ideal (3x^2, 5y^4).
    Polynomial e8 = parse_polynomial("x^3 + y^5", {"x", "y"});
    EXPECT_EQ(box_staircase(2, 4), 8);
    EXPECT_EQ(staircase_milnor_number(e8), box_staircase(2, 4));
    EXPECT_EQ(ade_milnor_number("E8"), box_staircase(2, 4));
}

TEST(Staircase, SuiteGerms) {
    EXPECT_EQ(staircase_milnor_number(parse_polynomial("x^4", {"x"})), 3);
    EXPECT_EQ(staircase_milnor_number(parse_polynomial("x*y", {"x", "y"})), 1);
    EXPECT_EQ(staircase_milnor_number(parse_polynomial("y^2 - x^3", {"x", "y"})), 2);
    EXPECT_EQ(staircase_milnor_number(parse_polynomial("a^2 + b^2 - c^2 - d^2", {"a", "b", "c", "d"})), 1);
    // x^2 y: gradient (2xy, x^2) has no pure power of y, so the quotient is infinite.
    EXPECT_FALSE(staircase_milnor_number(parse_polynomial("x^2*y", {"x", "y"})).has_value());
}
