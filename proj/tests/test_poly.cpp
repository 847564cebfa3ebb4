#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "pcfh/bounds.hpp"
#include "pcfh/critical.hpp"
#include "pcfh/newton.hpp"
#include "pcfh/roots.hpp"
#include "support.hpp"

using namespace pcfh;

namespace {

MonicPoly monic(std::initializer_list<long> lower) {
    std::vector<Rational> c;
    for (long x : lower) c.emplace_back(x);
    return MonicPoly(std::move(c));
}

std::vector<Rational> qs(std::initializer_list<Rational> xs) { return std::vector<Rational>(xs); }

}  // namespace

TEST_CASE("compose_power examples") {
    CHECK(compose_power(monic({-2}), 2) == monic({-2, 0}));
    CHECK(compose_power(monic({-1, 0}), 2) == monic({-1, 0, 0, 0}));
    CHECK(compose_power(monic({1, 3}), 3) == monic({1, 0, 0, 3, 0, 0}));
}

TEST_CASE("compose_power identities") {
    Rng rng(21);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Rational> c;
        for (int i = 0; i < 3; ++i) c.push_back(testing::random_rational(rng, 20, 5));
        MonicPoly g(c);
        CHECK(compose_power(g, 1) == g);
        CHECK(compose_power(compose_power(g, 2), 3) == compose_power(g, 6));
        Rational z = testing::random_rational(rng, 5, 5);
        CHECK(ComposedMap(g, 3)(z) == compose_power(g, 3)(z));
    }
}

TEST_CASE("derivative examples") {
    CHECK(derivative(monic({-2, 0})) == Poly({Rational(0), Rational(2)}));
    CHECK(derivative(monic({-1, 0, 0, 0})) == Poly({Rational(0), Rational(0), Rational(0), Rational(4)}));
    CHECK(derivative(monic({0, -3, 0})) == Poly({Rational(-3), Rational(0), Rational(3)}));
}

TEST_CASE("rational_roots examples") {
    CHECK(rational_roots(Poly({Rational(0), Rational(2)})) == qs({Rational(0)}));
    CHECK(rational_roots(Poly({Rational(-3), Rational(0), Rational(3)})) == qs({Rational(-1), Rational(1)}));
    CHECK(rational_roots(Poly({Rational(-2), Rational(0), Rational(1)})).empty());
    CHECK_THROWS_AS(rational_roots(Poly()), std::invalid_argument);
    auto r = rational_roots(Poly::from_roots(qs({Rational(1, 2), Rational(1, 2), Rational(-3, 7), Rational(0)})));
    CHECK(r == qs({Rational(-3, 7), Rational(0), Rational(1, 2), Rational(1, 2)}));
}

TEST_CASE("newton polygon examples") {
    // z^2 - 1/4 at 2: one segment of slope 1, roots +-1/2 of size log 2.
    auto a = newton_polygon(Poly({Rational(-1, 4), Rational(0), Rational(1)}), 2);
    REQUIRE(a.slopes.size() == 1);
    CHECK(a.slopes[0].slope == 1);
    CHECK(a.slopes[0].multiplicity == 2);
    CHECK(*a.max_slope() == 1);

    // z^2 - 2 at 2: hull (0,1)-(2,0), roots of size 2^(-1/2).
    auto b = newton_polygon(Poly({Rational(-2), Rational(0), Rational(1)}), 2);
    REQUIRE(b.slopes.size() == 1);
    CHECK(b.slopes[0].slope == Rational(-1, 2));
    CHECK(b.slopes[0].multiplicity == 2);

    // z^3 + 5z + 25 at 5: hull (0,2),(1,1),(3,0).
    auto c = newton_polygon(Poly({Rational(25), Rational(5), Rational(0), Rational(1)}), 5);
    REQUIRE(c.slopes.size() == 2);
    CHECK(c.slopes[0].slope == -1);
    CHECK(c.slopes[0].multiplicity == 1);
    CHECK(c.slopes[1].slope == Rational(-1, 2));
    CHECK(c.slopes[1].multiplicity == 2);
    CHECK(*c.max_slope() == Rational(-1, 2));
    CHECK(c.degree() == 3);
}

TEST_CASE("newton polygon of a product is the union of the factors") {
    Rng rng(22);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<Rational> roots;
        int n = static_cast<int>(rng.uniform(1, 5));
        for (int i = 0; i < n; ++i) roots.push_back(testing::random_nonzero_rational(rng, 200, 200));
        const unsigned long p = std::vector<unsigned long>{2, 3, 5, 7}[static_cast<std::size_t>(rng.uniform(0, 3))];
        auto np = newton_polygon(Poly::from_roots(roots), p);
        std::map<Rational, long> from_hull, from_roots;
        for (const auto& s : np.slopes) from_hull[s.slope] += s.multiplicity;
        for (const auto& r : roots) from_roots[Rational(-valuation(r, p))] += 1;
        CHECK(from_hull == from_roots);
        for (std::size_t i = 1; i < np.slopes.size(); ++i) CHECK(np.slopes[i - 1].slope < np.slopes[i].slope);
    }
}

TEST_CASE("root_sup_log examples") {
    auto a = root_sup_log(monic({-1, 0}), Place::infinity());
    CHECK(testing::near(a.arch_value(), 0.0, 1e-12));
    CHECK(a.arch_value().width() <= 1e-8);

    auto b = root_sup_log(MonicPoly({Rational(-1, 9), Rational(0)}), Place::prime(3));
    CHECK(b.exact_value().coeff == 1);

    auto c = root_sup_log(monic({-16, 0}), Place::infinity());
    CHECK(testing::near(c.arch_value(), std::log(4.0), 1e-12));
    CHECK(c.arch_value().width() <= 1e-8);

    CHECK(root_sup_log(monic({0, 0, 0}), Place::infinity()).is_neg_infinity());
    CHECK(root_sup_log(monic({0, 0, 0}), Place::prime(5)).is_neg_infinity());
}

TEST_CASE("archimedean root enclosures contain the known roots") {
    Rng rng(23);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Rational> roots;
        int n = static_cast<int>(rng.uniform(1, 6));
        for (int i = 0; i < n; ++i) roots.push_back(testing::random_rational(rng, 3000, 300));
        Rational biggest = 0;
        for (const auto& r : roots) biggest = std::max(biggest, Rational(abs(r)));
        auto enc = enclose_roots(Poly::from_roots(roots));
        CHECK(enc.max_modulus.overlaps(Interval::from_rational(biggest)));
        if (biggest != 0) {
            auto s = root_sup_log(MonicPoly::from_roots(roots), Place::infinity());
            CHECK(s.arch_value().width() <= 1e-8);
        }
        for (const auto& r : roots) {
            bool inside = false;
            for (const auto& c : enc.clusters)
                inside = inside || (c.box.re.overlaps(Interval::from_rational(r)) && c.box.im.contains(0.0));
            CHECK(inside);
        }
    }
}

TEST_CASE("complex roots are enclosed: z^2 + 1 and z^3 - 2") {
    auto enc = enclose_roots(Poly({Rational(1), Rational(0), Rational(1)}));
    CHECK(enc.clusters.size() == 2);
    CHECK(testing::near(enc.max_modulus, 1.0, 1e-15));
    auto enc3 = enclose_roots(Poly({Rational(-2), Rational(0), Rational(0), Rational(1)}));
    CHECK(testing::near(enc3.max_modulus, std::cbrt(2.0), 1e-14));
    CHECK(enc3.max_modulus.width() < 1e-15);
}

TEST_CASE("branch_data examples") {
    SUBCASE("z^2 - 1, d = 2") {
        auto cd = branch_data(ComposedMap(monic({-1, 0}), 2));
        CHECK(cd.branch_values_exact == qs({Rational(-1)}));
        CHECK(cd.rational_critical_points == qs({Rational(0), Rational(0), Rational(0)}));
    }
    SUBCASE("z^3 - 3z, d = 2") {
        auto cd = branch_data(ComposedMap(monic({0, -3, 0}), 2));
        CHECK(cd.branch_values_exact == qs({Rational(-2), Rational(0), Rational(2)}));
        // c = 1 has rational square roots +-1; c = -1 does not.
        CHECK(cd.rational_critical_points == qs({Rational(-1), Rational(0), Rational(1)}));
        CHECK(cd.all_critical_points_numeric.size() == 5);
    }
    SUBCASE("z^2 + z, d = 2") {
        auto cd = branch_data(ComposedMap(monic({0, 1}), 2));
        CHECK(cd.branch_values_exact == qs({Rational(-1, 4), Rational(0)}));
    }
    SUBCASE("m = 1 has the single branch value g(0)") {
        auto cd = branch_data(ComposedMap(MonicPoly({Rational(1, 3)}), 2));
        CHECK(cd.branch_values_exact == qs({Rational(1, 3)}));
        CHECK(cd.branch_resultant.is_zero());
    }
}

TEST_CASE("rational critical points of f match the roots of f'") {
    Rng rng(24);
    for (int trial = 0; trial < 60; ++trial) {
        std::vector<Rational> roots;
        int m = static_cast<int>(rng.uniform(2, 4));
        for (int i = 0; i < m; ++i) roots.push_back(testing::random_rational(rng, 6, 3));
        MonicPoly g = MonicPoly::from_roots(roots);
        unsigned d = static_cast<unsigned>(rng.uniform(1, 3));
        auto cd = branch_data(ComposedMap(g, d));
        auto direct = rational_roots(derivative(compose_power(g, d)));
        CHECK(cd.rational_critical_points == direct);
    }
}

TEST_CASE("branch sizes agree with direct evaluation when critical points are rational") {
    Rng rng(25);
    int tested = 0;
    for (int trial = 0; trial < 400 && tested < 80; ++trial) {
        std::vector<Rational> c;
        int m = static_cast<int>(rng.uniform(2, 4));
        for (int i = 0; i < m; ++i) c.push_back(testing::random_rational(rng, 30, 12));
        MonicPoly g(c);
        ComposedMap F(g, static_cast<unsigned>(rng.uniform(1, 3)));
        auto cd = branch_data(F);
        if (cd.g_rational_critical_points.size() != static_cast<std::size_t>(m - 1)) continue;
        ++tested;
        for (unsigned long p : {2UL, 3UL, 5UL, 7UL}) {
            LogSize direct;
            if (F.d() >= 2) direct = abs_log(g(Rational(0)), Place::prime(p));
            for (const auto& cc : cd.g_rational_critical_points) direct = max(direct, abs_log(g(cc), Place::prime(p)));
            LogSize via_resultant = branch_sup_log(F, cd, Place::prime(p));
            REQUIRE(direct.is_exact() == via_resultant.is_exact());
            if (direct.is_exact()) CHECK(direct.exact_value().coeff == via_resultant.exact_value().coeff);
        }
    }
    CHECK(tested >= 20);
}

TEST_CASE("image_resultant has the branch values as roots") {
    MonicPoly g = monic({0, -3, 0});  // z^3 - 3z, critical values -+2
    Poly r = image_resultant(derivative(g), g);
    CHECK(r == Poly({Rational(-4), Rational(0), Rational(1)}));
}

TEST_CASE("lemma1_gap examples") {
    CHECK(testing::near(lemma1_gap(monic({-1, 0}), Place::infinity()).arch_value(), 0.0, 1e-12));
    CHECK(testing::near(lemma1_gap(monic({-16, 0}), Place::infinity()).arch_value(), 0.0, 1e-12));
    auto g = lemma1_gap(MonicPoly({Rational(-1, 9), Rational(0)}), Place::prime(3));
    CHECK(g.exact_value().coeff == 0);
    CHECK_THROWS_AS(lemma1_gap(monic({-1, 0}), Place::prime(2)), UnsupportedPlace);
    CHECK_THROWS_AS(lemma1_gap(monic({-1, 0, 0}), Place::prime(3)), UnsupportedPlace);
}

TEST_CASE("C1 closed form") {
    // m = 2: 1/(sqrt 2 - 1) = 1 + sqrt 2
    CHECK(testing::near(c1_arch(2), std::log(1 + std::sqrt(2.0))));
    // The extremal polynomial (z - 1)^m - 2 ... is not needed; check monotonicity in m.
    for (unsigned m = 2; m < 8; ++m) CHECK(certainly_less(c1_arch(m), c1_arch(m + 1)));
}

TEST_CASE("lemma1 gap sampling stays within C1") {
    Rng rng(26);
    for (unsigned m = 2; m <= 5; ++m) {
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<Rational> c;
            for (unsigned i = 0; i < m; ++i) c.push_back(testing::random_rational(rng, 100, 100));
            MonicPoly g(c);
            CHECK(certainly_leq(lemma1_gap(g, Place::infinity()).arch_value(), c1_arch(m)));
            for (unsigned long p : {7UL, 11UL, 13UL}) CHECK(lemma1_gap(g, Place::prime(p)).exact_value().coeff == 0);
        }
    }
}

TEST_CASE("coeff_height_bound_check examples") {
    auto a = coeff_height_bound_check(qs({Rational(1), Rational(-1)}));
    CHECK(a.h_g.value == 0.0);
    CHECK(a.h_a.value == 0.0);
    CHECK(a.holds);
    auto b = coeff_height_bound_check(qs({Rational(4), Rational(-4)}));
    CHECK(b.h_g.value == doctest::Approx(std::log(16.0)));
    CHECK(b.h_a.value == doctest::Approx(std::log(4.0)));
    CHECK(b.holds);
    auto c = coeff_height_bound_check(qs({Rational(1, 2), Rational(1, 2)}));
    CHECK(c.h_g.value == doctest::Approx(std::log(4.0)));
    CHECK(c.h_a.value == doctest::Approx(std::log(2.0)));
    CHECK(c.holds);
}

TEST_CASE("coefficient height bound holds on random root tuples") {
    Rng rng(27);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<Rational> roots;
        int m = static_cast<int>(rng.uniform(1, 6));
        for (int i = 0; i < m; ++i) roots.push_back(testing::random_rational(rng, 1000, 1000));
        CHECK(coeff_height_bound_check(roots).holds);
    }
}

TEST_CASE("polynomial JSON format") {
    CHECK(parse_monic_poly(R"(["-2","0"])") == monic({-2, 0}));
    CHECK(parse_monic_poly(R"(["1/2"])") == MonicPoly({Rational(1, 2)}));
    CHECK(parse_monic_poly("[3, -1]") == monic({3, -1}));
    CHECK_THROWS_AS(parse_monic_poly("[]"), std::invalid_argument);
    CHECK_THROWS_AS(parse_monic_poly(R"(["1/x"])"), std::invalid_argument);
    CHECK_THROWS_AS(parse_monic_poly("not json"), std::invalid_argument);
    CHECK(to_json(monic({-2, 0})) == R"(["-2","0"])");
}
