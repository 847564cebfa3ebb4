#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "pcfh/arith.hpp"
#include "support.hpp"

using namespace pcfh;

namespace {

// Height of (1 : x_1 : ... : x_n) from the primitive integer vector, with no
// use of places: clear denominators and take log of the largest entry.
double projective_height_oracle(const std::vector<Rational>& xs) {
    Integer l = 1;
    for (const auto& x : xs) l = lcm(l, Integer(x.get_den()));
    Integer best = l;
    for (const auto& x : xs) best = std::max(best, Integer(abs(Integer(x * l))));
    return std::log(best.get_d());
}

}  // namespace

TEST_CASE("parse_rational accepts the documented format") {
    CHECK(parse_rational("3/2") == Rational(3, 2));
    CHECK(parse_rational("-4") == Rational(-4));
    CHECK(parse_rational("6/4") == Rational(3, 2));
    CHECK(parse_rational("0/7") == Rational(0));
    CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational(" 1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("1.5"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("--1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational(""), std::invalid_argument);
}

TEST_CASE("place construction verifies primality") {
    CHECK(Place::prime(7).p() == 7);
    CHECK_THROWS_AS(Place::prime(9), std::invalid_argument);
    CHECK_THROWS_AS(Place::prime(1), std::invalid_argument);
    CHECK(Place::parse("inf").is_archimedean());
    CHECK(Place::infinity() < Place::prime(2));
    CHECK(Place::prime(2) < Place::prime(3));
}

TEST_CASE("abs_log examples") {
    auto a = abs_log(Rational(-2), Place::infinity());
    REQUIRE(a.is_arch());
    CHECK(testing::near(a.arch_value(), std::log(2.0)));
    CHECK(a.arch_value().width() < 0x1p-40);

    auto b = abs_log(Rational(1, 2), Place::prime(2));
    REQUIRE(b.is_exact());
    CHECK(b.exact_value().coeff == 1);

    auto c = abs_log(Rational(12), Place::prime(2));
    CHECK(c.exact_value().coeff == -2);

    CHECK(abs_log(Rational(0), Place::prime(5)).is_neg_infinity());
    CHECK(abs_log(Rational(0), Place::infinity()).is_neg_infinity());
}

TEST_CASE("tuple_sup_log examples") {
    std::vector<Rational> t1{Rational(1), Rational(-2), Rational(1, 3)};
    auto s1 = tuple_sup_log(t1, Place::prime(3));
    CHECK(s1.exact_value().coeff == 1);

    std::vector<Rational> zeros{Rational(0), Rational(0)};
    CHECK(tuple_sup_log(zeros, Place::infinity()).is_neg_infinity());

    std::vector<Rational> t3{Rational(3, 2), Rational(-4)};
    CHECK(testing::near(tuple_sup_log(t3, Place::infinity()).arch_value(), std::log(4.0)));

    std::vector<Rational> none;
    CHECK_THROWS_AS(tuple_sup_log(none, Place::infinity()), std::invalid_argument);
}

TEST_CASE("height examples") {
    std::vector<Rational> a{Rational(3, 2)};
    CHECK(height(a).value == doctest::Approx(std::log(3.0)).epsilon(1e-14));
    std::vector<Rational> b{Rational(-2)};
    CHECK(height(b).value == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    std::vector<Rational> c{Rational(0)};
    CHECK(height(c).value == 0.0);
    CHECK(height(c).error == 0.0);
}

TEST_CASE("relevant_places examples") {
    auto names = [](const std::vector<Place>& ps) {
        std::vector<std::string> out;
        for (const auto& p : ps) out.push_back(p.name());
        return out;
    };
    std::vector<Rational> a{Rational(1, 6)};
    CHECK(names(relevant_places(a)) == std::vector<std::string>{"inf", "2", "3"});
    std::vector<Rational> b{Rational(5)};
    CHECK(names(relevant_places(b)) == std::vector<std::string>{"inf", "5"});
    std::vector<Rational> c{Rational(0)};
    CHECK(names(relevant_places(c)) == std::vector<std::string>{"inf"});
}

TEST_CASE("height agrees with the projective oracle") {
    Rng rng(11);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<Rational> xs;
        int n = static_cast<int>(rng.uniform(1, 4));
        for (int i = 0; i < n; ++i) xs.push_back(testing::random_rational(rng, 10000, 10000));
        HeightValue h = height(xs);
        CHECK(std::abs(h.value - projective_height_oracle(xs)) <= 1e-12 * std::max(1.0, h.value));
        CHECK(h.lower() >= -1e-300);
    }
}

TEST_CASE("height is invariant under permutation and negation") {
    Rng rng(12);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Rational> xs;
        for (int i = 0; i < 4; ++i) xs.push_back(testing::random_rational(rng, 500, 500));
        Interval h0 = height_interval(xs);
        std::vector<Rational> ys = xs;
        std::reverse(ys.begin(), ys.end());
        ys[1] = -ys[1];
        CHECK(h0.overlaps(height_interval(ys)));
    }
}

TEST_CASE("height is subadditive on products") {
    Rng rng(13);
    for (int trial = 0; trial < 1000; ++trial) {
        Rational x = testing::random_rational(rng, 100000, 100000);
        Rational y = testing::random_rational(rng, 100000, 100000);
        std::vector<Rational> vx{x}, vy{y}, vxy{Rational(x * y)};
        Interval lhs = height_interval(vxy);
        Interval rhs = height_interval(vx) + height_interval(vy);
        CHECK(!certainly_less(rhs, lhs));
    }
}

TEST_CASE("product formula over Q") {
    Rng rng(14);
    for (int trial = 0; trial < 200; ++trial) {
        Rational x = testing::random_nonzero_rational(rng, 1000000, 1000000);
        std::vector<Rational> vx{x};
        // Non-archimedean parts cancel exactly: prod_p p^(-coeff_p) = |x|.
        Rational prod = 1;
        Interval total;
        for (const auto& v : relevant_places(vx)) {
            auto s = abs_log(x, v);
            if (s.is_exact()) {
                Integer pk;
                long e = -s.exact_value().coeff.get_num().get_si();
                mpz_ui_pow_ui(pk.get_mpz_t(), v.p(), static_cast<unsigned long>(std::labs(e)));
                prod *= e >= 0 ? Rational(pk) : Rational(1, pk);
            }
            total += s.to_interval();
        }
        CHECK(prod == abs(x));
        CHECK(total.contains(0.0));
        CHECK(total.width() < 1e-60);
    }
}

TEST_CASE("interval arithmetic encloses") {
    Interval x(-1.5, 2.0);
    Interval y(3.0, 4.0);
    Interval p = x * y;
    CHECK(p.lower() == -6.0);
    CHECK(p.upper() == 8.0);
    Interval q = sqr(x);
    CHECK(q.lower() == 0.0);
    CHECK(q.upper() == 4.0);
    CHECK((Interval(1.0) / Interval(-1.0, 1.0)).is_finite() == false);
    CHECK(log(Interval(1.0)).contains(0.0));
    CHECK(testing::near(Interval::ln2(), std::log(2.0)));
}
