#include <doctest.h>

#include <cmath>

#include "pcfh/bounds.hpp"
#include "pcfh/dynamics.hpp"
#include "pcfh/roots.hpp"
#include "support.hpp"

using namespace pcfh;

namespace {

MonicPoly monic(std::initializer_list<Rational> lower) { return MonicPoly(std::vector<Rational>(lower)); }

// G(0) for z^2 + 1, from 60-digit iteration of log|z_k| / 2^k at k = 40.
constexpr double kGreenZ2Plus1AtZero = 0.20367726136974000;

}  // namespace

TEST_CASE("escape_threshold examples") {
    auto a = escape_threshold(ComposedMap(monic({Rational(1, 2)}), 2), Place::prime(2));
    CHECK(a.exact_value().coeff == 1);
    auto b = escape_threshold(ComposedMap(monic({-1, 0}), 2), Place::prime(3));
    CHECK(b.exact_value().coeff == 0);
    auto c = escape_threshold(ComposedMap(monic({-16, 0}), 2), Place::infinity());
    CHECK(testing::near(c.arch_value(), std::log(4.0) + 2 * std::log(2.0), 1e-12));
}

TEST_CASE("orbit examples") {
    auto a = orbit(ComposedMap(monic({-1}), 2), Rational(0), 100);
    REQUIRE(std::holds_alternative<Preperiodic>(a));
    const auto& pa = std::get<Preperiodic>(a);
    CHECK(pa.tail == 0);
    CHECK(pa.period == 2);
    CHECK(pa.orbit == std::vector<Rational>{Rational(0), Rational(-1)});

    auto b = orbit(ComposedMap(monic({1}), 2), Rational(0), 100);
    REQUIRE(std::holds_alternative<Escaping>(b));
    CHECK(std::get<Escaping>(b).place == Place::infinity());
    CHECK(std::get<Escaping>(b).escape_index == 3);
    CHECK(std::get<Escaping>(b).witness == 5);

    auto c = orbit(ComposedMap(monic({-2}), 2), Rational(1, 2), 100);
    REQUIRE(std::holds_alternative<Escaping>(c));
    CHECK(std::get<Escaping>(c).place == Place::prime(2));
    CHECK(std::get<Escaping>(c).escape_index == 0);
    CHECK(std::get<Escaping>(c).witness == Rational(1, 2));

    // Same map written as g = z^2 - 2, d = 1.
    auto d = orbit(ComposedMap(monic({-2, 0}), 1), Rational(0), 100);
    REQUIRE(std::holds_alternative<Preperiodic>(d));
    CHECK(std::get<Preperiodic>(d).tail == 2);
    CHECK(std::get<Preperiodic>(d).period == 1);

    CHECK_THROWS_AS(orbit(ComposedMap(monic({-1}), 2), Rational(0), 0), std::invalid_argument);
}

TEST_CASE("orbit results satisfy their invariants") {
    Rng rng(31);
    for (int trial = 0; trial < 300; ++trial) {
        ComposedMap F(MonicPoly({testing::random_rational(rng, 3, 2), testing::random_rational(rng, 3, 2)}),
                      static_cast<unsigned>(rng.uniform(1, 2)));
        Rational z0 = testing::random_rational(rng, 3, 2);
        auto r = orbit(F, z0, 200);
        EscapeCriteria crit(F);
        if (const auto* p = std::get_if<Preperiodic>(&r)) {
            const auto& o = p->orbit;
            CHECK(F(o.back()) == o[static_cast<std::size_t>(p->tail)]);
            CHECK(o.size() == static_cast<std::size_t>(p->tail + p->period));
            for (std::size_t i = 1; i < o.size(); ++i) CHECK(o[i] == F(o[i - 1]));
        } else if (const auto* e = std::get_if<Escaping>(&r)) {
            CHECK(crit.escapes(e->witness, e->place));
            Rational z = z0;
            for (long k = 0; k < e->escape_index; ++k) z = F(z);
            CHECK(z == e->witness);
        }
    }
}

TEST_CASE("green_nonarch examples") {
    auto a = green_nonarch(ComposedMap(monic({Rational(1, 2)}), 2), Rational(1, 2), 2);
    REQUIRE(a.is_exact());
    CHECK(a.exact_value().coeff == 1);
    auto b = green_nonarch(ComposedMap(monic({-1}), 2), Rational(0), 3);
    REQUIRE(b.is_zero());
    CHECK(b.zero_reason() == GreenValue::ZeroReason::IntegralBounded);
    auto c = green_nonarch(ComposedMap(monic({Rational(1, 3)}), 2), Rational(0), 3);
    REQUIRE(c.is_exact());
    CHECK(c.exact_value().coeff == Rational(1, 2));
    // z^2 - 3/4 has the fixed point 3/2 of 2-adic size 2 below the threshold.
    auto d = green_nonarch(ComposedMap(monic({Rational(-3, 4)}), 2), Rational(3, 2), 2);
    REQUIRE(d.is_zero());
    CHECK(d.zero_reason() == GreenValue::ZeroReason::PreperiodicOrbit);
}

TEST_CASE("green_arch examples") {
    auto a = green_arch(ComposedMap(monic({0}), 2), Rational(2), 1e-9, 200);
    REQUIRE(a.is_bracket());
    CHECK(testing::near(a.bracket_value(), std::log(2.0), 1e-9));
    CHECK(a.bracket_value().width() <= 1e-9);

    auto b = green_arch(ComposedMap(monic({-2}), 2), Rational(3), 1e-6, 200);
    REQUIRE(b.is_bracket());
    CHECK(testing::near(b.bracket_value(), std::log((3 + std::sqrt(5.0)) / 2), 1e-6));
    CHECK(b.bracket_value().width() <= 1e-6);

    auto c = green_arch(ComposedMap(monic({1}), 2), Rational(0), 1e-3, 60);
    REQUIRE(c.is_bracket());
    CHECK(testing::near(c.bracket_value(), kGreenZ2Plus1AtZero, 1e-12));
    CHECK(c.bracket_value().width() <= 1e-3);

    // complex start: f = z^2, |3+4i| = 5
    auto d = green_arch(ComposedMap(monic({0}), 2), parse_complex("3+4i"), 1e-9, 200);
    CHECK(testing::near(d.bracket_value(), std::log(5.0), 1e-9));
}

TEST_CASE("green_arch at a bounded orbit shrinks to zero") {
    auto g = green_arch(ComposedMap(monic({-1}), 2), Rational(0), 1e-9, 200);
    REQUIRE(g.is_bracket());
    CHECK(g.bracket_value().lower() == 0.0);
    CHECK(g.bracket_value().upper() <= 1e-9);
}

TEST_CASE("parse_complex") {
    CHECK(testing::near(parse_complex("1/2").re, 0.5));
    auto z = parse_complex("1/2-3/4i");
    CHECK(testing::near(z.re, 0.5));
    CHECK(testing::near(z.im, -0.75));
    CHECK(testing::near(parse_complex("-2i").im, -2.0));
    CHECK(testing::near(parse_complex("i").im, 1.0));
    CHECK(testing::near(parse_complex("-1+i").re, -1.0));
    CHECK_THROWS_AS(parse_complex("x+i"), std::invalid_argument);
}

TEST_CASE("non-archimedean Green functions are exact in the basin") {
    Rng rng(32);
    int tested = 0;
    for (int trial = 0; trial < 2000 && tested < 300; ++trial) {
        unsigned m = static_cast<unsigned>(rng.uniform(1, 3));
        std::vector<Rational> c;
        for (unsigned i = 0; i < m; ++i) c.push_back(testing::random_rational(rng, 20, 12));
        unsigned d = static_cast<unsigned>(rng.uniform(m == 1 ? 2 : 1, 3));
        ComposedMap F(MonicPoly(c), d);
        unsigned long p = std::vector<unsigned long>{2, 3, 5}[static_cast<std::size_t>(rng.uniform(0, 2))];
        Rational z0 = testing::random_nonzero_rational(rng, 10, 60);
        EscapeCriteria crit(F);
        Rational s(-valuation(z0, p));
        if (!(s > 0 && d * s > crit.nonarch_threshold(p))) continue;
        ++tested;
        auto g = green_nonarch(F, z0, p, 50);
        REQUIRE(g.is_exact());
        CHECK(g.exact_value().coeff == s);
        auto g1 = green_nonarch(F, F(z0), p, 50);
        REQUIRE(g1.is_exact());
        CHECK(g1.exact_value().coeff == Rational(F.degree()) * s);
    }
    CHECK(tested >= 100);
}

TEST_CASE("archimedean Green bracket in the basin") {
    Rng rng(33);
    int tested = 0;
    for (int trial = 0; trial < 400 && tested < 60; ++trial) {
        unsigned m = static_cast<unsigned>(rng.uniform(2, 3));
        unsigned d = static_cast<unsigned>(rng.uniform(1, 3));
        std::vector<Rational> c;
        for (unsigned i = 0; i < m; ++i) c.push_back(testing::random_rational(rng, 30, 5));
        ComposedMap F(MonicPoly(c), d);
        EscapeCriteria crit(F);
        Rational z0 = crit.basin_radius() * Rational(rng.uniform(101, 400), 100);
        if (rng.coin()) z0 = -z0;
        auto g = green_arch(F, z0, 1e-8, 200);
        REQUIRE(g.is_bracket());
        ++tested;
        Interval diff = g.bracket_value() - log(abs(Interval::from_rational(z0)));
        CHECK(certainly_leq(-epsilon_below(m, d), diff));
        CHECK(certainly_leq(diff, epsilon_above(m, d)));
        // functional equation within the summed widths
        auto g1 = green_arch(F, F(z0), 1e-8, 200);
        Interval resid = g1.bracket_value() - Interval(static_cast<double>(F.degree())) * g.bracket_value();
        CHECK(resid.contains(0.0));
    }
    CHECK(tested == 60);
}

TEST_CASE("increasing cap never widens the archimedean bracket") {
    ComposedMap F(monic({Rational(-3, 4), Rational(1, 2)}), 2);
    for (long cap = 1; cap < 30; ++cap) {
        auto a = green_arch(F, Rational(1, 3), 1e-300, cap);
        auto b = green_arch(F, Rational(1, 3), 1e-300, cap + 1);
        REQUIRE(a.is_bracket());
        REQUIRE(b.is_bracket());
        CHECK(a.bracket_value().contains(b.bracket_value()));
    }
}

TEST_CASE("local_crit_lambda examples") {
    for (const auto& v : {Place::infinity(), Place::prime(2), Place::prime(3)})
        CHECK(local_crit_lambda(ComposedMap(monic({-1, 0}), 2), v).is_zero());
    auto a = local_crit_lambda(ComposedMap(monic({1}), 2), Place::infinity());
    REQUIRE(a.is_bracket());
    CHECK(testing::near(a.bracket_value(), kGreenZ2Plus1AtZero, 1e-12));
    auto b = local_crit_lambda(ComposedMap(monic({Rational(1, 2)}), 2), Place::prime(2));
    REQUIRE(b.is_exact());
    CHECK(b.exact_value().coeff == Rational(1, 2));
}

TEST_CASE("local_crit_lambda is never negative") {
    Rng rng(34);
    for (int trial = 0; trial < 60; ++trial) {
        unsigned m = static_cast<unsigned>(rng.uniform(1, 3));
        std::vector<Rational> c;
        for (unsigned i = 0; i < m; ++i) c.push_back(testing::random_rational(rng, 8, 6));
        ComposedMap F(MonicPoly(c), static_cast<unsigned>(rng.uniform(2, 3)));
        auto data = branch_data(F);
        for (const auto& v : critical_places(F, data)) {
            auto lam = local_crit_lambda(F, data, v, {200, 1e-6});
            CHECK(lam.to_interval().certainly_nonnegative());
        }
    }
}

TEST_CASE("crit_height examples") {
    auto a = crit_height(ComposedMap(monic({-2}), 2));
    CHECK(a.pcf_flag == PcfFlag::CertifiedPCF);
    CHECK(a.total.value == 0.0);
    CHECK(a.total.error == 0.0);

    auto b = crit_height(ComposedMap(monic({1}), 2), {60, 1e-9});
    CHECK(b.pcf_flag == PcfFlag::CertifiedNotPCF);
    CHECK(testing::near(b.total_interval, kGreenZ2Plus1AtZero, 1e-12));
    CHECK(b.total_interval.width() <= 1e-6);
    CHECK(b.per_place.size() == 1);

    auto c = crit_height(ComposedMap(monic({-1}), 4));
    CHECK(c.pcf_flag == PcfFlag::CertifiedPCF);
    CHECK(c.total.value == 0.0);

    // g = z^2 - 2 with d = 1 is the same map as g = z - 2 with d = 2.
    auto d = crit_height(ComposedMap(monic({-2, 0}), 1));
    CHECK(d.pcf_flag == PcfFlag::CertifiedPCF);
}

TEST_CASE("critical height is zero exactly for certified PCF maps") {
    for (unsigned d = 2; d <= 4; ++d)
        for (long p = -2; p <= 2; ++p)
            for (long q = 1; q <= 2; ++q) {
                Rational c(p, q);
                c.canonicalize();
                auto r = crit_height(ComposedMap(monic({c}), d), {500, 1e-6});
                CHECK(r.pcf_flag != PcfFlag::Inconclusive);
                if (r.pcf_flag == PcfFlag::CertifiedPCF)
                    CHECK(r.total.value == 0.0);
                else
                    CHECK(r.total_interval.certainly_positive());
            }
}

TEST_CASE("irrational branch values: z^3 - 3z/2 + c families") {
    // g' = 3z^2 - 3/2 has irrational roots, so the critical height is built
    // from enclosures at infinity and Newton polygons at primes.
    ComposedMap F(monic({Rational(7), Rational(-3, 2), Rational(0)}), 2);
    auto rep = crit_height(F, {300, 1e-8});
    CHECK(rep.pcf_flag == PcfFlag::CertifiedNotPCF);
    CHECK(rep.total_interval.width() <= 1e-6);
}
