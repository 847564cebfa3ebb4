#include <doctest.h>

#include <cmath>
#include <set>

#include "pcfh/bounds.hpp"
#include "pcfh/pcf.hpp"
#include "support.hpp"

using namespace pcfh;

namespace {

MonicPoly monic(std::initializer_list<Rational> lower) { return MonicPoly(std::vector<Rational>(lower)); }

std::set<Rational> pcf_set(const std::vector<EnumerationRow>& rows) {
    std::set<Rational> out;
    for (const auto& r : rows)
        if (r.pcf) out.insert(r.c);
    return out;
}

std::set<Rational> qs(std::initializer_list<Rational> xs) { return std::set<Rational>(xs); }

}  // namespace

TEST_CASE("certify_pcf examples") {
    auto a = certify_pcf(ComposedMap(monic({-1}), 2));
    CHECK(a.verdict == PcfVerdict::PCF);
    REQUIRE(a.postcritical_set);
    CHECK(*a.postcritical_set == std::vector<Rational>{Rational(-1), Rational(0)});

    auto b = certify_pcf(ComposedMap(monic({1}), 2));
    CHECK(b.verdict == PcfVerdict::NotPCF);
    REQUIRE(b.per_critical_point.size() == 1);
    const auto& e = std::get<Escaping>(*b.per_critical_point[0].orbit);
    CHECK(e.place == Place::infinity());
    CHECK(e.escape_index == 3);
    CHECK_FALSE(b.postcritical_set);

    auto c = certify_pcf(ComposedMap(monic({-1}), 4));
    CHECK(c.verdict == PcfVerdict::PCF);
    CHECK(*c.postcritical_set == std::vector<Rational>{Rational(-1), Rational(0)});

    auto d = certify_pcf(ComposedMap(monic({-2}), 2));
    CHECK(*d.postcritical_set == std::vector<Rational>{Rational(-2), Rational(2)});
}

TEST_CASE("certify_pcf with irrational critical points") {
    // z^3 - 3z: critical points +-1, values -+2, and 2 -> 2 fixed, -2 -> -2 fixed.
    auto a = certify_pcf(ComposedMap(monic({0, -3, 0}), 1));
    CHECK(a.verdict == PcfVerdict::PCF);
    // g = z^3 - 3z, d = 2: z^2 = -1 has no rational root, its image 2 is fixed.
    auto b = certify_pcf(ComposedMap(monic({0, -3, 0}), 2));
    CHECK(b.verdict == PcfVerdict::NotPCF);  // f(1) = -2, f(-2) = g(4) = 52 escapes
    // z^3 - 3z/2 + 7 with d = 2: irrational branch values escape at infinity.
    auto c = certify_pcf(ComposedMap(monic({Rational(7), Rational(-3, 2), Rational(0)}), 2));
    CHECK(c.verdict == PcfVerdict::NotPCF);
    // z^3 - z/3: critical points +-1/3 with values -+2/27, which escape 3-adically.
    auto d = certify_pcf(ComposedMap(monic({Rational(0), Rational(-1, 3), Rational(0)}), 1));
    CHECK(d.verdict == PcfVerdict::NotPCF);
}

TEST_CASE("unicritical_enumerate examples") {
    CHECK(unicritical_bound(2) == 2);
    CHECK(unicritical_bound(3) == 1);
    CHECK(unicritical_bound(10) == 1);
    CHECK(pcf_set(unicritical_enumerate(2)) == qs({Rational(0), Rational(-1), Rational(-2)}));
    CHECK(pcf_set(unicritical_enumerate(3)) == qs({Rational(0)}));
    CHECK(pcf_set(unicritical_enumerate(4)) == qs({Rational(0), Rational(-1)}));
    auto rows = unicritical_enumerate(2);
    CHECK(rows.size() == 7);  // 0, +-1, +-2, +-1/2
    for (const auto& r : rows) CHECK(height(std::vector<Rational>{r.c}).value <= std::log(2.0) + 1e-12);
}

TEST_CASE("unicritical_sweep examples") {
    auto s = unicritical_sweep(6);
    REQUIRE(s.size() == 5);
    CHECK(s[0].d == 2);
    CHECK(std::set<Rational>(s[0].pcf.begin(), s[0].pcf.end()) == qs({Rational(0), Rational(-1), Rational(-2)}));
    CHECK(s[1].pcf == std::vector<Rational>{Rational(0)});
    CHECK(std::set<Rational>(s[2].pcf.begin(), s[2].pcf.end()) == qs({Rational(0), Rational(-1)}));
    CHECK(s[3].pcf == std::vector<Rational>{Rational(0)});
    CHECK(std::set<Rational>(s[4].pcf.begin(), s[4].pcf.end()) == qs({Rational(0), Rational(-1)}));
}

TEST_CASE("height_box ordering and contents") {
    auto b = height_box(2);
    std::vector<Rational> want{Rational(-2), Rational(-1), Rational(-1, 2), Rational(0),
                               Rational(1),  Rational(1, 2), Rational(2)};
    // ordered by numerator, then denominator
    CHECK(b == std::vector<Rational>{Rational(-2), Rational(-1), Rational(-1, 2), Rational(0), Rational(1),
                                     Rational(1, 2), Rational(2)});
    CHECK(height_box(8).size() == 2 * 43 + 1);  // 2 * sum_{q<=8} |{p <= 8 : gcd(p, q) = 1}| + 1
}

TEST_CASE("larger box finds no extra PCF parameters for d = 2") {
    auto par = unicritical_box_scan(2, 8);
    auto ser = unicritical_box_scan_serial(2, 8);
    REQUIRE(par.size() == ser.size());
    for (std::size_t i = 0; i < par.size(); ++i) {
        CHECK(par[i].c == ser[i].c);
        CHECK(par[i].pcf == ser[i].pcf);
    }
    CHECK(pcf_set(par) == qs({Rational(0), Rational(-1), Rational(-2)}));
}

TEST_CASE("c = -1 is PCF exactly for even d") {
    for (unsigned d = 2; d <= 64; ++d) {
        auto cert = certify_pcf(ComposedMap(monic({-1}), d));
        CHECK(cert.verdict == (d % 2 == 0 ? PcfVerdict::PCF : PcfVerdict::NotPCF));
    }
}

TEST_CASE("certify_pcf verdicts are stable under larger caps") {
    Rng rng(41);
    for (int trial = 0; trial < 80; ++trial) {
        std::vector<Rational> c{testing::random_rational(rng, 4, 2), testing::random_rational(rng, 4, 2)};
        ComposedMap F(MonicPoly(c), static_cast<unsigned>(rng.uniform(1, 3)));
        auto small = certify_pcf(F, 5);
        auto big = certify_pcf(F, 500);
        if (small.verdict != PcfVerdict::Inconclusive) CHECK(small.verdict == big.verdict);
    }
}

TEST_CASE("lemma3_check examples") {
    auto a = lemma3_check(monic({-16, 0}), 2, Place::infinity(), Interval(3.0));
    CHECK(a.holds);
    CHECK(a.rhs.upper() < 0);
    // lambda = G(-16)/4 for f = z^4 - 16; 50-digit iteration oracle.
    CHECK(testing::near(a.lambda.to_interval(), 0.69313191990793444, 1e-12));

    auto b = lemma3_check(monic({Rational(-1, 9), 0}), 2, Place::prime(3), Interval());
    CHECK(b.holds);
    REQUIRE(b.lambda.is_exact());
    CHECK(b.lambda.exact_value().coeff == Rational(1, 2));
    CHECK(testing::near(b.rhs, std::log(3.0) / 2));

    auto c = lemma3_check(monic({-1, 0}), 2, Place::prime(5), Interval());
    CHECK(c.holds);
    CHECK(c.rhs.upper() == 0.0);
}

TEST_CASE("psi_gap examples") {
    CHECK_FALSE(psi_gap(monic({-16, 0})));
    auto a = psi_gap(monic({0, 1}));
    REQUIRE(a);
    CHECK(testing::near(*a, -std::log(2.0), 1e-12));
    auto b = psi_gap(monic({0, -3, 0}));
    REQUIRE(b);
    CHECK(testing::near(*b, std::log(2.0 / 3.0), 1e-12));
}

TEST_CASE("C3 is at least each of its ingredients") {
    for (unsigned m = 2; m <= 5; ++m) {
        Interval c3 = c3_arch(m, 1.0);
        CHECK(certainly_less(Interval::from_rational(Rational(m, 2 * m - 1)) * Interval::ln2(), c3));
        CHECK(certainly_leq(c1_arch(m), c3));
    }
}

TEST_CASE("lemma3 suite on a small sample") {
    const double c4 = psi_bound_experiment(2, 200, 5).c4_estimate;
    std::vector<Place> places{Place::infinity(), Place::prime(5), Place::prime(7)};
    auto r = lemma3_suite(2, 2, places, 40, 9, c3_arch(2, c4), 100, {200, 1e-6});
    CHECK(r.failures == 0);
    CHECK(r.samples == 40);
    CHECK_THROWS_AS(lemma3_suite(2, 2, std::vector<Place>{Place::prime(2)}, 1, 1, Interval()), UnsupportedPlace);
}

TEST_CASE("theorem1 samples") {
    auto a = theorem1_sample({Rational(4), Rational(-4)}, 2, 3, {200, 1e-9});
    CHECK(a.h_a.value == doctest::Approx(std::log(4.0)));
    // log 4 - 2 * G(-16)/4: positive, since f(-16) = 16^4 - 16 falls short of 16^4.
    CHECK(a.deficit == doctest::Approx(3.0521304021739334e-05).epsilon(1e-6));
    CHECK(a.flag == PcfFlag::CertifiedNotPCF);
    auto b = theorem1_sample({Rational(1), Rational(-1)}, 2, 0, {200, 1e-9});
    CHECK(b.deficit == 0.0);
    CHECK(b.flag == PcfFlag::CertifiedPCF);
}

TEST_CASE("theorem1_experiment is deterministic") {
    auto a = theorem1_experiment(2, 2, {2, 4}, 4, 7, {200, 1e-6});
    auto b = theorem1_experiment(2, 2, {2, 4}, 4, 7, {200, 1e-6});
    REQUIRE(a.samples.size() == 8);
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        CHECK(a.samples[i].roots == b.samples[i].roots);
        CHECK(a.samples[i].deficit == b.samples[i].deficit);
    }
    CHECK(a.c_emp == b.c_emp);
    CHECK(std::isfinite(a.c_emp));
}
