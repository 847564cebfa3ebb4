#include "pcfh/arith.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace pcfh {

namespace {

Interval log_of_prime(unsigned long p) { return log(Interval::from_integer(Integer(p))); }

}  // namespace

Place Place::prime(unsigned long p) {
    if (!is_prime(p)) throw std::invalid_argument(std::to_string(p) + " is not prime");
    return Place(p);
}

Place Place::parse(std::string_view text) {
    if (text == "inf" || text == "infinity" || text == "oo") return infinity();
    if (text.empty() || !std::all_of(text.begin(), text.end(), [](char c) { return c >= '0' && c <= '9'; }))
        throw std::invalid_argument("malformed place '" + std::string(text) + "'");
    return prime(std::stoul(std::string(text)));
}

std::string Place::name() const { return is_archimedean() ? "inf" : std::to_string(p_); }

Interval LogSize::to_interval() const {
    if (is_neg_infinity()) {
        Interval r;
        mpfr_set_inf(r.lo().get(), -1);
        mpfr_set_inf(r.hi().get(), -1);
        return r;
    }
    if (is_exact()) {
        const auto& e = exact_value();
        return Interval::from_rational(e.coeff) * log_of_prime(e.p);
    }
    return arch_value();
}

std::string LogSize::to_string() const {
    if (is_neg_infinity()) return "-inf";
    if (is_exact()) return pcfh::to_string(exact_value().coeff) + "*log(" + std::to_string(exact_value().p) + ")";
    return arch_value().to_string();
}

LogSize max(const LogSize& a, const LogSize& b) {
    if (a.is_neg_infinity()) return b;
    if (b.is_neg_infinity()) return a;
    if (a.is_exact() && b.is_exact()) {
        if (a.exact_value().p != b.exact_value().p) throw std::invalid_argument("sizes at different places");
        return a.exact_value().coeff >= b.exact_value().coeff ? a : b;
    }
    if (a.is_arch() && b.is_arch()) return LogSize::arch(max(a.arch_value(), b.arch_value()));
    throw std::invalid_argument("sizes at different places");
}

LogSize log_plus(const LogSize& x, const Place& v) {
    if (v.is_archimedean()) {
        if (x.is_neg_infinity()) return LogSize::arch(Interval());
        return LogSize::arch(pos_part(x.arch_value()));
    }
    if (x.is_neg_infinity() || x.exact_value().coeff < 0) return LogSize::exact(Rational(0), v.p());
    return x;
}

HeightValue HeightValue::from_interval(const Interval& x) {
    HeightValue h;
    h.value = x.mid();
    // Half-width plus the distance from the rounded midpoint to each end.
    Real a, b;
    mpfr_sub_d(a.get(), x.hi().get(), h.value, MPFR_RNDU);
    mpfr_d_sub(b.get(), h.value, x.lo().get(), MPFR_RNDU);
    h.error = std::max(a.to_double(MPFR_RNDU), b.to_double(MPFR_RNDU));
    return h;
}

LogSize abs_log(const Rational& x, const Place& v, double /*tol*/) {
    if (x == 0) return LogSize::neg_infinity();
    if (!v.is_archimedean()) return LogSize::exact(Rational(-valuation(x, v.p())), v.p());
    return LogSize::arch(log(Interval::from_rational(abs(x))));
}

LogSize tuple_sup_log(std::span<const Rational> xs, const Place& v) {
    if (xs.empty()) throw std::invalid_argument("empty tuple");
    LogSize best;
    for (const auto& x : xs) best = max(best, abs_log(x, v));
    return best;
}

std::vector<Place> relevant_places(std::span<const Rational> xs) {
    std::set<Integer> primes;
    for (const auto& x : xs) {
        for (auto& p : prime_factors(x.get_num())) primes.insert(p);
        for (auto& p : prime_factors(x.get_den())) primes.insert(p);
    }
    std::vector<Place> out{Place::infinity()};
    for (const auto& p : primes) out.push_back(Place::prime(p.get_ui()));
    return out;
}

std::vector<Place> denominator_places(std::span<const Rational> xs) {
    Integer l = 1;
    for (const auto& x : xs) l = lcm(l, Integer(x.get_den()));
    std::vector<Place> out{Place::infinity()};
    for (const auto& p : prime_factors(l)) out.push_back(Place::prime(p.get_ui()));
    return out;
}

Interval height_interval(std::span<const Rational> xs) {
    if (xs.empty()) throw std::invalid_argument("empty tuple");
    Interval total;
    // Only places with some |x_i|_v > 1 contribute: archimedean and denominator primes.
    for (const auto& v : denominator_places(xs)) total += log_plus(tuple_sup_log(xs, v), v).to_interval();
    return total;
}

HeightValue height(std::span<const Rational> xs) { return HeightValue::from_interval(height_interval(xs)); }

}  // namespace pcfh
