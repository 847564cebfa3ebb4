#include "pcfh/bounds.hpp"

#include "pcfh/newton.hpp"
#include "pcfh/roots.hpp"

namespace pcfh {

namespace {

Interval ratio(long num, long den) { return Interval::from_rational(Rational(num, den)); }

}  // namespace

Interval c1_arch(unsigned m) {
    if (m < 2) throw std::invalid_argument("C1 needs m >= 2");
    Interval root2 = exp(Interval::ln2() * ratio(1, m));
    return -log(root2 - Interval(1.0));
}

Interval c1_prime(unsigned m, unsigned long p) {
    long v = valuation(Integer(m), p);
    return Interval::from_integer(Integer(v)) * log(Interval::from_integer(Integer(p)));
}

Interval c2(unsigned m, const Place& v) {
    if (!v.is_archimedean()) return Interval();
    if (m < 2) throw std::invalid_argument("C2 needs m >= 2");
    return ratio(m, m - 1) * Interval::ln2();
}

Interval epsilon_below(unsigned m, unsigned d) { return ratio(m, static_cast<long>(d * m) - 1) * Interval::ln2(); }

Interval epsilon_above(unsigned m, unsigned d) {
    return ratio(m, static_cast<long>(d * m) - 1) * Interval::ln3_over_2();
}

LogSize lemma1_gap(const MonicPoly& g, const Place& v) {
    const unsigned m = static_cast<unsigned>(g.degree());
    if (m < 2) throw std::invalid_argument("lemma1_gap needs deg g >= 2");
    if (!v.is_archimedean() && v.p() <= m)
        throw UnsupportedPlace("lemma1_gap: prime " + std::to_string(v.p()) + " <= deg g");

    const Poly gp = derivative(g);
    const Rational g0 = g(Rational(0));
    LogSize a = root_sup_log(g, v);
    LogSize c = root_sup_log(gp, v);
    LogSize g0_size = abs_log(g0, v);
    if (!g0_size.is_neg_infinity()) {
        if (g0_size.is_exact())
            g0_size = LogSize::exact(g0_size.exact_value().coeff / m, v.p());
        else
            g0_size = LogSize::arch(g0_size.arch_value() * ratio(1, m));
    }
    LogSize rhs = max(c, g0_size);
    if (a.is_neg_infinity() || rhs.is_neg_infinity()) {
        // g = z^m: every root and critical point is 0.
        if (!(a.is_neg_infinity() && rhs.is_neg_infinity()))
            throw std::logic_error("lemma1_gap: inconsistent zero sizes");
        return v.is_archimedean() ? LogSize::arch(Interval()) : LogSize::exact(Rational(0), v.p());
    }
    if (v.is_archimedean()) return LogSize::arch(abs(a.arch_value() - rhs.arch_value()));
    return LogSize::exact(abs(a.exact_value().coeff - rhs.exact_value().coeff), v.p());
}

CoeffHeightCheck coeff_height_bound_check(std::span<const Rational> roots) {
    if (roots.empty()) throw std::invalid_argument("coeff_height_bound_check needs deg g >= 1");
    MonicPoly g = MonicPoly::from_roots(roots);
    Interval hg = height_interval(g.lower_coefficients());
    Interval ha = height_interval(roots);
    Interval bound = Interval(static_cast<double>(roots.size())) * (ha + Interval::ln2());
    return {HeightValue::from_interval(hg), HeightValue::from_interval(ha), certainly_leq(hg, bound)};
}

}  // namespace pcfh
