#include "pcfh/interval.hpp"

#include <algorithm>
#include <cstdio>
#include <utility>

namespace pcfh {

namespace {

// MPFR keeps the exponent range per thread; orbits in the escape basin
// grow doubly exponentially, so every thread widens it before first use.
void ensure_exponent_range() {
    thread_local bool done = false;
    if (!done) {
        mpfr_set_emax(mpfr_get_emax_max());
        mpfr_set_emin(mpfr_get_emin_min());
        done = true;
    }
}

// Endpoint product with the interval convention 0 * inf = 0.
void mul_endpoint(mpfr_ptr out, mpfr_srcptr a, mpfr_srcptr b, mpfr_rnd_t rnd) {
    if (mpfr_zero_p(a) || mpfr_zero_p(b)) {
        mpfr_set_zero(out, 1);
        return;
    }
    mpfr_mul(out, a, b, rnd);
}

}  // namespace

Real::Real() {
    ensure_exponent_range();
    mpfr_init2(value_, kPrecision);
    mpfr_set_zero(value_, 1);
}

Real::Real(double x) {
    ensure_exponent_range();
    mpfr_init2(value_, kPrecision);
    mpfr_set_d(value_, x, MPFR_RNDN);  // exact: kPrecision >= 53
}

Real::Real(const Real& other) {
    ensure_exponent_range();
    mpfr_init2(value_, kPrecision);
    mpfr_set(value_, other.value_, MPFR_RNDN);
}

Real::Real(Real&& other) noexcept {
    mpfr_init2(value_, kPrecision);
    mpfr_swap(value_, other.value_);
}

Real& Real::operator=(const Real& other) {
    if (this != &other) mpfr_set(value_, other.value_, MPFR_RNDN);
    return *this;
}

Real& Real::operator=(Real&& other) noexcept {
    mpfr_swap(value_, other.value_);
    return *this;
}

Real::~Real() { mpfr_clear(value_); }

Interval::Interval() = default;

Interval::Interval(double x) : lo_(x), hi_(x) {}

Interval::Interval(double lo, double hi) : lo_(lo), hi_(hi) {}

Interval Interval::from_rational(const mpq_class& q) {
    Interval r;
    mpfr_set_q(r.lo_.get(), q.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(r.hi_.get(), q.get_mpq_t(), MPFR_RNDU);
    return r;
}

Interval Interval::from_integer(const mpz_class& n) {
    Interval r;
    mpfr_set_z(r.lo_.get(), n.get_mpz_t(), MPFR_RNDD);
    mpfr_set_z(r.hi_.get(), n.get_mpz_t(), MPFR_RNDU);
    return r;
}

Interval Interval::entire() {
    Interval r;
    mpfr_set_inf(r.lo_.get(), -1);
    mpfr_set_inf(r.hi_.get(), 1);
    return r;
}

Interval Interval::ln2() {
    Interval r;
    mpfr_const_log2(r.lo_.get(), MPFR_RNDD);
    mpfr_const_log2(r.hi_.get(), MPFR_RNDU);
    return r;
}

Interval Interval::ln3_over_2() {
    return log(Interval::from_rational(mpq_class(3, 2)));
}

double Interval::mid() const {
    Real m;
    mpfr_add(m.get(), lo_.get(), hi_.get(), MPFR_RNDN);
    mpfr_div_2ui(m.get(), m.get(), 1, MPFR_RNDN);
    return m.to_double(MPFR_RNDN);
}

double Interval::width() const {
    Real w;
    mpfr_sub(w.get(), hi_.get(), lo_.get(), MPFR_RNDU);
    return w.to_double(MPFR_RNDU);
}

bool Interval::is_finite() const {
    return mpfr_number_p(lo_.get()) && mpfr_number_p(hi_.get());
}

bool Interval::contains(double x) const {
    return mpfr_cmp_d(lo_.get(), x) <= 0 && mpfr_cmp_d(hi_.get(), x) >= 0;
}

bool Interval::contains(const Interval& other) const {
    return mpfr_lessequal_p(lo_.get(), other.lo_.get()) &&
           mpfr_greaterequal_p(hi_.get(), other.hi_.get());
}

bool Interval::overlaps(const Interval& other) const {
    return mpfr_lessequal_p(lo_.get(), other.hi_.get()) &&
           mpfr_lessequal_p(other.lo_.get(), hi_.get());
}

Interval& Interval::operator+=(const Interval& o) {
    mpfr_add(lo_.get(), lo_.get(), o.lo_.get(), MPFR_RNDD);
    mpfr_add(hi_.get(), hi_.get(), o.hi_.get(), MPFR_RNDU);
    return *this;
}

Interval& Interval::operator-=(const Interval& o) {
    Real lo, hi;
    mpfr_sub(lo.get(), lo_.get(), o.hi_.get(), MPFR_RNDD);
    mpfr_sub(hi.get(), hi_.get(), o.lo_.get(), MPFR_RNDU);
    lo_ = std::move(lo);
    hi_ = std::move(hi);
    return *this;
}

Interval& Interval::operator*=(const Interval& o) {
    mpfr_srcptr a[2] = {lo_.get(), hi_.get()};
    mpfr_srcptr b[2] = {o.lo_.get(), o.hi_.get()};
    Real lo, hi, t;
    bool first = true;
    for (auto x : a) {
        for (auto y : b) {
            mul_endpoint(t.get(), x, y, MPFR_RNDD);
            if (first || mpfr_less_p(t.get(), lo.get())) mpfr_set(lo.get(), t.get(), MPFR_RNDN);
            mul_endpoint(t.get(), x, y, MPFR_RNDU);
            if (first || mpfr_greater_p(t.get(), hi.get())) mpfr_set(hi.get(), t.get(), MPFR_RNDN);
            first = false;
        }
    }
    lo_ = std::move(lo);
    hi_ = std::move(hi);
    return *this;
}

Interval operator/(const Interval& a, const Interval& b) {
    if (mpfr_sgn(b.lo_.get()) <= 0 && mpfr_sgn(b.hi_.get()) >= 0) return Interval::entire();
    Interval inv;
    mpfr_ui_div(inv.lo_.get(), 1, b.hi_.get(), MPFR_RNDD);
    mpfr_ui_div(inv.hi_.get(), 1, b.lo_.get(), MPFR_RNDU);
    return a * inv;
}

Interval operator-(const Interval& a) {
    Interval r;
    mpfr_neg(r.lo_.get(), a.hi_.get(), MPFR_RNDN);
    mpfr_neg(r.hi_.get(), a.lo_.get(), MPFR_RNDN);
    return r;
}

std::string Interval::to_string() const {
    char buf[96];
    std::snprintf(buf, sizeof buf, "[%.17g, %.17g]", lower(), upper());
    return buf;
}

Interval sqr(const Interval& x) {
    Interval a = abs(x);
    Interval r;
    mpfr_sqr(r.lo().get(), a.lo().get(), MPFR_RNDD);
    mpfr_sqr(r.hi().get(), a.hi().get(), MPFR_RNDU);
    return r;
}

Interval abs(const Interval& x) {
    if (mpfr_sgn(x.lo().get()) >= 0) return x;
    if (mpfr_sgn(x.hi().get()) <= 0) return -x;
    Interval r;
    mpfr_set_zero(r.lo().get(), 1);
    if (mpfr_cmpabs(x.lo().get(), x.hi().get()) > 0)
        mpfr_abs(r.hi().get(), x.lo().get(), MPFR_RNDN);
    else
        mpfr_set(r.hi().get(), x.hi().get(), MPFR_RNDN);
    return r;
}

Interval sqrt(const Interval& x) {
    Interval r;
    if (mpfr_sgn(x.lo().get()) <= 0)
        mpfr_set_zero(r.lo().get(), 1);
    else
        mpfr_sqrt(r.lo().get(), x.lo().get(), MPFR_RNDD);
    if (mpfr_sgn(x.hi().get()) <= 0)
        mpfr_set_zero(r.hi().get(), 1);
    else
        mpfr_sqrt(r.hi().get(), x.hi().get(), MPFR_RNDU);
    return r;
}

Interval log(const Interval& x) {
    Interval r;
    if (mpfr_sgn(x.lo().get()) <= 0)
        mpfr_set_inf(r.lo().get(), -1);
    else
        mpfr_log(r.lo().get(), x.lo().get(), MPFR_RNDD);
    if (mpfr_sgn(x.hi().get()) <= 0)
        mpfr_set_inf(r.hi().get(), -1);
    else
        mpfr_log(r.hi().get(), x.hi().get(), MPFR_RNDU);
    return r;
}

Interval exp(const Interval& x) {
    Interval r;
    mpfr_exp(r.lo().get(), x.lo().get(), MPFR_RNDD);
    mpfr_exp(r.hi().get(), x.hi().get(), MPFR_RNDU);
    return r;
}

Interval ldexp(const Interval& x, long k) {
    Interval r = x;
    mpfr_mul_2si(r.lo().get(), r.lo().get(), k, MPFR_RNDD);
    mpfr_mul_2si(r.hi().get(), r.hi().get(), k, MPFR_RNDU);
    return r;
}

Interval max(const Interval& a, const Interval& b) {
    Interval r;
    mpfr_max(r.lo().get(), a.lo().get(), b.lo().get(), MPFR_RNDD);
    mpfr_max(r.hi().get(), a.hi().get(), b.hi().get(), MPFR_RNDU);
    return r;
}

Interval min(const Interval& a, const Interval& b) {
    Interval r;
    mpfr_min(r.lo().get(), a.lo().get(), b.lo().get(), MPFR_RNDD);
    mpfr_min(r.hi().get(), a.hi().get(), b.hi().get(), MPFR_RNDU);
    return r;
}

Interval hull(const Interval& a, const Interval& b) {
    Interval r;
    mpfr_min(r.lo().get(), a.lo().get(), b.lo().get(), MPFR_RNDD);
    mpfr_max(r.hi().get(), a.hi().get(), b.hi().get(), MPFR_RNDU);
    return r;
}

Interval pos_part(const Interval& x) { return max(x, Interval()); }

Interval intersect(const Interval& a, const Interval& b) {
    Interval r;
    mpfr_max(r.lo().get(), a.lo().get(), b.lo().get(), MPFR_RNDD);
    mpfr_min(r.hi().get(), a.hi().get(), b.hi().get(), MPFR_RNDU);
    return r;
}

bool certainly_less(const Interval& a, const Interval& b) {
    return mpfr_less_p(a.hi().get(), b.lo().get());
}

bool certainly_leq(const Interval& a, const Interval& b) {
    return mpfr_lessequal_p(a.hi().get(), b.lo().get());
}

CInterval operator*(const CInterval& a, const CInterval& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

CInterval operator/(const CInterval& a, const CInterval& b) {
    Interval n = norm2(b);
    CInterval num = a * CInterval{b.re, -b.im};
    return {num.re / n, num.im / n};
}

double CInterval::width() const { return std::max(re.width(), im.width()); }

CInterval sqr(const CInterval& z) {
    Interval two_re_im = ldexp(z.re * z.im, 1);
    return {sqr(z.re) - sqr(z.im), two_re_im};
}

CInterval pow(const CInterval& z, unsigned long n) {
    CInterval result{Interval(1.0), Interval()};
    CInterval base = z;
    while (n > 0) {
        if (n & 1UL) result = result * base;
        n >>= 1;
        if (n > 0) base = sqr(base);
    }
    return result;
}

Interval norm2(const CInterval& z) { return sqr(z.re) + sqr(z.im); }

Interval abs(const CInterval& z) { return sqrt(norm2(z)); }

Interval log_abs(const CInterval& z) { return ldexp(log(norm2(z)), -1); }

CInterval inflate(const CInterval& centre, const Interval& radius) {
    Interval r = abs(radius);
    Interval spread(0.0);
    mpfr_neg(spread.lo().get(), r.hi().get(), MPFR_RNDD);
    mpfr_set(spread.hi().get(), r.hi().get(), MPFR_RNDU);
    return {centre.re + spread, centre.im + spread};
}

CInterval hull(const CInterval& a, const CInterval& b) {
    return {hull(a.re, b.re), hull(a.im, b.im)};
}

}  // namespace pcfh
