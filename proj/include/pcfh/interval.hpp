#pragma once

#include <mpfr.h>
#include <gmpxx.h>

#include <string>

namespace pcfh {

/// Working precision (bits of significand) for all archimedean enclosures.
inline constexpr mpfr_prec_t kPrecision = 256;

/// RAII holder for an mpfr_t at kPrecision.
class Real {
public:
    Real();
    explicit Real(double x);
    Real(const Real& other);
    Real(Real&& other) noexcept;
    Real& operator=(const Real& other);
    Real& operator=(Real&& other) noexcept;
    ~Real();

    mpfr_ptr get() { return value_; }
    mpfr_srcptr get() const { return value_; }

    double to_double(mpfr_rnd_t rnd) const { return mpfr_get_d(value_, rnd); }

private:
    mpfr_t value_;
};

/// Closed real interval [lo, hi] with outward-rounded arithmetic.
/// Endpoints may be infinite; NaN never appears in a well-formed interval.
class Interval {
public:
    Interval();  // [0, 0]
    explicit Interval(double x);
    Interval(double lo, double hi);

    static Interval from_rational(const mpq_class& q);
    static Interval from_integer(const mpz_class& n);
    static Interval entire();
    static Interval ln2();
    static Interval ln3_over_2();

    const Real& lo() const { return lo_; }
    const Real& hi() const { return hi_; }
    Real& lo() { return lo_; }
    Real& hi() { return hi_; }

    double lower() const { return lo_.to_double(MPFR_RNDD); }
    double upper() const { return hi_.to_double(MPFR_RNDU); }
    double mid() const;
    /// Width rounded upward to a double.
    double width() const;

    bool is_finite() const;
    bool contains(double x) const;
    bool contains(const Interval& other) const;
    bool overlaps(const Interval& other) const;
    bool certainly_positive() const { return mpfr_sgn(lo_.get()) > 0; }
    bool certainly_nonnegative() const { return mpfr_sgn(lo_.get()) >= 0; }

    Interval& operator+=(const Interval& o);
    Interval& operator-=(const Interval& o);
    Interval& operator*=(const Interval& o);

    friend Interval operator+(Interval a, const Interval& b) { return a += b; }
    friend Interval operator-(Interval a, const Interval& b) { return a -= b; }
    friend Interval operator*(Interval a, const Interval& b) { return a *= b; }
    friend Interval operator/(const Interval& a, const Interval& b);
    friend Interval operator-(const Interval& a);

    std::string to_string() const;

private:
    Real lo_;
    Real hi_;
};

Interval sqr(const Interval& x);
Interval abs(const Interval& x);
Interval sqrt(const Interval& x);
Interval log(const Interval& x);
Interval exp(const Interval& x);
/// Scale by a power of two exactly (k may be negative).
Interval ldexp(const Interval& x, long k);
Interval max(const Interval& a, const Interval& b);
Interval min(const Interval& a, const Interval& b);
Interval hull(const Interval& a, const Interval& b);
/// max(0, x) applied endpointwise.
Interval pos_part(const Interval& x);
/// Intersection; the caller guarantees the operands overlap.
Interval intersect(const Interval& a, const Interval& b);

/// a.hi < b.lo
bool certainly_less(const Interval& a, const Interval& b);
/// a.hi <= b.lo
bool certainly_leq(const Interval& a, const Interval& b);

/// Rectangular complex interval.
struct CInterval {
    Interval re;
    Interval im;

    CInterval() = default;
    CInterval(Interval r, Interval i) : re(std::move(r)), im(std::move(i)) {}
    static CInterval from_rational(const mpq_class& q) {
        return {Interval::from_rational(q), Interval()};
    }

    friend CInterval operator+(const CInterval& a, const CInterval& b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend CInterval operator-(const CInterval& a, const CInterval& b) {
        return {a.re - b.re, a.im - b.im};
    }
    friend CInterval operator*(const CInterval& a, const CInterval& b);
    friend CInterval operator/(const CInterval& a, const CInterval& b);

    bool is_finite() const { return re.is_finite() && im.is_finite(); }
    /// Larger of the two component widths.
    double width() const;
};

CInterval sqr(const CInterval& z);
CInterval pow(const CInterval& z, unsigned long n);
/// |z|^2
Interval norm2(const CInterval& z);
Interval abs(const CInterval& z);
/// log|z|, lower end -inf when the box touches 0.
Interval log_abs(const CInterval& z);
/// Smallest box containing the disk centred in `centre` with radius `radius`.
CInterval inflate(const CInterval& centre, const Interval& radius);
CInterval hull(const CInterval& a, const CInterval& b);

}  // namespace pcfh
