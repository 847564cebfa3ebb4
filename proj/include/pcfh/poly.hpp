#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pcfh/interval.hpp"
#include "pcfh/rational.hpp"

namespace pcfh {

/// Dense univariate polynomial over Q, constant term first, no trailing zeros.
class Poly {
public:
    Poly() = default;
    explicit Poly(std::vector<Rational> coeffs);
    static Poly constant(Rational c);
    static Poly monomial(Rational c, std::size_t k);
    /// prod (z - r_i)
    static Poly from_roots(std::span<const Rational> roots);

    /// -1 for the zero polynomial.
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<Rational>& coeffs() const { return c_; }
    /// Coefficient of z^i, zero past the degree.
    Rational coeff(std::size_t i) const { return i < c_.size() ? c_[i] : Rational(0); }
    const Rational& leading() const { return c_.back(); }

    Rational operator()(const Rational& x) const;
    CInterval operator()(const CInterval& z) const;

    Poly derivative() const;
    Poly monic() const;
    /// Primitive integer model: same roots, integer coefficients with gcd 1, positive leading.
    std::vector<Integer> primitive_integer_coeffs() const;

    friend Poly operator+(const Poly& a, const Poly& b);
    friend Poly operator-(const Poly& a, const Poly& b);
    friend Poly operator*(const Poly& a, const Poly& b);
    friend Poly operator*(const Rational& s, const Poly& a);
    friend bool operator==(const Poly& a, const Poly& b) = default;

    std::string to_string() const;

private:
    void trim();
    std::vector<Rational> c_;
};

/// Euclidean division; throws std::invalid_argument when b is zero.
void divmod(const Poly& a, const Poly& b, Poly& q, Poly& r);
Poly operator/(const Poly& a, const Poly& b);
Poly operator%(const Poly& a, const Poly& b);
/// Monic gcd (zero when both are zero).
Poly gcd(const Poly& a, const Poly& b);
/// Monic polynomial with the same roots, each simple.
Poly squarefree_part(const Poly& p);
Rational resultant(const Poly& a, const Poly& b);

/// z^m + sum coefficients[i] z^i with the leading 1 implicit.
class MonicPoly {
public:
    /// lower_coeffs has length m >= 1.
    explicit MonicPoly(std::vector<Rational> lower_coeffs);
    static MonicPoly from_roots(std::span<const Rational> roots);
    /// Throws std::invalid_argument unless p is monic of degree >= 1.
    static MonicPoly from_poly(const Poly& p);

    int degree() const { return static_cast<int>(c_.size()); }
    const std::vector<Rational>& lower_coefficients() const { return c_; }
    Poly to_poly() const;

    Rational operator()(const Rational& x) const;
    CInterval operator()(const CInterval& z) const;

    friend bool operator==(const MonicPoly& a, const MonicPoly& b) = default;

private:
    std::vector<Rational> c_;
};

/// Parses the JSON polynomial format ["-2","0"] (constant first, leading 1
/// implicit).  Integer JSON numbers are accepted as well.  Throws
/// std::invalid_argument naming the offending token.
MonicPoly parse_monic_poly(std::string_view json);
std::string to_json(const MonicPoly& g);

/// f(z) = g(z^d).
class ComposedMap {
public:
    /// Throws std::invalid_argument unless d >= 1 and d * deg(g) >= 2.
    ComposedMap(MonicPoly g, unsigned d);

    const MonicPoly& g() const { return g_; }
    unsigned d() const { return d_; }
    unsigned m() const { return static_cast<unsigned>(g_.degree()); }
    /// Total degree D = d * m.
    unsigned degree() const { return d_ * m(); }

    Rational operator()(const Rational& z) const;
    CInterval operator()(const CInterval& z) const;

private:
    MonicPoly g_;
    unsigned d_;
};

MonicPoly compose_power(const MonicPoly& g, unsigned d);
Poly derivative(const MonicPoly& f);

/// Roots in Q with multiplicity, ascending.  Throws on the zero polynomial.
std::vector<Rational> rational_roots(const Poly& p);

}  // namespace pcfh
