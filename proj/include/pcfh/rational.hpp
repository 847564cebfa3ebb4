#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace pcfh {

using Integer = mpz_class;
/// Always canonical: gcd(num, den) = 1, den >= 1, zero is 0/1.
using Rational = mpq_class;

/// Parses "p/q" or "p" with optional leading minus and no whitespace.
/// Throws std::invalid_argument naming the offending text.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& x);

/// v_p(n) for n != 0.
long valuation(const Integer& n, unsigned long p);
/// v_p(x) for x != 0.
long valuation(const Rational& x, unsigned long p);

bool is_prime(unsigned long p);
bool is_prime(const Integer& n);

/// Distinct prime factors of |n|, ascending. n = 0 and |n| = 1 give {}.
std::vector<Integer> prime_factors(const Integer& n);

/// Exact integer k-th root of a perfect power, if any (sign handled for odd k).
bool exact_root(const Integer& n, unsigned long k, Integer& root);
/// Rational k-th root when x is a perfect k-th power in Q.
bool exact_root(const Rational& x, unsigned long k, Rational& root);

struct RationalHash {
    std::size_t operator()(const Rational& x) const;
};

}  // namespace pcfh
