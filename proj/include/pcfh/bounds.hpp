#pragma once

#include <span>
#include <stdexcept>

#include "pcfh/arith.hpp"
#include "pcfh/poly.hpp"

namespace pcfh {

/// Raised when a local constant is not available at the requested place
/// (p-adic places with p <= deg g).
class UnsupportedPlace : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Archimedean root-gap constant: every root a of a monic g of degree m obeys
/// |a| <= max(||c||, |g(0)|^(1/m)) / (2^(1/m) - 1), and ||c||, |g(0)|^(1/m) <= ||a||
/// by Gauss-Lucas.  Hence C1(m) = -log(2^(1/m) - 1).
Interval c1_arch(unsigned m);
/// v_p(m) log p: critical points satisfy |c|_p <= |1/m|_p ||a||_p.
Interval c1_prime(unsigned m, unsigned long p);
/// Basin offset: (m/(m-1)) log 2 at the archimedean place, 0 elsewhere.
Interval c2(unsigned m, const Place& v);
/// (m/(dm-1)) log 2 and (m/(dm-1)) log(3/2): the archimedean escape error bracket.
Interval epsilon_below(unsigned m, unsigned d);
Interval epsilon_above(unsigned m, unsigned d);

/// | log||a||_v - log max(||c||_v, |g(0)|_v^(1/m)) | for the roots a and
/// critical points c of g.  Exact at primes p > m.  Throws UnsupportedPlace
/// for primes p <= m and std::invalid_argument when m < 2.
LogSize lemma1_gap(const MonicPoly& g, const Place& v);

struct CoeffHeightCheck {
    HeightValue h_g;
    HeightValue h_a;
    /// h(g) <= deg(g) * (h(a) + log 2), decided with enclosures.
    bool holds = false;
};

/// g is built from its roots, so it factors completely over Q.
CoeffHeightCheck coeff_height_bound_check(std::span<const Rational> roots);

}  // namespace pcfh
