#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "pcfh/interval.hpp"
#include "pcfh/rational.hpp"
#include "pcfh/rng.hpp"

namespace pcfh::testing {

/// Random rational with |num| <= max_num and 1 <= den <= max_den.
inline Rational random_rational(Rng& rng, long max_num, long max_den) {
    long n = rng.uniform(-max_num, max_num);
    long d = rng.uniform(1, max_den);
    Rational q(n, d);
    q.canonicalize();
    return q;
}

/// x lies within tol of the enclosure (doubles cannot hit a 256-bit interval).
inline bool near(const Interval& iv, double x, double tol = 1e-14) {
    return iv.lower() - tol <= x && x <= iv.upper() + tol;
}

inline Rational random_nonzero_rational(Rng& rng, long max_num, long max_den) {
    for (;;) {
        Rational q = random_rational(rng, max_num, max_den);
        if (q != 0) return q;
    }
}

}  // namespace pcfh::testing
