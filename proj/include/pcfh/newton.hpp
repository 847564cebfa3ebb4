#pragma once

#include <optional>
#include <vector>

#include "pcfh/arith.hpp"
#include "pcfh/poly.hpp"

namespace pcfh {

/// Lower convex hull of the points (i, v(c_i)).  A segment of slope s and
/// horizontal length k stands for k roots of valuation -s, i.e. of log-size
/// s in units of the place's log.
struct NewtonPolygon {
    struct Vertex {
        long index;
        Rational valuation;
    };
    struct Slope {
        Rational slope;
        long multiplicity;
    };

    std::vector<Vertex> vertices;
    /// Nondecreasing.
    std::vector<Slope> slopes;
    /// Roots equal to zero (leading run of zero coefficients).
    long zero_roots = 0;

    /// Largest root log-size; empty when every root is zero.
    std::optional<Rational> max_slope() const;
    long degree() const;
};

/// Hull of points (i, valuations[i]); nullopt marks a zero coefficient.
/// The last entry must be present.
NewtonPolygon newton_polygon(const std::vector<std::optional<Rational>>& valuations);
/// Newton polygon of p at a prime.  Throws on the zero polynomial.
NewtonPolygon newton_polygon(const Poly& p, unsigned long prime);

}  // namespace pcfh
