#pragma once

#include <complex>
#include <vector>

#include "pcfh/arith.hpp"
#include "pcfh/poly.hpp"

namespace pcfh {

/// A connected group of inclusion disks; it contains exactly `count` roots
/// (counted without multiplicity, since enclosure works on the squarefree part).
struct RootCluster {
    CInterval box;
    /// Enclosure of |r| valid for every root r in the cluster.
    Interval modulus;
    int count = 1;
};

struct RootEnclosures {
    std::vector<RootCluster> clusters;
    /// Enclosure of max |r| over all roots; [0,0] when there are none.
    Interval max_modulus;
    /// Any root equals zero exactly.
    bool has_zero_root = false;
};

/// Floating-point root approximations (Aberth iteration in long double).
std::vector<std::complex<long double>> approximate_roots(const Poly& p);

/// Validated enclosures of the distinct complex roots of p (p nonconstant).
/// Disks come from Gerschgorin applied to the Weierstrass matrix, so each
/// connected component of k disks holds exactly k roots.
RootEnclosures enclose_roots(const Poly& p);

/// log max_i |a_i|_v over the roots of g.
LogSize root_sup_log(const MonicPoly& g, const Place& v);
/// Same for an arbitrary nonconstant polynomial.
LogSize root_sup_log(const Poly& p, const Place& v);

}  // namespace pcfh
