#pragma once

#include <complex>
#include <map>
#include <span>
#include <vector>

#include "pcfh/arith.hpp"
#include "pcfh/poly.hpp"
#include "pcfh/roots.hpp"

namespace pcfh {

/// Critical points and branch values of f(z) = g(z^d).
///
/// The branch values of f are g(0) (when d >= 2) and the g(c_j) for the
/// critical points c_j of g.  Irrational branch values are never
/// materialised; they are known through the monic resultant R(y), whose
/// roots are exactly the g(c_j), and through complex enclosures.
struct CriticalData {
    /// Rational roots of f', with multiplicity, ascending.
    std::vector<Rational> rational_critical_points;
    /// Approximations of all roots of f', with multiplicity.
    std::vector<std::complex<double>> all_critical_points_numeric;
    /// Rational critical points of g, with multiplicity.
    std::vector<Rational> g_rational_critical_points;
    /// Distinct rational branch values, ascending; contains g(0) when d >= 2.
    std::vector<Rational> branch_values_exact;
    /// One box per cluster of irrational critical points of g, containing g(c).
    std::vector<CInterval> branch_value_enclosures;
    /// Monic in y with roots g(c_j) over every critical point of g (zero when m = 1).
    Poly branch_resultant;
    /// Same restricted to the irrational critical points of g.
    Poly irrational_branch_resultant;
    /// log max |beta|_v over all branch values, for the places requested.
    std::map<Place, LogSize> branch_value_sizes;
};

/// Monic R(y) proportional to Res_z(h(z), y - g(z)); its roots are g(c) for h(c) = 0.
/// Computed by exact interpolation of resultants over Q.
Poly image_resultant(const Poly& h, const MonicPoly& g);

CriticalData branch_data(const ComposedMap& F, std::span<const Place> places = {});

/// log max |beta|_v over all branch values beta of F.
LogSize branch_sup_log(const ComposedMap& F, const CriticalData& data, const Place& v);

/// Places where a coefficient of g or a branch value fails to be integral,
/// preceded by the archimedean place.  Every other place has lambda_crit = 0.
std::vector<Place> critical_places(const ComposedMap& F, const CriticalData& data);

}  // namespace pcfh
