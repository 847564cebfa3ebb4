#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pcfh/critical.hpp"
#include "pcfh/dynamics.hpp"
#include "pcfh/poly.hpp"
#include "pcfh/rng.hpp"

namespace pcfh {

enum class PcfVerdict { PCF, NotPCF, Inconclusive };
std::string to_string(PcfVerdict v);

/// Escape of an irrational branch value, certified through its size.
struct IrrationalEscape {
    Place place = Place::infinity();
    /// Certified lower bound for G at the branch value.
    Interval green_lower;
};

struct CriticalOrbit {
    std::string point;
    /// 0: the orbit starts at the critical point; 1: it starts at its image.
    int offset = 0;
    std::optional<OrbitResult> orbit;
    std::optional<IrrationalEscape> escape;
};

struct PcfCertificate {
    PcfVerdict verdict = PcfVerdict::Inconclusive;
    std::vector<CriticalOrbit> per_critical_point;
    /// Union of forward orbits of the branch values; present for PCF maps.
    std::optional<std::vector<Rational>> postcritical_set;
};

PcfCertificate certify_pcf(const ComposedMap& F, long cap = kDefaultOrbitCap);
PcfCertificate certify_pcf(const ComposedMap& F, const CriticalData& data, long cap = kDefaultOrbitCap);

struct EnumerationRow {
    unsigned d = 2;
    Rational c;
    bool pcf = false;
    /// Orbit of the critical point 0.
    OrbitResult orbit;
};

/// Largest N with N^(d-1) <= 2: the integer form of h(c) <= log 2 / (d-1).
long unicritical_bound(unsigned d);
/// c = p/q in lowest terms with max(|p|, q) <= N, ordered by numerator then denominator.
std::vector<Rational> height_box(long N);

/// Every candidate with h(c) <= log 2/(d-1), each with an exact verdict.
std::vector<EnumerationRow> unicritical_enumerate(unsigned d, long cap = kDefaultOrbitCap);

/// certify_pcf over the box max(|p|, q) <= N.  Rows come back in height_box
/// order in both versions.  The serial one is the reference for tests.
std::vector<EnumerationRow> unicritical_box_scan(unsigned d, long N, long cap = kDefaultOrbitCap);
std::vector<EnumerationRow> unicritical_box_scan_serial(unsigned d, long N, long cap = kDefaultOrbitCap);

struct SweepRow {
    unsigned d;
    std::vector<Rational> pcf;
};

/// unicritical_enumerate for d = 2..d_max.  Throws std::logic_error if some
/// PCF parameter has height above log 2.
std::vector<SweepRow> unicritical_sweep(unsigned d_max, long cap = kDefaultOrbitCap);

// ---------------------------------------------------------------------------
// Lemma 3 and Theorem 1 experiments

inline constexpr double kC4SafetyMargin = 1.0;

/// Archimedean C3(m): the largest of (m/(m-1)) C1 + C2/m, (m/(2m-1)) log 2 and
/// (m C1 + C2 + C4 + log m)/(m-1), where C4 = c4_empirical + kC4SafetyMargin.
/// Empirical because C4 is.
Interval c3_arch(unsigned m, double c4_empirical);

struct Lemma3Result {
    GreenValue lambda;
    /// Certified lower bound for lambda_crit,v.
    Interval lambda_lower;
    /// (1/d)(log+ ||a||_v - C3)
    Interval rhs;
    bool holds = false;
};

Lemma3Result lemma3_check(const MonicPoly& g, unsigned d, const Place& v, const Interval& c3,
                          const GreenOptions& opts = {});

struct Lemma3SuiteResult {
    unsigned m = 2, d = 2;
    long samples = 0;
    long failures = 0;
    /// Per place: number of samples where the right-hand side was positive.
    std::map<Place, long> nontrivial;
};

/// Random monic g with rational roots, |num|, den <= max_entry.  C3 is 0 at
/// primes (which must exceed m) and c3_arch at the archimedean place.
Lemma3SuiteResult lemma3_suite(unsigned m, unsigned d, std::span<const Place> places, long samples, std::uint64_t seed,
                               const Interval& c3_archimedean, long max_entry = 100, const GreenOptions& opts = {});

struct PsiReport {
    unsigned m = 2;
    std::uint64_t seed = 0;
    long samples = 0;
    long used = 0;
    /// Empirical infimum of max_j log|psi(c_j)| - m log||c||.
    double inf_gap = 0.0;
    /// -inf_gap
    double c4_estimate = 0.0;
    std::optional<MonicPoly> worst;
};

/// max_j log|psi(c_j)| - m log||c|| at the archimedean place with
/// psi = (g - g(0))/m; empty when every critical point is 0.
std::optional<Interval> psi_gap(const MonicPoly& g);

PsiReport psi_bound_experiment(unsigned m, long samples, std::uint64_t seed);

struct Theorem1Sample {
    int level = 0;
    std::vector<Rational> roots;
    HeightValue h_a;
    HeightValue h_g;
    /// Certified lower bound on the critical height.
    double crit_lower = 0.0;
    /// h(a) - d * crit_lower, taking the upper end of h(a).
    double deficit = 0.0;
    PcfFlag flag = PcfFlag::Inconclusive;
};

struct Theorem1Level {
    int level = 0;
    long samples = 0;
    double max_deficit = 0.0;
    double mean_deficit = 0.0;
    double mean_h_a = 0.0;
};

struct Theorem1Report {
    unsigned m = 2, d = 2;
    std::uint64_t seed = 0;
    std::vector<Theorem1Level> levels;
    /// Running maximum of the deficit.
    double c_emp = 0.0;
    std::vector<Theorem1Sample> samples;
};

/// Roots p_i/q_i with |p_i|, q_i <= round(e^level), the first root attaining it.
std::vector<Rational> sample_roots(Rng& rng, unsigned m, int level);

Theorem1Report theorem1_experiment(unsigned m, unsigned d, const std::vector<int>& levels, long samples,
                                   std::uint64_t seed, const GreenOptions& opts = {});
Theorem1Sample theorem1_sample(const std::vector<Rational>& roots, unsigned d, int level, const GreenOptions& opts = {});

}  // namespace pcfh
