#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "pcfh/arith.hpp"
#include "pcfh/critical.hpp"
#include "pcfh/poly.hpp"

namespace pcfh {

inline constexpr long kDefaultOrbitCap = 10000;
inline constexpr double kDefaultGreenTolerance = 1e-9;
/// Exact iteration gives up once an iterate needs more bits than this.
inline constexpr std::size_t kDefaultBitBudget = 1 << 20;

struct Preperiodic {
    long tail = 0;
    long period = 1;
    /// z_0 ... z_{tail+period-1}, pairwise distinct.
    std::vector<Rational> orbit;
};

struct Escaping {
    Place place = Place::infinity();
    long escape_index = 0;
    Rational witness;
};

struct Capped {
    long iterations = 0;
};

using OrbitResult = std::variant<Preperiodic, Escaping, Capped>;

std::string describe(const OrbitResult& r);

/// Certified escape tests for one map.  At a prime p a point z escapes when
/// d * log|z|_p > log+ ||a||_p (a = roots of g).  At the archimedean place
/// the test is |z| > radius, with radius a rational upper bound for
/// exp((log+ ||a|| + C2) / d) when m >= 2 and 1 + max(1, |c|) for g = z + c.
class EscapeCriteria {
public:
    explicit EscapeCriteria(const ComposedMap& F);
    const ComposedMap& map() const { return F_; }
    const Rational& arch_radius() const { return arch_radius_; }
    /// Radius of the archimedean region where the Green bracket applies.
    const Rational& basin_radius() const { return basin_radius_; }
    /// log+ ||a||_p in units of log p.
    Rational nonarch_threshold(unsigned long p) const;
    bool escapes(const Rational& z, const Place& v) const;

private:
    ComposedMap F_;
    Rational arch_radius_;
    Rational basin_radius_;
};

/// T_v with d * log|z|_v > T_v certifying the basin condition.  For m = 1
/// the archimedean value is d * (log 2 + log+ |c|), i.e. |z| > 2 max(1, |c|).
LogSize escape_threshold(const ComposedMap& F, const Place& v);

/// Exact iteration.  Escape tests run at the archimedean place, then at the
/// primes dividing a denominator of z0 or of g, ascending.
OrbitResult orbit(const ComposedMap& F, const Rational& z0, long cap = kDefaultOrbitCap);
OrbitResult orbit(const EscapeCriteria& crit, const Rational& z0, long cap = kDefaultOrbitCap,
                  std::size_t bit_budget = kDefaultBitBudget);

/// G_{f,v}.  ArchInterval also carries real brackets at primes when the
/// value cannot be pinned down exactly; its upper end may be +inf.
class GreenValue {
public:
    enum class ZeroReason { PreperiodicOrbit, IntegralBounded };
    struct ExactNonArch {
        Rational coeff;
        unsigned long p;
    };
    struct ZeroCertified {
        ZeroReason reason;
    };
    struct ArchInterval {
        Interval value;
    };
    struct Undetermined {
        long iteration_cap;
        std::string note;
    };

    /// Undetermined with cap 0.
    GreenValue() : v_(Undetermined{0, {}}) {}
    static GreenValue exact(Rational coeff, unsigned long p) { return GreenValue(ExactNonArch{std::move(coeff), p}); }
    static GreenValue zero(ZeroReason r) { return GreenValue(ZeroCertified{r}); }
    static GreenValue bracket(Interval x) { return GreenValue(ArchInterval{std::move(x)}); }
    static GreenValue undetermined(long cap, std::string note = {}) {
        return GreenValue(Undetermined{cap, std::move(note)});
    }

    bool is_exact() const { return std::holds_alternative<ExactNonArch>(v_); }
    bool is_zero() const { return std::holds_alternative<ZeroCertified>(v_); }
    bool is_bracket() const { return std::holds_alternative<ArchInterval>(v_); }
    bool is_undetermined() const { return std::holds_alternative<Undetermined>(v_); }
    const ExactNonArch& exact_value() const { return std::get<ExactNonArch>(v_); }
    ZeroReason zero_reason() const { return std::get<ZeroCertified>(v_).reason; }
    const Interval& bracket_value() const { return std::get<ArchInterval>(v_).value; }
    const Undetermined& undetermined_value() const { return std::get<Undetermined>(v_); }

    /// Enclosure in natural-log units; [0, +inf] when undetermined.
    Interval to_interval() const;
    std::string to_string() const;

private:
    using Storage = std::variant<ExactNonArch, ZeroCertified, ArchInterval, Undetermined>;
    explicit GreenValue(Storage v) : v_(std::move(v)) {}
    Storage v_;
};

std::string to_string(GreenValue::ZeroReason r);

GreenValue green_nonarch(const ComposedMap& F, const Rational& z0, unsigned long p, long cap = kDefaultOrbitCap);

/// Validated iteration.  Each step gives a bracket, from the basin estimate
/// when the iterate is certainly in the basin and from the supremum of G
/// off the basin otherwise; brackets are intersected until the width is at
/// most tol or cap steps have run.
GreenValue green_arch(const ComposedMap& F, const CInterval& z0, double tol = kDefaultGreenTolerance,
                      long cap = kDefaultOrbitCap);
GreenValue green_arch(const ComposedMap& F, const Rational& z0, double tol = kDefaultGreenTolerance,
                      long cap = kDefaultOrbitCap);

/// Parses "a", "a+bi", "a-bi", "bi" with rational a, b.
CInterval parse_complex(std::string_view text);

struct GreenOptions {
    long cap = kDefaultOrbitCap;
    double tol = kDefaultGreenTolerance;
};

/// lambda_crit,v = (1/D) max over branch values beta of G_{f,v}(beta).
GreenValue local_crit_lambda(const ComposedMap& F, const CriticalData& data, const Place& v,
                             const GreenOptions& opts = {});
GreenValue local_crit_lambda(const ComposedMap& F, const Place& v, const GreenOptions& opts = {});

enum class PcfFlag { CertifiedPCF, CertifiedNotPCF, Inconclusive };
std::string to_string(PcfFlag f);

struct CritHeightReport {
    std::map<Place, GreenValue> per_place;
    Interval total_interval;
    HeightValue total;
    PcfFlag pcf_flag = PcfFlag::Inconclusive;
};

/// Places outside per_place contribute 0.  Per-place work runs in parallel.
CritHeightReport crit_height(const ComposedMap& F, const GreenOptions& opts = {});

}  // namespace pcfh
