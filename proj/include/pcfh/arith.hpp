#pragma once

#include <compare>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "pcfh/interval.hpp"
#include "pcfh/rational.hpp"

namespace pcfh {

/// An absolute value of Q: the archimedean one or p-adic for a prime p.
/// Orders archimedean first, then primes ascending.
class Place {
public:
    static Place infinity() { return Place(0); }
    /// Throws std::invalid_argument unless p is prime.
    static Place prime(unsigned long p);
    /// "inf" or a decimal prime.
    static Place parse(std::string_view text);

    bool is_archimedean() const { return p_ == 0; }
    unsigned long p() const { return p_; }
    std::string name() const;

    auto operator<=>(const Place&) const = default;

private:
    explicit Place(unsigned long p) : p_(p) {}
    unsigned long p_;
};

/// log|x|_v.  Non-archimedean sizes stay symbolic as coeff * log p.
class LogSize {
public:
    struct NegInfinity {};
    struct ExactNonArch {
        Rational coeff;
        unsigned long p;
    };
    struct ArchInterval {
        Interval value;
    };

    LogSize() : v_(NegInfinity{}) {}
    static LogSize neg_infinity() { return LogSize(); }
    static LogSize exact(Rational coeff, unsigned long p) { return LogSize(ExactNonArch{std::move(coeff), p}); }
    static LogSize arch(Interval value) { return LogSize(ArchInterval{std::move(value)}); }

    bool is_neg_infinity() const { return std::holds_alternative<NegInfinity>(v_); }
    bool is_exact() const { return std::holds_alternative<ExactNonArch>(v_); }
    bool is_arch() const { return std::holds_alternative<ArchInterval>(v_); }
    const ExactNonArch& exact_value() const { return std::get<ExactNonArch>(v_); }
    const Interval& arch_value() const { return std::get<ArchInterval>(v_).value; }

    /// Enclosure in natural-log units; [-inf, -inf] for NegInfinity.
    Interval to_interval() const;
    std::string to_string() const;

private:
    using Storage = std::variant<NegInfinity, ExactNonArch, ArchInterval>;
    explicit LogSize(Storage v) : v_(std::move(v)) {}
    Storage v_;
};

/// Larger of two sizes at the same place.
LogSize max(const LogSize& a, const LogSize& b);
/// max(0, x).  NegInfinity maps to 0 (exact at primes, a point interval otherwise).
LogSize log_plus(const LogSize& x, const Place& v);

/// Real value with half-width of a guaranteed enclosure.
struct HeightValue {
    double value = 0.0;
    double error = 0.0;

    static HeightValue from_interval(const Interval& x);
    double lower() const { return value - error; }
    double upper() const { return value + error; }
};

inline constexpr double kDefaultLogTolerance = 0x1p-40;

/// log|x|_v.  x = 0 gives NegInfinity.  Archimedean widths are far below `tol`
/// at kPrecision; `tol` below that is not honoured.
LogSize abs_log(const Rational& x, const Place& v, double tol = kDefaultLogTolerance);

/// log max_i |xs_i|_v.  Throws std::invalid_argument on an empty tuple.
LogSize tuple_sup_log(std::span<const Rational> xs, const Place& v);

/// Archimedean place followed by the primes dividing any numerator or
/// denominator of xs, ascending.
std::vector<Place> relevant_places(std::span<const Rational> xs);
/// Archimedean place followed by primes dividing some denominator.
std::vector<Place> denominator_places(std::span<const Rational> xs);

/// Affine Weil height sum_v log+ ||xs||_v as an interval.
Interval height_interval(std::span<const Rational> xs);
HeightValue height(std::span<const Rational> xs);

}  // namespace pcfh
