#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pcfh/dynamics.hpp"
#include "pcfh/rational.hpp"

namespace pcfh {

/// Raised when an operation needs deg(g) < p (or d >= 2) and the family breaks it.
class HypothesisViolation : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Polynomial over F_p, constant first, no trailing zeros.
class FpPoly {
public:
    FpPoly() = default;
    FpPoly(unsigned p, std::vector<long> coeffs);
    static FpPoly constant(unsigned p, long c) { return FpPoly(p, {c}); }
    static FpPoly x(unsigned p) { return FpPoly(p, {0, 1}); }
    /// Monic of degree k whose lower coefficients are the base-p digits of index.
    static FpPoly monic_from_index(unsigned p, unsigned k, std::uint64_t index);

    unsigned p() const { return p_; }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<std::uint32_t>& coeffs() const { return c_; }
    std::uint32_t coeff(std::size_t i) const { return i < c_.size() ? c_[i] : 0; }
    std::uint32_t leading() const { return c_.back(); }
    /// sum c_i p^i
    std::uint64_t index() const;
    FpPoly monic() const;
    FpPoly derivative() const;

    friend FpPoly operator+(const FpPoly& a, const FpPoly& b);
    friend FpPoly operator-(const FpPoly& a, const FpPoly& b);
    friend FpPoly operator*(const FpPoly& a, const FpPoly& b);
    friend bool operator==(const FpPoly& a, const FpPoly& b) { return a.c_ == b.c_; }
    friend auto operator<=>(const FpPoly& a, const FpPoly& b) {
        if (a.c_.size() != b.c_.size()) return a.c_.size() <=> b.c_.size();
        return std::lexicographical_compare_three_way(a.c_.rbegin(), a.c_.rend(), b.c_.rbegin(), b.c_.rend());
    }
    std::string to_string(char var = 't') const;

private:
    void trim();
    unsigned p_ = 2;
    std::vector<std::uint32_t> c_;
};

std::uint32_t inverse_mod(std::uint32_t a, unsigned p);
void divmod(const FpPoly& a, const FpPoly& b, FpPoly& q, FpPoly& r);
FpPoly operator/(const FpPoly& a, const FpPoly& b);
FpPoly operator%(const FpPoly& a, const FpPoly& b);
/// Monic gcd.
FpPoly gcd(const FpPoly& a, const FpPoly& b);
FpPoly powmod(const FpPoly& base, std::uint64_t e, const FpPoly& mod);
bool is_irreducible(const FpPoly& f);
/// First monic irreducible of degree k in index order.
FpPoly first_irreducible(unsigned p, unsigned k);
/// Monic irreducible factors with multiplicity, ascending.
std::vector<std::pair<FpPoly, int>> factor(const FpPoly& f);
/// Largest e with pi^e | f (f nonzero).
int order_at(const FpPoly& f, const FpPoly& pi);

/// F_{p^k} = F_p[x]/(modulus) with the modulus from first_irreducible.
/// Element i is the polynomial with base-p digits of i as coefficients, so
/// 0..p-1 are the prime field and elements enumerate in lexicographic order.
class FqField {
public:
    using Elem = std::uint32_t;
    FqField(unsigned p, unsigned k);

    unsigned p() const { return p_; }
    unsigned k() const { return k_; }
    std::uint32_t size() const { return q_; }
    const FpPoly& modulus() const { return modulus_; }
    Elem generator() const { return exp_[1]; }

    Elem add(Elem a, Elem b) const;
    Elem neg(Elem a) const;
    Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }
    Elem mul(Elem a, Elem b) const;
    Elem inv(Elem a) const;
    Elem pow(Elem a, std::uint64_t e) const;
    Elem from_int(long c) const;
    /// Value of an F_p[t] polynomial at t = t0.
    Elem eval(const FpPoly& f, Elem t0) const;
    FpPoly to_poly(Elem a) const;
    Elem from_poly(const FpPoly& f) const;

private:
    unsigned p_, k_;
    std::uint32_t q_;
    FpPoly modulus_;
    std::vector<Elem> exp_;
    std::vector<std::uint32_t> log_;
    // zech_[n] = log(1 + g^n), or -1 when that sum is 0
    std::vector<std::int64_t> zech_;
};

/// Element of F_p(t) in lowest terms with monic denominator.
class FFRat {
public:
    FFRat() = default;
    FFRat(FpPoly num);
    FFRat(FpPoly num, FpPoly den);
    static FFRat from_int(unsigned p, long c) { return FFRat(FpPoly::constant(p, c)); }

    unsigned p() const { return num_.p(); }
    const FpPoly& num() const { return num_; }
    const FpPoly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    /// Lies in F_p.
    bool is_constant() const { return num_.degree() <= 0 && den_.degree() == 0; }

    friend FFRat operator+(const FFRat& a, const FFRat& b);
    friend FFRat operator-(const FFRat& a, const FFRat& b);
    friend FFRat operator*(const FFRat& a, const FFRat& b);
    friend FFRat operator/(const FFRat& a, const FFRat& b);
    friend bool operator==(const FFRat& a, const FFRat& b) = default;
    friend auto operator<=>(const FFRat& a, const FFRat& b) {
        if (auto c = a.num_ <=> b.num_; c != 0) return c;
        return a.den_ <=> b.den_;
    }
    std::string to_string() const;

private:
    FpPoly num_;
    FpPoly den_;
};

/// Degree valuation at infinity or the pi-adic valuation.
class FFPlace {
public:
    static FFPlace infinity() { return FFPlace(std::nullopt); }
    /// Throws unless pi is monic irreducible.
    static FFPlace finite(FpPoly pi);
    bool is_infinity() const { return !pi_; }
    const FpPoly& pi() const { return *pi_; }
    /// deg pi, or 1 at infinity.
    int degree() const { return pi_ ? pi_->degree() : 1; }
    std::string name() const;
    friend bool operator==(const FFPlace& a, const FFPlace& b) = default;

private:
    explicit FFPlace(std::optional<FpPoly> pi) : pi_(std::move(pi)) {}
    std::optional<FpPoly> pi_;
};

/// log|x|_v in units of log p; empty for x = 0.
/// Infinity: deg num - deg den.  Finite(pi): -ord_pi(x) deg pi.
std::optional<Rational> ff_abs_log(const FFRat& x, const FFPlace& v);

/// Infinity followed by the finite places dividing some denominator.
std::vector<FFPlace> ff_pole_places(const std::vector<FFRat>& xs);
/// Infinity followed by the finite places dividing some numerator or denominator.
std::vector<FFPlace> ff_support_places(const std::vector<FFRat>& xs);

/// f(z) = g(z^d) with g monic in z over F_p(t).  The constructor only needs
/// d >= 1 and D >= 2; the Green and family tests also need deg g < p and d >= 2.
class CharPFamily {
public:
    CharPFamily(unsigned p, std::vector<FFRat> g_lower, unsigned d);
    unsigned p() const { return p_; }
    unsigned d() const { return d_; }
    unsigned m() const { return static_cast<unsigned>(g_.size()); }
    unsigned degree() const { return d_ * m(); }
    const std::vector<FFRat>& g_lower() const { return g_; }
    FFRat g(const FFRat& w) const;
    FFRat operator()(const FFRat& z) const;
    /// deg(g) < p and d >= 2.
    void require_hypothesis() const;
    std::string to_string() const;

private:
    unsigned p_;
    std::vector<FFRat> g_;
    unsigned d_;
};

/// JSON list over z-coefficients (constant first, leading 1 implicit); each is
/// [num] or [num, den] with num, den integer arrays of t-coefficients mod p.
CharPFamily parse_charp_family(unsigned p, std::string_view json, unsigned d);

/// log+ max |a_i|_v over the roots of g, from the Newton polygon of g.
Rational ff_root_sup_log_plus(const CharPFamily& F, const FFPlace& v);

GreenValue ff_green(const CharPFamily& F, const FFRat& z0, const FFPlace& v, long cap = 64);

struct FamilyTestResult {
    bool not_pcf = false;
    std::optional<FFPlace> witness;
    /// log+ ||a||_witness / (d m), in units of log p.
    Rational bound;
    /// log+ ||a||_v at each place of the support.
    std::vector<std::pair<FFPlace, Rational>> sizes;
};

/// Throws HypothesisViolation unless deg g < p and d >= 2.
FamilyTestResult ff_family_pcf_test(const CharPFamily& F);

struct CriticalPointSet {
    enum class Kind { Points, NoAffineCritical, Inseparable };
    Kind kind = Kind::Points;
    /// (point, multiplicity), ascending.
    std::vector<std::pair<FqField::Elem, int>> points;
};

/// Over F_q: f given by all coefficients (constant first).
CriticalPointSet charp_critical_points(const FqField& K, const std::vector<FqField::Elem>& f);

enum class DerivativeKind { Inseparable, NonzeroConstant, NonConstant };
/// Over F_p(t): classifies f' for f = g(z^d).
DerivativeKind charp_derivative_kind(const CharPFamily& F);

/// Size of the union of forward orbits of the critical values.
std::size_t postcritical_size(const FqField& K, const std::vector<FqField::Elem>& f);
/// Reachability over the whole functional graph; the reference for postcritical_size.
std::size_t postcritical_size_bruteforce(const FqField& K, const std::vector<FqField::Elem>& f);

/// Coefficients of the specialisation f_{t0}; empty when t0 is a pole.
std::vector<FqField::Elem> specialize(const CharPFamily& F, const FqField& K, FqField::Elem t0);

struct ScanRow {
    unsigned k = 1;
    std::uint64_t field_size = 0;
    /// Specialisations evaluated.
    std::uint64_t count = 0;
    std::size_t max_size = 0;
    double mean_size = 0.0;
    bool sampled = false;
    std::uint64_t poles = 0;
    std::uint64_t inseparable = 0;
    /// Specialisations with no affine critical point.
    std::uint64_t no_critical = 0;
};

struct ScanReport {
    std::vector<ScanRow> rows;
    /// deg f is divisible by p.
    bool degree_divisible_by_p = false;
    std::string note;
};

/// Exhaustive over t0 in F_{p^k} while p^k <= budget, otherwise `budget`
/// uniform samples drawn with seed.
ScanReport specialization_scan(const CharPFamily& F, unsigned k_max, std::uint64_t budget = 1u << 16,
                               std::uint64_t seed = 1);
ScanReport specialization_scan_serial(const CharPFamily& F, unsigned k_max, std::uint64_t budget = 1u << 16,
                                      std::uint64_t seed = 1);

}  // namespace pcfh
