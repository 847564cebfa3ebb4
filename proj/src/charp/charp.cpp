#include "pcfh/charp.hpp"

#include <omp.h>

#include <algorithm>
#include <json.hpp>
#include <numeric>
#include <set>
#include <sstream>

#include "pcfh/newton.hpp"
#include "pcfh/rng.hpp"

namespace pcfh {

namespace {

std::uint32_t reduce(long c, unsigned p) {
    long r = c % static_cast<long>(p);
    return static_cast<std::uint32_t>(r < 0 ? r + static_cast<long>(p) : r);
}

void check_same_field(const FpPoly& a, const FpPoly& b) {
    if (a.p() != b.p()) throw std::invalid_argument("polynomials over different prime fields");
}

std::uint64_t ipow(std::uint64_t b, unsigned e) {
    std::uint64_t r = 1;
    while (e--) r *= b;
    return r;
}

// Every monic irreducible of degree k, in index order.
std::vector<FpPoly> irreducibles(unsigned p, unsigned k) {
    std::vector<FpPoly> out;
    const std::uint64_t n = ipow(p, k);
    for (std::uint64_t i = 0; i < n; ++i) {
        FpPoly f = FpPoly::monic_from_index(p, k, i);
        if (is_irreducible(f)) out.push_back(std::move(f));
    }
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// F_p[t]

FpPoly::FpPoly(unsigned p, std::vector<long> coeffs) : p_(p) {
    if (p < 2) throw std::invalid_argument("FpPoly needs a prime p");
    c_.reserve(coeffs.size());
    for (long c : coeffs) c_.push_back(reduce(c, p));
    trim();
}

FpPoly FpPoly::monic_from_index(unsigned p, unsigned k, std::uint64_t index) {
    std::vector<long> c(k + 1, 0);
    for (unsigned i = 0; i < k; ++i) {
        c[i] = static_cast<long>(index % p);
        index /= p;
    }
    c[k] = 1;
    return FpPoly(p, c);
}

void FpPoly::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

std::uint64_t FpPoly::index() const {
    std::uint64_t r = 0;
    for (std::size_t i = c_.size(); i-- > 0;) r = r * p_ + c_[i];
    return r;
}

FpPoly FpPoly::monic() const {
    if (is_zero()) return *this;
    std::uint32_t inv = inverse_mod(leading(), p_);
    FpPoly r = *this;
    for (auto& c : r.c_) c = static_cast<std::uint32_t>((std::uint64_t(c) * inv) % p_);
    return r;
}

FpPoly FpPoly::derivative() const {
    FpPoly r;
    r.p_ = p_;
    for (std::size_t i = 1; i < c_.size(); ++i) r.c_.push_back(static_cast<std::uint32_t>((std::uint64_t(c_[i]) * (i % p_)) % p_));
    r.trim();
    return r;
}

FpPoly operator+(const FpPoly& a, const FpPoly& b) {
    check_same_field(a, b);
    FpPoly r = a.c_.size() >= b.c_.size() ? a : b;
    const FpPoly& s = a.c_.size() >= b.c_.size() ? b : a;
    for (std::size_t i = 0; i < s.c_.size(); ++i) r.c_[i] = (r.c_[i] + s.c_[i]) % r.p_;
    r.trim();
    return r;
}

FpPoly operator-(const FpPoly& a, const FpPoly& b) {
    check_same_field(a, b);
    FpPoly r = a;
    if (r.c_.size() < b.c_.size()) r.c_.resize(b.c_.size(), 0);
    for (std::size_t i = 0; i < b.c_.size(); ++i) r.c_[i] = (r.c_[i] + r.p_ - b.c_[i]) % r.p_;
    r.trim();
    return r;
}

FpPoly operator*(const FpPoly& a, const FpPoly& b) {
    check_same_field(a, b);
    FpPoly r;
    r.p_ = a.p_;
    if (a.is_zero() || b.is_zero()) return r;
    std::vector<std::uint64_t> acc(a.c_.size() + b.c_.size() - 1, 0);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
        if (a.c_[i] == 0) continue;
        for (std::size_t j = 0; j < b.c_.size(); ++j) acc[i + j] = (acc[i + j] + std::uint64_t(a.c_[i]) * b.c_[j]) % a.p_;
    }
    r.c_.assign(acc.begin(), acc.end());
    r.trim();
    return r;
}

std::string FpPoly::to_string(char var) const {
    if (is_zero()) return "0";
    std::ostringstream out;
    bool first = true;
    for (std::size_t i = c_.size(); i-- > 0;) {
        if (c_[i] == 0) continue;
        if (!first) out << " + ";
        first = false;
        if (i == 0 || c_[i] != 1) out << c_[i];
        if (i >= 1) out << var;
        if (i >= 2) out << "^" << i;
    }
    return out.str();
}

std::uint32_t inverse_mod(std::uint32_t a, unsigned p) {
    if (a % p == 0) throw std::domain_error("inverse of 0 mod p");
    long t = 0, nt = 1, r = p, nr = a % p;
    while (nr != 0) {
        long q = r / nr;
        t = std::exchange(nt, t - q * nt);
        r = std::exchange(nr, r - q * nr);
    }
    return reduce(t, p);
}

void divmod(const FpPoly& a, const FpPoly& b, FpPoly& q, FpPoly& r) {
    check_same_field(a, b);
    if (b.is_zero()) throw std::invalid_argument("division by the zero polynomial");
    const unsigned p = a.p();
    std::vector<long> rem(a.coeffs().begin(), a.coeffs().end());
    const int db = b.degree();
    const std::uint32_t inv = inverse_mod(b.leading(), p);
    std::vector<long> quo(a.degree() >= db ? static_cast<std::size_t>(a.degree() - db + 1) : 0, 0);
    for (int i = a.degree(); i >= db; --i) {
        long c = rem[static_cast<std::size_t>(i)] % static_cast<long>(p);
        if (c == 0) continue;
        long f = (c * inv) % p;
        quo[static_cast<std::size_t>(i - db)] = f;
        for (int j = 0; j <= db; ++j) {
            auto& x = rem[static_cast<std::size_t>(i - db + j)];
            x = reduce(x - f * static_cast<long>(b.coeff(static_cast<std::size_t>(j))), p);
        }
    }
    q = FpPoly(p, quo);
    rem.resize(static_cast<std::size_t>(std::max(db, 0)));
    r = FpPoly(p, rem);
}

FpPoly operator/(const FpPoly& a, const FpPoly& b) {
    FpPoly q, r;
    divmod(a, b, q, r);
    return q;
}

FpPoly operator%(const FpPoly& a, const FpPoly& b) {
    FpPoly q, r;
    divmod(a, b, q, r);
    return r;
}

FpPoly gcd(const FpPoly& a, const FpPoly& b) {
    FpPoly x = a, y = b;
    while (!y.is_zero()) x = std::exchange(y, x % y);
    return x.monic();
}

FpPoly powmod(const FpPoly& base, std::uint64_t e, const FpPoly& mod) {
    FpPoly result = FpPoly::constant(base.p(), 1) % mod;
    FpPoly b = base % mod;
    while (e) {
        if (e & 1) result = (result * b) % mod;
        b = (b * b) % mod;
        e >>= 1;
    }
    return result;
}

bool is_irreducible(const FpPoly& f) {
    const int n = f.degree();
    if (n < 1) return false;
    if (n == 1) return true;
    const FpPoly g = f.monic();
    const FpPoly x = FpPoly::x(f.p());
    FpPoly xp = x;
    for (int i = 1; i <= n / 2; ++i) {
        xp = powmod(xp, f.p(), g);
        if (gcd(g, xp - x).degree() > 0) return false;
    }
    return true;
}

FpPoly first_irreducible(unsigned p, unsigned k) {
    if (k < 1) throw std::invalid_argument("extension degree must be >= 1");
    const std::uint64_t n = ipow(p, k);
    for (std::uint64_t i = 0; i < n; ++i) {
        FpPoly f = FpPoly::monic_from_index(p, k, i);
        if (is_irreducible(f)) return f;
    }
    throw std::logic_error("no irreducible polynomial found");
}

int order_at(const FpPoly& f, const FpPoly& pi) {
    if (f.is_zero()) throw std::invalid_argument("order of the zero polynomial");
    int e = 0;
    FpPoly x = f, q, r;
    while (true) {
        divmod(x, pi, q, r);
        if (!r.is_zero()) return e;
        x = q;
        ++e;
    }
}

std::vector<std::pair<FpPoly, int>> factor(const FpPoly& f) {
    if (f.is_zero()) throw std::invalid_argument("factor of the zero polynomial");
    std::vector<std::pair<FpPoly, int>> out;
    FpPoly rest = f.monic();
    for (unsigned k = 1; 2 * static_cast<int>(k) <= rest.degree(); ++k) {
        for (const auto& pi : irreducibles(f.p(), k)) {
            if (rest.degree() < 2 * static_cast<int>(k)) break;
            int e = 0;
            FpPoly q, r;
            while (true) {
                divmod(rest, pi, q, r);
                if (!r.is_zero()) break;
                rest = q;
                ++e;
            }
            if (e) out.emplace_back(pi, e);
        }
    }
    if (rest.degree() >= 1) out.emplace_back(rest, 1);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

// ---------------------------------------------------------------------------
// F_{p^k}

FqField::FqField(unsigned p, unsigned k) : p_(p), k_(k) {
    if (!is_prime(static_cast<unsigned long>(p))) throw std::invalid_argument("field characteristic must be prime");
    const std::uint64_t q = ipow(p, k);
    if (k < 1 || q > (1u << 24)) throw std::invalid_argument("field size out of range (at most 2^24)");
    q_ = static_cast<std::uint32_t>(q);
    modulus_ = first_irreducible(p, k);

    const std::uint32_t n = q_ - 1;
    std::vector<unsigned long> primes;
    for (const auto& f : prime_factors(Integer(n))) primes.push_back(f.get_ui());
    const FpPoly one = FpPoly::constant(p, 1);
    Elem g = 0;
    for (Elem cand = 1; cand < q_ && g == 0; ++cand) {
        FpPoly c = to_poly(cand);
        bool ok = true;
        for (unsigned long r : primes)
            if (powmod(c, n / r, modulus_) == one) ok = false;
        if (ok) g = cand;
    }
    if (g == 0) throw std::logic_error("no primitive element");

    exp_.assign(n, 0);
    log_.assign(q_, 0);
    FpPoly gp = to_poly(g), cur = one;
    for (std::uint32_t i = 0; i < n; ++i) {
        exp_[i] = from_poly(cur);
        log_[exp_[i]] = i;
        cur = (cur * gp) % modulus_;
    }
    zech_.assign(n, -1);
    for (std::uint32_t i = 0; i < n; ++i) {
        Elem s = from_poly(to_poly(exp_[i]) + one);
        zech_[i] = s == 0 ? -1 : static_cast<std::int64_t>(log_[s]);
    }
}

FqField::Elem FqField::add(Elem a, Elem b) const {
    if (a == 0) return b;
    if (b == 0) return a;
    const std::uint32_t n = q_ - 1;
    std::uint32_t d = (log_[b] + n - log_[a]) % n;
    std::int64_t z = zech_[d];
    if (z < 0) return 0;
    return exp_[(log_[a] + static_cast<std::uint32_t>(z)) % n];
}

FqField::Elem FqField::neg(Elem a) const {
    if (a == 0 || p_ == 2) return a;
    const std::uint32_t n = q_ - 1;
    return exp_[(log_[a] + n / 2) % n];
}

FqField::Elem FqField::mul(Elem a, Elem b) const {
    if (a == 0 || b == 0) return 0;
    return exp_[(std::uint64_t(log_[a]) + log_[b]) % (q_ - 1)];
}

FqField::Elem FqField::inv(Elem a) const {
    if (a == 0) throw std::domain_error("inverse of 0 in F_q");
    const std::uint32_t n = q_ - 1;
    return exp_[(n - log_[a]) % n];
}

FqField::Elem FqField::pow(Elem a, std::uint64_t e) const {
    if (e == 0) return 1;
    if (a == 0) return 0;
    const std::uint64_t n = q_ - 1;
    return exp_[(std::uint64_t(log_[a]) * (e % n)) % n];
}

FqField::Elem FqField::from_int(long c) const { return reduce(c, p_); }

FqField::Elem FqField::eval(const FpPoly& f, Elem t0) const {
    Elem acc = 0;
    for (std::size_t i = f.coeffs().size(); i-- > 0;) acc = add(mul(acc, t0), f.coeffs()[i]);
    return acc;
}

FpPoly FqField::to_poly(Elem a) const {
    std::vector<long> c;
    while (a) {
        c.push_back(a % p_);
        a /= p_;
    }
    return FpPoly(p_, c);
}

FqField::Elem FqField::from_poly(const FpPoly& f) const { return static_cast<Elem>((f % modulus_).index()); }

// ---------------------------------------------------------------------------
// F_p(t)

FFRat::FFRat(FpPoly num) : num_(std::move(num)), den_(FpPoly::constant(num_.p(), 1)) {}

FFRat::FFRat(FpPoly num, FpPoly den) {
    check_same_field(num, den);
    if (den.is_zero()) throw std::domain_error("zero denominator in F_p(t)");
    if (num.is_zero()) {
        num_ = num;
        den_ = FpPoly::constant(num.p(), 1);
        return;
    }
    FpPoly g = gcd(num, den);
    num = num / g;
    den = den / g;
    FpPoly s = FpPoly::constant(num.p(), inverse_mod(den.leading(), num.p()));
    num_ = num * s;
    den_ = den * s;
}

FFRat operator+(const FFRat& a, const FFRat& b) { return FFRat(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_); }
FFRat operator-(const FFRat& a, const FFRat& b) { return FFRat(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_); }
FFRat operator*(const FFRat& a, const FFRat& b) { return FFRat(a.num_ * b.num_, a.den_ * b.den_); }
FFRat operator/(const FFRat& a, const FFRat& b) {
    if (b.is_zero()) throw std::domain_error("division by zero in F_p(t)");
    return FFRat(a.num_ * b.den_, a.den_ * b.num_);
}

std::string FFRat::to_string() const {
    if (den_.degree() == 0) return num_.to_string();
    return "(" + num_.to_string() + ")/(" + den_.to_string() + ")";
}

FFPlace FFPlace::finite(FpPoly pi) {
    if (pi.is_zero() || pi.leading() != 1 || !is_irreducible(pi))
        throw std::invalid_argument("place needs a monic irreducible polynomial");
    return FFPlace(std::move(pi));
}

std::string FFPlace::name() const { return pi_ ? pi_->to_string() : "inf"; }

std::optional<Rational> ff_abs_log(const FFRat& x, const FFPlace& v) {
    if (x.is_zero()) return std::nullopt;
    if (v.is_infinity()) return Rational(x.num().degree() - x.den().degree());
    int ord = order_at(x.num(), v.pi()) - order_at(x.den(), v.pi());
    return Rational(-ord * v.pi().degree());
}

namespace {

std::vector<FFPlace> places_of(const std::vector<FFRat>& xs, bool numerators) {
    std::vector<FFPlace> out{FFPlace::infinity()};
    std::set<FpPoly> seen;
    auto add = [&](const FpPoly& f) {
        if (f.degree() < 1) return;
        for (const auto& [pi, e] : factor(f)) seen.insert(pi);
    };
    for (const auto& x : xs) {
        add(x.den());
        if (numerators && !x.is_zero()) add(x.num());
    }
    for (const auto& pi : seen) out.push_back(FFPlace::finite(pi));
    return out;
}

}  // namespace

std::vector<FFPlace> ff_pole_places(const std::vector<FFRat>& xs) { return places_of(xs, false); }
std::vector<FFPlace> ff_support_places(const std::vector<FFRat>& xs) { return places_of(xs, true); }

// ---------------------------------------------------------------------------
// families

CharPFamily::CharPFamily(unsigned p, std::vector<FFRat> g_lower, unsigned d) : p_(p), g_(std::move(g_lower)), d_(d) {
    if (!is_prime(static_cast<unsigned long>(p))) throw std::invalid_argument("p must be prime");
    if (g_.empty()) throw std::invalid_argument("g needs degree >= 1");
    if (d < 1 || d * g_.size() < 2) throw std::invalid_argument("need d >= 1 and total degree >= 2");
    for (const auto& c : g_)
        if (c.num().p() != p) throw std::invalid_argument("coefficient over the wrong prime field");
}

FFRat CharPFamily::g(const FFRat& w) const {
    FFRat acc = FFRat::from_int(p_, 1);
    for (std::size_t i = g_.size(); i-- > 0;) acc = acc * w + g_[i];
    return acc;
}

FFRat CharPFamily::operator()(const FFRat& z) const {
    FFRat w = FFRat::from_int(p_, 1);
    for (unsigned i = 0; i < d_; ++i) w = w * z;
    return g(w);
}

void CharPFamily::require_hypothesis() const {
    if (m() >= p_) throw HypothesisViolation("deg g = " + std::to_string(m()) + " is not below p = " + std::to_string(p_));
    if (d_ < 2) throw HypothesisViolation("family tests need d >= 2");
}

std::string CharPFamily::to_string() const {
    std::ostringstream out;
    out << "g(z) = z^" << m();
    for (std::size_t i = g_.size(); i-- > 0;) {
        if (g_[i].is_zero()) continue;
        out << " + (" << g_[i].to_string() << ")";
        if (i >= 1) out << "z";
        if (i >= 2) out << "^" << i;
    }
    out << ", d = " << d_ << " over F_" << p_ << "(t)";
    return out.str();
}

CharPFamily parse_charp_family(unsigned p, std::string_view json, unsigned d) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("malformed family JSON: ") + e.what());
    }
    if (!j.is_array() || j.empty()) throw std::invalid_argument("family JSON must be a nonempty list of coefficients");
    auto poly = [p](const nlohmann::json& a) {
        if (!a.is_array()) throw std::invalid_argument("expected an integer array, got " + a.dump());
        std::vector<long> c;
        for (const auto& x : a) {
            if (!x.is_number_integer()) throw std::invalid_argument("expected an integer, got " + x.dump());
            c.push_back(x.get<long>());
        }
        return FpPoly(p, c);
    };
    std::vector<FFRat> g;
    for (const auto& coeff : j) {
        if (!coeff.is_array() || coeff.empty() || coeff.size() > 2)
            throw std::invalid_argument("coefficient must be [num] or [num, den], got " + coeff.dump());
        FpPoly num = poly(coeff[0]);
        FpPoly den = coeff.size() == 2 ? poly(coeff[1]) : FpPoly::constant(p, 1);
        if (den.is_zero()) throw std::invalid_argument("zero denominator in " + coeff.dump());
        g.emplace_back(num, den);
    }
    return CharPFamily(p, std::move(g), d);
}

Rational ff_root_sup_log_plus(const CharPFamily& F, const FFPlace& v) {
    std::vector<std::optional<Rational>> vals;
    for (const auto& c : F.g_lower()) {
        auto s = ff_abs_log(c, v);
        vals.push_back(s ? std::optional<Rational>(-*s) : std::nullopt);
    }
    vals.emplace_back(Rational(0));
    auto top = newton_polygon(vals).max_slope();
    if (!top || *top < 0) return Rational(0);
    return *top;
}

constexpr int kFFDegreeBudget = 4096;

GreenValue ff_green(const CharPFamily& F, const FFRat& z0, const FFPlace& v, long cap) {
    if (F.m() >= F.p()) throw HypothesisViolation("ff_green needs deg g < p");
    auto integral = [&](const FFRat& x) {
        auto s = ff_abs_log(x, v);
        return !s || *s <= 0;
    };
    if (integral(z0) && std::all_of(F.g_lower().begin(), F.g_lower().end(), integral))
        return GreenValue::zero(GreenValue::ZeroReason::IntegralBounded);
    const Rational T = ff_root_sup_log_plus(F, v);
    std::set<FFRat> seen;
    Integer Dk(1);
    FFRat z = z0;
    for (long k = 0; k <= cap; ++k) {
        auto s = ff_abs_log(z, v);
        if (s && *s > 0 && F.d() * *s > T) {
            Rational g = *s / Rational(Dk);
            g.canonicalize();
            return GreenValue::exact(g, F.p());
        }
        if (!seen.insert(z).second) return GreenValue::zero(GreenValue::ZeroReason::PreperiodicOrbit);
        if (z.num().degree() + z.den().degree() > kFFDegreeBudget) return GreenValue::undetermined(cap, "degree budget exhausted");
        z = F(z);
        Dk *= F.degree();
    }
    return GreenValue::undetermined(cap);
}

FamilyTestResult ff_family_pcf_test(const CharPFamily& F) {
    F.require_hypothesis();
    FamilyTestResult out;
    for (const auto& v : ff_pole_places(F.g_lower())) {
        Rational L = ff_root_sup_log_plus(F, v);
        out.sizes.emplace_back(v, L);
        if (L > 0 && !out.not_pcf) {
            out.not_pcf = true;
            out.witness = v;
            out.bound = L / Rational(F.d() * F.m());
            out.bound.canonicalize();
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// finite-field specialisations

namespace {

using Elem = FqField::Elem;

Elem eval_poly(const FqField& K, const std::vector<Elem>& f, Elem x) {
    Elem acc = 0;
    for (std::size_t i = f.size(); i-- > 0;) acc = K.add(K.mul(acc, x), f[i]);
    return acc;
}

std::vector<Elem> formal_derivative(const FqField& K, const std::vector<Elem>& f) {
    std::vector<Elem> out;
    for (std::size_t i = 1; i < f.size(); ++i) out.push_back(K.mul(K.from_int(static_cast<long>(i % K.p())), f[i]));
    while (!out.empty() && out.back() == 0) out.pop_back();
    return out;
}

// Divides f by (z - x) in place; returns the remainder.
Elem synthetic_divide(const FqField& K, std::vector<Elem>& f, Elem x) {
    if (f.empty()) return 0;
    std::vector<Elem> q(f.size() - 1);
    Elem acc = 0;
    for (std::size_t i = f.size(); i-- > 0;) {
        acc = K.add(K.mul(acc, x), f[i]);
        if (i > 0) q[i - 1] = acc;
    }
    f = std::move(q);
    return acc;
}

struct SizeStats {
    std::uint64_t count = 0, poles = 0, inseparable = 0, no_critical = 0;
    std::size_t max_size = 0;
    double sum = 0.0;
};

void scan_one(const CharPFamily& F, const FqField& K, Elem t0, SizeStats& s) {
    auto f = specialize(F, K, t0);
    if (f.empty()) {
        ++s.poles;
        return;
    }
    auto crit = charp_critical_points(K, f);
    if (crit.kind == CriticalPointSet::Kind::Inseparable) {
        ++s.inseparable;
        return;
    }
    if (crit.kind == CriticalPointSet::Kind::NoAffineCritical) ++s.no_critical;
    std::size_t n = postcritical_size(K, f);
    ++s.count;
    s.max_size = std::max(s.max_size, n);
    s.sum += static_cast<double>(n);
}

std::vector<Elem> scan_points(std::uint32_t q, std::uint64_t budget, std::uint64_t seed, unsigned k, bool& sampled) {
    std::vector<Elem> pts;
    sampled = q > budget;
    if (!sampled) {
        pts.resize(q);
        std::iota(pts.begin(), pts.end(), 0);
    } else {
        Rng rng(seed + k);
        for (std::uint64_t i = 0; i < budget; ++i) pts.push_back(static_cast<Elem>(rng.uniform(0, static_cast<long>(q) - 1)));
    }
    return pts;
}

ScanRow finish_row(unsigned k, std::uint32_t q, bool sampled, const SizeStats& s) {
    ScanRow row;
    row.k = k;
    row.field_size = q;
    row.count = s.count;
    row.max_size = s.max_size;
    row.mean_size = s.count ? s.sum / static_cast<double>(s.count) : 0.0;
    row.sampled = sampled;
    row.poles = s.poles;
    row.inseparable = s.inseparable;
    row.no_critical = s.no_critical;
    return row;
}

ScanReport scan_report_header(const CharPFamily& F, std::uint64_t budget) {
    ScanReport rep;
    rep.degree_divisible_by_p = F.degree() % F.p() == 0;
    std::ostringstream note;
    note << "exhaustive while p^k <= " << budget << ", uniform samples above";
    if (rep.degree_divisible_by_p) note << "; deg f divisible by p, so infinity is wildly ramified and not counted";
    rep.note = note.str();
    return rep;
}

}  // namespace

CriticalPointSet charp_critical_points(const FqField& K, const std::vector<Elem>& f_in) {
    std::vector<Elem> f = f_in;
    while (!f.empty() && f.back() == 0) f.pop_back();
    if (f.size() < 3) throw std::invalid_argument("charp_critical_points needs deg f >= 2");
    CriticalPointSet out;
    auto df = formal_derivative(K, f);
    if (df.empty()) {
        out.kind = CriticalPointSet::Kind::Inseparable;
        return out;
    }
    if (df.size() == 1) {
        out.kind = CriticalPointSet::Kind::NoAffineCritical;
        return out;
    }
    for (Elem x = 0; x < K.size(); ++x) {
        if (eval_poly(K, df, x) != 0) continue;
        int mult = 0;
        std::vector<Elem> rest = df;
        while (rest.size() > 1) {
            std::vector<Elem> trial = rest;
            if (synthetic_divide(K, trial, x) != 0) break;
            rest = std::move(trial);
            ++mult;
        }
        out.points.emplace_back(x, mult);
    }
    return out;
}

DerivativeKind charp_derivative_kind(const CharPFamily& F) {
    const unsigned p = F.p(), d = F.d(), D = F.degree();
    bool any_nonconstant = D % p != 0 && D >= 2;
    bool constant_term = false;
    for (unsigned i = 1; i < F.m(); ++i) {
        if ((static_cast<std::uint64_t>(d) * i) % p == 0 || F.g_lower()[i].is_zero()) continue;
        if (d * i == 1)
            constant_term = true;
        else
            any_nonconstant = true;
    }
    if (D == 1 && D % p != 0) constant_term = true;
    if (any_nonconstant) return DerivativeKind::NonConstant;
    return constant_term ? DerivativeKind::NonzeroConstant : DerivativeKind::Inseparable;
}

std::size_t postcritical_size(const FqField& K, const std::vector<Elem>& f) {
    auto crit = charp_critical_points(K, f);
    if (crit.kind == CriticalPointSet::Kind::Inseparable) throw std::invalid_argument("postcritical_size of an inseparable map");
    std::vector<char> seen(K.size(), 0);
    std::size_t n = 0;
    for (const auto& [c, mult] : crit.points) {
        Elem x = eval_poly(K, f, c);
        while (!seen[x]) {
            seen[x] = 1;
            ++n;
            x = eval_poly(K, f, x);
        }
    }
    return n;
}

std::size_t postcritical_size_bruteforce(const FqField& K, const std::vector<Elem>& f) {
    const std::uint32_t q = K.size();
    std::vector<Elem> next(q);
    for (Elem x = 0; x < q; ++x) next[x] = eval_poly(K, f, x);
    auto df = formal_derivative(K, f);
    if (df.empty()) throw std::invalid_argument("postcritical_size of an inseparable map");
    std::vector<char> reached(q, 0);
    std::vector<Elem> stack;
    for (Elem x = 0; x < q; ++x)
        if (eval_poly(K, df, x) == 0) stack.push_back(next[x]);
    while (!stack.empty()) {
        Elem y = stack.back();
        stack.pop_back();
        if (reached[y]) continue;
        reached[y] = 1;
        stack.push_back(next[y]);
    }
    return static_cast<std::size_t>(std::count(reached.begin(), reached.end(), 1));
}

std::vector<Elem> specialize(const CharPFamily& F, const FqField& K, Elem t0) {
    const unsigned d = F.d(), D = F.degree();
    std::vector<Elem> f(D + 1, 0);
    f[D] = 1;
    for (unsigned i = 0; i < F.m(); ++i) {
        const FFRat& c = F.g_lower()[i];
        Elem den = K.eval(c.den(), t0);
        if (den == 0) return {};
        f[d * i] = K.mul(K.eval(c.num(), t0), K.inv(den));
    }
    return f;
}

ScanReport specialization_scan(const CharPFamily& F, unsigned k_max, std::uint64_t budget, std::uint64_t seed) {
    ScanReport rep = scan_report_header(F, budget);
    for (unsigned k = 1; k <= k_max; ++k) {
        FqField K(F.p(), k);
        bool sampled = false;
        const auto pts = scan_points(K.size(), budget, seed, k, sampled);
        SizeStats total;
        std::exception_ptr failure;
#pragma omp parallel
        {
            SizeStats local;
#pragma omp for schedule(dynamic, 64) nowait
            for (std::size_t i = 0; i < pts.size(); ++i) {
                try {
                    scan_one(F, K, pts[i], local);
                } catch (...) {
#pragma omp critical
                    if (!failure) failure = std::current_exception();
                }
            }
#pragma omp critical
            {
                total.count += local.count;
                total.poles += local.poles;
                total.inseparable += local.inseparable;
                total.no_critical += local.no_critical;
                total.max_size = std::max(total.max_size, local.max_size);
                total.sum += local.sum;
            }
        }
        if (failure) std::rethrow_exception(failure);
        rep.rows.push_back(finish_row(k, K.size(), sampled, total));
    }
    return rep;
}

ScanReport specialization_scan_serial(const CharPFamily& F, unsigned k_max, std::uint64_t budget, std::uint64_t seed) {
    ScanReport rep = scan_report_header(F, budget);
    for (unsigned k = 1; k <= k_max; ++k) {
        FqField K(F.p(), k);
        bool sampled = false;
        SizeStats s;
        for (Elem t0 : scan_points(K.size(), budget, seed, k, sampled)) scan_one(F, K, t0, s);
        rep.rows.push_back(finish_row(k, K.size(), sampled, s));
    }
    return rep;
}

}  // namespace pcfh
