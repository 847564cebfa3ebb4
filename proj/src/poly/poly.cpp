#include "pcfh/poly.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace pcfh {

Poly::Poly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

Poly Poly::constant(Rational c) { return Poly({std::move(c)}); }

Poly Poly::monomial(Rational c, std::size_t k) {
    std::vector<Rational> v(k + 1);
    v[k] = std::move(c);
    return Poly(std::move(v));
}

Poly Poly::from_roots(std::span<const Rational> roots) {
    Poly p = constant(1);
    for (const auto& r : roots) p = p * Poly({Rational(-r), Rational(1)});
    return p;
}

void Poly::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Rational Poly::operator()(const Rational& x) const {
    Rational acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

CInterval Poly::operator()(const CInterval& z) const {
    CInterval acc;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + CInterval::from_rational(*it);
    return acc;
}

Poly Poly::derivative() const {
    if (c_.size() <= 1) return Poly();
    std::vector<Rational> d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * static_cast<unsigned long>(i);
    return Poly(std::move(d));
}

Poly Poly::monic() const {
    if (is_zero()) return *this;
    Rational inv = 1 / leading();
    return inv * *this;
}

std::vector<Integer> Poly::primitive_integer_coeffs() const {
    Integer l = 1;
    for (const auto& c : c_) l = lcm(l, Integer(c.get_den()));
    std::vector<Integer> out;
    Integer g = 0;
    for (const auto& c : c_) {
        Integer n = Integer(c * l);
        g = gcd(g, n);
        out.push_back(n);
    }
    if (g != 0) {
        if (out.back() < 0) g = -g;
        for (auto& n : out) n /= g;
    }
    return out;
}

Poly operator+(const Poly& a, const Poly& b) {
    std::vector<Rational> r(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = a.coeff(i) + b.coeff(i);
    return Poly(std::move(r));
}

Poly operator-(const Poly& a, const Poly& b) {
    std::vector<Rational> r(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = a.coeff(i) - b.coeff(i);
    return Poly(std::move(r));
}

Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly();
    std::vector<Rational> r(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
        if (a.c_[i] == 0) continue;
        for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    }
    return Poly(std::move(r));
}

Poly operator*(const Rational& s, const Poly& a) {
    std::vector<Rational> r = a.c_;
    for (auto& c : r) c *= s;
    return Poly(std::move(r));
}

std::string Poly::to_string() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = degree(); i >= 0; --i) {
        const Rational& c = c_[static_cast<std::size_t>(i)];
        if (c == 0) continue;
        if (!first) os << (c < 0 ? " - " : " + ");
        else if (c < 0) os << "-";
        Rational a = abs(c);
        if (a != 1 || i == 0) os << a.get_str();
        if (i > 0) os << "z";
        if (i > 1) os << "^" << i;
        first = false;
    }
    return os.str();
}

void divmod(const Poly& a, const Poly& b, Poly& q, Poly& r) {
    if (b.is_zero()) throw std::invalid_argument("division by zero polynomial");
    std::vector<Rational> rem = a.coeffs();
    int db = b.degree();
    int da = a.degree();
    std::vector<Rational> quot(da >= db ? static_cast<std::size_t>(da - db + 1) : 0);
    Rational inv = 1 / b.leading();
    for (int i = da; i >= db; --i) {
        Rational t = rem[static_cast<std::size_t>(i)] * inv;
        quot[static_cast<std::size_t>(i - db)] = t;
        if (t == 0) continue;
        for (int j = 0; j <= db; ++j) rem[static_cast<std::size_t>(i - db + j)] -= t * b.coeffs()[static_cast<std::size_t>(j)];
    }
    q = Poly(std::move(quot));
    r = Poly(std::move(rem));
}

Poly operator/(const Poly& a, const Poly& b) {
    Poly q, r;
    divmod(a, b, q, r);
    return q;
}

Poly operator%(const Poly& a, const Poly& b) {
    Poly q, r;
    divmod(a, b, q, r);
    return r;
}

Poly gcd(const Poly& a, const Poly& b) {
    Poly x = a, y = b;
    while (!y.is_zero()) {
        Poly r = x % y;
        x = std::move(y);
        y = std::move(r);
    }
    return x.monic();
}

Poly squarefree_part(const Poly& p) {
    if (p.degree() <= 0) return p.monic();
    return (p / gcd(p, p.derivative())).monic();
}

Rational resultant(const Poly& a0, const Poly& b0) {
    if (a0.is_zero() || b0.is_zero()) return 0;
    Poly a = a0, b = b0;
    Rational acc = 1;
    for (;;) {
        int m = a.degree(), n = b.degree();
        if (m == 0) {
            Rational r;
            mpq_class base = a.leading();
            r = 1;
            for (int i = 0; i < n; ++i) r *= base;
            return acc * r;
        }
        if (n == 0) {
            Rational r = 1;
            for (int i = 0; i < m; ++i) r *= b.leading();
            return acc * r;
        }
        Poly r = a % b;
        if (r.is_zero()) return 0;
        if ((m * n) % 2 == 1) acc = -acc;
        for (int i = 0; i < m - r.degree(); ++i) acc *= b.leading();
        a = std::move(b);
        b = std::move(r);
    }
}

MonicPoly::MonicPoly(std::vector<Rational> lower_coeffs) : c_(std::move(lower_coeffs)) {
    if (c_.empty()) throw std::invalid_argument("monic polynomial needs degree >= 1");
}

MonicPoly MonicPoly::from_roots(std::span<const Rational> roots) { return from_poly(Poly::from_roots(roots)); }

MonicPoly MonicPoly::from_poly(const Poly& p) {
    if (p.degree() < 1 || p.leading() != 1) throw std::invalid_argument("not monic of degree >= 1: " + p.to_string());
    std::vector<Rational> c(p.coeffs().begin(), p.coeffs().end() - 1);
    return MonicPoly(std::move(c));
}

Poly MonicPoly::to_poly() const {
    std::vector<Rational> c = c_;
    c.emplace_back(1);
    return Poly(std::move(c));
}

Rational MonicPoly::operator()(const Rational& x) const {
    Rational acc = 1;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

CInterval MonicPoly::operator()(const CInterval& z) const {
    CInterval acc{Interval(1.0), Interval()};
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + CInterval::from_rational(*it);
    return acc;
}

MonicPoly parse_monic_poly(std::string_view json) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument("malformed polynomial JSON '" + std::string(json) + "': " + e.what());
    }
    if (!j.is_array() || j.empty())
        throw std::invalid_argument("polynomial must be a nonempty JSON array of rational strings");
    std::vector<Rational> c;
    for (const auto& t : j) {
        if (t.is_string())
            c.push_back(parse_rational(t.get<std::string>()));
        else if (t.is_number_integer())
            c.emplace_back(Integer(t.dump()));
        else
            throw std::invalid_argument("malformed polynomial token " + t.dump());
    }
    return MonicPoly(std::move(c));
}

std::string to_json(const MonicPoly& g) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& c : g.lower_coefficients()) j.push_back(to_string(c));
    return j.dump();
}

ComposedMap::ComposedMap(MonicPoly g, unsigned d) : g_(std::move(g)), d_(d) {
    if (d_ < 1) throw std::invalid_argument("d must be >= 1");
    if (degree() < 2) throw std::invalid_argument("total degree d*deg(g) must be >= 2");
}

Rational ComposedMap::operator()(const Rational& z) const {
    Rational w;
    mpz_pow_ui(w.get_num_mpz_t(), z.get_num_mpz_t(), d_);
    mpz_pow_ui(w.get_den_mpz_t(), z.get_den_mpz_t(), d_);
    return g_(w);
}

CInterval ComposedMap::operator()(const CInterval& z) const { return g_(pow(z, d_)); }

MonicPoly compose_power(const MonicPoly& g, unsigned d) {
    if (d < 1) throw std::invalid_argument("d must be >= 1");
    const auto& c = g.lower_coefficients();
    std::vector<Rational> out(c.size() * d);
    for (std::size_t i = 0; i < c.size(); ++i) out[i * d] = c[i];
    return MonicPoly(std::move(out));
}

Poly derivative(const MonicPoly& f) { return f.to_poly().derivative(); }

namespace {

std::vector<Integer> divisors(const Integer& n) {
    std::vector<Integer> divs{1};
    Integer rest = abs(n);
    for (const auto& p : prime_factors(rest)) {
        std::size_t base = divs.size();
        Integer pk = 1;
        while (mpz_divisible_p(rest.get_mpz_t(), p.get_mpz_t())) {
            rest /= p;
            pk *= p;
            for (std::size_t i = 0; i < base; ++i) divs.push_back(divs[i] * pk);
        }
    }
    return divs;
}

}  // namespace

std::vector<Rational> rational_roots(const Poly& p) {
    if (p.is_zero()) throw std::invalid_argument("rational_roots of the zero polynomial");
    std::vector<Rational> roots;
    Poly rest = p;
    while (rest.degree() >= 1 && rest.coeff(0) == 0) {
        roots.emplace_back(0);
        rest = rest / Poly({Rational(0), Rational(1)});
    }
    if (rest.degree() >= 1) {
        auto ints = rest.primitive_integer_coeffs();
        auto nums = divisors(ints.front());
        auto dens = divisors(ints.back());
        for (const auto& a : nums) {
            for (const auto& b : dens) {
                if (gcd(a, b) != 1) continue;
                for (int sign : {1, -1}) {
                    Rational c(sign * a, b);
                    c.canonicalize();
                    while (rest.degree() >= 1 && rest(c) == 0) {
                        roots.push_back(c);
                        rest = rest / Poly({Rational(-c), Rational(1)});
                    }
                }
            }
        }
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

}  // namespace pcfh
