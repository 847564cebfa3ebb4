#include "pcfh/rational.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace pcfh {

namespace {

bool is_digits(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

Integer pollard_brent(const Integer& n, unsigned long c) {
    auto step = [&](const Integer& x) {
        Integer y = x * x + c;
        mpz_mod(y.get_mpz_t(), y.get_mpz_t(), n.get_mpz_t());
        return y;
    };
    Integer y = 2, x, ys, g = 1, q = 1;
    const unsigned long m = 128;
    unsigned long r = 1;
    while (g == 1) {
        x = y;
        for (unsigned long i = 0; i < r; ++i) y = step(y);
        unsigned long k = 0;
        while (k < r && g == 1) {
            ys = y;
            for (unsigned long i = 0; i < std::min(m, r - k); ++i) {
                y = step(y);
                Integer diff = abs(x - y);
                q = (q * diff) % n;
            }
            g = gcd(q, n);
            k += m;
        }
        r *= 2;
    }
    if (g == n) {
        do {
            ys = step(ys);
            g = gcd(Integer(abs(x - ys)), n);
        } while (g == 1);
    }
    return g;
}

void factor_into(Integer n, std::vector<Integer>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        out.push_back(n);
        return;
    }
    for (unsigned long c = 1;; ++c) {
        Integer d = pollard_brent(n, c);
        if (d != n && d != 1) {
            factor_into(d, out);
            factor_into(n / d, out);
            return;
        }
    }
}

}  // namespace

Rational parse_rational(std::string_view text) {
    std::string_view body = text;
    bool negative = false;
    if (!body.empty() && body.front() == '-') {
        negative = true;
        body.remove_prefix(1);
    }
    auto slash = body.find('/');
    std::string_view num = body.substr(0, slash);
    std::string_view den = slash == std::string_view::npos ? std::string_view("1") : body.substr(slash + 1);
    if (!is_digits(num) || !is_digits(den))
        throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
    Integer n(std::string(num), 10), d(std::string(den), 10);
    if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    Rational q(negative ? Integer(-n) : n, d);
    q.canonicalize();
    return q;
}

std::string to_string(const Rational& x) { return x.get_str(); }

long valuation(const Integer& n, unsigned long p) {
    if (n == 0) throw std::invalid_argument("valuation of zero");
    Integer rest;
    return static_cast<long>(mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), Integer(p).get_mpz_t()));
}

long valuation(const Rational& x, unsigned long p) {
    return valuation(x.get_num(), p) - valuation(x.get_den(), p);
}

bool is_prime(unsigned long p) {
    if (p < 2) return false;
    for (unsigned long d = 2; d * d <= p && d < 1000; ++d)
        if (p % d == 0) return p == d;
    return is_prime(Integer(p));
}

bool is_prime(const Integer& n) {
    if (n < 2) return false;
    return mpz_probab_prime_p(n.get_mpz_t(), 40) > 0;
}

std::vector<Integer> prime_factors(const Integer& n) {
    Integer m = abs(n);
    std::vector<Integer> out;
    if (m <= 1) return out;
    for (unsigned long d = 2; d < 100000 && Integer(d) * d <= m; d += (d == 2 ? 1 : 2)) {
        if (mpz_divisible_ui_p(m.get_mpz_t(), d)) {
            out.emplace_back(d);
            while (mpz_divisible_ui_p(m.get_mpz_t(), d)) m /= d;
        }
    }
    if (m > 1) factor_into(m, out);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool exact_root(const Integer& n, unsigned long k, Integer& root) {
    if (k == 0) throw std::invalid_argument("zeroth root");
    if (n < 0 && k % 2 == 0) return false;
    Integer a = abs(n);
    Integer r;
    if (mpz_root(r.get_mpz_t(), a.get_mpz_t(), k) == 0) return false;
    root = n < 0 ? Integer(-r) : r;
    return true;
}

bool exact_root(const Rational& x, unsigned long k, Rational& root) {
    Integer n, d;
    if (!exact_root(x.get_num(), k, n) || !exact_root(x.get_den(), k, d)) return false;
    root = Rational(n, d);
    root.canonicalize();
    return true;
}

std::size_t RationalHash::operator()(const Rational& x) const {
    auto limb_hash = [](mpz_srcptr z) {
        std::size_t h = static_cast<std::size_t>(mpz_sgn(z)) * 0x9e3779b97f4a7c15ULL;
        for (std::size_t i = 0, n = mpz_size(z); i < n; ++i)
            h = (h ^ mpz_getlimbn(z, static_cast<mp_size_t>(i))) * 0x100000001b3ULL;
        return h;
    };
    return limb_hash(x.get_num_mpz_t()) * 31 + limb_hash(x.get_den_mpz_t());
}

}  // namespace pcfh
