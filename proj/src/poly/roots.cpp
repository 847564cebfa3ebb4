#include "pcfh/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "pcfh/newton.hpp"

namespace pcfh {

namespace {

using cld = std::complex<long double>;

long double to_long_double(const Rational& q) {
    Real r;
    mpfr_set_q(r.get(), q.get_mpq_t(), MPFR_RNDN);
    return mpfr_get_ld(r.get(), MPFR_RNDN);
}

Interval point(long double x) {
    Interval r;
    mpfr_set_ld(r.lo().get(), x, MPFR_RNDN);  // exact at kPrecision
    mpfr_set_ld(r.hi().get(), x, MPFR_RNDN);
    return r;
}

struct DisjointSets {
    std::vector<std::size_t> parent;
    explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

}  // namespace

std::vector<cld> approximate_roots(const Poly& p) {
    if (p.degree() < 1) throw std::invalid_argument("approximate_roots of a constant");
    std::vector<cld> zeros;
    Poly q = p;
    while (q.coeff(0) == 0) {
        zeros.emplace_back(0.0L);
        q = q / Poly({Rational(0), Rational(1)});
    }
    const int n = q.degree();
    if (n == 0) return zeros;
    q = q.monic();
    std::vector<long double> a(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) a[static_cast<std::size_t>(i)] = to_long_double(q.coeff(static_cast<std::size_t>(i)));

    // Fujiwara bound for the initial circle.
    long double bound = 0;
    for (int k = 1; k <= n; ++k) {
        long double c = std::fabs(a[static_cast<std::size_t>(n - k)]);
        if (k == n) c /= 2;
        bound = std::max(bound, std::pow(c, 1.0L / k));
    }
    bound = std::max(2 * bound, 1e-30L);

    std::vector<cld> z(static_cast<std::size_t>(n));
    const long double two_pi = 6.283185307179586476925286766559L;
    for (int k = 0; k < n; ++k) z[static_cast<std::size_t>(k)] = std::polar(bound * 0.75L, two_pi * k / n + 0.4L);

    auto eval = [&](const cld& x, cld& val, cld& der) {
        val = a[static_cast<std::size_t>(n)];
        der = 0;
        for (int i = n - 1; i >= 0; --i) {
            der = der * x + val;
            val = val * x + a[static_cast<std::size_t>(i)];
        }
    };
    const long double eps = 8 * std::numeric_limits<long double>::epsilon();
    int settled = 0;
    for (int iter = 0; iter < 5000 && settled < 3; ++iter) {
        long double worst = 0;
        for (std::size_t k = 0; k < z.size(); ++k) {
            cld val, der;
            eval(z[k], val, der);
            if (val == cld(0)) continue;
            cld ratio = val / der;
            cld sum = 0;
            for (std::size_t j = 0; j < z.size(); ++j)
                if (j != k) sum += 1.0L / (z[k] - z[j]);
            cld w = ratio / (1.0L - ratio * sum);
            if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) continue;
            z[k] -= w;
            worst = std::max(worst, std::abs(w) / std::max(1.0L, std::abs(z[k])));
        }
        if (worst <= eps) ++settled;
    }
    zeros.insert(zeros.end(), z.begin(), z.end());
    return zeros;
}

RootEnclosures enclose_roots(const Poly& p) {
    if (p.degree() < 1) throw std::invalid_argument("enclose_roots of a constant");
    RootEnclosures out;
    Poly sq = squarefree_part(p);
    if (sq.coeff(0) == 0) {
        out.has_zero_root = true;
        out.clusters.push_back({CInterval(), Interval(), 1});
        sq = sq / Poly({Rational(0), Rational(1)});
    }
    const int n = sq.degree();
    if (n == 1) {
        Rational r = -sq.coeff(0);
        out.clusters.push_back({CInterval::from_rational(r), Interval::from_rational(abs(r)), 1});
    } else if (n >= 2) {
        auto approx = approximate_roots(sq);
        // Distinct centres are required by the Weierstrass construction.
        for (std::size_t i = 0; i < approx.size(); ++i)
            for (std::size_t j = 0; j < i; ++j)
                if (approx[i] == approx[j])
                    approx[i] += cld(std::max(1.0L, std::abs(approx[i])) * 1e-15L * static_cast<long double>(i + 1), 0);

        const auto count = approx.size();
        std::vector<CInterval> zs;
        for (const auto& a : approx) zs.push_back({point(a.real()), point(a.imag())});
        std::vector<CInterval> centres(count);
        std::vector<Interval> radii(count);
        for (std::size_t i = 0; i < count; ++i) {
            CInterval denom{Interval(1.0), Interval()};
            for (std::size_t j = 0; j < count; ++j)
                if (j != i) denom = denom * (zs[i] - zs[j]);
            CInterval w = sq(zs[i]) / denom;
            centres[i] = zs[i] - w;
            radii[i] = abs(w) * Interval(static_cast<double>(n - 1));
        }
        DisjointSets sets(count);
        for (std::size_t i = 0; i < count; ++i)
            for (std::size_t j = 0; j < i; ++j) {
                Interval gap = abs(centres[i] - centres[j]);
                Interval reach = radii[i] + radii[j];
                if (!certainly_less(reach, gap)) sets.unite(i, j);
            }
        std::vector<std::vector<std::size_t>> groups(count);
        for (std::size_t i = 0; i < count; ++i) groups[sets.find(i)].push_back(i);
        for (const auto& grp : groups) {
            if (grp.empty()) continue;
            RootCluster c;
            c.count = static_cast<int>(grp.size());
            bool first = true;
            for (auto i : grp) {
                CInterval box = inflate(centres[i], radii[i]);
                Interval mc = abs(centres[i]);
                Interval mod;
                Real lo, hi;
                mpfr_sub(lo.get(), mc.lo().get(), radii[i].hi().get(), MPFR_RNDD);
                if (mpfr_sgn(lo.get()) < 0) mpfr_set_zero(lo.get(), 1);
                mpfr_add(hi.get(), mc.hi().get(), radii[i].hi().get(), MPFR_RNDU);
                mod.lo() = lo;
                mod.hi() = hi;
                if (first) {
                    c.box = box;
                    c.modulus = mod;
                } else {
                    c.box = hull(c.box, box);
                    c.modulus = hull(c.modulus, mod);
                }
                first = false;
            }
            out.clusters.push_back(std::move(c));
        }
    }
    bool first = true;
    for (const auto& c : out.clusters) {
        // Each cluster holds a root, so its least modulus bounds the maximum from below.
        out.max_modulus = first ? c.modulus : max(out.max_modulus, c.modulus);
        first = false;
    }
    return out;
}

LogSize root_sup_log(const Poly& p, const Place& v) {
    if (p.degree() < 1) throw std::invalid_argument("root_sup_log of a constant");
    if (!v.is_archimedean()) {
        auto s = newton_polygon(p, v.p()).max_slope();
        if (!s) return LogSize::neg_infinity();
        return LogSize::exact(*s, v.p());
    }
    auto enc = enclose_roots(p);
    if (mpfr_zero_p(enc.max_modulus.hi().get())) return LogSize::neg_infinity();
    return LogSize::arch(log(enc.max_modulus));
}

LogSize root_sup_log(const MonicPoly& g, const Place& v) { return root_sup_log(g.to_poly(), v); }

}  // namespace pcfh
