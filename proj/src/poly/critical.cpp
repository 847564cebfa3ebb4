#include "pcfh/critical.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "pcfh/newton.hpp"

namespace pcfh {

Poly image_resultant(const Poly& h, const MonicPoly& g) {
    const int n = h.degree();
    if (n < 1) throw std::invalid_argument("image_resultant needs a nonconstant h");
    const Poly gp = g.to_poly();
    std::vector<Rational> ys, rs;
    for (int k = 0; k <= n; ++k) {
        Rational y(k);
        ys.push_back(y);
        rs.push_back(resultant(h, Poly::constant(y) - gp));
    }
    // Lagrange interpolation through (y_k, r_k).
    Poly result;
    for (int k = 0; k <= n; ++k) {
        Poly basis = Poly::constant(1);
        Rational scale = rs[static_cast<std::size_t>(k)];
        for (int j = 0; j <= n; ++j) {
            if (j == k) continue;
            basis = basis * Poly({Rational(-ys[static_cast<std::size_t>(j)]), Rational(1)});
            scale /= ys[static_cast<std::size_t>(k)] - ys[static_cast<std::size_t>(j)];
        }
        result = result + scale * basis;
    }
    if (result.degree() != n)
        throw std::logic_error("degenerate resultant: leading coefficient vanished for monic g");
    return result.monic();
}

CriticalData branch_data(const ComposedMap& F, std::span<const Place> places) {
    CriticalData out;
    const MonicPoly& g = F.g();
    const unsigned d = F.d();
    const Poly gp = derivative(g);

    Poly h_irr;
    if (gp.degree() >= 1) {
        out.g_rational_critical_points = rational_roots(gp);
        h_irr = gp.monic();
        for (const auto& c : out.g_rational_critical_points) h_irr = h_irr / Poly({Rational(-c), Rational(1)});
    }

    // Rational critical points of f.
    if (d == 1) {
        out.rational_critical_points = out.g_rational_critical_points;
    } else {
        long zero_mult = static_cast<long>(d) - 1;
        for (const auto& c : out.g_rational_critical_points) {
            if (c == 0) {
                zero_mult += static_cast<long>(d);
                continue;
            }
            Rational r;
            if (!exact_root(c, d, r)) continue;
            out.rational_critical_points.push_back(r);
            if (d % 2 == 0) out.rational_critical_points.push_back(-r);
        }
        for (long i = 0; i < zero_mult; ++i) out.rational_critical_points.emplace_back(0);
        std::sort(out.rational_critical_points.begin(), out.rational_critical_points.end());
    }

    // Numeric critical points of f.
    std::vector<std::complex<long double>> gcrit;
    if (gp.degree() >= 1) gcrit = approximate_roots(gp);
    if (d == 1) {
        for (const auto& c : gcrit) out.all_critical_points_numeric.emplace_back(static_cast<double>(c.real()), static_cast<double>(c.imag()));
    } else {
        for (unsigned i = 0; i + 1 < d; ++i) out.all_critical_points_numeric.emplace_back(0.0, 0.0);
        const long double two_pi = 6.283185307179586476925286766559L;
        for (const auto& c : gcrit) {
            long double r = std::pow(std::abs(c), 1.0L / d);
            long double th = std::arg(c) / d;
            for (unsigned k = 0; k < d; ++k) {
                auto z = std::polar(r, th + two_pi * k / d);
                out.all_critical_points_numeric.emplace_back(static_cast<double>(z.real()), static_cast<double>(z.imag()));
            }
        }
    }

    std::set<Rational> exact;
    if (d >= 2) exact.insert(g(Rational(0)));
    for (const auto& c : out.g_rational_critical_points) exact.insert(g(c));
    out.branch_values_exact.assign(exact.begin(), exact.end());

    if (h_irr.degree() >= 1) {
        for (const auto& cl : enclose_roots(h_irr).clusters) out.branch_value_enclosures.push_back(g(cl.box));
        out.irrational_branch_resultant = image_resultant(h_irr, g);
    }
    if (gp.degree() >= 1) out.branch_resultant = image_resultant(gp, g);

    for (const auto& v : places) out.branch_value_sizes[v] = branch_sup_log(F, out, v);
    return out;
}

LogSize branch_sup_log(const ComposedMap& F, const CriticalData& data, const Place& v) {
    LogSize best;
    if (!v.is_archimedean()) {
        if (F.d() >= 2) best = abs_log(F.g()(Rational(0)), v);
        if (data.branch_resultant.degree() >= 1) {
            auto s = newton_polygon(data.branch_resultant, v.p()).max_slope();
            if (s) best = max(best, LogSize::exact(*s, v.p()));
        }
        return best;
    }
    for (const auto& b : data.branch_values_exact) best = max(best, abs_log(b, v));
    for (const auto& box : data.branch_value_enclosures) {
        Interval s = log_abs(box);
        if (mpfr_inf_p(s.hi().get()) && mpfr_sgn(s.hi().get()) < 0) continue;
        best = max(best, LogSize::arch(s));
    }
    return best;
}

std::vector<Place> critical_places(const ComposedMap& F, const CriticalData& data) {
    std::vector<Rational> xs = F.g().lower_coefficients();
    xs.insert(xs.end(), data.branch_resultant.coeffs().begin(), data.branch_resultant.coeffs().end());
    xs.insert(xs.end(), data.branch_values_exact.begin(), data.branch_values_exact.end());
    return denominator_places(xs);
}

}  // namespace pcfh
