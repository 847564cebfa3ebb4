#include "pcfh/dynamics.hpp"

#include <omp.h>

#include <algorithm>
#include <exception>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "pcfh/bounds.hpp"
#include "pcfh/newton.hpp"
#include "pcfh/pcf.hpp"
#include "pcfh/roots.hpp"

namespace pcfh {

namespace {

Rational upper_as_rational(const Interval& x) {
    Rational q;
    mpfr_get_q(q.get_mpq_t(), x.hi().get());
    return q;
}

Interval make_interval(const Real& lo, const Real& hi) {
    Interval r;
    r.lo() = lo;
    r.hi() = hi;
    return r;
}

std::size_t bits(const Rational& q) {
    return mpz_sizeinbase(q.get_num_mpz_t(), 2) + mpz_sizeinbase(q.get_den_mpz_t(), 2);
}

bool p_integral(const Rational& q, unsigned long p) { return mpz_divisible_ui_p(q.get_den_mpz_t(), p) == 0; }

bool p_integral(std::span<const Rational> xs, unsigned long p) {
    return std::all_of(xs.begin(), xs.end(), [p](const Rational& q) { return p_integral(q, p); });
}

// Error bracket for G - log|z| in the basin.
struct ArchConstants {
    Interval eps_lo;
    Interval eps_hi;
    // sup of G off the basin
    Interval off_basin_sup;
};

ArchConstants arch_constants(const EscapeCriteria& crit) {
    const ComposedMap& F = crit.map();
    const unsigned m = F.m(), d = F.d(), D = F.degree();
    ArchConstants k;
    Interval Dv(static_cast<double>(D));
    if (m == 1) {
        Interval dm1(static_cast<double>(D - 1));
        k.eps_lo = -(Interval::ln2() / dm1);
        k.eps_hi = Interval::ln3_over_2() / dm1;
        // |z| <= R gives |f(z)| <= R^D + |c|.
        Rational R = crit.basin_radius();
        Rational c = abs(F.g().lower_coefficients()[0]);
        Integer RD_num, RD_den;
        mpz_pow_ui(RD_num.get_mpz_t(), R.get_num_mpz_t(), D);
        mpz_pow_ui(RD_den.get_mpz_t(), R.get_den_mpz_t(), D);
        Rational top = Rational(RD_num, RD_den) + c;
        top.canonicalize();
        k.off_basin_sup = (log(Interval::from_rational(top)) + k.eps_hi) / Dv;
    } else {
        k.eps_lo = -epsilon_below(m, d);
        k.eps_hi = epsilon_above(m, d);
        Interval T = escape_threshold(F, Place::infinity()).arch_value();
        k.off_basin_sup = (Interval(static_cast<double>(m)) * (T + Interval::ln2()) + k.eps_hi) / Dv;
    }
    return k;
}

GreenValue green_arch_impl(const EscapeCriteria& crit, const CInterval& z0, double tol, long cap) {
    const ComposedMap& F = crit.map();
    if (!z0.is_finite()) return GreenValue::undetermined(0, "starting point is unbounded");
    const ArchConstants k = arch_constants(crit);
    const Interval radius = Interval::from_rational(crit.basin_radius());
    const Integer D(F.degree());

    Real lo(0.0), hi(0.0);
    mpfr_set_inf(hi.get(), 1);
    Integer Dk(1);
    CInterval z = z0;
    for (long step = 0; step <= cap; ++step) {
        Interval L = log_abs(z);
        Interval scale = Interval::from_integer(Dk);
        Interval klo, khi;
        if (certainly_less(radius, abs(z))) {
            klo = (L + k.eps_lo) / scale;
            khi = (L + k.eps_hi) / scale;
        } else {
            Interval top = L + k.eps_hi;
            khi = max(top, k.off_basin_sup) / scale;
            klo = Interval();
        }
        if (mpfr_cmp(klo.lo().get(), lo.get()) > 0) lo = klo.lo();
        if (mpfr_cmp(khi.hi().get(), hi.get()) < 0) hi = khi.hi();
        if (mpfr_cmp(lo.get(), hi.get()) > 0) throw std::logic_error("green_arch: empty bracket");

        Interval result = make_interval(lo, hi);
        if (result.width() <= tol) break;
        // log|z| near the MPFR exponent limit; the bracket is already far below tol.
        if (L.is_finite() && L.upper() > 1e15) break;
        z = F(z);
        if (!z.is_finite()) break;
        Dk *= D;
    }
    if (mpfr_inf_p(hi.get())) return GreenValue::undetermined(cap, "interval blow-up before any bound");
    return GreenValue::bracket(make_interval(lo, hi));
}

GreenValue combine_max(const std::vector<GreenValue>& parts, const Integer& D) {
    bool all_zero = true;
    Real lo(0.0), hi(0.0);
    for (const auto& g : parts) {
        if (g.is_zero()) continue;
        all_zero = false;
        Interval x = g.to_interval();
        if (mpfr_cmp(x.lo().get(), lo.get()) > 0) lo = x.lo();
        if (mpfr_cmp(x.hi().get(), hi.get()) > 0) hi = x.hi();
    }
    if (all_zero) return GreenValue::zero(GreenValue::ZeroReason::PreperiodicOrbit);
    return GreenValue::bracket(make_interval(lo, hi) / Interval::from_integer(D));
}

}  // namespace

std::string describe(const OrbitResult& r) {
    std::ostringstream out;
    if (const auto* p = std::get_if<Preperiodic>(&r)) {
        out << "preperiodic tail " << p->tail << " period " << p->period << " orbit [";
        for (std::size_t i = 0; i < p->orbit.size(); ++i) out << (i ? ", " : "") << to_string(p->orbit[i]);
        out << "]";
    } else if (const auto* e = std::get_if<Escaping>(&r)) {
        out << "escaping at " << e->place.name() << " index " << e->escape_index << " witness " << to_string(e->witness);
    } else {
        out << "capped after " << std::get<Capped>(r).iterations << " iterations";
    }
    return out.str();
}

EscapeCriteria::EscapeCriteria(const ComposedMap& F) : F_(F) {
    if (F.m() == 1) {
        Rational c = abs(F.g().lower_coefficients()[0]);
        Rational big = c > 1 ? c : Rational(1);
        arch_radius_ = big + 1;
        basin_radius_ = 2 * big;
    } else {
        Interval T = escape_threshold(F, Place::infinity()).arch_value();
        basin_radius_ = upper_as_rational(exp(T / Interval(static_cast<double>(F.d()))));
        arch_radius_ = basin_radius_;
    }
}

Rational EscapeCriteria::nonarch_threshold(unsigned long p) const {
    return log_plus(root_sup_log(F_.g(), Place::prime(p)), Place::prime(p)).exact_value().coeff;
}

bool EscapeCriteria::escapes(const Rational& z, const Place& v) const {
    if (v.is_archimedean()) return abs(z) > arch_radius_;
    if (z == 0) return false;
    Rational s(-valuation(z, v.p()));
    return s > 0 && F_.d() * s > nonarch_threshold(v.p());
}

LogSize escape_threshold(const ComposedMap& F, const Place& v) {
    LogSize a = log_plus(root_sup_log(F.g(), v), v);
    if (!v.is_archimedean()) return a;
    if (F.m() == 1) return LogSize::arch(Interval(static_cast<double>(F.d())) * (a.arch_value() + Interval::ln2()));
    return LogSize::arch(a.arch_value() + c2(F.m(), v));
}

OrbitResult orbit(const ComposedMap& F, const Rational& z0, long cap) { return orbit(EscapeCriteria(F), z0, cap); }

OrbitResult orbit(const EscapeCriteria& crit, const Rational& z0, long cap, std::size_t bit_budget) {
    if (cap < 1) throw std::invalid_argument("orbit cap must be >= 1");
    const ComposedMap& F = crit.map();
    std::vector<Rational> xs = F.g().lower_coefficients();
    xs.push_back(z0);
    std::vector<std::pair<unsigned long, Rational>> primes;
    for (const auto& v : denominator_places(xs))
        if (!v.is_archimedean()) primes.emplace_back(v.p(), crit.nonarch_threshold(v.p()));

    std::unordered_map<Rational, long, RationalHash> seen;
    std::vector<Rational> visited;
    Rational z = z0;
    for (long k = 0; k < cap; ++k) {
        if (crit.escapes(z, Place::infinity())) return Escaping{Place::infinity(), k, z};
        if (z != 0) {
            for (const auto& [p, T] : primes) {
                Rational s(-valuation(z, p));
                if (s > 0 && F.d() * s > T) return Escaping{Place::prime(p), k, z};
            }
        }
        auto it = seen.find(z);
        if (it != seen.end()) return Preperiodic{it->second, k - it->second, std::move(visited)};
        seen.emplace(z, k);
        visited.push_back(z);
        if (bits(z) > bit_budget) return Capped{k + 1};
        z = F(z);
    }
    return Capped{cap};
}

Interval GreenValue::to_interval() const {
    if (is_exact()) {
        const auto& e = exact_value();
        return Interval::from_rational(e.coeff) * log(Interval::from_integer(Integer(e.p)));
    }
    if (is_zero()) return Interval();
    if (is_bracket()) return bracket_value();
    Interval r;
    mpfr_set_inf(r.hi().get(), 1);
    return r;
}

std::string to_string(GreenValue::ZeroReason r) {
    return r == GreenValue::ZeroReason::PreperiodicOrbit ? "preperiodic_orbit" : "integral_bounded";
}

std::string GreenValue::to_string() const {
    if (is_exact()) return pcfh::to_string(exact_value().coeff) + "*log(" + std::to_string(exact_value().p) + ")";
    if (is_zero()) return "0 (" + pcfh::to_string(zero_reason()) + ")";
    if (is_bracket()) return bracket_value().to_string();
    return "undetermined (cap " + std::to_string(undetermined_value().iteration_cap) + ")";
}

GreenValue green_nonarch(const ComposedMap& F, const Rational& z0, unsigned long p, long cap) {
    if (cap < 1) throw std::invalid_argument("cap must be >= 1");
    if (!is_prime(p)) throw std::invalid_argument("green_nonarch needs a prime");
    if (p_integral(F.g().lower_coefficients(), p) && p_integral(z0, p))
        return GreenValue::zero(GreenValue::ZeroReason::IntegralBounded);
    EscapeCriteria crit(F);
    const Rational T = crit.nonarch_threshold(p);
    std::unordered_map<Rational, long, RationalHash> seen;
    Integer Dk(1);
    Rational z = z0;
    for (long k = 0; k <= cap; ++k) {
        if (z != 0) {
            Rational s(-valuation(z, p));
            if (s > 0 && F.d() * s > T) {
                Rational g = s / Rational(Dk);
                g.canonicalize();
                return GreenValue::exact(g, p);
            }
        }
        if (!seen.emplace(z, k).second) return GreenValue::zero(GreenValue::ZeroReason::PreperiodicOrbit);
        if (bits(z) > kDefaultBitBudget) return GreenValue::undetermined(cap, "bit budget exhausted at step " + std::to_string(k));
        z = F(z);
        Dk *= F.degree();
    }
    return GreenValue::undetermined(cap);
}

GreenValue green_arch(const ComposedMap& F, const CInterval& z0, double tol, long cap) {
    if (!(tol > 0)) throw std::invalid_argument("tol must be positive");
    return green_arch_impl(EscapeCriteria(F), z0, tol, cap);
}

GreenValue green_arch(const ComposedMap& F, const Rational& z0, double tol, long cap) {
    return green_arch(F, CInterval::from_rational(z0), tol, cap);
}

CInterval parse_complex(std::string_view text) {
    std::string s;
    for (char ch : text)
        if (ch != ' ') s.push_back(ch);
    if (s.empty()) throw std::invalid_argument("empty complex number");
    if (s.back() != 'i') return CInterval::from_rational(parse_rational(s));
    s.pop_back();
    std::size_t split = std::string::npos;
    for (std::size_t i = s.size(); i-- > 1;)
        if (s[i] == '+' || s[i] == '-') {
            split = i;
            break;
        }
    std::string re = split == std::string::npos ? "0" : s.substr(0, split);
    std::string im = split == std::string::npos ? s : s.substr(split);
    if (im.empty() || im == "+") im = "1";
    if (im == "-") im = "-1";
    if (im.front() == '+') im.erase(0, 1);
    return {Interval::from_rational(parse_rational(re)), Interval::from_rational(parse_rational(im))};
}

GreenValue local_crit_lambda(const ComposedMap& F, const CriticalData& data, const Place& v, const GreenOptions& opts) {
    const Integer D(F.degree());
    EscapeCriteria crit(F);
    if (!v.is_archimedean()) {
        const unsigned long p = v.p();
        const Rational T = crit.nonarch_threshold(p);
        LogSize s = branch_sup_log(F, data, v);
        if (s.is_exact() && F.d() * s.exact_value().coeff > T) {
            Rational g = s.exact_value().coeff / Rational(D);
            g.canonicalize();
            return GreenValue::exact(g, p);
        }
        Rational best = 0;
        bool unresolved = false, any_preperiodic = false;
        for (const auto& beta : data.branch_values_exact) {
            GreenValue g = green_nonarch(F, beta, p, opts.cap);
            if (g.is_exact())
                best = std::max(best, g.exact_value().coeff);
            else if (g.is_zero())
                any_preperiodic = any_preperiodic || g.zero_reason() == GreenValue::ZeroReason::PreperiodicOrbit;
            else
                unresolved = true;
        }
        if (data.irrational_branch_resultant.degree() >= 1 &&
            !(p_integral(F.g().lower_coefficients(), p) && p_integral(data.irrational_branch_resultant.coeffs(), p)))
            unresolved = true;
        Rational exact_part = best / Rational(D);
        exact_part.canonicalize();
        // Off the basin G <= T/d, so an unresolved branch value adds at most T/(dD).
        Rational bound = T / Rational(Integer(F.d()) * D);
        bound.canonicalize();
        if (!unresolved || (best > 0 && exact_part >= bound)) {
            if (best > 0) return GreenValue::exact(exact_part, p);
            return GreenValue::zero(any_preperiodic ? GreenValue::ZeroReason::PreperiodicOrbit
                                                    : GreenValue::ZeroReason::IntegralBounded);
        }
        if (bound == 0) return GreenValue::zero(GreenValue::ZeroReason::IntegralBounded);
        Interval logp = log(Interval::from_integer(Integer(p)));
        Interval lo = Interval::from_rational(exact_part) * logp;
        Interval hi = Interval::from_rational(std::max(exact_part, bound)) * logp;
        return GreenValue::bracket(make_interval(lo.lo(), hi.hi()));
    }

    std::vector<GreenValue> parts;
    for (const auto& beta : data.branch_values_exact) {
        OrbitResult r = orbit(crit, beta, opts.cap);
        if (std::holds_alternative<Preperiodic>(r))
            parts.push_back(GreenValue::zero(GreenValue::ZeroReason::PreperiodicOrbit));
        else
            parts.push_back(green_arch_impl(crit, CInterval::from_rational(beta), opts.tol, opts.cap));
    }
    for (const auto& box : data.branch_value_enclosures) parts.push_back(green_arch_impl(crit, box, opts.tol, opts.cap));
    return combine_max(parts, D);
}

GreenValue local_crit_lambda(const ComposedMap& F, const Place& v, const GreenOptions& opts) {
    return local_crit_lambda(F, branch_data(F), v, opts);
}

std::string to_string(PcfFlag f) {
    switch (f) {
        case PcfFlag::CertifiedPCF: return "CertifiedPCF";
        case PcfFlag::CertifiedNotPCF: return "CertifiedNotPCF";
        default: return "Inconclusive";
    }
}

CritHeightReport crit_height(const ComposedMap& F, const GreenOptions& opts) {
    CritHeightReport report;
    const CriticalData data = branch_data(F);
    const std::vector<Place> places = critical_places(F, data);
    PcfCertificate cert = certify_pcf(F, data, opts.cap);
    if (cert.verdict == PcfVerdict::PCF) {
        for (const auto& v : places) report.per_place.emplace(v, GreenValue::zero(GreenValue::ZeroReason::PreperiodicOrbit));
        report.total_interval = Interval();
        report.total = HeightValue::from_interval(report.total_interval);
        report.pcf_flag = PcfFlag::CertifiedPCF;
        return report;
    }

    std::vector<std::optional<GreenValue>> values(places.size());
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < places.size(); ++i) {
        try {
            values[i] = local_crit_lambda(F, data, places[i], opts);
        } catch (...) {
#pragma omp critical
            failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);

    Interval total;
    bool positive = false;
    for (std::size_t i = 0; i < places.size(); ++i) {
        Interval x = values[i]->to_interval();
        positive = positive || x.certainly_positive();
        total += x;
        report.per_place.emplace(places[i], *values[i]);
    }
    report.total_interval = total;
    report.total = HeightValue::from_interval(total);
    report.pcf_flag = positive ? PcfFlag::CertifiedNotPCF : PcfFlag::Inconclusive;
    return report;
}

}  // namespace pcfh
