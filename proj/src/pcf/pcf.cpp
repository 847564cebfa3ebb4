#include "pcfh/pcf.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <set>
#include <stdexcept>

#include "pcfh/bounds.hpp"
#include "pcfh/newton.hpp"
#include "pcfh/roots.hpp"

namespace pcfh {

namespace {

bool is_escaping(const OrbitResult& r) { return std::holds_alternative<Escaping>(r); }

// Runs body(i) for i in [0, n) across threads and rethrows the first failure.
template <class Body>
void parallel_for(std::size_t n, Body body) {
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < n; ++i) {
        try {
            body(i);
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
}

EnumerationRow unicritical_row(unsigned d, const Rational& c, long cap) {
    ComposedMap F(MonicPoly({c}), d);
    PcfCertificate cert = certify_pcf(F, cap);
    if (cert.verdict == PcfVerdict::Inconclusive)
        throw std::runtime_error("no exact verdict for c = " + to_string(c) + " (raise --cap)");
    EnumerationRow row;
    row.d = d;
    row.c = c;
    row.pcf = cert.verdict == PcfVerdict::PCF;
    row.orbit = *cert.per_critical_point.front().orbit;
    return row;
}

Interval ratio(long a, long b) { return Interval::from_rational(Rational(a, b)); }

}  // namespace

std::string to_string(PcfVerdict v) {
    switch (v) {
        case PcfVerdict::PCF: return "PCF";
        case PcfVerdict::NotPCF: return "NotPCF";
        default: return "Inconclusive";
    }
}

PcfCertificate certify_pcf(const ComposedMap& F, long cap) { return certify_pcf(F, branch_data(F), cap); }

PcfCertificate certify_pcf(const ComposedMap& F, const CriticalData& data, long cap) {
    PcfCertificate cert;
    const EscapeCriteria crit(F);
    const MonicPoly& g = F.g();
    const unsigned d = F.d();
    bool escaped = false, unresolved = false;
    std::set<Rational> postcritical;

    auto record = [&](const OrbitResult& r, int offset) {
        if (is_escaping(r)) {
            escaped = true;
        } else if (const auto* pre = std::get_if<Preperiodic>(&r)) {
            // The critical point itself is postcritical only when it lies on its cycle.
            std::size_t from = (offset == 0 && pre->tail > 0) ? 1 : 0;
            postcritical.insert(pre->orbit.begin() + static_cast<long>(from), pre->orbit.end());
        } else {
            unresolved = true;
        }
    };

    std::vector<Rational> points = data.rational_critical_points;
    points.erase(std::unique(points.begin(), points.end()), points.end());
    for (const auto& c : points) {
        OrbitResult r = orbit(crit, c, cap);
        record(r, 0);
        cert.per_critical_point.push_back({to_string(c), 0, r, std::nullopt});
    }

    // Critical points z with z^d = c_j irrational while c_j is rational: follow g(c_j).
    if (d >= 2) {
        std::vector<Rational> cs = data.g_rational_critical_points;
        cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
        for (const auto& cj : cs) {
            if (cj == 0) continue;
            // A rational d-th root r has the same image as its irrational siblings.
            Rational r;
            if (exact_root(cj, d, r)) continue;
            Rational beta = g(cj);
            OrbitResult o = orbit(crit, beta, cap);
            record(o, 1);
            cert.per_critical_point.push_back({"z^" + std::to_string(d) + " = " + to_string(cj), 1, o, std::nullopt});
        }
    }

    // Irrational branch values: escape certificates through sizes.
    const Poly& R = data.irrational_branch_resultant;
    if (R.degree() >= 1) {
        std::optional<IrrationalEscape> found;
        std::vector<Rational> xs = g.lower_coefficients();
        xs.insert(xs.end(), R.coeffs().begin(), R.coeffs().end());
        for (const auto& v : denominator_places(xs)) {
            if (v.is_archimedean()) continue;
            auto s = newton_polygon(R, v.p()).max_slope();
            if (s && d * *s > crit.nonarch_threshold(v.p())) {
                found = IrrationalEscape{v, Interval::from_rational(*s) * log(Interval::from_integer(Integer(v.p())))};
                break;
            }
        }
        if (!found) {
            for (const auto& box : data.branch_value_enclosures) {
                GreenValue gv = green_arch(F, box, 1e-6, std::min(cap, 400L));
                Interval x = gv.to_interval();
                if (x.certainly_positive()) {
                    found = IrrationalEscape{Place::infinity(), x};
                    break;
                }
            }
        }
        if (found) {
            escaped = true;
        } else {
            unresolved = true;
        }
        cert.per_critical_point.push_back({"irrational branch values, roots of " + R.to_string(), 1, std::nullopt, found});
    }

    if (escaped) {
        cert.verdict = PcfVerdict::NotPCF;
    } else if (!unresolved) {
        cert.verdict = PcfVerdict::PCF;
        cert.postcritical_set = std::vector<Rational>(postcritical.begin(), postcritical.end());
    }
    return cert;
}

long unicritical_bound(unsigned d) {
    if (d < 2) throw std::invalid_argument("unicritical maps need d >= 2");
    long n = 1;
    while (true) {
        Integer next;
        mpz_ui_pow_ui(next.get_mpz_t(), static_cast<unsigned long>(n + 1), d - 1);
        if (next > 2) return n;
        ++n;
    }
}

std::vector<Rational> height_box(long N) {
    std::vector<Rational> out;
    for (long p = -N; p <= N; ++p)
        for (long q = 1; q <= N; ++q) {
            Integer g;
            mpz_gcd_ui(g.get_mpz_t(), Integer(std::labs(p)).get_mpz_t(), static_cast<unsigned long>(q));
            if (g == 1) out.emplace_back(p, q);
        }
    return out;
}

std::vector<EnumerationRow> unicritical_enumerate(unsigned d, long cap) {
    return unicritical_box_scan_serial(d, unicritical_bound(d), cap);
}

std::vector<EnumerationRow> unicritical_box_scan(unsigned d, long N, long cap) {
    const auto cs = height_box(N);
    std::vector<EnumerationRow> rows(cs.size());
    parallel_for(cs.size(), [&](std::size_t i) { rows[i] = unicritical_row(d, cs[i], cap); });
    return rows;
}

std::vector<EnumerationRow> unicritical_box_scan_serial(unsigned d, long N, long cap) {
    std::vector<EnumerationRow> rows;
    for (const auto& c : height_box(N)) rows.push_back(unicritical_row(d, c, cap));
    return rows;
}

std::vector<SweepRow> unicritical_sweep(unsigned d_max, long cap) {
    if (d_max < 2) throw std::invalid_argument("sweep needs d_max >= 2");
    std::vector<SweepRow> out;
    for (unsigned d = 2; d <= d_max; ++d) {
        SweepRow row{d, {}};
        for (const auto& r : unicritical_enumerate(d, cap))
            if (r.pcf) row.pcf.push_back(r.c);
        for (const auto& c : row.pcf)
            if (abs(c.get_num()) > 2 || c.get_den() > 2)
                throw std::logic_error("PCF parameter above height log 2: " + to_string(c));
        out.push_back(std::move(row));
    }
    return out;
}

Interval c3_arch(unsigned m, double c4_empirical) {
    if (m < 2) throw std::invalid_argument("C3 needs m >= 2");
    const Place inf = Place::infinity();
    const long mm = static_cast<long>(m);
    Interval C1 = c1_arch(m), C2 = c2(m, inf);
    Interval C4(c4_empirical + kC4SafetyMargin);
    Interval a = ratio(mm, mm - 1) * C1 + C2 * ratio(1, mm);
    Interval b = ratio(mm, 2 * mm - 1) * Interval::ln2();
    Interval c = (Interval(static_cast<double>(m)) * C1 + C2 + C4 + log(Interval(static_cast<double>(m)))) *
                 ratio(1, mm - 1);
    return max(max(a, b), c);
}

Lemma3Result lemma3_check(const MonicPoly& g, unsigned d, const Place& v, const Interval& c3, const GreenOptions& opts) {
    if (g.degree() < 2) throw std::invalid_argument("lemma3_check needs deg g >= 2");
    ComposedMap F(g, d);
    Lemma3Result out;
    out.lambda = local_crit_lambda(F, v, opts);
    Interval lam = out.lambda.to_interval();
    out.lambda_lower = Interval();
    if (mpfr_sgn(lam.lo().get()) > 0) {
        out.lambda_lower.lo() = lam.lo();
        out.lambda_lower.hi() = lam.lo();
    }

    LogSize a = log_plus(root_sup_log(g, v), v);
    const Interval dv(static_cast<double>(d));
    if (!v.is_archimedean() && mpfr_zero_p(c3.lo().get()) && mpfr_zero_p(c3.hi().get()) &&
        (out.lambda.is_exact() || out.lambda.is_zero())) {
        // Exact comparison in units of log p.
        Rational rhs = a.exact_value().coeff / Rational(d);
        rhs.canonicalize();
        Rational lhs = out.lambda.is_exact() ? out.lambda.exact_value().coeff : Rational(0);
        Interval logp = log(Interval::from_integer(Integer(v.p())));
        out.rhs = Interval::from_rational(rhs) * logp;
        out.holds = lhs >= rhs;
        return out;
    }
    out.rhs = (a.to_interval() - c3) / dv;
    out.holds = mpfr_sgn(out.rhs.hi().get()) <= 0 || certainly_leq(out.rhs, out.lambda_lower);
    return out;
}

Lemma3SuiteResult lemma3_suite(unsigned m, unsigned d, std::span<const Place> places, long samples, std::uint64_t seed,
                               const Interval& c3_archimedean, long max_entry, const GreenOptions& opts) {
    for (const auto& v : places)
        if (!v.is_archimedean() && v.p() <= m) throw UnsupportedPlace("lemma3_suite: C3 = 0 needs p > m");
    Rng rng(seed);
    std::vector<std::vector<Rational>> roots(static_cast<std::size_t>(samples));
    for (auto& r : roots) {
        for (unsigned i = 0; i < m; ++i) {
            Rational q(rng.uniform(-max_entry, max_entry), rng.uniform(1, max_entry));
            q.canonicalize();
            r.push_back(q);
        }
    }
    Lemma3SuiteResult out;
    out.m = m;
    out.d = d;
    out.samples = samples;
    std::vector<std::vector<int>> verdicts(roots.size(), std::vector<int>(places.size()));
    parallel_for(roots.size(), [&](std::size_t i) {
        MonicPoly g = MonicPoly::from_roots(roots[i]);
        for (std::size_t j = 0; j < places.size(); ++j) {
            Interval c3 = places[j].is_archimedean() ? c3_archimedean : Interval();
            Lemma3Result r = lemma3_check(g, d, places[j], c3, opts);
            verdicts[i][j] = (r.holds ? 1 : 0) + (r.rhs.certainly_positive() ? 2 : 0);
        }
    });
    for (const auto& row : verdicts)
        for (std::size_t j = 0; j < places.size(); ++j) {
            if (!(row[j] & 1)) ++out.failures;
            if (row[j] & 2) ++out.nontrivial[places[j]];
        }
    return out;
}

std::optional<Interval> psi_gap(const MonicPoly& g) {
    const unsigned m = static_cast<unsigned>(g.degree());
    if (m < 2) throw std::invalid_argument("psi_gap needs deg g >= 2");
    Poly gp = derivative(g);
    RootEnclosures enc = enclose_roots(gp);
    if (mpfr_zero_p(enc.max_modulus.hi().get())) return std::nullopt;
    const CInterval g0 = CInterval::from_rational(g(Rational(0)));
    const CInterval inv_m = CInterval::from_rational(Rational(1, m));
    std::optional<Interval> best;
    for (const auto& cl : enc.clusters) {
        CInterval psi = (g(cl.box) - g0) * inv_m;
        Interval s = log_abs(psi);
        best = best ? max(*best, s) : s;
    }
    return *best - Interval(static_cast<double>(m)) * log(enc.max_modulus);
}

PsiReport psi_bound_experiment(unsigned m, long samples, std::uint64_t seed) {
    if (m < 2) throw std::invalid_argument("psi experiment needs m >= 2");
    Rng rng(seed);
    std::vector<MonicPoly> gs;
    for (long s = 0; s < samples; ++s) {
        if (s % 2 == 0) {
            std::vector<Rational> c;
            for (unsigned i = 0; i < m; ++i) {
                Rational q(rng.uniform(-100, 100), rng.uniform(1, 100));
                q.canonicalize();
                c.push_back(q);
            }
            gs.emplace_back(c);
        } else {
            // g' = m prod (z - c_j) with random rational critical points.
            std::vector<Rational> cj;
            for (unsigned i = 0; i + 1 < m; ++i) {
                Rational q(rng.uniform(-100, 100), rng.uniform(1, 100));
                q.canonicalize();
                cj.push_back(q);
            }
            Poly h = Poly::from_roots(cj);
            std::vector<Rational> c(m);
            c[0] = Rational(rng.uniform(-100, 100), rng.uniform(1, 100));
            c[0].canonicalize();
            for (unsigned i = 1; i < m; ++i) {
                c[i] = Rational(m) * h.coeff(i - 1) / Rational(i);
                c[i].canonicalize();
            }
            gs.emplace_back(c);
        }
    }
    std::vector<std::optional<Interval>> gaps(gs.size());
    parallel_for(gs.size(), [&](std::size_t i) { gaps[i] = psi_gap(gs[i]); });

    PsiReport out;
    out.m = m;
    out.seed = seed;
    out.samples = samples;
    bool first = true;
    for (std::size_t i = 0; i < gs.size(); ++i) {
        if (!gaps[i]) continue;
        ++out.used;
        double lo = gaps[i]->lower();
        if (first || lo < out.inf_gap) {
            out.inf_gap = lo;
            out.worst = gs[i];
            first = false;
        }
    }
    out.c4_estimate = -out.inf_gap;
    return out;
}

std::vector<Rational> sample_roots(Rng& rng, unsigned m, int level) {
    const long H = std::max(1L, std::lround(std::exp(static_cast<double>(level))));
    std::vector<Rational> roots;
    for (unsigned i = 0; i < m; ++i) {
        long p = rng.uniform(-H, H), q = rng.uniform(1, H);
        if (i == 0) {
            if (rng.coin())
                p = rng.coin() ? H : -H;
            else
                q = H;
        }
        Rational r(p, q);
        r.canonicalize();
        roots.push_back(r);
    }
    return roots;
}

Theorem1Sample theorem1_sample(const std::vector<Rational>& roots, unsigned d, int level, const GreenOptions& opts) {
    Theorem1Sample s;
    s.level = level;
    s.roots = roots;
    MonicPoly g = MonicPoly::from_roots(roots);
    s.h_a = height(roots);
    s.h_g = height(g.lower_coefficients());
    CritHeightReport rep = crit_height(ComposedMap(g, d), opts);
    s.flag = rep.pcf_flag;
    s.crit_lower = std::max(0.0, rep.total_interval.lower());
    s.deficit = s.h_a.upper() - static_cast<double>(d) * s.crit_lower;
    return s;
}

Theorem1Report theorem1_experiment(unsigned m, unsigned d, const std::vector<int>& levels, long samples,
                                   std::uint64_t seed, const GreenOptions& opts) {
    if (m < 2 || d < 2) throw std::invalid_argument("theorem1_experiment needs m >= 2 and d >= 2");
    Rng rng(seed);
    std::vector<std::pair<int, std::vector<Rational>>> jobs;
    for (int level : levels)
        for (long s = 0; s < samples; ++s) jobs.emplace_back(level, sample_roots(rng, m, level));

    Theorem1Report rep;
    rep.m = m;
    rep.d = d;
    rep.seed = seed;
    rep.samples.resize(jobs.size());
    parallel_for(jobs.size(), [&](std::size_t i) { rep.samples[i] = theorem1_sample(jobs[i].second, d, jobs[i].first, opts); });

    bool first = true;
    for (int level : levels) {
        Theorem1Level row;
        row.level = level;
        double sum = 0, sum_h = 0;
        for (const auto& s : rep.samples) {
            if (s.level != level) continue;
            sum += s.deficit;
            sum_h += s.h_a.value;
            row.max_deficit = row.samples == 0 ? s.deficit : std::max(row.max_deficit, s.deficit);
            ++row.samples;
        }
        if (row.samples > 0) {
            row.mean_deficit = sum / static_cast<double>(row.samples);
            row.mean_h_a = sum_h / static_cast<double>(row.samples);
            rep.c_emp = first ? row.max_deficit : std::max(rep.c_emp, row.max_deficit);
            first = false;
        }
        rep.levels.push_back(row);
    }
    return rep;
}

}  // namespace pcfh
