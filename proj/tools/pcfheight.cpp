#include <openssl/evp.h>
#include <omp.h>

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "pcfh/bounds.hpp"
#include "pcfh/charp.hpp"
#include "pcfh/dynamics.hpp"
#include "pcfh/pcf.hpp"

using nlohmann::json;
using namespace pcfh;

namespace {

constexpr int kSchemaVersion = 1;
constexpr int kExitArgument = 2;
constexpr int kExitUndetermined = 3;

const char* kFooter = R"(
DESCRIPTION
    Certified computations for monic polynomials f(z) = g(z^d) over Q and
    over F_p(t): local Green functions, critical heights, PCF certificates,
    unicritical enumeration, bound checks and characteristic-p family tests.
    Certified real numbers are printed as {value, error} with the true
    value inside [value - error, value + error].

SUBCOMMANDS
    enumerate --d D [--box N]
        Unicritical z^d + c below the height bound (or over the box
        max(|p|, q) <= N).  CSV: d,c,pcf,tail,period,orbit.
    sweep --dmax D
        enumerate for d = 2..D.  CSV as above.
    green --poly G --d D --z Z --place P
        G_{f,P}(Z).  Z is rational, or "a+bi" at the archimedean place.  JSON.
    crit-height --poly G --d D
        Critical height with per-place parts and a PCF flag.  JSON.
    lemma-check --poly G --d D --place P [--c3 X | --c4 X]
        Lower bound for lambda_crit at P against (1/d)(log+||a|| - C3).  JSON.
    experiment theorem1 --m M --d D --levels L1,L2,.. --samples N
        Deficit h(a) - d * crit height over random roots per height level.  JSON.
    experiment psi --m M --samples N
        Empirical constant in log|psi(c_j)| >= m log||c|| - C4.  JSON.
    charp family-test --p P --g G --d D
        Characteristic-p family test.  JSON.
    charp scan --p P --g G --d D --kmax K [--budget N]
        Postcritical sizes of specialisations over F_{P^k}, k <= K.  CSV.

INPUT FORMATS
    Rational      "p/q" or "p", optional leading minus.
    Polynomial    JSON array of rational strings, constant first, leading 1
                  implicit: z^2 - 2 is '["-2","0"]'.
    Place         "inf" or a prime.
    F_p[t] family JSON list of z-coefficients, constant first, leading 1
                  implicit; each is [num] or [num, den], with num and den
                  integer arrays of t-coefficients: z^2 + t is '[[[0,1]],[[0]]]'.

OUTPUT
    JSON documents carry schema_version and a manifest (tool version,
    subcommand, parameters, seed, timestamp, SHA-256 of inputs).  CSV
    tables start with '#' lines holding the same manifest.

EXIT STATUS
    0 success, 1 internal failure, 2 argument error, 3 undetermined result
    under --strict.

EXAMPLES
    pcfheight enumerate --d 2
    pcfheight crit-height --poly '["1","0"]' --d 1
    pcfheight green --poly '["1"]' --d 2 --z 0 --place inf --tol 1e-8
    pcfheight charp family-test --p 5 --g '[[[0,1]],[[0]]]' --d 2
)";

struct Globals {
    std::string out;
    int jobs = 0;
    std::uint64_t seed = 1;
    long cap = kDefaultOrbitCap;
    double tol = kDefaultGreenTolerance;
    bool strict = false;
    std::uint64_t budget = 1u << 16;
};

std::string sha256(std::string_view data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int n = 0;
    if (!EVP_Digest(data.data(), data.size(), md, &n, EVP_sha256(), nullptr)) throw std::runtime_error("sha256 failed");
    std::ostringstream out;
    for (unsigned i = 0; i < n; ++i) out << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
    return out.str();
}

std::string utc_now() {
    std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json manifest(const CLI::App& app, const std::vector<const CLI::App*>& chain, const Globals& g,
              const std::map<std::string, std::string>& inputs) {
    json params = json::object();
    auto collect = [&](const CLI::App* a) {
        for (const CLI::Option* o : a->get_options()) {
            if (o->get_name() == "--help" || o->get_name() == "-h") continue;
            std::string key = o->get_name();
            if (key.rfind("--", 0) == 0) key = key.substr(2);
            if (o->count() > 0)
                params[key] = o->as<std::string>();
            else if (!o->get_default_str().empty())
                params[key] = o->get_default_str();
        }
    };
    collect(&app);
    std::string sub;
    for (const CLI::App* a : chain) {
        collect(a);
        sub += (sub.empty() ? "" : " ") + a->get_name();
    }
    json hashes = json::object();
    for (const auto& [k, v] : inputs) hashes[k] = sha256(v);
    return {{"tool", "pcfheight"},
            {"version", PCFH_VERSION},
            {"subcommand", sub},
            {"parameters", params},
            {"seed", g.seed},
            {"timestamp", utc_now()},
            {"input_sha256", hashes}};
}

json number(double x) {
    if (std::isfinite(x)) return x;
    return x > 0 ? "+inf" : "-inf";
}

json enclosure(const Interval& x) {
    if (x.is_finite()) {
        auto h = HeightValue::from_interval(x);
        return {{"value", h.value}, {"error", h.error}};
    }
    return {{"value", nullptr}, {"error", nullptr}, {"lower", number(x.lower())}, {"upper", number(x.upper())}};
}

json green_json(const GreenValue& G, const std::string& unit) {
    json j;
    if (G.is_exact()) {
        j = enclosure(G.to_interval());
        j["kind"] = "exact";
        j["coeff"] = to_string(G.exact_value().coeff);
        j["unit"] = unit;
    } else if (G.is_zero()) {
        j = {{"kind", "zero"}, {"reason", to_string(G.zero_reason())}, {"value", 0.0}, {"error", 0.0}};
    } else if (G.is_bracket()) {
        j = enclosure(G.bracket_value());
        j["kind"] = "bracket";
    } else {
        const auto& u = G.undetermined_value();
        j = enclosure(G.to_interval());
        j["kind"] = "undetermined";
        j["iteration_cap"] = u.iteration_cap;
        j["note"] = u.note;
    }
    return j;
}

std::string unit_of(const Place& v) { return v.is_archimedean() ? "1" : "log " + std::to_string(v.p()); }

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty() && path != "-") {
            file_.open(path);
            if (!file_) throw std::invalid_argument("cannot open --out " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
    void write_json(const json& manifest, const json& result) {
        json doc = {{"schema_version", kSchemaVersion}, {"manifest", manifest}, {"result", result}};
        stream() << doc.dump(2) << "\n";
    }
    void write_csv_header(const json& manifest) {
        stream() << "# schema_version=" << kSchemaVersion << "\n";
        for (const auto& [k, v] : manifest.items()) stream() << "# " << k << "=" << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
    }

private:
    std::ofstream file_;
};

void enumeration_csv(std::ostream& out, const std::vector<EnumerationRow>& rows) {
    for (const auto& r : rows) {
        out << r.d << "," << to_string(r.c) << "," << (r.pcf ? "true" : "false") << ",";
        if (const auto* p = std::get_if<Preperiodic>(&r.orbit)) {
            std::string orb;
            for (const auto& z : p->orbit) orb += (orb.empty() ? "" : " ") + to_string(z);
            out << p->tail << "," << p->period << "," << csv_field(orb) << "\n";
        } else {
            out << ",," << csv_field(describe(r.orbit)) << "\n";
        }
    }
}

Place parse_place(const std::string& s) {
    Place v = Place::parse(s);
    return v;
}

json place_sizes_json(const FamilyTestResult& r) {
    json a = json::array();
    for (const auto& [v, L] : r.sizes) a.push_back({{"place", v.name()}, {"log_plus_norm", to_string(L)}});
    return a;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pcfheight: critical heights, Green functions and PCF certificates for g(z^d)", "pcfheight"};
    app.footer(kFooter);
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", std::string(PCFH_VERSION));

    Globals g;
    app.add_option("--out", g.out, "Output file (default stdout)");
    app.add_option("--jobs", g.jobs, "Worker threads (0: OpenMP default)")->check(CLI::NonNegativeNumber);
    app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
    app.add_option("--cap", g.cap, "Iteration cap")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--tol", g.tol, "Target enclosure width")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_flag("--strict", g.strict, "Exit 3 when a result is undetermined");
    app.add_option("--budget", g.budget, "Specialisations per field before sampling")->capture_default_str();

    std::string poly, z, place = "inf", gjson, levels_text = "2,4,6,8,10";
    unsigned d = 2, dmax = 6, m = 2, p = 5, kmax = 3;
    long box = 0, samples = 50;
    std::optional<double> c3, c4;

    auto* en = app.add_subcommand("enumerate", "Unicritical PCF enumeration (CSV)");
    en->add_option("--d", d, "Exponent d >= 2")->required()->check(CLI::Range(2u, 4096u));
    en->add_option("--box", box, "Scan max(|p|, q) <= N instead of the height bound")->check(CLI::NonNegativeNumber);

    auto* sw = app.add_subcommand("sweep", "enumerate for d = 2..dmax (CSV)");
    sw->add_option("--dmax", dmax, "Largest d")->required()->check(CLI::Range(2u, 4096u));

    auto* gr = app.add_subcommand("green", "Local Green function (JSON)");
    gr->add_option("--poly", poly, "g as JSON")->required();
    gr->add_option("--d", d, "Exponent d >= 1")->required();
    gr->add_option("--z", z, "Point: rational, or a+bi at inf")->required();
    gr->add_option("--place", place, "inf or a prime")->capture_default_str();

    auto* ch = app.add_subcommand("crit-height", "Critical height (JSON)");
    ch->add_option("--poly", poly, "g as JSON")->required();
    ch->add_option("--d", d, "Exponent d >= 1")->required();

    auto* lc = app.add_subcommand("lemma-check", "Lower bound check for lambda_crit (JSON)");
    lc->add_option("--poly", poly, "g as JSON")->required();
    lc->add_option("--d", d, "Exponent d >= 1")->required();
    lc->add_option("--place", place, "inf or a prime > deg g")->capture_default_str();
    auto* c3opt = lc->add_option("--c3", c3, "Constant C3 (default 0 at primes, derived at inf)");
    lc->add_option("--c4", c4, "Empirical C4 for the derived C3 (default: estimated)")->excludes(c3opt);
    lc->add_option("--samples", samples, "Samples for the C4 estimate")->capture_default_str();

    auto* ex = app.add_subcommand("experiment", "Experiments (JSON)");
    ex->require_subcommand(1);
    auto* t1 = ex->add_subcommand("theorem1", "Deficit against random roots by height level");
    t1->add_option("--m", m, "deg g")->required()->check(CLI::Range(1u, 64u));
    t1->add_option("--d", d, "Exponent d")->required()->check(CLI::Range(1u, 64u));
    t1->add_option("--levels", levels_text, "Comma-separated height levels")->capture_default_str();
    t1->add_option("--samples", samples, "Samples per level")->capture_default_str()->check(CLI::PositiveNumber);
    auto* ps = ex->add_subcommand("psi", "Empirical C4");
    ps->add_option("--m", m, "deg g")->required()->check(CLI::Range(2u, 64u));
    ps->add_option("--samples", samples, "Samples")->capture_default_str()->check(CLI::PositiveNumber);

    auto* cp = app.add_subcommand("charp", "Families over F_p(t)");
    cp->require_subcommand(1);
    auto* ft = cp->add_subcommand("family-test", "Characteristic-p family test (JSON)");
    auto* sc = cp->add_subcommand("scan", "Specialisation scan (CSV)");
    for (auto* s : {ft, sc}) {
        s->add_option("--p", p, "Prime")->required();
        s->add_option("--g", gjson, "g over F_p[t] as JSON")->required();
        s->add_option("--d", d, "Exponent d")->required()->check(CLI::Range(1u, 4096u));
    }
    sc->add_option("--kmax", kmax, "Largest extension degree")->required()->check(CLI::Range(1u, 24u));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        if (rc != 0) {
            std::cerr << "\n" << app.help();
            return kExitArgument;
        }
        return 0;
    }

    try {
        if (g.jobs > 0) omp_set_num_threads(g.jobs);
        Output out(g.out);
        const GreenOptions opts{g.cap, g.tol};
        bool undetermined = false;

        if (*en) {
            auto rows = box > 0 ? unicritical_box_scan(d, box, g.cap) : unicritical_enumerate(d, g.cap);
            out.write_csv_header(manifest(app, {en}, g, {}));
            out.stream() << "d,c,pcf,tail,period,orbit\n";
            enumeration_csv(out.stream(), rows);
        } else if (*sw) {
            unicritical_sweep(dmax, g.cap);
            out.write_csv_header(manifest(app, {sw}, g, {}));
            out.stream() << "d,c,pcf,tail,period,orbit\n";
            for (unsigned k = 2; k <= dmax; ++k) enumeration_csv(out.stream(), unicritical_enumerate(k, g.cap));
        } else if (*gr) {
            ComposedMap F(parse_monic_poly(poly), d);
            const Place v = parse_place(place);
            GreenValue G;
            if (v.is_archimedean())
                G = z.find('i') != std::string::npos ? green_arch(F, parse_complex(z), g.tol, g.cap)
                                                     : green_arch(F, parse_rational(z), g.tol, g.cap);
            else
                G = green_nonarch(F, parse_rational(z), v.p(), g.cap);
            undetermined = G.is_undetermined();
            out.write_json(manifest(app, {gr}, g, {{"poly", poly}, {"z", z}}),
                           {{"map", F.g().to_poly().to_string()}, {"d", d}, {"z", z}, {"place", v.name()},
                            {"green", green_json(G, unit_of(v))}});
        } else if (*ch) {
            ComposedMap F(parse_monic_poly(poly), d);
            auto rep = crit_height(F, opts);
            json places = json::object();
            for (const auto& [v, G] : rep.per_place) {
                places[v.name()] = green_json(G, unit_of(v));
                undetermined = undetermined || G.is_undetermined();
            }
            undetermined = undetermined || rep.pcf_flag == PcfFlag::Inconclusive;
            out.write_json(manifest(app, {ch}, g, {{"poly", poly}}),
                           {{"map", F.g().to_poly().to_string()},
                            {"d", d},
                            {"per_place", places},
                            {"total", enclosure(rep.total_interval)},
                            {"pcf_flag", to_string(rep.pcf_flag)}});
        } else if (*lc) {
            MonicPoly gp = parse_monic_poly(poly);
            const Place v = parse_place(place);
            Interval C3;
            json c3_src;
            if (c3) {
                C3 = Interval(*c3);
                c3_src = "given";
            } else if (v.is_archimedean()) {
                double c4v = c4 ? *c4 : psi_bound_experiment(static_cast<unsigned>(gp.degree()), samples, g.seed).c4_estimate;
                C3 = c3_arch(static_cast<unsigned>(gp.degree()), c4v);
                c3_src = {{"derived", true}, {"c4_empirical", c4v}, {"c4_margin", kC4SafetyMargin}};
            } else {
                if (v.p() <= static_cast<unsigned long>(gp.degree()))
                    throw std::invalid_argument("C3 = 0 needs p > deg g; pass --c3");
                c3_src = "zero at p > deg g";
            }
            auto r = lemma3_check(gp, d, v, C3, opts);
            undetermined = r.lambda.is_undetermined();
            out.write_json(manifest(app, {lc}, g, {{"poly", poly}}),
                           {{"place", v.name()},
                            {"c3", enclosure(C3)},
                            {"c3_source", c3_src},
                            {"lambda", green_json(r.lambda, unit_of(v))},
                            {"lambda_lower", enclosure(r.lambda_lower)},
                            {"rhs", enclosure(r.rhs)},
                            {"holds", r.holds}});
        } else if (*t1) {
            std::vector<int> levels;
            std::stringstream ss(levels_text);
            for (std::string tok; std::getline(ss, tok, ',');) {
                try {
                    levels.push_back(std::stoi(tok));
                } catch (const std::exception&) {
                    throw std::invalid_argument("bad level '" + tok + "' in --levels");
                }
            }
            auto rep = theorem1_experiment(m, d, levels, samples, g.seed, opts);
            json lv = json::array(), smp = json::array();
            for (const auto& L : rep.levels)
                lv.push_back({{"level", L.level},
                              {"samples", L.samples},
                              {"max_deficit", number(L.max_deficit)},
                              {"mean_deficit", number(L.mean_deficit)},
                              {"mean_h_a", number(L.mean_h_a)}});
            for (const auto& s : rep.samples) {
                json roots = json::array();
                for (const auto& r : s.roots) roots.push_back(to_string(r));
                smp.push_back({{"level", s.level},
                               {"roots", roots},
                               {"h_a", {{"value", s.h_a.value}, {"error", s.h_a.error}}},
                               {"crit_lower", number(s.crit_lower)},
                               {"deficit", number(s.deficit)},
                               {"pcf_flag", to_string(s.flag)}});
            }
            out.write_json(manifest(app, {ex, t1}, g, {}),
                           {{"m", m}, {"d", d}, {"levels", lv}, {"c_emp", number(rep.c_emp)}, {"samples", smp}});
        } else if (*ps) {
            auto rep = psi_bound_experiment(m, samples, g.seed);
            out.write_json(manifest(app, {ex, ps}, g, {}),
                           {{"m", rep.m},
                            {"samples", rep.samples},
                            {"used", rep.used},
                            {"inf_gap", number(rep.inf_gap)},
                            {"c4_estimate", number(rep.c4_estimate)},
                            {"worst", rep.worst ? json(to_json(*rep.worst)) : json(nullptr)}});
        } else if (*ft) {
            auto F = parse_charp_family(p, gjson, d);
            auto r = ff_family_pcf_test(F);
            json res = {{"family", F.to_string()},
                        {"verdict", r.not_pcf ? "NotPCF" : "ConstantFamilyPCFPossible"},
                        {"sizes", place_sizes_json(r)}};
            if (r.not_pcf) {
                res["witness"] = r.witness->name();
                res["bound"] = to_string(r.bound);
                res["unit"] = "log " + std::to_string(p);
            }
            out.write_json(manifest(app, {cp, ft}, g, {{"g", gjson}}), res);
        } else if (*sc) {
            auto F = parse_charp_family(p, gjson, d);
            auto rep = specialization_scan(F, kmax, g.budget, g.seed);
            json man = manifest(app, {cp, sc}, g, {{"g", gjson}});
            man["note"] = rep.note;
            out.write_csv_header(man);
            out.stream() << "k,field_size,count,max_size,mean_size,sampled,poles,inseparable,no_critical\n";
            for (const auto& r : rep.rows)
                out.stream() << r.k << "," << r.field_size << "," << r.count << "," << r.max_size << ","
                             << std::setprecision(10) << r.mean_size << "," << (r.sampled ? "true" : "false") << ","
                             << r.poles << "," << r.inseparable << "," << r.no_critical << "\n";
        }
        if (g.strict && undetermined) {
            std::cerr << "pcfheight: undetermined result under --strict\n";
            return kExitUndetermined;
        }
        return 0;
    } catch (const std::invalid_argument& e) {
        std::cerr << "pcfheight: " << e.what() << "\n";
        return kExitArgument;
    } catch (const std::exception& e) {
        std::cerr << "pcfheight: " << e.what() << "\n";
        return 1;
    }
}
