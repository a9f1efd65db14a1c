#pragma once

// orbitlab command line. Exit status: 0 all checks pass, 1 a verification
// failed (counterexample printed), 2 input or usage error.

#include <chrono>
#include <cstdint>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "orbitlab/io/formats.hpp"
#include "orbitlab/metric/search.hpp"
#include "orbitlab/polarizations/polarization.hpp"

namespace orbitlab::cli {

enum class Format { human, records };

struct RunConfig {
    std::string command;
    std::vector<std::string> inputs;
    std::int64_t cap = default_cap();
    int samples = 0;
    std::uint64_t seed = 1;
    int workers = 1;
    Format format = Format::human;
};

/// Human lines or line-delimited JSON records with a fixed field order.
class Report {
public:
    using Record = nlohmann::ordered_json;

    Report(Format f, std::ostream& out) : f_(f), out_(out) {}

    bool human() const noexcept { return f_ == Format::human; }
    void say(const std::string& line) {
        if (human()) out_ << line << "\n";
    }
    void record(const std::string& kind, Record fields) {
        if (human()) return;
        Record r;
        r["record"] = kind;
        for (auto& [k, v] : fields.items()) r[k] = v;
        out_ << r.dump() << "\n";
    }

    void failure(const VerificationFailure& e) { failure(e.check(), e.what(), e.witness()); }
    void failure(const std::string& check, const std::string& message, const VerificationFailure::Witness& witness) {
        if (human()) {
            out_ << "FAIL " << message << "\ncounterexample:\n";
            for (const auto& [k, v] : witness) out_ << "  " << k << ": " << v << "\n";
        } else {
            Record w = Record::object();
            for (const auto& [k, v] : witness) w[k] = v;
            record("failure", {{"check", check}, {"message", message}, {"counterexample", w}});
        }
    }

private:
    Format f_;
    std::ostream& out_;
};

namespace detail {

inline std::string span_text(const Span& s) {
    std::string out = "<";
    auto gens = s.generators();
    for (std::size_t i = 0; i < gens.size(); ++i) out += (i ? ", " : "") + vec_to_string(gens[i]);
    return out + ">";
}

inline std::string join_ints(const std::vector<int>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
    return s;
}

inline const std::string& single_input(const RunConfig& c) {
    if (c.inputs.size() != 1) throw InputError(c.command + ": expected exactly one input file");
    return c.inputs[0];
}

inline std::string seconds(double s) {
    std::ostringstream o;
    o << std::fixed << std::setprecision(3) << s << " s";
    return o.str();
}

} // namespace detail

inline int cmd_validate(const RunConfig& c, Report& r) {
    LieRing g = io::parse_ring(io::Source::open(detail::single_input(c)));
    auto rep = validate(g);
    r.say("ring: p = " + std::to_string(g.p()) + ", k = " + std::to_string(g.k()) + ", rank " +
          std::to_string(g.rank()) + ", |g| = " + std::to_string(g.p()) + "^" + std::to_string(g.log_order()));
    r.say("class " + std::to_string(rep.nilpotency_class) + "; lower central series log_p sizes " +
          detail::join_ints(rep.lower_central_log_sizes));
    r.say("validate: PASS");
    r.record("ring", {{"p", g.p()}, {"k", g.k()}, {"rank", g.rank()}, {"class", rep.nilpotency_class},
                      {"lower_central_log_sizes", rep.lower_central_log_sizes}, {"text", io::to_text(g)}});
    r.record("verdict", {{"command", "validate"}, {"pass", true}});
    return 0;
}

inline int cmd_bch(const RunConfig& c, Report& r, int gens, int cls, const std::string& series) {
    if (!c.inputs.empty()) throw InputError("bch: takes no input file");
    LiePoly f = [&] {
        if (series != "bch") {
            if (gens != 2) throw InputError("bch: series '" + series + "' is defined in 2 generators");
            return named_series(series, cls);
        }
        auto b = hall_basis(gens, cls);
        if (gens == 1) return LiePoly::generator(b, 0);
        LiePoly acc = bch(LiePoly::generator(b, 0), LiePoly::generator(b, 1));
        for (int i = 2; i < gens; ++i) acc = bch(acc, LiePoly::generator(b, i));
        return acc;
    }();
    auto rule = series == "bch" || series == "lambda" ? DenominatorRule::primes_at_most_degree
                                                      : DenominatorRule::divides_factorial;
    auto cert = certify_poly(series, f, rule);
    const HallBasis& b = *f.basis();
    r.say(series + " in " + std::to_string(gens) + " generator(s) through class " + std::to_string(cls));
    for (int d = 1; d <= b.cls(); ++d)
        for (int i : b.of_degree(d)) {
            const Rational& x = f.coefficients()[static_cast<std::size_t>(i)];
            if (x == 0) continue;
            std::ostringstream line;
            line << "  " << d << "  " << std::left << std::setw(24) << b.tree(i).text << " " << to_string(x);
            r.say(line.str());
            r.record("term", {{"degree", d}, {"tree", b.tree(i).text}, {"coefficient", to_string(x)}});
        }
    r.say("certificate (" + cert.rule + "):");
    for (int d = 1; d <= cert.verified_class; ++d) {
        auto den = cert.denominators[static_cast<std::size_t>(d)].str();
        auto bound = cert.bounds[static_cast<std::size_t>(d)].str();
        r.say("  degree " + std::to_string(d) + ": lcm of denominators " + den + ", i! = " + bound);
        r.record("certificate", {{"degree", d}, {"denominator_lcm", den}, {"factorial", bound}, {"rule", cert.rule}});
    }
    r.say("bch: PASS");
    r.record("verdict", {{"command", "bch"}, {"pass", true}});
    return 0;
}

inline int cmd_orbits(const RunConfig& c, Report& r) {
    LieRing g = io::parse_ring(io::Source::open(detail::single_input(c)));
    LazardGroup G(g);
    const std::int64_t total = ipow(g.p(), g.log_order());
    if (total > c.cap && c.samples > 0) {
        // Sampling mode: orbit size |G| / |g_chi| through the radical, per character.
        std::map<std::int64_t, std::int64_t> hist;
        for (const auto& chi : sample_characters(g, c.samples, c.seed)) {
            std::int64_t size = total / radical(g, chi).size();
            ++hist[size];
            r.record("sample", {{"chi", chi.to_string(g.modulus())}, {"orbit_size", size}});
        }
        std::string s;
        for (const auto& [size, n] : hist) s += (s.empty() ? "" : ", ") + std::to_string(size) + "x" + std::to_string(n);
        r.say(std::to_string(c.samples) + " sampled characters (|g*| exceeds the cap); orbit sizes " + s);
        r.record("verdict", {{"command", "orbits"}, {"mode", "sampled"}, {"pass", true}});
        return 0;
    }
    OrbitOptions opt;
    opt.cap = c.cap;
    opt.workers = c.workers;
    auto orbits = enumerate_orbits(G, opt);
    auto hist = orbit_histogram(orbits);
    std::string s;
    for (const auto& [size, n] : hist) s += (s.empty() ? "" : ", ") + std::to_string(size) + "×" + std::to_string(n);
    r.say(std::to_string(orbits.size()) + " orbits; sizes " + s);
    for (std::size_t i = 0; i < orbits.size(); ++i)
        r.record("orbit", {{"index", i},
                           {"representative", orbits[i].representative.to_string(g.modulus())},
                           {"size", orbits[i].size},
                           {"stabilizer", orbits[i].stabilizer->size()}});
    Report::Record h = Report::Record::object();
    for (const auto& [size, n] : hist) h[std::to_string(size)] = n;
    r.record("census", {{"orbits", orbits.size()}, {"histogram", h}});
    return 0;
}

inline int cmd_kernel_check(const RunConfig& c, Report& r) {
    LieRing g = io::parse_ring(io::Source::open(detail::single_input(c)));
    LazardGroup G(g);
    const std::int64_t total = ipow(g.p(), g.log_order());
    CoadjointTable T(G, true, c.cap);
    std::vector<Character> chis =
        c.samples > 0 || total > c.cap ? sample_characters(g, std::max(c.samples, 1), c.seed) : all_characters(g, c.cap);
    auto results = parallel_map<std::optional<KernelCheck>>(chis.size(), c.workers, [&](std::size_t i) {
        return std::optional<KernelCheck>(kernel_lemma_check(T, chis[i], 8, c.seed));
    });
    int restriction = 0;
    for (const auto& k : results) {
        restriction += k->normalizer_checks;
        r.record("character", {{"chi", k->chi.to_string(g.modulus())},
                               {"radical", k->radical.size()},
                               {"stabilizer", k->stabilizer.size()},
                               {"restriction_checks", k->normalizer_checks}});
    }
    r.say("kernel-check: PASS (" + std::to_string(chis.size()) + " characters, stabilizer = radical; " +
          std::to_string(restriction) + " restriction checks)");
    r.record("verdict", {{"command", "kernel-check"}, {"characters", chis.size()}, {"pass", true}});
    return 0;
}

inline int cmd_polarize(const RunConfig& c, Report& r, const std::string& chi_text) {
    LieRing g = io::parse_ring(io::Source::open(detail::single_input(c)));
    Character chi = chi_text.empty() ? generic_character(g) : io::parse_character(g, chi_text);
    auto rep = polarize(g, chi);
    r.say("chi = " + chi.to_string(g.modulus()) + "; |radical| = " + std::to_string(rep.radical.size()));
    for (std::size_t i = 0; i < rep.chain.size(); ++i) {
        const auto& st = rep.chain[i];
        const auto& P = st.polarization;
        std::string line = "  step " + std::to_string(i) + ": |h| = " + std::to_string(P.h.size()) +
                           ", |h^perp| = " + std::to_string(P.h_perp.size());
        if (st.k > 0) line += ", k = " + std::to_string(st.k) + ", log_p |h^(n)| = " + detail::join_ints(st.series_log_sizes);
        else line += ", Heisenberg";
        r.say(line);
        r.record("step", {{"index", i},
                          {"h", P.h.size()},
                          {"h_perp", P.h_perp.size()},
                          {"k", st.k},
                          {"series_log_sizes", st.series_log_sizes},
                          {"heisenberg", P.heisenberg}});
    }
    const auto& L = rep.lagrangian;
    r.say("Lagrangian r = " + detail::span_text(L.h) + ", |r| = " + std::to_string(L.h.size()) +
          "; flags: isotropic, contains radical, Lie subring, r = r^perp");
    r.say("polarize: PASS");
    r.record("lagrangian", {{"generators", detail::span_text(L.h)}, {"size", L.h.size()}, {"self_perp", L.h == L.h_perp}});
    r.record("verdict", {{"command", "polarize"}, {"pass", true}});
    return 0;
}

inline int cmd_gauss(const RunConfig& c, Report& r, bool st) {
    MetricGroup m = io::parse_metric(io::Source::open(detail::single_input(c)));
    if (m.size() > c.cap) throw InputError("gauss: |p| = " + std::to_string(m.size()) + " exceeds the cap");
    auto rep = gauss_report(m);
    r.say("|p| = " + std::to_string(rep.order) + ", " + (rep.nondegenerate ? "nondegenerate" : "degenerate"));
    r.say("G(p, q~) = " + rep.gauss.to_string());
    r.record("gauss", {{"order", rep.order}, {"nondegenerate", rep.nondegenerate}, {"G", rep.gauss.to_string()}});
    for (const auto& a : rep.lagrangians) {
        r.say("  Lagrangian " + detail::span_text(a) + ", Card = " + std::to_string(a.size()));
        r.record("lagrangian", {{"generators", detail::span_text(a)}, {"size", a.size()}});
    }
    if (rep.nondegenerate) {
        auto qh = ribbon_qhat(m);
        r.say("q^ : closed form equals Fourier preimage; coefficient at 0 = " + qh.coeff[0].to_string());
        r.record("qhat", {{"at_zero", qh.coeff[0].to_string()}, {"two_paths_agree", true}});
    }
    if (st) {
        auto md = st_matrices(m);
        r.say("modular data: S S* = 1, S^2 = C, (ST)^3 = (G/D) 1, (S*T)^3 = (G/D) S^2 with D = " + std::to_string(md.D));
        r.record("modular_data", {{"D", md.D}, {"relations", true}});
    }
    r.say("gauss: PASS");
    r.record("verdict", {{"command", "gauss"}, {"pass", true}});
    return 0;
}

inline int cmd_ribbon(const RunConfig& c, Report& r, std::optional<std::size_t> forge) {
    auto file = io::parse_vmodel(io::Source::open(detail::single_input(c)));
    RibbonOptions opt;
    opt.seed = c.seed;
    opt.workers = c.workers;
    if (c.samples > 0) opt.samples = c.samples;
    opt.forge_eta_column = forge;
    struct Run {
        std::string label;
        std::vector<Vec> section;
    };
    std::vector<Run> runs{{file.section ? "explicit section" : "default section", file.data().section},
                          {"random section (seed " + std::to_string(c.seed) + ")", random_section(file.ring, file.a, c.seed)}};
    bool pass = true;
    std::size_t dim = 0;
    std::optional<RibbonCheck> failed;
    for (const auto& run : runs) {
        VModel m(VModelData{file.ring, file.a, file.q, run.section}, std::max<std::int64_t>(729, c.cap));
        auto rep = verify_ribbon(m, opt);
        dim = rep.dim;
        r.say(run.label + ":");
        for (const auto& ch : rep.checks) {
            r.say("  " + ch.name + ": " + (ch.pass ? "PASS" : "FAIL") + " (" + ch.detail + ", " + detail::seconds(ch.seconds) + ")");
            r.record("check", {{"section", run.label}, {"name", ch.name}, {"pass", ch.pass}, {"detail", ch.detail}});
            if (!ch.pass && !failed) failed = ch;
        }
        pass = pass && rep.pass();
    }
    r.say(std::string("Theorem 1: ") + (pass ? "PASS" : "FAIL") + " (dim V = " + std::to_string(dim) + ")");
    r.record("verdict", {{"command", "ribbon"}, {"dim", dim}, {"pass", pass}});
    if (failed) r.failure(failed->name, failed->detail, failed->counterexample);
    return pass ? 0 : 1;
}

inline int cmd_search(const RunConfig& c, Report& r) {
    LieRing g = io::parse_ring(io::Source::open(detail::single_input(c)));
    auto res = search_invariant_forms(g);
    r.say(std::to_string(res.invariant_grams) + " invariant symmetric Gram matrices; " +
          std::to_string(res.forms.size()) + " nondegenerate forms with a Lagrangian ideal" +
          (res.complete ? "" : " (enumeration capped)"));
    r.record("search", {{"invariant_grams", res.invariant_grams}, {"forms", res.forms.size()}, {"complete", res.complete}});
    for (std::size_t i = 0; i < res.forms.size(); ++i) {
        const auto& f = res.forms[i];
        std::string ideals;
        for (const auto& a : f.lagrangian_ideals) ideals += (ideals.empty() ? "" : " ") + detail::span_text(a);
        r.say("  form " + std::to_string(i) + ": q on generators " + [&] {
            std::string s;
            for (const auto& v : f.metric.generator_values()) s += (s.empty() ? "" : " ") + v.to_string();
            return s;
        }() + "; Lagrangian ideals " + ideals + (f.abelian_ideal ? " (abelian)" : ""));
        r.record("form", {{"index", i}, {"metric", io::to_text(f.metric)}, {"ideals", ideals}, {"abelian_ideal", f.abelian_ideal}});
    }
    return 0;
}

/// Parses argv and runs one command. Errors are reported on `err`.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"orbitlab: exact checks for the orbit method on finite nilpotent Lie rings"};
    app.require_subcommand(1);
    RunConfig cfg;
    std::string format = "human";
    app.add_option("--cap", cfg.cap, "maximum group size to enumerate (default $ORBITLAB_CAP or 78125)");
    app.add_option("--samples", cfg.samples, "sample count for sampled checks");
    app.add_option("--seed", cfg.seed, "seed for randomized checks");
    app.add_option("--workers", cfg.workers, "worker threads")->check(CLI::Range(1, 256));
    app.add_option("--format", format, "human or records")->check(CLI::IsMember({"human", "records"}));

    auto file_cmd = [&](const std::string& name, const std::string& help) {
        auto* s = app.add_subcommand(name, help);
        s->add_option("input", cfg.inputs, "input file")->required();
        s->fallthrough();
        return s;
    };
    file_cmd("validate", "check Lie-ring axioms and report the class");
    auto* bch_cmd = app.add_subcommand("bch", "series coefficient tables with denominator certificates");
    bch_cmd->fallthrough();
    int gens = 2, cls = 3;
    std::string series = "bch";
    bch_cmd->add_option("--gens", gens, "generator count (1-3)");
    bch_cmd->add_option("--class", cls, "nilpotency class (1-6)");
    bch_cmd->add_option("--series", series, "bch, exp_ad, phi or lambda")
        ->check(CLI::IsMember({"bch", "exp_ad", "phi", "lambda"}));
    file_cmd("orbits", "coadjoint orbit census");
    file_cmd("kernel-check", "stabilizer = radical and the restriction criterion");
    auto* pol = file_cmd("polarize", "Heisenberg chain and Lagrangian extension");
    std::string chi;
    pol->add_option("--chi", chi, "character as fractions, e.g. 0,0,1/5 (default: all 1/p^k)");
    auto* gauss_cmd = file_cmd("gauss", "metric-group report");
    bool st = false;
    gauss_cmd->add_flag("--st", st, "also check the S and T relations");
    auto* rib = file_cmd("ribbon", "V-model suite: eta = q^");
    std::optional<std::size_t> forge;
    rib->add_option("--forge-eta", forge, "negative control: perturb one eta column");
    file_cmd("search-forms", "invariant quadratic forms with a Lagrangian ideal");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "orbitlab: " << e.what() << "\n";
        return 2;
    }
    cfg.format = format == "records" ? Format::records : Format::human;
    cfg.command = app.get_subcommands().front()->get_name();
    Report r(cfg.format, out);
    try {
        if (cfg.cap < 1) throw InputError("--cap must be positive");
        if (cfg.samples < 0) throw InputError("--samples must be non-negative");
        const std::string& cmd = cfg.command;
        if (cmd == "validate") return cmd_validate(cfg, r);
        if (cmd == "bch") return cmd_bch(cfg, r, gens, cls, series);
        if (cmd == "orbits") return cmd_orbits(cfg, r);
        if (cmd == "kernel-check") return cmd_kernel_check(cfg, r);
        if (cmd == "polarize") return cmd_polarize(cfg, r, chi);
        if (cmd == "gauss") return cmd_gauss(cfg, r, st);
        if (cmd == "ribbon") return cmd_ribbon(cfg, r, forge);
        if (cmd == "search-forms") return cmd_search(cfg, r);
        throw InputError("unknown command " + cmd);
    } catch (const VerificationFailure& e) {
        r.failure(e);
        return 1;
    } catch (const InternalError& e) {
        r.failure(VerificationFailure("internal", e.what()));
        return 1;
    } catch (const InputError& e) {
        err << "orbitlab: error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace orbitlab::cli
