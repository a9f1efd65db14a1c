// Acceptance run: one PASS/FAIL line per criterion with its measured runtime
// against the limit. Exit status is nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "orbitlab/cli/run.hpp"
#include "orbitlab/freelie/series.hpp"
#include "orbitlab/lazard/catalog.hpp"
#include "orbitlab/metric/fourier.hpp"
#include "orbitlab/polarizations/polarization.hpp"
#include "orbitlab/vmodel/vmodel.hpp"

using namespace orbitlab;

namespace {

struct Verdict {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            if (pass) detail = what;
            pass = false;
        }
    }
};

std::string data(const std::string& name) { return std::string(ORBITLAB_TEST_DATA) + "/" + name; }

// 1. BCH coefficients and denominator certificates.
Verdict bch_coefficients() {
    Verdict v;
    LiePoly b3 = bch(3);
    const auto& B = b3.basis();
    std::vector<std::string> order;
    for (int d = 1; d <= 3; ++d)
        for (int i : B->of_degree(d)) order.push_back(B->tree(i).text);
    v.require(order == std::vector<std::string>{"x", "y", "[x,y]", "[x,[x,y]]", "[y,[x,y]]"}, "unexpected Hall order");
    LiePoly expect = lie_element(B, "x") + lie_element(B, "y") + lie_element(B, "[x,y]") * Rational(1, 2) +
                     lie_element(B, "[x,[x,y]]") * Rational(1, 12) + lie_element(B, "[y,[y,x]]") * Rational(1, 12);
    v.require(b3 == expect, "degree <= 3 part differs from x + y + 1/2[x,y] + 1/12[x,[x,y]] + 1/12[y,[y,x]]");

    // Literal reading: the lcm of degree-i denominators divides i!. The
    // Z[1/i!] certificate supplies the exact lcm per degree.
    std::string bad;
    try {
        auto cert = certify("bch", 6);
        for (int d = 1; d <= 6; ++d) {
            const auto& den = cert.denominators[static_cast<std::size_t>(d)];
            const auto& fact = cert.bounds[static_cast<std::size_t>(d)];
            if (fact % den != 0)
                bad += (bad.empty() ? "" : ", ") + ("lcm " + den.str() + " does not divide " + std::to_string(d) + "! = " + fact.str());
        }
    } catch (const VerificationFailure& e) {
        v.require(false, std::string("Z[1/i!] certificate failed: ") + e.what());
    }
    v.require(bad.empty(), bad + " (the Z[1/i!] certificate holds through class 6)");
    if (v.pass) v.detail = "coefficients exact; denominators divide i! through class 6";
    return v;
}

// 2. Conjugation as e^{ad x}, w(x,y) = [y, Phi(x,y)], and the lambda identity, as LiePoly equalities through class 4.
Verdict symbolic_identities() {
    Verdict v;
    const int c = 4;
    auto B = hall_basis(2, c);
    LiePoly x = LiePoly::generator(B, 0), y = LiePoly::generator(B, 1);

    LiePoly conj = bch(bch(x, y), -x);
    LiePoly series(B);
    for (int n = 0; n < c; ++n) series += detail::ad_power(x, y, n) * (Rational(1) / factorial(n));
    v.require(conj == series, "log(e^x e^y e^-x) != e^{ad x}(y)");
    v.require(exp_ad(c) == series, "exp_ad differs from e^{ad x}(y)");
    auto B3 = hall_basis(2, 3);
    v.require(exp_ad(3) == lie_element(B3, "y") + lie_element(B3, "[x,y]") + lie_element(B3, "[x,[x,y]]") * Rational(1, 2),
              "class 3 series is not y + [x,y] + 1/2[x,[x,y]]");

    LiePoly w = x - bch(bch(-y, x), y);
    v.require(w == bracket(y, phi_series(c)), "x - y^-1 x y != [y, Phi(x,y)]");

    auto coeffs = lambda_coefficients(c - 1);
    v.require(coeffs == std::vector<Rational>{1, Rational(1, 2), Rational(1, 12), 0},
              "t/(1-e^-t) coefficients differ from 1, 1/2, 1/12, 0");
    LiePoly lam = lambda_series(c);
    LiePoly rhs(B);
    for (int n = 0; n < c; ++n) rhs += detail::ad_power(x, lam, n + 1) * (Rational(n % 2 ? -1 : 1) / factorial(n + 1));
    v.require(rhs == bracket(x, y), "[x,y] != [x,lambda(y)] - 1/2[x,[x,lambda(y)]] + ...");
    if (v.pass) v.detail = "three identities exact through class 4";
    return v;
}

// 3. Lazard round trip and associativity.
Verdict lazard_round_trip() {
    Verdict v;
    int rings = 0;
    for (const auto& e : catalog::full()) {
        LazardGroup G(e.ring);
        GroupLaw law = [&](const Vec& a, const Vec& b) { return G.mul(a, b); };
        LieRing back = log_group(e.ring.modulus(), e.ring.rank(), law);
        back.declared_class = e.ring.declared_class;
        v.require(back == e.ring, "log_group(exp_mul) differs on " + e.name);
        ++rings;
    }
    std::int64_t triples = 0;
    for (auto g : {catalog::heisenberg(3), catalog::upper_triangular(3, 3), catalog::abelian(3, 1, 3)}) {
        LazardGroup G(g);
        auto all = g.elements();
        for (const auto& a : all)
            for (const auto& b : all) {
                Vec ab = G.mul(a, b);
                for (const auto& c : all) {
                    ++triples;
                    if (G.mul(ab, c) != G.mul(a, G.mul(b, c))) v.require(false, "associativity fails at order 27");
                }
            }
    }
    auto u = catalog::upper_triangular(5, 4);
    LazardGroup U(u);
    std::mt19937_64 rng(20261016);
    std::uniform_int_distribution<std::int64_t> d(0, 4);
    auto rnd = [&] {
        Vec x(u.dim());
        for (auto& t : x) t = d(rng);
        return x;
    };
    for (int t = 0; t < 10000; ++t) {
        Vec a = rnd(), b = rnd(), c = rnd();
        if (U.mul(U.mul(a, b), c) != U.mul(a, U.mul(b, c))) v.require(false, "associativity fails on u4(Z/5)");
    }
    if (v.pass)
        v.detail = std::to_string(rings) + " rings round-trip; " + std::to_string(triples) +
                   " order-27 triples; 10000 u4(Z/5) triples";
    return v;
}

// 4. Kernel lemma: radical = stabilizer from the exhaustive oracle.
Verdict kernel_lemma() {
    Verdict v;
    int n = 0;
    auto h = catalog::heisenberg(5);
    LazardGroup H(h);
    CoadjointTable TH(H, true);
    for (const auto& chi : all_characters(h)) {
        ++n;
        v.require(radical(h, chi) == stabilizer_oracle(TH, chi), "h3(Z/5) mismatch at " + chi.to_string(h.modulus()));
    }
    auto u = catalog::upper_triangular(5, 4);
    LazardGroup U(u);
    CoadjointTable TU(U, true);
    for (const auto& chi : sample_characters(u, 500, 20261016)) {
        ++n;
        v.require(radical(u, chi) == stabilizer_oracle(TU, chi), "u4(Z/5) mismatch at " + chi.to_string(u.modulus()));
    }
    if (v.pass) v.detail = std::to_string(n) + " characters (125 of h3(Z/5), 500 sampled of u4(Z/5))";
    return v;
}

// 5. Orbit census of h3(Z/p).
Verdict orbit_census() {
    Verdict v;
    std::string counts;
    for (std::int64_t p : {3, 5, 7}) {
        auto g = catalog::heisenberg(p);
        LazardGroup G(g);
        auto orbits = enumerate_orbits(G);
        v.require(static_cast<std::int64_t>(orbits.size()) == p * p + p - 1, "wrong orbit count at p = " + std::to_string(p));
        for (const auto& o : orbits)
            v.require(o.size * o.stabilizer->size() == ipow(p, 3), "size x |stabilizer| != |G| at p = " + std::to_string(p));
        counts += (counts.empty() ? "" : ", ") + std::to_string(orbits.size());
    }
    if (v.pass) v.detail = "orbit counts " + counts + " for p = 3, 5, 7";
    return v;
}

// 6. Heisenberg chain postconditions and Lagrangian extension on every bundled ring.
Verdict polarizations() {
    Verdict v;
    int pairs = 0, lagrangians = 0;
    for (const auto& e : catalog::full()) {
        const LieRing& g = e.ring;
        Character chi = generic_character(g);
        Span c = radical(g, chi);
        ++pairs;
        auto chain = heisenberg_chain(g, chi);
        for (const auto& s : chain) {
            const auto& P = s.polarization;
            v.require(P.h_perp.log_size() + P.h.log_size() == g.full().log_size() + c.log_size(),
                      e.name + ": |h^perp| |h| != |g| |c|");
        }
        const auto& last = chain.back().polarization;
        v.require(last.h.contains(subring_bracket(g, last.h_perp, last.h)), e.name + ": final [h^perp, h] not in h");
        const int excess = g.full().log_size() - c.log_size();
        if (excess % 2 == 0) {
            auto rep = polarize(g, chi);
            v.require(rep.lagrangian.h == rep.lagrangian.h_perp, e.name + ": r != r^perp");
            ++lagrangians;
        }
    }
    if (v.pass)
        v.detail = std::to_string(pairs) + " (ring, generic chi) pairs; " + std::to_string(lagrangians) + " Lagrangians with r = r^perp";
    return v;
}

CycNumber integer(std::int64_t p, int level, std::int64_t n) { return CycNumber(p, level, Rational(n)); }

std::vector<MetricGroup> gauss_groups() {
    return {cyclic_metric(3, 1), cyclic_metric(5, 1), cyclic_metric(7, 1), hyperbolic_metric(3, 1),
            hyperbolic_metric(5, 1), hyperbolic_metric(3, 2), hyperbolic_metric(3, 1, 2)};
}

// 7. Gauss sums.
Verdict gauss_sums() {
    Verdict v;
    for (std::int64_t p : {3, 5, 7}) {
        auto m = cyclic_metric(p, 1);
        CycNumber G = gauss_sum(m);
        v.require(G * G.conj() == integer(p, G.level(), p), "G conj(G) != p for Z/" + std::to_string(p));
    }
    struct H {
        std::int64_t p;
        int k, n;
        std::int64_t card_a;
    };
    for (auto [p, k, n, card] : {H{3, 1, 1, 3}, H{5, 1, 1, 5}, H{3, 2, 1, 9}, H{3, 1, 2, 9}}) {
        auto m = hyperbolic_metric(p, k, n);
        CycNumber G = gauss_sum(m);
        v.require(G == integer(p, G.level(), card), "G != Card(a) for " + m.to_string());
    }
    if (v.pass) v.detail = "3 cyclic norms, 4 hyperbolic Card(a) identities";
    return v;
}

// 8. q^ closed form equals the Fourier preimage; coefficient at 0 is G/|p|.
Verdict qhat_two_paths() {
    Verdict v;
    auto groups = gauss_groups();
    for (const auto& m : groups) {
        auto a = qhat_closed_form(m);
        auto b = qhat_by_fourier(m);
        v.require(a == b, "two paths differ for " + m.to_string());
        v.require(a.at(m.group().zero()) == gauss_sum(m) * Rational(1, m.size()), "q^(0) != G/|p| for " + m.to_string());
    }
    if (v.pass) v.detail = std::to_string(groups.size()) + " metric groups";
    return v;
}

// 9. eta = q^ on the hyperbolic instances, default and seeded random sections.
Verdict eta_is_qhat() {
    Verdict v;
    struct I {
        std::int64_t p;
        int k, n;
    };
    int runs = 0;
    for (auto [p, k, n] : {I{3, 1, 1}, I{5, 1, 1}, I{7, 1, 1}, I{3, 2, 1}, I{3, 1, 2}})
        for (std::uint64_t seed : {0ull, 20261016ull}) {
            auto d = hyperbolic_vmodel(p, k, n);
            if (seed) d.section = random_section(d.ring, d.a, seed);
            VModel m(d);
            auto rep = verify_ribbon(m);
            ++runs;
            std::string where = d.q.to_string() + (seed ? " (random section)" : " (default section)");
            if (auto f = rep.first_failure()) v.require(false, where + ": " + f->name + " " + f->detail);
            v.require(rep.dim == m.order(), where + ": rank != |p|");
        }
    if (v.pass) v.detail = std::to_string(runs) + " instance/section runs, all six checks exact";
    return v;
}

// 10. Negative controls.
Verdict negative_controls() {
    Verdict v;
    auto rejected_by = [](const VModelData& d) -> std::string {
        try {
            validate_data(d);
        } catch (const VerificationFailure& e) {
            return e.check();
        }
        return "";
    };
    // Lagrangian condition: q(e1) = 1/3 on a = <e1>.
    auto d = hyperbolic_vmodel(3, 1);
    d.q = MetricGroup::on_ring_group(3, 1, 2, {QpModZp(3, 1, 1), QpModZp::zero(3)},
                                     {{QpModZp(3, 2, 1), QpModZp(3, 1, 1)}, {QpModZp(3, 1, 1), QpModZp::zero(3)}});
    v.require(rejected_by(d) == "lagrangian", "perturbed q on a was not rejected");
    // Invariance: a diagonal form on h3(Z/3) is moved by conjugation.
    LieRing h = catalog::heisenberg(3);
    Span a(h.modulus(), 3, {Vec{0, 1, 0}, Vec{0, 0, 1}});
    MetricGroup diag = MetricGroup::on_ring_group(
        3, 1, 3, {QpModZp(3, 1, 1), QpModZp(3, 1, 1), QpModZp(3, 1, 1)},
        {{QpModZp(3, 2, 1), QpModZp::zero(3), QpModZp::zero(3)},
         {QpModZp::zero(3), QpModZp(3, 2, 1), QpModZp::zero(3)},
         {QpModZp::zero(3), QpModZp::zero(3), QpModZp(3, 2, 1)}});
    v.require(rejected_by(VModelData{h, a, diag, lexmin_section(h, a)}) == "invariance", "non-invariant q was not rejected");

    // Through the command line: exit 1 with a counterexample block.
    auto run = [](std::vector<std::string> args, std::string& out) {
        args.insert(args.begin(), "orbitlab");
        std::vector<const char*> argv;
        for (const auto& s : args) argv.push_back(s.c_str());
        std::ostringstream o, e;
        int code = cli::run(static_cast<int>(argv.size()), argv.data(), o, e);
        out = o.str();
        return code;
    };
    std::string out;
    int code = run({"ribbon", "--forge-eta", "4", data("hyper3.vm")}, out);
    v.require(code == 1 && out.find("counterexample:") != std::string::npos, "forged eta did not exit 1 with a counterexample");
    code = run({"ribbon", data("perturbed_q.vm")}, out);
    v.require(code == 1 && out.find("FAIL lagrangian") != std::string::npos, "perturbed_q.vm did not fail validation");
    if (v.pass) v.detail = "lagrangian and invariance perturbations rejected; forged eta exits 1 with counterexample";
    return v;
}

} // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        double limit;
        std::function<Verdict()> run;
    };
    const std::vector<Criterion> criteria{
        {1, "BCH coefficients", 5, bch_coefficients},
        {2, "symbolic identities", 10, symbolic_identities},
        {3, "Lazard round trip", 30, lazard_round_trip},
        {4, "kernel = stabilizer", 60, kernel_lemma},
        {5, "orbit census", 60, orbit_census},
        {6, "polarizations", 30, polarizations},
        {7, "Gauss sums", 10, gauss_sums},
        {8, "q^ two paths", 10, qhat_two_paths},
        {9, "eta = q^", 120, eta_is_qhat},
        {10, "negative controls", 0, negative_controls},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.run();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.limit > 0 && s > c.limit) {
            v.detail += "; runtime over the limit";
            v.pass = false;
        }
        char timing[64];
        if (c.limit > 0) std::snprintf(timing, sizeof timing, "%.2f s / %.0f s", s, c.limit);
        else std::snprintf(timing, sizeof timing, "%.2f s", s);
        std::cout << "criterion " << c.id << " (" << c.name << "): " << (v.pass ? "PASS" : "FAIL") << " [" << timing
                  << "] " << v.detail << std::endl;
        failed += !v.pass;
    }
    std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria pass" << std::endl;
    return failed ? 1 : 0;
}
