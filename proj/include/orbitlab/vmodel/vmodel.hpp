#pragma once

// The finite model of V: basis 1_{alpha,beta} for alpha, beta in b = p/a, the
// action of Gamma = Exp(p), the twist eta, and the exact check eta = q^.
// Elements of b are canonical coset representatives in p; products in b are
// products in p followed by reduction mod a.

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "orbitlab/lazard/catalog.hpp"
#include "orbitlab/lazard/exp.hpp"
#include "orbitlab/metric/fourier.hpp"
#include "orbitlab/parallel.hpp"

namespace orbitlab {

struct VModelData {
    LieRing ring;  ///< p = Log Gamma
    Span a;        ///< Lagrangian ideal
    MetricGroup q;
    std::vector<Vec> section;  ///< one lift per coset of a; the zero coset must lift to 0
};

namespace detail {

inline std::string vtext(const Vec& v) { return vec_to_string(v); }

inline Vec lexmin_in_coset(const std::vector<Vec>& a_elems, const Vec& x, const LieRing& g) {
    Vec best;
    for (const auto& e : a_elems) {
        Vec c = g.add(x, e);
        if (best.empty() || c < best) best = c;
    }
    return best;
}

/// Canonical representatives of p/a, lexicographically sorted (so 0 comes first).
inline std::vector<Vec> coset_reps(const LieRing& g, const Span& a) {
    std::map<Vec, int> seen;
    for (const auto& x : g.elements()) seen.emplace(a.reduce(x), 0);
    std::vector<Vec> out;
    for (const auto& [v, _] : seen) out.push_back(v);
    return out;
}

} // namespace detail

/// s(beta) = the lexicographically least element of the coset beta.
inline std::vector<Vec> lexmin_section(const LieRing& g, const Span& a) {
    auto ae = a.elements();
    std::vector<Vec> s;
    for (const auto& b : detail::coset_reps(g, a)) s.push_back(detail::lexmin_in_coset(ae, b, g));
    return s;
}

/// lexmin_section shifted by a seeded random element of a on every nonzero coset.
inline std::vector<Vec> random_section(const LieRing& g, const Span& a, std::uint64_t seed) {
    auto ae = a.elements();
    auto s = lexmin_section(g, a);
    std::mt19937_64 rng(seed);
    for (std::size_t i = 1; i < s.size(); ++i) s[i] = g.add(s[i], ae[rng() % ae.size()]);
    return s;
}

/// p = a + b abelian of rank 2n over Z/p^k, q = sum a_i b_i / p^k, a = first n coordinates.
inline VModelData hyperbolic_vmodel(std::int64_t p, int k, int n = 1) {
    LieRing g = catalog::abelian(p, k, 2 * n);
    std::vector<Vec> gens;
    for (int i = 0; i < n; ++i) gens.push_back(g.basis(i));
    Span a(g.modulus(), static_cast<std::size_t>(g.rank()), gens);
    auto s = lexmin_section(g, a);
    return {g, a, hyperbolic_metric(p, k, n), s};
}

/// A monomial image zeta^exponent 1_{target}, zeta = zeta_{p^M}.
struct Monomial {
    std::size_t target = 0;
    std::int64_t exponent = 0;
    friend bool operator==(const Monomial& x, const Monomial& y) {
        return x.target == y.target && x.exponent == y.exponent;
    }
};

class VModel {
public:
    /// Validates the data, then precomputes b and the section table.
    explicit VModel(VModelData d, std::int64_t max_order = 729)
        : d_(std::move(d)), G_(d_.ring), phi_(d_.ring, phi_series(std::max(1, G_.nilpotency_class()))) {
        if (d_.ring.full().size() > max_order)
            throw InputError("v-model: |p| = " + std::to_string(d_.ring.full().size()) + " exceeds the cap " +
                             std::to_string(max_order));
        validate();
    }

    const VModelData& data() const noexcept { return d_; }
    const LazardGroup& group() const noexcept { return G_; }
    std::size_t b_size() const noexcept { return reps_.size(); }
    std::size_t dim() const noexcept { return reps_.size() * reps_.size(); }
    std::size_t order() const noexcept { return static_cast<std::size_t>(d_.q.size()); }
    const std::vector<Vec>& b_elements() const noexcept { return reps_; }
    std::int64_t p() const { return d_.ring.p(); }
    int level() const { return d_.q.level(); }
    std::int64_t conductor() const { return ipow(p(), level()); }

    std::size_t b_index(const Vec& x) const { return bidx_.at(d_.a.reduce(x)); }
    std::size_t basis_index(std::size_t alpha, std::size_t beta) const { return alpha * b_size() + beta; }
    std::pair<std::size_t, std::size_t> basis_pair(std::size_t i) const { return {i / b_size(), i % b_size()}; }
    const Vec& s(std::size_t beta) const { return sec_[beta]; }

    /// Elements of Gamma = p, in AbelianGroup index order.
    Vec element(std::size_t i) const { return d_.q.group().element(i); }
    std::size_t element_index(const Vec& g) const { return d_.q.group().index(g); }

    // Products in b.
    std::size_t b_mul(std::size_t x, std::size_t y) const { return b_index(G_.mul(reps_[x], reps_[y])); }
    std::size_t b_act(const Vec& g, std::size_t y) const { return b_index(G_.mul(g, reps_[y])); }
    std::size_t b_conj(const Vec& g, std::size_t x) const { return b_index(G_.conjugate(g, reps_[x])); }
    Vec phi(std::size_t x, std::size_t y) const { return phi_({reps_[x], reps_[y]}); }

    /// B~(x, beta) for x in a as the exponent of zeta_{p^M}; independent of the lift of beta.
    std::int64_t pair_a_b(const Vec& x, const Vec& beta) const {
        if (!d_.a.contains(x))
            throw VerificationFailure("data-consistency", "comparison difference is not in a",
                                      {{"difference", detail::vtext(x)}});
        return d_.q.b_num(x, beta);
    }

    /// g 1_{alpha,beta} = B~(g s(beta) - s(g beta), Phi(g alpha g^-1, g beta)) 1_{g alpha g^-1, g beta}.
    Monomial act(const Vec& g, std::size_t i) const {
        auto [al, be] = basis_pair(i);
        std::size_t ga = b_conj(g, al);
        std::size_t gb = b_act(g, be);
        Vec diff = d_.ring.sub(G_.mul(g, sec_[be]), sec_[gb]);
        return {basis_index(ga, gb), pair_a_b(diff, phi(ga, gb))};
    }

    /// eta 1_{alpha,beta} = q~(s(alpha))^-1 B~(s(alpha) s(beta) - s(alpha beta), Phi(alpha, alpha beta)) 1_{alpha, alpha beta}.
    Monomial eta(std::size_t i) const {
        auto [al, be] = basis_pair(i);
        std::size_t ab = b_mul(al, be);
        Vec diff = d_.ring.sub(G_.mul(sec_[al], sec_[be]), sec_[ab]);
        std::int64_t e = -d_.q.q_num(sec_[al]) + pair_a_b(diff, phi(al, ab));
        Monomial m{basis_index(al, ab), mod_reduce(e, conductor())};
        if (be == 0) {
            Monomial slice{basis_index(al, al), mod_reduce(-d_.q.q_num(sec_[al]), conductor())};
            if (!(m == slice))
                throw InternalError("eta: closed form disagrees with q~(s(alpha))^-1 1_{alpha,alpha} at alpha = " +
                                    detail::vtext(reps_[al]));
        }
        return m;
    }

    using Vector = std::vector<CycNumber>;

    Vector basis_vector(std::size_t i) const {
        Vector v(dim(), CycNumber(p(), level()));
        v[i] = CycNumber(p(), level(), Rational(1));
        return v;
    }

    Vector apply(const Vector& v, const std::function<Monomial(std::size_t)>& f) const {
        Vector out(dim(), CycNumber(p(), level()));
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (v[i].is_zero()) continue;
            Monomial m = f(i);
            out[m.target] += v[i].times_root(m.exponent);
        }
        return out;
    }
    Vector gamma_act(const Vec& g, const Vector& v) const {
        return apply(v, [&](std::size_t i) { return act(g, i); });
    }
    Vector eta(const Vector& v) const {
        return apply(v, [&](std::size_t i) { return eta(i); });
    }

private:
    [[noreturn]] void fail(const std::string& check, const std::string& what, VerificationFailure::Witness w) const {
        throw VerificationFailure(check, what, std::move(w));
    }

    void validate() {
        const LieRing& g = d_.ring;
        const Modulus& m = g.modulus();
        const auto& grp = d_.q.group();
        if (grp.rank() != static_cast<std::size_t>(g.rank()))
            throw InputError("v-model: q has rank " + std::to_string(grp.rank()) + ", the ring has rank " +
                             std::to_string(g.rank()));
        for (int k : grp.orders())
            if (k != m.k() || grp.p() != g.p()) throw InputError("v-model: q is not defined on the ring's group");
        if (d_.a.dim() != static_cast<std::size_t>(g.rank()) || !(d_.a.modulus().value() == m.value()))
            throw InputError("v-model: a does not live in the ring");

        reps_ = detail::coset_reps(g, d_.a);
        for (std::size_t i = 0; i < reps_.size(); ++i) bidx_[reps_[i]] = i;

        // section
        if (d_.section.size() != reps_.size())
            fail("section", "expected one lift per coset",
                 {{"cosets", std::to_string(reps_.size())}, {"lifts", std::to_string(d_.section.size())}});
        sec_.assign(reps_.size(), Vec{});
        for (const auto& raw : d_.section) {
            Vec x = g.add(raw, g.zero());
            std::size_t b = b_index(x);
            if (!sec_[b].empty())
                fail("section", "two lifts of the same coset", {{"first", detail::vtext(sec_[b])}, {"second", detail::vtext(x)}});
            sec_[b] = x;
        }
        if (!detail::is_zero(sec_[0])) fail("section", "s(0) != 0", {{"s(0)", detail::vtext(sec_[0])}});

        // ideal and abelian
        for (int i = 0; i < g.rank(); ++i)
            for (const auto& x : d_.a.generators()) {
                Vec br = g.bracket(g.basis(i), x);
                if (!d_.a.contains(br))
                    fail("ideal", "[p, a] is not in a",
                         {{"x", detail::vtext(g.basis(i))}, {"a", detail::vtext(x)}, {"[x, a]", detail::vtext(br)}});
            }
        for (const auto& x : d_.a.generators())
            for (const auto& y : d_.a.generators())
                if (!detail::is_zero(g.bracket(x, y)))
                    fail("abelian", "a is not abelian", {{"a1", detail::vtext(x)}, {"a2", detail::vtext(y)}});

        // invariance under Exp(p)-conjugation, every g and x
        const auto all = g.elements();
        for (const auto& h : all)
            for (const auto& x : all) {
                Vec c = G_.conjugate(h, x);
                if (d_.q.q_num(c) != d_.q.q_num(x))
                    fail("invariance", "q(g x g^-1) != q(x)",
                         {{"g", detail::vtext(h)}, {"x", detail::vtext(x)}, {"q(x)", d_.q.q(x).to_string()},
                          {"q(gxg^-1)", d_.q.q(c).to_string()}});
            }

        // Lagrangian: q~(a) = 1 and a = a^perp
        for (const auto& x : d_.a.elements())
            if (d_.q.q_num(x) != 0)
                fail("lagrangian", "q does not vanish on a", {{"a", detail::vtext(x)}, {"q(a)", d_.q.q(x).to_string()}});
        if (d_.a.size() * d_.a.size() != d_.q.size())
            fail("lagrangian", "|a|^2 != |p|", {{"|a|", std::to_string(d_.a.size())}, {"|p|", std::to_string(d_.q.size())}});
        if (auto w = d_.q.degeneracy_witness())
            fail("lagrangian", "B is degenerate, so a^perp is larger than a", {{"radical element", detail::vtext(*w)}});
    }

    VModelData d_;
    LazardGroup G_;
    SpecializedSeries phi_;
    std::vector<Vec> reps_;
    std::map<Vec, std::size_t> bidx_;
    std::vector<Vec> sec_;
};

/// Runs every axiom check; throws VerificationFailure naming the failed axiom.
inline void validate_data(const VModelData& d) { VModel m(d); }

struct RibbonOptions {
    std::int64_t exhaustive_limit = 81;  ///< |p| up to which the action law is checked on all pairs
    int samples = 2000;
    std::uint64_t seed = 1;
    int workers = 1;
    std::optional<std::size_t> forge_eta_column;  ///< multiply one eta column by zeta (negative control)
};

struct RibbonCheck {
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0;
    VerificationFailure::Witness counterexample;
};

struct RibbonReport {
    std::size_t dim = 0;
    std::vector<RibbonCheck> checks;
    bool pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
    const RibbonCheck* first_failure() const {
        for (const auto& c : checks)
            if (!c.pass) return &c;
        return nullptr;
    }
};

namespace detail {

inline std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t m) {
    return static_cast<std::int64_t>(static_cast<__int128>(a) * b % m);
}

inline std::int64_t powmod(std::int64_t b, std::int64_t e, std::int64_t m) {
    std::int64_t r = 1;
    b %= m;
    for (; e; e >>= 1, b = mulmod(b, b, m))
        if (e & 1) r = mulmod(r, b, m);
    return r;
}

/// A prime l = 1 mod N above `from` with a primitive N-th root of unity w, N = p^M.
inline std::pair<std::int64_t, std::int64_t> split_prime(std::int64_t N, std::int64_t p, std::int64_t from) {
    for (std::int64_t l = (from / N + 1) * N + 1;; l += N) {
        if (!is_prime(l)) continue;
        if (N == 1) return {l, 1};
        for (std::int64_t c = 2; c < l; ++c) {
            std::int64_t w = powmod(c, (l - 1) / N, l);
            if (powmod(w, N / p, l) != 1) return {l, w};
        }
    }
}

inline std::int64_t rank_mod(std::vector<std::vector<std::int64_t>> a, std::int64_t l) {
    std::size_t r = 0;
    const std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t piv = r;
        while (piv < rows && a[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(a[piv], a[r]);
        std::int64_t inv = powmod(a[r][c], l - 2, l);
        for (std::size_t i = r + 1; i < rows; ++i) {
            if (a[i][c] == 0) continue;
            std::int64_t f = mulmod(a[i][c], inv, l);
            for (std::size_t j = c; j < cols; ++j) a[i][j] = mod_reduce(a[i][j] - mulmod(f, a[r][j], l), l);
        }
        ++r;
    }
    return static_cast<std::int64_t>(r);
}

/// Exact rank over Q(zeta) by elimination.
inline std::int64_t rank_exact(std::vector<std::vector<CycNumber>> a) {
    std::size_t r = 0;
    const std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t piv = r;
        while (piv < rows && a[piv][c].is_zero()) ++piv;
        if (piv == rows) continue;
        std::swap(a[piv], a[r]);
        CycNumber inv = a[r][c].inverse();
        for (std::size_t i = r + 1; i < rows; ++i) {
            if (a[i][c].is_zero()) continue;
            CycNumber f = a[i][c] * inv;
            for (std::size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
        }
        ++r;
    }
    return static_cast<std::int64_t>(r);
}

template <class Fn>
RibbonCheck timed(const std::string& name, Fn fn) {
    RibbonCheck c;
    c.name = name;
    auto t0 = std::chrono::steady_clock::now();
    try {
        fn(c);
    } catch (const VerificationFailure& e) {
        c.pass = false;
        c.detail = e.what();
        c.counterexample = e.witness();
    }
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return c;
}

inline std::string monomial_text(const VModel& m, const Monomial& x) {
    auto [al, be] = m.basis_pair(x.target);
    return "zeta_" + std::to_string(m.conductor()) + "^" + std::to_string(x.exponent) + " 1_{" +
           vec_to_string(m.b_elements()[al]) + ", " + vec_to_string(m.b_elements()[be]) + "}";
}

inline std::string basis_text(const VModel& m, std::size_t i) {
    auto [al, be] = m.basis_pair(i);
    return "1_{" + vec_to_string(m.b_elements()[al]) + ", " + vec_to_string(m.b_elements()[be]) + "}";
}

} // namespace detail

/// The full suite: action law, eta slice and equivariance, then (a) gu basis,
/// (b) h_beta0 reconstruction, (c) G = Card(a), (d) eta = q^ as matrices.
inline RibbonReport verify_ribbon(const VModel& m, const RibbonOptions& opt = {}) {
    RibbonReport rep;
    rep.dim = m.dim();
    const std::size_t n = m.order(), dim = m.dim(), nb = m.b_size();
    const std::int64_t N = m.conductor();
    const auto& q = m.data().q;
    const auto& G = m.group();

    // Action table act[g][i] and eta column images.
    auto table = parallel_map<std::vector<Monomial>>(n, opt.workers, [&](std::size_t gi) {
        std::vector<Monomial> row(dim);
        Vec g = m.element(gi);
        for (std::size_t i = 0; i < dim; ++i) row[i] = m.act(g, i);
        return row;
    });
    std::vector<Monomial> eta(dim);
    for (std::size_t i = 0; i < dim; ++i) eta[i] = m.eta(i);
    if (opt.forge_eta_column) {
        if (*opt.forge_eta_column >= dim) throw InputError("forge: column out of range");
        auto& e = eta[*opt.forge_eta_column];
        e.exponent = mod_reduce(e.exponent + 1, N);
    }

    rep.checks.push_back(detail::timed("action", [&](RibbonCheck& c) {
        const std::size_t zero = m.element_index(G.identity());
        for (std::size_t i = 0; i < dim; ++i)
            if (!(table[zero][i] == Monomial{i, 0}))
                throw VerificationFailure("action", "the unit does not act as the identity",
                                          {{"basis", detail::basis_text(m, i)}});
        auto check_pair = [&](std::size_t gi, std::size_t hi) {
            std::size_t ghi = m.element_index(G.mul(m.element(gi), m.element(hi)));
            for (std::size_t i = 0; i < dim; ++i) {
                Monomial h = table[hi][i];
                Monomial gh = table[gi][h.target];
                Monomial lhs{gh.target, mod_reduce(gh.exponent + h.exponent, N)};
                if (!(lhs == table[ghi][i]))
                    throw VerificationFailure("action", "g(h v) != (gh) v",
                                              {{"g", vec_to_string(m.element(gi))},
                                               {"h", vec_to_string(m.element(hi))},
                                               {"v", detail::basis_text(m, i)},
                                               {"g(h v)", detail::monomial_text(m, lhs)},
                                               {"(gh) v", detail::monomial_text(m, table[ghi][i])}});
            }
        };
        std::int64_t pairs = 0;
        if (static_cast<std::int64_t>(n) <= opt.exhaustive_limit) {
            for (std::size_t gi = 0; gi < n; ++gi)
                for (std::size_t hi = 0; hi < n; ++hi, ++pairs) check_pair(gi, hi);
            c.detail = "exhaustive, " + std::to_string(pairs) + " pairs";
        } else {
            std::mt19937_64 rng(opt.seed);
            for (int t = 0; t < opt.samples; ++t, ++pairs) check_pair(rng() % n, rng() % n);
            c.detail = "sampled, " + std::to_string(pairs) + " pairs";
        }
        c.pass = true;
    }));

    rep.checks.push_back(detail::timed("eta-equivariant", [&](RibbonCheck& c) {
        for (std::size_t gi = 0; gi < n; ++gi)
            for (std::size_t i = 0; i < dim; ++i) {
                Monomial a = table[gi][i], b = eta[a.target];
                Monomial ge{b.target, mod_reduce(a.exponent + b.exponent, N)};
                Monomial e = eta[i], d = table[gi][e.target];
                Monomial eg{d.target, mod_reduce(e.exponent + d.exponent, N)};
                if (!(ge == eg))
                    throw VerificationFailure("eta-equivariant", "eta(g v) != g eta(v)",
                                              {{"g", vec_to_string(m.element(gi))},
                                               {"v", detail::basis_text(m, i)},
                                               {"eta(g v)", detail::monomial_text(m, ge)},
                                               {"g eta(v)", detail::monomial_text(m, eg)}});
            }
        c.pass = true;
        c.detail = std::to_string(n) + " group elements";
    }));

    // u = sum_alpha 1_{alpha,0}; gu as a row per g.
    auto gu = [&](std::size_t gi) {
        std::vector<Monomial> out;
        for (std::size_t al = 0; al < nb; ++al) out.push_back(table[gi][m.basis_index(al, 0)]);
        return out;
    };

    rep.checks.push_back(detail::timed("basis", [&](RibbonCheck& c) {
        if (n != dim)
            throw VerificationFailure("basis", "|Gamma| != dim V",
                                      {{"|Gamma|", std::to_string(n)}, {"dim V", std::to_string(dim)}});
        auto [l, w] = detail::split_prime(N, m.p(), std::int64_t{1} << 30);
        std::vector<std::int64_t> wp(static_cast<std::size_t>(N));
        for (std::int64_t e = 0; e < N; ++e) wp[static_cast<std::size_t>(e)] = detail::powmod(w, e, l);
        std::vector<std::vector<std::int64_t>> mat(n, std::vector<std::int64_t>(dim, 0));
        for (std::size_t gi = 0; gi < n; ++gi)
            for (const auto& x : gu(gi))
                mat[gi][x.target] = (mat[gi][x.target] + wp[static_cast<std::size_t>(x.exponent)]) % l;
        std::int64_t r = detail::rank_mod(mat, l);
        if (r == static_cast<std::int64_t>(dim)) {
            c.pass = true;
            c.detail = "rank " + std::to_string(r) + " mod " + std::to_string(l);
            return;
        }
        std::vector<std::vector<CycNumber>> ex(n, std::vector<CycNumber>(dim, CycNumber(m.p(), m.level())));
        for (std::size_t gi = 0; gi < n; ++gi)
            for (const auto& x : gu(gi)) ex[gi][x.target] += CycNumber::root_of_unity(m.p(), m.level(), x.exponent);
        r = detail::rank_exact(ex);
        if (r != static_cast<std::int64_t>(dim))
            throw VerificationFailure("basis", "the vectors gu do not span V",
                                      {{"rank", std::to_string(r)}, {"dim V", std::to_string(dim)}});
        c.pass = true;
        c.detail = "exact rank " + std::to_string(r);
    }));

    rep.checks.push_back(detail::timed("h-reconstruction", [&](RibbonCheck& c) {
        const auto a_elems = m.data().a.elements();
        const Rational inv_a(1, static_cast<std::int64_t>(a_elems.size()));
        for (std::size_t b0 = 0; b0 < nb; ++b0) {
            const Vec& lift = m.s(b0);
            // Fourier form: (1/Card a) sum_a B~(a, Phi(-beta0, beta0)) (a + s(beta0)).
            std::map<std::size_t, CycNumber> fourier_h, closed_h;
            const std::size_t minus_b0 = m.b_index(m.data().ring.neg(lift));
            const Vec ph = m.phi(minus_b0, b0);
            for (const auto& x : a_elems) {
                Vec g = m.data().ring.add(x, lift);
                fourier_h.emplace(m.element_index(g),
                                  CycNumber::root_of_unity(m.p(), m.level(), m.pair_a_b(x, ph)) * inv_a);
                closed_h.emplace(m.element_index(g),
                                 CycNumber::root_of_unity(m.p(), m.level(), q.q_num(lift) - q.q_num(g)) * inv_a);
            }
            for (const auto& [gi, v] : closed_h)
                if (!(fourier_h.at(gi) == v))
                    throw VerificationFailure("h-reconstruction", "Fourier and closed forms of h_beta0 differ",
                                              {{"beta0", vec_to_string(m.b_elements()[b0])},
                                               {"g", vec_to_string(m.element(gi))},
                                               {"Fourier", fourier_h.at(gi).to_string()},
                                               {"closed", v.to_string()}});
            VModel::Vector hu(dim, CycNumber(m.p(), m.level()));
            for (const auto& [gi, coef] : closed_h)
                for (const auto& x : gu(gi)) hu[x.target] += coef.times_root(x.exponent);
            VModel::Vector want = m.basis_vector(m.basis_index(b0, b0));
            for (std::size_t i = 0; i < dim; ++i)
                if (!(hu[i] == want[i]))
                    throw VerificationFailure("h-reconstruction", "h_beta0 u != 1_{beta0,beta0}",
                                              {{"beta0", vec_to_string(m.b_elements()[b0])},
                                               {"coordinate", detail::basis_text(m, i)},
                                               {"value", hu[i].to_string()}});
        }
        c.pass = true;
        c.detail = std::to_string(nb) + " elements h_beta0";
    }));

    const CycNumber gauss = gauss_sum(q);
    rep.checks.push_back(detail::timed("gauss", [&](RibbonCheck& c) {
        const CycNumber card(m.p(), 0, Rational(m.data().a.size()));
        if (!(gauss == card))
            throw VerificationFailure("gauss", "G(p, q~) != Card(a)",
                                      {{"G", gauss.to_string()}, {"Card(a)", std::to_string(m.data().a.size())}});
        c.pass = true;
        c.detail = "G = " + std::to_string(m.data().a.size());
    }));

    rep.checks.push_back(detail::timed("eta=qhat", [&](RibbonCheck& c) {
        // q^ = G/|p| sum_g q~(g)^-1 g, applied column by column.
        const CycNumber scale = gauss * Rational(1, static_cast<std::int64_t>(n));
        std::vector<std::int64_t> qexp(n);
        for (std::size_t gi = 0; gi < n; ++gi) qexp[gi] = q.q_num(m.element(gi));
        using Bad = std::optional<VerificationFailure::Witness>;
        auto bad = parallel_map<Bad>(dim, opt.workers, [&](std::size_t j) -> Bad {
            std::vector<std::int64_t> w(dim * static_cast<std::size_t>(N), 0);
            for (std::size_t gi = 0; gi < n; ++gi) {
                const Monomial& x = table[gi][j];
                ++w[x.target * static_cast<std::size_t>(N) + static_cast<std::size_t>(mod_reduce(x.exponent - qexp[gi], N))];
            }
            for (std::size_t i = 0; i < dim; ++i) {
                std::vector<Rational> wi(static_cast<std::size_t>(N));
                bool any = false;
                for (std::int64_t e = 0; e < N; ++e) {
                    auto v = w[i * static_cast<std::size_t>(N) + static_cast<std::size_t>(e)];
                    wi[static_cast<std::size_t>(e)] = Rational(v);
                    any = any || v != 0;
                }
                CycNumber qh = any ? CycNumber::from_root_weights(m.p(), m.level(), wi) * scale : CycNumber(m.p(), m.level());
                CycNumber et = eta[j].target == i ? CycNumber::root_of_unity(m.p(), m.level(), eta[j].exponent)
                                                  : CycNumber(m.p(), m.level());
                if (!(qh == et))
                    return VerificationFailure::Witness{{"row", detail::basis_text(m, i)},
                                                        {"column", detail::basis_text(m, j)},
                                                        {"eta", et.to_string()},
                                                        {"q^", qh.to_string()}};
            }
            return std::nullopt;
        });
        for (auto& b : bad)
            if (b) throw VerificationFailure("eta=qhat", "eta and the action of q^ differ", *b);
        c.pass = true;
        c.detail = std::to_string(dim) + "x" + std::to_string(dim) + " matrices equal";
    }));
    return rep;
}

} // namespace orbitlab
