#pragma once

// The dual g* = Hom(g, Q_p/Z_p), the coadjoint action of G = Exp(g), orbits,
// stabilizers and the skew form B_chi(x, y) = chi([x, y]).

#include <cstdlib>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "orbitlab/arith/qpmodzp.hpp"
#include "orbitlab/lazard/exp.hpp"
#include "orbitlab/parallel.hpp"

namespace orbitlab {

/// Enumeration cap on |g*| and |G|; ORBITLAB_CAP overrides 5^7.
inline std::int64_t default_cap() {
    if (const char* env = std::getenv("ORBITLAB_CAP")) {
        char* end = nullptr;
        long long v = std::strtoll(env, &end, 10);
        if (end && *end == '\0' && v > 0) return v;
    }
    return 78125;
}

/// chi(e_i) = covector[i] / p^k.
struct Character {
    Vec covector;

    std::int64_t operator()(const Modulus& m, const Vec& x) const {
        std::int64_t s = 0;
        for (std::size_t i = 0; i < x.size(); ++i) s = m.reduce(s + covector[i] * x[i]);
        return s;
    }

    std::vector<QpModZp> values(const Modulus& m) const {
        std::vector<QpModZp> out;
        for (auto c : covector) out.emplace_back(m.p(), c, m.k());
        return out;
    }

    static Character from_values(const Modulus& m, const std::vector<QpModZp>& vals) {
        Character chi;
        for (const auto& v : vals) {
            if (v.p() != m.p()) throw InputError("character: value has the wrong prime");
            if (v.level() > m.k())
                throw InputError("character: value " + v.to_string() + " has level above k = " + std::to_string(m.k()));
            chi.covector.push_back(m.reduce(v.scaled_to(m.k())));
        }
        return chi;
    }

    std::string to_string(const Modulus& m) const {
        std::string s = "(";
        auto vals = values(m);
        for (std::size_t i = 0; i < vals.size(); ++i) {
            if (i) s += ", ";
            s += vals[i].to_string();
        }
        return s + ")";
    }

    friend bool operator==(const Character&, const Character&) = default;
    friend auto operator<=>(const Character&, const Character&) = default;
};

/// Every coordinate 1/p^k.
inline Character generic_character(const LieRing& g) { return Character{Vec(g.dim(), 1)}; }

/// Gram matrix of B_chi as numerators over p^k: gram[i][j] = chi([e_i, e_j]).
inline std::vector<Vec> skew_gram(const LieRing& g, const Character& chi) {
    std::vector<Vec> gram(g.dim(), Vec(g.dim(), 0));
    for (int i = 0; i < g.rank(); ++i)
        for (int j = 0; j < g.rank(); ++j)
            gram[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = chi(g.modulus(), g.basis_bracket(i, j));
    return gram;
}

/// {x : chi([x, y]) = 0 for all y in h}.
inline Span perp(const LieRing& g, const Character& chi, const Span& h) {
    auto gram = skew_gram(g, chi);
    auto hg = h.generators();
    ModMatrix m(g.modulus(), g.dim(), hg.size());
    for (std::size_t i = 0; i < g.dim(); ++i)
        for (std::size_t r = 0; r < hg.size(); ++r) {
            std::int64_t s = 0;
            for (std::size_t j = 0; j < g.dim(); ++j) s = g.modulus().reduce(s + gram[i][j] * hg[r][j]);
            m.at(i, r) = s;
        }
    if (hg.empty()) return g.full();
    return g.span(kernel(m));
}

/// Kernel of B_chi. Bracket closure is verified (it is the stabilizer Lie ring).
inline Span radical(const LieRing& g, const Character& chi) {
    Span r = perp(g, chi, g.full());
    if (!is_lie_subring(g, r))
        throw VerificationFailure("radical", "kernel of B_chi is not closed under the bracket",
                                  {{"chi", chi.to_string(g.modulus())}});
    return r;
}

/// (g.chi)(y) = chi(g^-1 y g), stored as matrices A_g with (g.chi)_j = sum_l chi_l A_g[j][l].
class CoadjointTable {
public:
    /// Builds the matrices of the basis elements, and of every group element
    /// when all_elements is set (|G| must then be within cap).
    CoadjointTable(const LazardGroup& G, bool all_elements, std::int64_t cap = default_cap()) : G_(&G) {
        const LieRing& g = G.ring();
        n_ = g.dim();
        for (int i = 0; i < g.rank(); ++i) generators_.push_back(matrix(g.basis(i)));
        if (all_elements) {
            std::int64_t order = ipow(g.p(), g.log_order());
            if (order > cap)
                throw InputError("coadjoint table: |G| = " + std::to_string(order) + " exceeds the cap " +
                                 std::to_string(cap) + "; use sampling mode or raise --cap");
            elements_ = g.elements();
            for (const auto& x : elements_) all_.push_back(matrix(x));
        }
    }

    const LazardGroup& group() const noexcept { return *G_; }
    const std::vector<Vec>& elements() const noexcept { return elements_; }
    bool has_all() const noexcept { return !all_.empty(); }

    /// Action matrix of an arbitrary element, computed on the spot.
    Vec matrix(const Vec& x) const {
        const LieRing& g = G_->ring();
        Vec a(n_ * n_);
        Vec xinv = G_->inverse(x);
        for (int j = 0; j < g.rank(); ++j) {
            Vec c = G_->conjugate(xinv, g.basis(j));
            for (std::size_t l = 0; l < n_; ++l) a[static_cast<std::size_t>(j) * n_ + l] = c[l];
        }
        return a;
    }

    Character apply(const Vec& a, const Character& chi) const {
        const Modulus& m = G_->ring().modulus();
        Character out{Vec(n_, 0)};
        for (std::size_t j = 0; j < n_; ++j) {
            std::int64_t s = 0;
            for (std::size_t l = 0; l < n_; ++l)
                if (a[j * n_ + l]) s = m.reduce(s + chi.covector[l] * a[j * n_ + l]);
            out.covector[j] = s;
        }
        return out;
    }

    Character act_generator(int i, const Character& chi) const { return apply(generators_[static_cast<std::size_t>(i)], chi); }
    Character act_element(std::size_t idx, const Character& chi) const { return apply(all_[idx], chi); }

private:
    const LazardGroup* G_;
    std::size_t n_ = 0;
    std::vector<Vec> generators_;
    std::vector<Vec> elements_;
    std::vector<Vec> all_;
};

/// g.chi computed directly from conjugation.
inline Character coadjoint_act(const LazardGroup& G, const Vec& x, const Character& chi) {
    const LieRing& g = G.ring();
    Character out{Vec(g.dim(), 0)};
    Vec xinv = G.inverse(x);
    for (int j = 0; j < g.rank(); ++j) out.covector[static_cast<std::size_t>(j)] = chi(g.modulus(), G.conjugate(xinv, g.basis(j)));
    return out;
}

/// {g : g.chi = chi} by exhaustive scan; must be an additive subgroup.
inline Span stabilizer_oracle(const CoadjointTable& T, const Character& chi) {
    if (!T.has_all()) throw InputError("stabilizer oracle: table was built without all group elements");
    const LieRing& g = T.group().ring();
    std::int64_t fixed = 0;
    Span s(g.modulus(), g.dim());
    for (std::size_t i = 0; i < T.elements().size(); ++i) {
        if (!(T.act_element(i, chi) == chi)) continue;
        ++fixed;
        if (!s.contains(T.elements()[i])) s = s.with(T.elements()[i]);
    }
    if (s.size() != fixed)
        throw VerificationFailure("stabilizer", "stabilizer is not an additive subgroup",
                                  {{"chi", chi.to_string(g.modulus())},
                                   {"stabilizer size", std::to_string(fixed)},
                                   {"additive span size", std::to_string(s.size())}});
    return s;
}

struct CoadjointOrbit {
    Character representative;  ///< lexicographically minimal covector
    std::int64_t size = 0;
    std::optional<Span> stabilizer;
};

struct OrbitOptions {
    std::int64_t cap = default_cap();
    bool stabilizers = true;
    int workers = 1;
};

namespace detail {

inline std::size_t char_index(const Vec& c, std::int64_t q) {
    std::size_t idx = 0;
    for (auto x : c) idx = idx * static_cast<std::size_t>(q) + static_cast<std::size_t>(x);
    return idx;
}

inline Vec char_from_index(std::size_t idx, std::size_t n, std::int64_t q) {
    Vec c(n);
    for (std::size_t i = n; i-- > 0;) {
        c[i] = static_cast<std::int64_t>(idx % static_cast<std::size_t>(q));
        idx /= static_cast<std::size_t>(q);
    }
    return c;
}

} // namespace detail

/// Orbits of G on g*, in increasing order of their minimal representatives.
/// Each orbit is closed under the basis elements, which generate G.
inline std::vector<CoadjointOrbit> enumerate_orbits(const LazardGroup& G, const OrbitOptions& opt = {}) {
    const LieRing& g = G.ring();
    const std::int64_t total = ipow(g.p(), g.log_order());
    if (total > opt.cap)
        throw InputError("orbits: |g*| = " + std::to_string(total) + " exceeds the cap " + std::to_string(opt.cap) +
                         "; use sampling mode (--samples) or raise --cap");
    CoadjointTable T(G, opt.stabilizers, opt.cap);
    const std::int64_t q = g.modulus().value();
    std::vector<int> seen(static_cast<std::size_t>(total), -1);
    std::vector<CoadjointOrbit> orbits;
    for (std::size_t start = 0; start < seen.size(); ++start) {
        if (seen[start] >= 0) continue;
        int id = static_cast<int>(orbits.size());
        CoadjointOrbit o;
        o.representative = Character{detail::char_from_index(start, g.dim(), q)};
        std::vector<Character> frontier{o.representative};
        seen[start] = id;
        o.size = 1;
        while (!frontier.empty()) {
            std::vector<Character> next;
            for (const auto& chi : frontier)
                for (int i = 0; i < g.rank(); ++i) {
                    Character psi = T.act_generator(i, chi);
                    auto& slot = seen[detail::char_index(psi.covector, q)];
                    if (slot >= 0) continue;
                    slot = id;
                    ++o.size;
                    next.push_back(std::move(psi));
                }
            frontier = std::move(next);
        }
        orbits.push_back(std::move(o));
    }
    if (opt.stabilizers) {
        auto stabs = parallel_map<std::optional<Span>>(orbits.size(), opt.workers, [&](std::size_t i) {
            return std::optional<Span>(stabilizer_oracle(T, orbits[i].representative));
        });
        for (std::size_t i = 0; i < orbits.size(); ++i) {
            if (orbits[i].size * stabs[i]->size() != total)
                throw VerificationFailure("orbit", "orbit size times stabilizer order differs from |G|",
                                          {{"chi", orbits[i].representative.to_string(g.modulus())},
                                           {"orbit size", std::to_string(orbits[i].size)},
                                           {"stabilizer size", std::to_string(stabs[i]->size())}});
            orbits[i].stabilizer = std::move(stabs[i]);
        }
    }
    return orbits;
}

/// Size histogram: orbit size -> number of orbits.
inline std::map<std::int64_t, std::int64_t> orbit_histogram(const std::vector<CoadjointOrbit>& orbits) {
    std::map<std::int64_t, std::int64_t> h;
    for (const auto& o : orbits) ++h[o.size];
    return h;
}

/// Uniformly random characters.
inline std::vector<Character> sample_characters(const LieRing& g, int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::int64_t> d(0, g.modulus().value() - 1);
    std::vector<Character> out;
    for (int i = 0; i < count; ++i) {
        Character chi{Vec(g.dim())};
        for (auto& x : chi.covector) x = d(rng);
        out.push_back(std::move(chi));
    }
    return out;
}

/// Every character, in lexicographic order.
inline std::vector<Character> all_characters(const LieRing& g, std::int64_t cap = default_cap()) {
    const std::int64_t total = ipow(g.p(), g.log_order());
    if (total > cap) throw InputError("characters: |g*| = " + std::to_string(total) + " exceeds the cap");
    std::vector<Character> out;
    for (std::int64_t i = 0; i < total; ++i)
        out.push_back(Character{detail::char_from_index(static_cast<std::size_t>(i), g.dim(), g.modulus().value())});
    return out;
}

struct KernelCheck {
    Character chi;
    Span radical;
    Span stabilizer;
    int normalizer_checks = 0;  ///< (a, b) pairs tested for the restriction criterion
};

/// {x : [x, y] = 0 for all y}.
inline Span center(const LieRing& g) {
    ModMatrix m(g.modulus(), g.dim(), g.dim() * g.dim());
    for (int i = 0; i < g.rank(); ++i)
        for (int j = 0; j < g.rank(); ++j)
            for (std::size_t l = 0; l < g.dim(); ++l)
                m.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j) * g.dim() + l) = g.basis_bracket(i, j)[l];
    return g.span(kernel(m));
}

/// Subrings used for the restriction criterion: the lower central series, the
/// center, the radical, and the Lie closures of single basis vectors and pairs.
inline std::vector<Span> test_subrings(const LieRing& g, const Character& chi) {
    std::vector<Span> out;
    auto push = [&](const Span& s) {
        for (const auto& t : out)
            if (t == s) return;
        out.push_back(s);
    };
    Span cur = g.full();
    while (cur.log_size() > 0) {
        push(cur);
        cur = bracket_span(g, g.full(), cur);
    }
    push(center(g));
    push(radical(g, chi));
    for (int i = 0; i < g.rank(); ++i) {
        push(lie_closure(g, g.span({g.basis(i)})));
        for (int j = i + 1; j < g.rank(); ++j) push(lie_closure(g, g.span({g.basis(i), g.basis(j)})));
    }
    return out;
}

/// Stabilizer (exhaustive) equals radical (Gram kernel), plus the restriction
/// criterion: for a Lie subring a and b with [b, a] in a, chi|a is fixed by b
/// iff b lies in a-perp. Mismatches are VerificationFailures with witnesses.
inline KernelCheck kernel_lemma_check(const CoadjointTable& T, const Character& chi, int normalizer_samples = 8,
                                      std::uint64_t seed = 1) {
    const LieRing& g = T.group().ring();
    const Modulus& m = g.modulus();
    KernelCheck r{chi, radical(g, chi), stabilizer_oracle(T, chi), 0};
    if (!(r.radical == r.stabilizer)) {
        Vec witness;
        for (const auto& x : r.stabilizer.elements())
            if (!r.radical.contains(x)) witness = x;
        if (witness.empty())
            for (const auto& x : r.radical.elements())
                if (!r.stabilizer.contains(x)) witness = x;
        throw VerificationFailure("kernel", "stabilizer differs from the radical of B_chi",
                                  {{"chi", chi.to_string(m)},
                                   {"witness", vec_to_string(witness)},
                                   {"stabilizer size", std::to_string(r.stabilizer.size())},
                                   {"radical size", std::to_string(r.radical.size())}});
    }
    std::mt19937_64 rng(seed ^ detail::char_index(chi.covector, m.value()));
    for (const Span& a : test_subrings(g, chi)) {
        Span ap = perp(g, chi, a);
        auto agens = a.generators();
        auto ap_gens = ap.generators();
        std::uniform_int_distribution<std::int64_t> coef(0, m.value() - 1);
        auto random_in = [&](const std::vector<Vec>& gens) {
            Vec v = g.zero();
            for (const auto& x : gens) detail::axpy(m, v, coef(rng), x);
            return v;
        };
        for (int s = 0; s < normalizer_samples; ++s) {
            // candidates from G, from a (always normalizing) and from a-perp
            Vec b = s % 3 == 0 ? random_in(g.full().generators()) : s % 3 == 1 ? random_in(agens) : random_in(ap_gens);
            bool normalizes = true;
            for (const auto& x : agens)
                if (!a.contains(g.bracket(b, x))) normalizes = false;
            if (!normalizes) continue;
            Character moved = coadjoint_act(T.group(), b, chi);
            bool same = true;
            for (const auto& x : agens)
                if (moved(m, x) != chi(m, x)) same = false;
            ++r.normalizer_checks;
            if (same != ap.contains(b))
                throw VerificationFailure("restriction", "b fixes chi on a but b is not in a-perp, or conversely",
                                          {{"chi", chi.to_string(m)}, {"b", vec_to_string(b)}, {"fixes", same ? "yes" : "no"}});
        }
    }
    return r;
}

} // namespace orbitlab
