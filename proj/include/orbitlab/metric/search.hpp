#pragma once

// Search for conjugation-invariant nondegenerate quadratic forms on the
// additive group of a Lie ring that vanish on a Lagrangian ideal. For odd p,
// q(x) = B(x, x)/2, so it suffices to enumerate invariant symmetric B, which
// form the kernel of a linear system over Z/p^k.

#include <cstdint>
#include <vector>

#include "orbitlab/lazard/exp.hpp"
#include "orbitlab/metric/metric_group.hpp"

namespace orbitlab {

struct InvariantForm {
    MetricGroup metric;
    std::vector<Span> lagrangian_ideals;
    bool abelian_ideal = false;  ///< some listed ideal is abelian
};

struct FormSearch {
    std::vector<InvariantForm> forms;
    std::int64_t invariant_grams = 0;  ///< candidates satisfying the linear invariance constraints
    bool complete = true;
};

inline FormSearch search_invariant_forms(const LieRing& g, std::int64_t enumeration_cap = 1000000) {
    const std::int64_t p = g.p();
    const int k = g.modulus().k();
    const int r = g.rank();
    if (p == 2) throw InputError("search-forms: p = 2 is not supported (q is not determined by B)");
    if (g.log_order() > 4) throw InputError("search-forms: |p| exceeds p^4");
    LazardGroup G(g);
    const Modulus& mod = g.modulus();

    // Variables: b_st, s <= t. Constraints: (A^T B A - B)_ij = 0, i <= j, for A = Ad(e_l).
    std::vector<std::pair<int, int>> vars;
    for (int s = 0; s < r; ++s)
        for (int t = s; t < r; ++t) vars.emplace_back(s, t);
    std::vector<std::vector<Vec>> ads;
    for (int l = 0; l < r; ++l) {
        std::vector<Vec> cols;
        for (int j = 0; j < r; ++j) cols.push_back(G.conjugate(g.basis(l), g.basis(j)));
        ads.push_back(std::move(cols));  // ads[l][j][i] = A_ij
    }
    const std::size_t nv = vars.size();
    const std::size_t nc = static_cast<std::size_t>(r) * nv;
    ModMatrix m(mod, nv, std::max<std::size_t>(nc, 1));
    for (int l = 0; l < r; ++l) {
        const auto& A = ads[static_cast<std::size_t>(l)];
        auto a = [&](int i, int j) { return A[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]; };
        for (std::size_t c = 0; c < nv; ++c) {
            auto [i, j] = vars[c];
            const std::size_t col = static_cast<std::size_t>(l) * nv + c;
            for (std::size_t v = 0; v < nv; ++v) {
                auto [s, t] = vars[v];
                std::int64_t coef = a(s, i) * a(t, j);
                if (s != t) coef += a(t, i) * a(s, j);
                if (static_cast<std::size_t>(v) == c) coef -= 1;
                m.at(v, col) = mod.reduce(m.at(v, col) + coef);
            }
        }
    }
    Span solutions(mod, nv, kernel(m));

    FormSearch out;
    out.invariant_grams = solutions.size();
    if (solutions.size() > enumeration_cap) {
        out.complete = false;
        return out;
    }
    const std::int64_t half = mod.inverse(2);
    AbelianGroup grp(p, std::vector<int>(static_cast<std::size_t>(r), k));
    for (const auto& sol : solutions.elements()) {
        std::vector<std::vector<QpModZp>> gram(static_cast<std::size_t>(r),
                                               std::vector<QpModZp>(static_cast<std::size_t>(r), QpModZp::zero(p)));
        for (std::size_t v = 0; v < nv; ++v) {
            auto [s, t] = vars[v];
            gram[static_cast<std::size_t>(s)][static_cast<std::size_t>(t)] = QpModZp(p, sol[v], k);
            gram[static_cast<std::size_t>(t)][static_cast<std::size_t>(s)] = QpModZp(p, sol[v], k);
        }
        std::vector<QpModZp> qv;
        for (int i = 0; i < r; ++i) qv.emplace_back(p, mod.mul(sol[static_cast<std::size_t>(i * r - i * (i - 1) / 2)], half), k);
        MetricGroup mg(grp, std::move(qv), std::move(gram));
        if (!mg.nondegenerate()) continue;
        // Invariance certificate on generators of Exp(p).
        for (int l = 0; l < r; ++l)
            for (const auto& x : grp.elements())
                if (mg.q_num(G.conjugate(g.basis(l), x)) != mg.q_num(x))
                    throw InternalError("search-forms: invariant Gram produced a non-invariant q");
        InvariantForm f{mg, {}};
        for (const auto& a : lagrangian_subgroups(mg)) {
            Span ideal = g.span(a.generators());
            if (!is_ideal(g, ideal)) continue;
            f.abelian_ideal = f.abelian_ideal || bracket_span(g, ideal, ideal).size() == 1;
            f.lagrangian_ideals.push_back(ideal);
        }
        if (!f.lagrangian_ideals.empty()) out.forms.push_back(std::move(f));
    }
    return out;
}

} // namespace orbitlab
