#pragma once

// Quasi-polarizations of B_chi(x, y) = chi([x, y]), the Heisenberg chain and
// Lagrangian extension. Here h' is h^perp and [a, b] is the bracket closure
// of pairwise generator brackets.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "orbitlab/orbits/coadjoint.hpp"

namespace orbitlab {

struct Polarization {
    Span h;
    Span h_perp;
    bool isotropic = false;         ///< h in h^perp
    bool contains_radical = false;  ///< c in h
    bool lie_subring = false;
    bool perp_lie_subring = false;
    bool heisenberg = false;  ///< [h^perp, h^perp] in h

    bool quasi() const { return isotropic && contains_radical && lie_subring && perp_lie_subring; }
};

inline Span subring_bracket(const LieRing& g, const Span& a, const Span& b) {
    return lie_closure(g, bracket_span(g, a, b));
}

/// Recomputes h^perp and every flag.
inline Polarization make_polarization(const LieRing& g, const Character& chi, const Span& h) {
    Polarization P{h, perp(g, chi, h)};
    P.isotropic = P.h_perp.contains(h);
    P.contains_radical = h.contains(radical(g, chi));
    P.lie_subring = is_lie_subring(g, h);
    P.perp_lie_subring = is_lie_subring(g, P.h_perp);
    P.heisenberg = h.contains(subring_bracket(g, P.h_perp, P.h_perp));
    return P;
}

namespace detail {

inline std::string span_to_string(const Span& s) {
    std::string out = "<";
    auto gens = s.generators();
    for (std::size_t i = 0; i < gens.size(); ++i) out += (i ? ", " : "") + vec_to_string(gens[i]);
    return out + ">";
}

inline void require(bool ok, const std::string& step, const std::string& what, const Character& chi,
                    const LieRing& g, const Span& h) {
    if (ok) return;
    throw VerificationFailure(step, what, {{"chi", chi.to_string(g.modulus())}, {"h", span_to_string(h)}});
}

/// |h^perp| |h| = |g| |c| when c is in h.
inline bool cardinality_identity(const LieRing& g, const Span& c, const Polarization& P) {
    if (!P.contains_radical) return true;
    return P.h_perp.log_size() + P.h.log_size() == g.full().log_size() + c.log_size();
}

} // namespace detail

struct ChainStep {
    Polarization polarization;
    int k = 0;  ///< index of the h^(k) adjoined to reach the next step; 0 at the end
    std::vector<int> series_log_sizes;  ///< log_p |h^(n)| for n = 0..k+1
};

/// One enlargement r = h + h^(k), where h^(0) = h^perp, h^(n) = [h^perp, h^(n-1)]
/// and k is the last index with h^(k) not in h.
inline Span enlarge(const LieRing& g, const Polarization& P, ChainStep& step) {
    std::vector<Span> series{P.h_perp};
    while (!P.h.contains(series.back())) series.push_back(subring_bracket(g, P.h_perp, series.back()));
    step.k = static_cast<int>(series.size()) - 2;
    for (const auto& s : series) step.series_log_sizes.push_back(s.log_size());
    return P.h + series[series.size() - 2];
}

/// Enlarges a quasi-polarization until it is Heisenberg, checking each step.
/// Default start is h = c.
inline std::vector<ChainStep> heisenberg_chain(const LieRing& g, const Character& chi,
                                               std::optional<Span> start = std::nullopt) {
    const Span c = radical(g, chi);
    Polarization P = make_polarization(g, chi, start ? *start : c);
    detail::require(P.quasi(), "heisenberg-chain", "start is not a quasi-polarization", chi, g, P.h);
    const int bound = std::max(1, lower_central_series(g).nilpotency_class) * std::max(1, g.rank());
    std::vector<ChainStep> chain;
    for (int iter = 0; !P.heisenberg; ++iter) {
        detail::require(iter < bound, "heisenberg-chain", "iteration bound exceeded", chi, g, P.h);
        ChainStep step{P, 0, {}};
        Span r = enlarge(g, P, step);
        Polarization R = make_polarization(g, chi, r);
        const std::string s = "step " + std::to_string(iter + 1) + ": ";
        detail::require(step.k >= 1, "heisenberg-chain", s + "non-Heisenberg h with k = 0", chi, g, P.h);
        detail::require(r.contains(P.h) && r.log_size() > P.h.log_size(), "heisenberg-chain",
                        s + "r does not strictly contain h", chi, g, P.h);
        detail::require(R.quasi(), "heisenberg-chain", s + "r is not a quasi-polarization", chi, g, r);
        detail::require(R.h_perp.contains(subring_bracket(g, P.h_perp, P.h_perp)), "heisenberg-chain",
                        s + "[h^perp, h^perp] is not in r^perp", chi, g, r);
        detail::require(P.h_perp.contains(R.h_perp), "heisenberg-chain", s + "r^perp is not in h^perp", chi, g, r);
        detail::require(detail::cardinality_identity(g, c, R), "heisenberg-chain",
                        s + "|r^perp| |r| != |g| |c|", chi, g, r);
        chain.push_back(std::move(step));
        P = std::move(R);
    }
    detail::require(P.h.contains(subring_bracket(g, P.h_perp, P.h)), "heisenberg-chain",
                    "final [h^perp, h] is not in h", chi, g, P.h);
    chain.push_back(ChainStep{P, 0, {}});
    return chain;
}

/// Extends a Heisenberg polarization to r with r = r^perp, adjoining the first
/// vector of r^perp outside r in the order sum v_i q^(i-1) (first coordinate
/// least significant). Every adjoined vector keeps r isotropic.
inline Polarization lagrangian_extend(const LieRing& g, const Character& chi, const Polarization& H) {
    detail::require(H.heisenberg && H.quasi(), "lagrangian", "input is not a Heisenberg polarization", chi, g, H.h);
    const Span c = radical(g, chi);
    const int rank_log = g.full().log_size() - c.log_size();
    if (rank_log % 2 != 0)
        throw VerificationFailure("lagrangian", "no Lagrangian at this level: |g|/|c| is not a square",
                                  {{"chi", chi.to_string(g.modulus())}, {"log_p |g|/|c|", std::to_string(rank_log)}});
    Span r = H.h;
    Span rp = H.h_perp;
    const std::int64_t q = g.modulus().value();
    const std::int64_t total = ipow(g.p(), g.log_order());
    // r grows and r^perp shrinks, so one pass over the candidates suffices.
    for (std::int64_t idx = 1; idx < total && !(r == rp); ++idx) {
        Vec v(g.dim());
        std::int64_t t = idx;
        for (auto& x : v) {
            x = t % q;
            t /= q;
        }
        if (!rp.contains(v) || r.contains(v)) continue;
        r = r.with(v);
        rp = perp(g, chi, r);
    }
    Polarization R = make_polarization(g, chi, r);
    detail::require(R.h == R.h_perp, "lagrangian", "greedy extension stopped before r = r^perp", chi, g, r);
    detail::require(R.lie_subring, "lagrangian", "r is not a Lie subring", chi, g, r);
    detail::require(R.heisenberg && R.quasi(), "lagrangian", "r is not a Heisenberg polarization", chi, g, r);
    detail::require(r.contains(H.h) && H.h_perp.contains(r), "lagrangian", "r is not between h and h^perp", chi, g, r);
    detail::require(2 * r.log_size() == g.full().log_size() + c.log_size(), "lagrangian", "|r|^2 != |g| |c|", chi,
                    g, r);
    return R;
}

struct PolarizeReport {
    Character chi;
    Span radical;
    std::vector<ChainStep> chain;
    Polarization lagrangian;
};

inline PolarizeReport polarize(const LieRing& g, const Character& chi) {
    auto chain = heisenberg_chain(g, chi);
    Polarization L = lagrangian_extend(g, chi, chain.back().polarization);
    return {chi, radical(g, chi), std::move(chain), std::move(L)};
}

} // namespace orbitlab
