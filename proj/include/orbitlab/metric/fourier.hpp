#pragma once

// Group algebra of a finite abelian p-group with cyclotomic coefficients,
// its Fourier transform a -> (phi -> phi(a)^-1), the ribbon element q^ and
// pointed modular data (S, T).

#include <cstdint>
#include <string>
#include <vector>

#include "orbitlab/lazard/exp.hpp"
#include "orbitlab/metric/metric_group.hpp"

namespace orbitlab {

/// Dense element sum_a c_a [a], indexed as AbelianGroup::index.
struct GroupAlgebraElement {
    AbelianGroup group;
    std::vector<CycNumber> coeff;

    static GroupAlgebraElement zero(const AbelianGroup& g, int level) {
        return {g, std::vector<CycNumber>(static_cast<std::size_t>(g.size()), CycNumber(g.p(), level))};
    }
    static GroupAlgebraElement delta(const AbelianGroup& g, const Vec& a, int level) {
        auto e = zero(g, level);
        e.coeff[g.index(a)] = CycNumber(g.p(), level, Rational(1));
        return e;
    }
    const CycNumber& at(const Vec& a) const { return coeff[group.index(a)]; }

    friend bool operator==(const GroupAlgebraElement& a, const GroupAlgebraElement& b) {
        return a.group == b.group && a.coeff == b.coeff;
    }
};

/// Functions on the dual group, indexed by c with phi_c(a) = zeta_{p^K}^{sum c_i a_i p^{K-k_i}}.
using DualFunction = std::vector<CycNumber>;

namespace detail {

/// Exponent e with phi_c(a) = zeta_{p^K}^e.
inline std::int64_t character_exponent(const AbelianGroup& g, const Vec& c, const Vec& a) {
    const std::int64_t N = ipow(g.p(), g.exponent_log());
    std::int64_t e = 0;
    for (std::size_t i = 0; i < g.rank(); ++i)
        e = mod_reduce(e + mod_reduce(c[i] * a[i], N) * ipow(g.p(), g.exponent_log() - g.orders()[i]), N);
    return e;
}

inline int common_level(const std::vector<CycNumber>& v, int at_least) {
    int L = at_least;
    for (const auto& x : v) L = std::max(L, x.level());
    return L;
}

} // namespace detail

/// f(phi) = sum_a e_a phi(a)^-1.
inline DualFunction fourier(const GroupAlgebraElement& e) {
    const AbelianGroup& g = e.group;
    const int K = g.exponent_log();
    const int L = detail::common_level(e.coeff, K);
    const std::int64_t step = ipow(g.p(), L - K);
    DualFunction f(static_cast<std::size_t>(g.size()), CycNumber(g.p(), L));
    auto elems = g.elements();
    for (std::size_t ci = 0; ci < elems.size(); ++ci)
        for (std::size_t ai = 0; ai < elems.size(); ++ai) {
            if (e.coeff[ai].is_zero()) continue;
            f[ci] += e.coeff[ai].lift(L).times_root(-detail::character_exponent(g, elems[ci], elems[ai]) * step);
        }
    return f;
}

/// e_a = |P|^-1 sum_phi f(phi) phi(a).
inline GroupAlgebraElement fourier_inverse(const AbelianGroup& g, const DualFunction& f) {
    const int K = g.exponent_log();
    const int L = detail::common_level(f, K);
    const std::int64_t step = ipow(g.p(), L - K);
    auto e = GroupAlgebraElement::zero(g, L);
    auto elems = g.elements();
    for (std::size_t ai = 0; ai < elems.size(); ++ai) {
        for (std::size_t ci = 0; ci < elems.size(); ++ci) {
            if (f[ci].is_zero()) continue;
            e.coeff[ai] += f[ci].lift(L).times_root(detail::character_exponent(g, elems[ci], elems[ai]) * step);
        }
        e.coeff[ai] *= Rational(1, g.size());
    }
    return e;
}

/// (e * f)_a = sum_b e_b f_{a-b}.
inline GroupAlgebraElement convolve(const GroupAlgebraElement& e, const GroupAlgebraElement& f) {
    const AbelianGroup& g = e.group;
    const int L = std::max(detail::common_level(e.coeff, 0), detail::common_level(f.coeff, 0));
    auto out = GroupAlgebraElement::zero(g, L);
    auto elems = g.elements();
    for (std::size_t bi = 0; bi < elems.size(); ++bi) {
        if (e.coeff[bi].is_zero()) continue;
        for (std::size_t ci = 0; ci < elems.size(); ++ci) {
            if (f.coeff[ci].is_zero()) continue;
            out.coeff[g.index(g.add(elems[bi], elems[ci]))] += e.coeff[bi] * f.coeff[ci];
        }
    }
    return out;
}

/// q^ = G/|P| sum_a q~(a)^-1 [a].
inline GroupAlgebraElement qhat_closed_form(const MetricGroup& m) {
    const AbelianGroup& g = m.group();
    const int L = std::max(m.level(), g.exponent_log());
    CycNumber scale = gauss_sum(m).lift(L) * Rational(1, m.size());
    auto e = GroupAlgebraElement::zero(g, L);
    for (std::size_t ai = 0; ai < static_cast<std::size_t>(g.size()); ++ai)
        e.coeff[ai] = scale.times_root(-m.q_num(g.element(ai)) * ipow(m.p(), L - m.level()));
    return e;
}

/// q^ as the Fourier preimage of q~' on the dual, where q~'(phi_b) = q~(b) and
/// phi_b = B~(., b).
inline GroupAlgebraElement qhat_by_fourier(const MetricGroup& m) {
    const AbelianGroup& g = m.group();
    const int L = std::max(m.level(), g.exponent_log());
    DualFunction f(static_cast<std::size_t>(g.size()), CycNumber(g.p(), L));
    std::vector<char> hit(static_cast<std::size_t>(g.size()), 0);
    for (const auto& b : g.elements()) {
        Vec c(g.rank());
        for (std::size_t i = 0; i < g.rank(); ++i) {
            QpModZp v = m.b(g.basis(i), b);
            c[i] = mod_reduce(v.scaled_to(g.orders()[i]), g.order(i));
        }
        std::size_t ci = g.index(c);
        if (hit[ci]) throw InputError("qhat: B is degenerate, so P -> P^ is not bijective");
        hit[ci] = 1;
        f[ci] = m.q_tilde(b).lift(L);
    }
    return fourier_inverse(g, f);
}

/// Both paths; they must agree exactly.
inline GroupAlgebraElement ribbon_qhat(const MetricGroup& m) {
    if (auto w = m.degeneracy_witness()) throw InputError("qhat: q is degenerate");
    auto a = qhat_closed_form(m);
    auto b = qhat_by_fourier(m);
    for (std::size_t i = 0; i < a.coeff.size(); ++i)
        if (!(a.coeff[i] == b.coeff[i]))
            throw InternalError("qhat: closed form and Fourier preimage differ at index " + std::to_string(i));
    return a;
}

/// e is constant on conjugacy classes of Exp(p) (the ring's additive group
/// must be the group of e). Returns the first failing (g, a), if any.
inline std::optional<std::pair<Vec, Vec>> centrality_witness(const LazardGroup& G, const GroupAlgebraElement& e) {
    const LieRing& g = G.ring();
    for (int i = 0; i < g.rank(); ++i)
        for (const auto& a : e.group.elements()) {
            Vec b = G.conjugate(g.basis(i), a);
            if (!(e.at(a) == e.at(b))) return std::pair{g.basis(i), a};
        }
    return std::nullopt;
}

/// Square matrix with entries sum_e w[e] zeta_N^e, integer weights, times 1/denominator.
class RootMatrix {
public:
    RootMatrix(std::size_t n, std::int64_t p, int level)
        : n_(n), p_(p), L_(level), N_(ipow(p, level)), w_(n * n * static_cast<std::size_t>(N_), 0) {}

    std::size_t size() const noexcept { return n_; }
    std::int64_t& weight(std::size_t i, std::size_t j, std::int64_t e) {
        return w_[(i * n_ + j) * static_cast<std::size_t>(N_) + static_cast<std::size_t>(mod_reduce(e, N_))];
    }
    std::int64_t weight(std::size_t i, std::size_t j, std::int64_t e) const {
        return w_[(i * n_ + j) * static_cast<std::size_t>(N_) + static_cast<std::size_t>(mod_reduce(e, N_))];
    }
    std::int64_t& denominator() { return den_; }
    std::int64_t denominator() const { return den_; }

    RootMatrix operator*(const RootMatrix& o) const {
        RootMatrix r(n_, p_, L_);
        r.den_ = den_ * o.den_;
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t k = 0; k < n_; ++k)
                for (std::int64_t e = 0; e < N_; ++e) {
                    std::int64_t a = weight(i, k, e);
                    if (a == 0) continue;
                    for (std::size_t j = 0; j < n_; ++j)
                        for (std::int64_t f = 0; f < N_; ++f) {
                            std::int64_t b = o.weight(k, j, f);
                            if (b != 0) r.weight(i, j, e + f) += a * b;
                        }
                }
        return r;
    }

    /// Entry as a cyclotomic number.
    CycNumber entry(std::size_t i, std::size_t j) const {
        std::vector<Rational> w(static_cast<std::size_t>(N_));
        for (std::int64_t e = 0; e < N_; ++e) w[static_cast<std::size_t>(e)] = Rational(weight(i, j, e), den_);
        return CycNumber::from_root_weights(p_, L_, w);
    }

    /// Complex conjugate of every entry.
    RootMatrix conj() const {
        RootMatrix r(n_, p_, L_);
        r.den_ = den_;
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j)
                for (std::int64_t e = 0; e < N_; ++e) r.weight(i, j, -e) = weight(i, j, e);
        return r;
    }

private:
    std::size_t n_;
    std::int64_t p_;
    int L_;
    std::int64_t N_;
    std::int64_t den_ = 1;
    std::vector<std::int64_t> w_;
};

struct ModularData {
    RootMatrix S;  ///< B~(a, b) / D, D = sqrt |P|
    RootMatrix T;  ///< diag q~(a)
    CycNumber gauss;
    std::int64_t D;
};

namespace detail {

inline std::int64_t exact_sqrt(std::int64_t n) {
    std::int64_t r = 0;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r * r == n ? r : -1;
}

/// M == c X, entrywise, with X a RootMatrix and c cyclotomic.
inline std::optional<std::pair<std::size_t, std::size_t>> mismatch(const RootMatrix& M, const CycNumber& c,
                                                                   const RootMatrix& X) {
    for (std::size_t i = 0; i < M.size(); ++i)
        for (std::size_t j = 0; j < M.size(); ++j)
            if (!(M.entry(i, j) == c * X.entry(i, j))) return std::pair{i, j};
    return std::nullopt;
}

} // namespace detail

/// S, T with the relations S conj(S) = I, S^2 = C (a -> -a), (ST)^3 = (G/D) I,
/// and for conj(S) (the B~^-1 convention) (conj(S) T)^3 = (G/D) S^2.
inline ModularData st_matrices(const MetricGroup& m, std::int64_t cap = 81) {
    if (m.size() > cap) throw InputError("st: |P| = " + std::to_string(m.size()) + " exceeds the cap " + std::to_string(cap));
    if (m.degeneracy_witness()) throw InputError("st: q is degenerate");
    const std::int64_t D = detail::exact_sqrt(m.size());
    if (D < 0) throw InputError("st: |P| = " + std::to_string(m.size()) + " is not a perfect square");
    const AbelianGroup& g = m.group();
    const std::size_t n = static_cast<std::size_t>(g.size());
    const int L = m.level();
    RootMatrix S(n, m.p(), L), T(n, m.p(), L), I(n, m.p(), L), C(n, m.p(), L);
    S.denominator() = D;
    auto elems = g.elements();
    for (std::size_t a = 0; a < n; ++a) {
        T.weight(a, a, m.q_num(elems[a])) = 1;
        I.weight(a, a, 0) = 1;
        C.weight(a, g.index(g.neg(elems[a])), 0) = 1;
        for (std::size_t b = 0; b < n; ++b) S.weight(a, b, m.b_num(elems[a], elems[b])) = 1;
    }
    CycNumber G = gauss_sum(m);
    CycNumber one(m.p(), L, Rational(1));
    CycNumber ratio = G * Rational(1, D);
    auto report = [&](const char* rel, std::pair<std::size_t, std::size_t> at) {
        throw VerificationFailure("st", std::string(rel) + " fails",
                                  {{"row", std::to_string(at.first)}, {"column", std::to_string(at.second)}});
    };
    RootMatrix Sb = S.conj();
    if (auto w = detail::mismatch(S * Sb, one, I)) report("S conj(S) = I", *w);
    RootMatrix S2 = S * S;
    if (auto w = detail::mismatch(S2, one, C)) report("S^2 = C", *w);
    RootMatrix ST = S * T;
    if (auto w = detail::mismatch(ST * ST * ST, ratio, I)) report("(ST)^3 = (G/D) I", *w);
    RootMatrix SbT = Sb * T;
    if (auto w = detail::mismatch(SbT * SbT * SbT, ratio, S2)) report("(conj(S) T)^3 = (G/D) S^2", *w);
    return {std::move(S), std::move(T), G, D};
}

} // namespace orbitlab
