#pragma once

// The universal series used throughout: BCH, e^{ad x}(y), Phi, lambda, with
// denominator certificates, and the group-word formulas that recover + and
// [,] from a group law.

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "orbitlab/error.hpp"
#include "orbitlab/freelie/hall.hpp"

namespace orbitlab {

namespace detail {

inline LiePoly ad_power(const LiePoly& a, LiePoly b, int n) {
    for (int i = 0; i < n; ++i) b = bracket(a, b);
    return b;
}

inline LiePoly xgen(int c) { return LiePoly::generator(hall_basis(2, c), 0); }
inline LiePoly ygen(int c) { return LiePoly::generator(hall_basis(2, c), 1); }

inline void require_class(int c) {
    if (c < 1 || c > HallBasis::max_class) throw InputError("series: class must be in [1, 6]");
}

} // namespace detail

/// log(e^a e^b) for Lie polynomials over one basis.
inline LiePoly bch(const LiePoly& a, const LiePoly& b) {
    return LiePoly::from_assoc(a.basis(), assoc_bch(a.to_assoc(), b.to_assoc()));
}

/// log(e^x e^y) in the Hall basis on x, y through class c.
inline LiePoly bch(int c) {
    detail::require_class(c);
    return bch(detail::xgen(c), detail::ygen(c));
}

/// e^{ad x}(y) = y + [x,y] + 1/2[x,[x,y]] + ..., checked against log(e^x e^y e^-x).
inline LiePoly exp_ad(int c) {
    detail::require_class(c);
    LiePoly x = detail::xgen(c), y = detail::ygen(c);
    LiePoly f(x.basis());
    for (int n = 0; n < c; ++n) f += detail::ad_power(x, y, n) * (Rational(1) / factorial(n));
    AssocPoly ax = x.to_assoc(), ay = y.to_assoc();
    LiePoly conj = LiePoly::from_assoc(x.basis(), assoc_log(assoc_exp(ax) * assoc_exp(ay) * assoc_exp(-ax)));
    if (!(conj == f)) throw InternalError("exp_ad: series disagrees with log(e^x e^y e^-x)");
    return f;
}

/// Phi(x, y) = sum (-1)^n/(n+1)! ad(y)^n(x), with x - log(e^-y e^x e^y) = [y, Phi] checked.
inline LiePoly phi_series(int c) {
    detail::require_class(c);
    LiePoly x = detail::xgen(c), y = detail::ygen(c);
    LiePoly f(x.basis());
    for (int n = 0; n < c; ++n)
        f += detail::ad_power(y, x, n) * (Rational(n % 2 ? -1 : 1) / factorial(n + 1));
    AssocPoly ax = x.to_assoc(), ay = y.to_assoc();
    LiePoly conj = LiePoly::from_assoc(x.basis(), assoc_log(assoc_exp(-ay) * assoc_exp(ax) * assoc_exp(ay)));
    if (!(x - conj == bracket(y, f))) throw InternalError("phi: identity x - y^-1 x y = [y, Phi] fails");
    return f;
}

/// Taylor coefficients B_0..B_n of t / (1 - e^{-t}).
inline std::vector<Rational> lambda_coefficients(int n) {
    // (1 - e^{-t}) / t = sum_j (-1)^j t^j / (j+1)!
    std::vector<Rational> g(static_cast<std::size_t>(n + 1));
    for (int j = 0; j <= n; ++j) g[static_cast<std::size_t>(j)] = Rational(j % 2 ? -1 : 1) / factorial(j + 1);
    std::vector<Rational> b(static_cast<std::size_t>(n + 1), Rational(0));
    for (int i = 0; i <= n; ++i) {
        Rational s = i == 0 ? Rational(1) : Rational(0);
        for (int j = 1; j <= i; ++j) s -= g[static_cast<std::size_t>(j)] * b[static_cast<std::size_t>(i - j)];
        b[static_cast<std::size_t>(i)] = s / g[0];
    }
    return b;
}

/// lambda(y) = sum B_n ad(x)^n(y), the inverse of (1 - e^{-ad x})/ad x on y.
inline LiePoly lambda_series(int c) {
    detail::require_class(c);
    LiePoly x = detail::xgen(c), y = detail::ygen(c);
    auto b = lambda_coefficients(c - 1);
    LiePoly f(x.basis());
    for (int n = 0; n < c; ++n) f += detail::ad_power(x, y, n) * b[static_cast<std::size_t>(n)];
    LiePoly rhs(x.basis());
    for (int n = 0; n < c; ++n)
        rhs += detail::ad_power(x, f, n + 1) * (Rational(n % 2 ? -1 : 1) / factorial(n + 1));
    if (!(rhs == bracket(x, y))) throw InternalError("lambda: identity [x,y] = sum (-1)^n/(n+1)! ad(x)^{n+1} lambda fails");
    return f;
}

/// Lie series by name: "bch", "exp_ad", "phi", "lambda".
inline LiePoly named_series(std::string_view name, int c) {
    if (name == "bch") return bch(c);
    if (name == "exp_ad") return exp_ad(c);
    if (name == "phi") return phi_series(c);
    if (name == "lambda") return lambda_series(c);
    throw InputError("unknown series '" + std::string(name) + "'");
}

struct SeriesCertificate {
    std::string series;
    int verified_class = 0;
    std::string rule;                  ///< "divides i!" or "unit in Z[1/i!]"
    std::vector<BigInt> denominators;  ///< lcm of denominators of the degree-i part, index i (0 unused)
    std::vector<BigInt> bounds;        ///< i!
};

enum class DenominatorRule { divides_factorial, primes_at_most_degree };

/// Certifies a series by inspecting its exact coefficients degree by degree.
/// Throws VerificationFailure naming the first offending coefficient.
inline SeriesCertificate certify_poly(std::string_view name, const LiePoly& f, DenominatorRule rule) {
    const HallBasis& b = *f.basis();
    SeriesCertificate cert;
    cert.series = std::string(name);
    cert.rule = rule == DenominatorRule::divides_factorial ? "divides i!" : "unit in Z[1/i!]";
    cert.denominators.assign(static_cast<std::size_t>(b.cls() + 1), BigInt(1));
    cert.bounds.assign(static_cast<std::size_t>(b.cls() + 1), BigInt(1));
    for (int d = 1; d <= b.cls(); ++d) {
        BigInt bound = numerator_of(factorial(d));
        cert.bounds[static_cast<std::size_t>(d)] = bound;
        BigInt l = 1;
        for (int i : b.of_degree(d)) {
            const Rational& r = f[i];
            if (r == 0) continue;
            BigInt den = denominator_of(r);
            bool ok = true;
            if (rule == DenominatorRule::divides_factorial) {
                ok = bound % den == 0;
            } else {
                BigInt rest = den;
                for (int q = 2; q <= d; ++q)
                    while (rest % q == 0) rest /= q;
                ok = rest == 1;
            }
            if (!ok)
                throw VerificationFailure("certify", cert.series + ": denominator bound violated in degree " + std::to_string(d),
                                          {{"tree", b.tree(i).text}, {"coefficient", to_string(r)}, {"rule", cert.rule}});
            l = boost::multiprecision::lcm(l, den);
        }
        cert.denominators[static_cast<std::size_t>(d)] = l;
    }
    cert.verified_class = b.cls();
    return cert;
}

/// BCH and lambda: every degree-i denominator is a unit in Z[1/i!].
/// exp_ad and Phi: every degree-i denominator divides i!.
inline SeriesCertificate certify(std::string_view name, int c) {
    DenominatorRule rule = name == "bch" || name == "lambda" ? DenominatorRule::primes_at_most_degree
                                                             : DenominatorRule::divides_factorial;
    return certify_poly(name, named_series(name, c), rule);
}

/// x + y = x y prod C_h^{e_h}   (kind sum), or
/// [x,y] = (x,y) prod C_h^{e_h} (kind bracket),
/// where C_h is the group commutator built along the Hall tree h and the
/// product runs over factors in order. Valid in any group of class <= c.
struct GroupWord {
    LiePoly::BasisPtr basis;
    std::vector<std::pair<int, Rational>> factors;
};

namespace detail {

inline AssocPoly commutator_log(const HallBasis& b, int h, std::map<int, AssocPoly>& memo) {
    auto it = memo.find(h);
    if (it != memo.end()) return it->second;
    const HallTree& t = b.tree(h);
    AssocPoly r = t.letter >= 0
                      ? AssocPoly::letter(b.gens(), b.cls(), t.letter)
                      : [&] {
                            AssocPoly u = commutator_log(b, t.left, memo), v = commutator_log(b, t.right, memo);
                            return assoc_log(assoc_exp(u) * assoc_exp(v) * assoc_exp(-u) * assoc_exp(-v));
                        }();
    memo.emplace(h, r);
    return r;
}

inline GroupWord peel(int c, const AssocPoly& start, const AssocPoly& target, int first_degree) {
    auto basis = hall_basis(2, c);
    std::map<int, AssocPoly> memo;
    GroupWord w{basis, {}};
    AssocPoly word = start;
    for (int d = first_degree; d <= c; ++d) {
        AssocPoly residual = (target - assoc_log(word)).degree_part(d);
        LiePoly r = LiePoly::from_assoc(basis, residual);
        for (int h : basis->of_degree(d)) {
            if (r[h] == 0) continue;
            w.factors.emplace_back(h, r[h]);
            word = word * assoc_exp(commutator_log(*basis, h, memo) * r[h]);
        }
    }
    if (!(assoc_log(word) == target)) throw InternalError("group word: peeling left a residual");
    return w;
}

} // namespace detail

inline GroupWord sum_word(int c) {
    detail::require_class(c);
    AssocPoly x = AssocPoly::letter(2, c, 0), y = AssocPoly::letter(2, c, 1);
    return detail::peel(c, assoc_exp(x) * assoc_exp(y), x + y, 2);
}

inline GroupWord bracket_word(int c) {
    detail::require_class(c);
    AssocPoly x = AssocPoly::letter(2, c, 0), y = AssocPoly::letter(2, c, 1);
    AssocPoly comm = assoc_exp(x) * assoc_exp(y) * assoc_exp(-x) * assoc_exp(-y);
    if (c < 2) return GroupWord{hall_basis(2, c), {}};
    return detail::peel(c, comm, commutator(x, y), 3);
}

} // namespace orbitlab
