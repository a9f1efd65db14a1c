#pragma once

// G = Exp(g): the same coordinates as g with the BCH product, and the inverse
// reconstruction of (+, [,]) from a black-box group law.

#include <cstdint>
#include <functional>
#include <memory>
#include <map>
#include <random>
#include <utility>
#include <vector>

#include "orbitlab/arith/rational.hpp"
#include "orbitlab/freelie/series.hpp"
#include "orbitlab/lazard/lie_ring.hpp"

namespace orbitlab {

/// A Lie series specialized into a ring: Hall-tree coefficients reduced mod p^k.
class SpecializedSeries {
public:
    SpecializedSeries(const LieRing& g, const LiePoly& f) : g_(&g), basis_(f.basis()) {
        for (std::size_t i = 0; i < basis_->size(); ++i) {
            const Rational& r = f.coefficients()[i];
            if (r == 0) continue;
            terms_.emplace_back(static_cast<int>(i), rational_to_residue(r, g.modulus()));
        }
    }

    Vec operator()(const std::vector<Vec>& gens) const {
        const HallBasis& b = *basis_;
        std::vector<Vec> memo(b.size());
        std::vector<char> have(b.size(), 0);
        auto value = [&](auto&& self, int i) -> const Vec& {
            auto ui = static_cast<std::size_t>(i);
            if (!have[ui]) {
                const HallTree& t = b.tree(i);
                if (t.letter >= 0)
                    memo[ui] = gens[static_cast<std::size_t>(t.letter)];
                else {
                    const Vec& l = self(self, t.left);
                    if (detail::is_zero(l))
                        memo[ui] = g_->zero();
                    else
                        memo[ui] = g_->bracket(l, self(self, t.right));
                }
                have[ui] = 1;
            }
            return memo[ui];
        };
        Vec acc = g_->zero();
        const Modulus& m = g_->modulus();
        for (const auto& [i, c] : terms_) {
            const Vec& v = value(value, i);
            for (std::size_t l = 0; l < acc.size(); ++l)
                if (v[l]) acc[l] = m.reduce(acc[l] + c * v[l]);
        }
        return acc;
    }

private:
    const LieRing* g_;
    LiePoly::BasisPtr basis_;
    std::vector<std::pair<int, std::int64_t>> terms_;
};

/// Exp(g). Keeps its own copy of the ring.
class LazardGroup {
public:
    explicit LazardGroup(const LieRing& g)
        : g_(std::make_shared<const LieRing>(g)),
          report_(validate(*g_)),
          cls_(std::max(1, report_.nilpotency_class)),
          bch_(*g_, bch(cls_)),
          exp_ad_(*g_, exp_ad(cls_)) {}

    const LieRing& ring() const noexcept { return *g_; }
    int nilpotency_class() const noexcept { return report_.nilpotency_class; }
    const ClassReport& class_report() const noexcept { return report_; }

    Vec identity() const { return g_->zero(); }
    Vec inverse(const Vec& x) const { return g_->neg(x); }
    Vec mul(const Vec& x, const Vec& y) const {
        if (report_.nilpotency_class <= 1) return g_->add(x, y);
        return bch_({x, y});
    }
    Vec power(const Vec& x, std::int64_t n) const { return g_->scale(n, x); }

    /// x y x^-1 by the group law.
    Vec conjugate_by_product(const Vec& x, const Vec& y) const { return mul(mul(x, y), inverse(x)); }
    /// e^{ad x}(y).
    Vec conjugate_by_series(const Vec& x, const Vec& y) const {
        if (report_.nilpotency_class <= 1) return y;
        return exp_ad_({x, y});
    }

    /// x y x^-1, computed both ways; disagreement is an internal error.
    Vec conjugate(const Vec& x, const Vec& y) const {
        Vec a = conjugate_by_product(x, y);
        Vec b = conjugate_by_series(x, y);
        if (!(a == b))
            throw InternalError("conjugate: group law and e^{ad} disagree at x = " + vec_to_string(x) +
                                ", y = " + vec_to_string(y));
        return a;
    }

    /// (x, y) = x y x^-1 y^-1
    Vec commutator(const Vec& x, const Vec& y) const { return mul(mul(mul(x, y), inverse(x)), inverse(y)); }

private:
    std::shared_ptr<const LieRing> g_;
    ClassReport report_;
    int cls_;
    SpecializedSeries bch_;
    SpecializedSeries exp_ad_;
};

struct LogGroupOptions {
    int class_cap = 0;          ///< 0: min(p - 1, 6)
    std::int64_t exhaustive_limit = 243;
    int samples = 2000;
    std::uint64_t seed = 1;
};

using GroupLaw = std::function<Vec(const Vec&, const Vec&)>;

namespace detail {

class BlackBoxGroup {
public:
    BlackBoxGroup(const Modulus& m, std::size_t dim, GroupLaw mul) : m_(m), dim_(dim), mul_(std::move(mul)) {}

    Vec mul(const Vec& a, const Vec& b) const { return mul_(a, b); }
    Vec power(Vec x, std::int64_t e) const {
        e = m_.reduce(e);
        Vec r(dim_, 0);
        while (e > 0) {
            if (e & 1) r = mul_(r, x);
            x = mul_(x, x);
            e >>= 1;
        }
        return r;
    }
    Vec inverse(const Vec& x) const { return power(x, m_.value() - 1); }
    Vec commutator(const Vec& x, const Vec& y) const { return mul(mul(mul(x, y), inverse(x)), inverse(y)); }

    /// head * prod C_h(x, y)^{e_h}
    Vec word(Vec head, const GroupWord& w, const Vec& x, const Vec& y) const {
        std::map<int, Vec> memo;
        auto tree = [&](auto&& self, int h) -> Vec {
            auto it = memo.find(h);
            if (it != memo.end()) return it->second;
            const HallTree& t = w.basis->tree(h);
            Vec v = t.letter == 0 ? x : t.letter == 1 ? y : commutator(self(self, t.left), self(self, t.right));
            memo.emplace(h, v);
            return v;
        };
        for (const auto& [h, e] : w.factors) head = mul(head, power(tree(tree, h), rational_to_residue(e, m_)));
        return head;
    }

private:
    Modulus m_;
    std::size_t dim_;
    GroupLaw mul_;
};

} // namespace detail

/// Recovers the Lie ring whose Exp is the given group law on (Z/p^k)^n. The
/// coordinates must be logarithmic (recovered + equal to coordinate +), the
/// recovered bracket must satisfy the Lie axioms, and Exp of the result must
/// reproduce the law; each failure is a VerificationFailure.
inline LieRing log_group(const Modulus& m, int rank, const GroupLaw& law, const LogGroupOptions& opt = {}) {
    int c = opt.class_cap > 0 ? opt.class_cap : static_cast<int>(std::min<std::int64_t>(m.p() - 1, 6));
    c = std::max(1, std::min(c, HallBasis::max_class));
    detail::BlackBoxGroup G(m, static_cast<std::size_t>(rank), law);
    LieRing shape(m, rank);

    GroupWord sw = sum_word(c), bw = bracket_word(c);
    auto rsum = [&](const Vec& x, const Vec& y) { return G.word(G.mul(x, y), sw, x, y); };
    auto rbracket = [&](const Vec& x, const Vec& y) { return G.word(G.commutator(x, y), bw, x, y); };

    std::vector<std::pair<Vec, Vec>> pairs;
    std::int64_t order = ipow(m.p(), m.k() * rank);
    if (order <= opt.exhaustive_limit) {
        auto all = shape.elements();
        for (const auto& a : all)
            for (const auto& b : all) pairs.emplace_back(a, b);
    } else {
        std::mt19937_64 rng(opt.seed);
        std::uniform_int_distribution<std::int64_t> d(0, m.value() - 1);
        for (int i = 0; i < rank; ++i)
            for (int j = 0; j < rank; ++j) pairs.emplace_back(shape.basis(i), shape.basis(j));
        for (int s = 0; s < opt.samples; ++s) {
            Vec a(static_cast<std::size_t>(rank)), b(static_cast<std::size_t>(rank));
            for (auto& v : a) v = d(rng);
            for (auto& v : b) v = d(rng);
            pairs.emplace_back(a, b);
        }
    }

    for (const auto& [a, b] : pairs)
        if (!(rsum(a, b) == shape.add(a, b)))
            throw VerificationFailure("log_group", "recovered addition differs from coordinate addition",
                                      {{"x", vec_to_string(a)}, {"y", vec_to_string(b)}, {"x+y", vec_to_string(rsum(a, b))}});

    LieRing g(m, rank);
    for (int i = 0; i < rank; ++i)
        for (int j = i + 1; j < rank; ++j) g.set_bracket(i, j, rbracket(shape.basis(i), shape.basis(j)));
    for (int i = 0; i < rank; ++i)
        if (!detail::is_zero(rbracket(shape.basis(i), shape.basis(i))))
            throw VerificationFailure("log_group", "not a Lazard group: recovered [x,x] != 0",
                                      {{"x", vec_to_string(shape.basis(i))}});
    try {
        validate(g);
    } catch (const VerificationFailure& e) {
        auto w = e.witness();
        throw VerificationFailure("log_group", "not a Lazard group: recovered bracket fails " + e.check(), w);
    } catch (const InputError& e) {
        throw VerificationFailure("log_group", std::string("not a Lazard group: ") + e.what());
    }
    for (const auto& [a, b] : pairs)
        if (!(rbracket(a, b) == g.bracket(a, b)))
            throw VerificationFailure("log_group", "not a Lazard group: recovered bracket is not bilinear",
                                      {{"x", vec_to_string(a)}, {"y", vec_to_string(b)}});
    LazardGroup back(g);
    for (const auto& [a, b] : pairs)
        if (!(back.mul(a, b) == law(a, b)))
            throw VerificationFailure("log_group", "Exp of the recovered ring differs from the input law",
                                      {{"x", vec_to_string(a)}, {"y", vec_to_string(b)}});
    return g;
}

} // namespace orbitlab
