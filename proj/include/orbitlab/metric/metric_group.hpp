#pragma once

// Metric groups (P, q): a finite abelian p-group with a quadratic form
// q: P -> Q_p/Z_p, stored as q on generators plus the Gram matrix of
// B(x, y) = q(x + y) - q(x) - q(y).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "orbitlab/arith/cyclotomic.hpp"
#include "orbitlab/arith/howell.hpp"
#include "orbitlab/arith/qpmodzp.hpp"
#include "orbitlab/error.hpp"

namespace orbitlab {

/// (+)_i Z/p^{k_i}. Elements are coordinate vectors with 0 <= x_i < p^{k_i};
/// indices are mixed radix with the first coordinate fastest.
class AbelianGroup {
public:
    AbelianGroup(std::int64_t p, std::vector<int> orders) : p_(p), k_(std::move(orders)) {
        if (!is_prime(p)) throw InputError("abelian group: p = " + std::to_string(p) + " is not prime");
        size_ = 1;
        for (int k : k_) {
            if (k < 1) throw InputError("abelian group: cyclic factor exponents must be >= 1");
            exp_ = std::max(exp_, k);
            size_ *= ipow(p, k);
            if (size_ > (std::int64_t{1} << 24)) throw InputError("abelian group: order too large");
        }
    }

    std::int64_t p() const noexcept { return p_; }
    const std::vector<int>& orders() const noexcept { return k_; }
    std::size_t rank() const noexcept { return k_.size(); }
    int exponent_log() const noexcept { return exp_; }
    std::int64_t order(std::size_t i) const { return ipow(p_, k_[i]); }
    std::int64_t size() const noexcept { return size_; }

    Vec reduce(Vec x) const {
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = mod_reduce(x[i], order(i));
        return x;
    }
    Vec add(const Vec& x, const Vec& y) const {
        Vec r(rank());
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = mod_reduce(x[i] + y[i], order(i));
        return r;
    }
    Vec neg(const Vec& x) const {
        Vec r(rank());
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = mod_reduce(-x[i], order(i));
        return r;
    }
    Vec sub(const Vec& x, const Vec& y) const { return add(x, neg(y)); }
    Vec scale(std::int64_t n, const Vec& x) const {
        Vec r(rank());
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = mod_reduce(mod_reduce(n, order(i)) * x[i], order(i));
        return r;
    }
    Vec zero() const { return Vec(rank(), 0); }
    Vec basis(std::size_t i) const {
        Vec v = zero();
        v[i] = 1;
        return v;
    }

    std::size_t index(const Vec& x) const {
        std::size_t idx = 0;
        for (std::size_t i = rank(); i-- > 0;)
            idx = idx * static_cast<std::size_t>(order(i)) + static_cast<std::size_t>(mod_reduce(x[i], order(i)));
        return idx;
    }
    Vec element(std::size_t idx) const {
        Vec x(rank());
        for (std::size_t i = 0; i < rank(); ++i) {
            x[i] = static_cast<std::int64_t>(idx % static_cast<std::size_t>(order(i)));
            idx /= static_cast<std::size_t>(order(i));
        }
        return x;
    }
    std::vector<Vec> elements() const {
        std::vector<Vec> out;
        out.reserve(static_cast<std::size_t>(size_));
        for (std::int64_t i = 0; i < size_; ++i) out.push_back(element(static_cast<std::size_t>(i)));
        return out;
    }

    /// x_i -> x_i p^{K - k_i} into (Z/p^K)^r, K the exponent; subgroups become spans there.
    Vec embed(const Vec& x) const {
        Vec r(rank());
        for (std::size_t i = 0; i < rank(); ++i) r[i] = x[i] * ipow(p_, exp_ - k_[i]);
        return r;
    }
    Vec unembed(const Vec& y) const {
        Vec r(rank());
        for (std::size_t i = 0; i < rank(); ++i) r[i] = mod_reduce(y[i] / ipow(p_, exp_ - k_[i]), order(i));
        return r;
    }
    Modulus embedding_modulus() const { return Modulus(p_, exp_); }

    friend bool operator==(const AbelianGroup& a, const AbelianGroup& b) { return a.p_ == b.p_ && a.k_ == b.k_; }

    std::string to_string() const {
        std::string s;
        for (std::size_t i = 0; i < rank(); ++i) s += (i ? " + " : "") + ("Z/" + std::to_string(order(i)));
        return s.empty() ? "0" : s;
    }

private:
    std::int64_t p_;
    std::vector<int> k_;
    int exp_ = 0;
    std::int64_t size_ = 1;
};

class MetricGroup {
public:
    /// Validates the axioms exhaustively: q well defined, q(nx) = n^2 q(x), and
    /// q(x + y) - q(x) - q(y) equal to the symmetric Gram pairing.
    MetricGroup(AbelianGroup group, std::vector<QpModZp> q_gen, std::vector<std::vector<QpModZp>> gram)
        : grp_(std::move(group)), q_gen_(std::move(q_gen)), gram_(std::move(gram)) {
        const std::size_t r = grp_.rank();
        if (q_gen_.size() != r || gram_.size() != r)
            throw InputError("metric group: expected " + std::to_string(r) + " generator values and a " +
                             std::to_string(r) + "x" + std::to_string(r) + " Gram matrix");
        M_ = 0;
        for (std::size_t i = 0; i < r; ++i) {
            if (gram_[i].size() != r) throw InputError("metric group: Gram matrix is not square");
            if (q_gen_[i].p() != p()) throw InputError("metric group: value over the wrong prime");
            M_ = std::max(M_, q_gen_[i].level());
            for (std::size_t j = 0; j < r; ++j) {
                if (gram_[i][j].p() != p()) throw InputError("metric group: value over the wrong prime");
                M_ = std::max(M_, gram_[i][j].level());
            }
        }
        qn_.resize(r);
        bn_.assign(r, std::vector<std::int64_t>(r, 0));
        for (std::size_t i = 0; i < r; ++i) {
            qn_[i] = q_gen_[i].scaled_to(M_);
            for (std::size_t j = 0; j < r; ++j) bn_[i][j] = gram_[i][j].scaled_to(M_);
        }
        validate();
    }

    static MetricGroup on_ring_group(std::int64_t p, int k, int rank, std::vector<QpModZp> q_gen,
                                     std::vector<std::vector<QpModZp>> gram) {
        return MetricGroup(AbelianGroup(p, std::vector<int>(static_cast<std::size_t>(rank), k)), std::move(q_gen),
                           std::move(gram));
    }

    const AbelianGroup& group() const noexcept { return grp_; }
    std::int64_t p() const noexcept { return grp_.p(); }
    std::int64_t size() const noexcept { return grp_.size(); }
    /// Values of q and B lie in p^-M Z/Z.
    int level() const noexcept { return M_; }
    const std::vector<QpModZp>& generator_values() const noexcept { return q_gen_; }
    const std::vector<std::vector<QpModZp>>& gram() const noexcept { return gram_; }

    /// q(x) = q_num(x) / p^M.
    std::int64_t q_num(const Vec& x) const {
        const std::int64_t N = ipow(p(), M_);
        std::int64_t s = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (x[i] == 0) continue;
            std::int64_t xi = mod_reduce(x[i], N);
            s = mod_reduce(s + mod_reduce(xi * xi, N) * qn_[i], N);
            for (std::size_t j = i + 1; j < x.size(); ++j)
                if (x[j] != 0) s = mod_reduce(s + mod_reduce(xi * mod_reduce(x[j], N), N) * bn_[i][j], N);
        }
        return s;
    }
    /// B(x, y) = b_num(x, y) / p^M, from the Gram matrix.
    std::int64_t b_num(const Vec& x, const Vec& y) const {
        const std::int64_t N = ipow(p(), M_);
        std::int64_t s = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (x[i] == 0) continue;
            for (std::size_t j = 0; j < y.size(); ++j)
                if (y[j] != 0) s = mod_reduce(s + mod_reduce(x[i] * y[j], N) * bn_[i][j], N);
        }
        return s;
    }
    QpModZp q(const Vec& x) const { return QpModZp(p(), q_num(x), M_); }
    QpModZp b(const Vec& x, const Vec& y) const { return QpModZp(p(), b_num(x, y), M_); }
    CycNumber q_tilde(const Vec& x) const { return CycNumber::root_of_unity(p(), M_, q_num(x)); }
    CycNumber b_tilde(const Vec& x, const Vec& y) const { return CycNumber::root_of_unity(p(), M_, b_num(x, y)); }

    /// A nonzero a with B(., a) = 0, if any.
    std::optional<Vec> degeneracy_witness() const {
        for (std::int64_t idx = 1; idx < size(); ++idx) {
            Vec a = grp_.element(static_cast<std::size_t>(idx));
            bool zero = true;
            for (std::size_t i = 0; i < grp_.rank() && zero; ++i) zero = b_num(grp_.basis(i), a) == 0;
            if (zero) return a;
        }
        return std::nullopt;
    }
    bool nondegenerate() const { return !degeneracy_witness(); }

    /// "q = [..]; B = [[..]..] on Z/.. + Z/.."
    std::string to_string() const {
        std::string s = "q = [";
        for (std::size_t i = 0; i < q_gen_.size(); ++i) s += (i ? ", " : "") + q_gen_[i].to_string();
        s += "]; B = [";
        for (std::size_t i = 0; i < gram_.size(); ++i) {
            s += i ? ", [" : "[";
            for (std::size_t j = 0; j < gram_[i].size(); ++j) s += (j ? ", " : "") + gram_[i][j].to_string();
            s += "]";
        }
        return s + "] on " + grp_.to_string();
    }

private:
    void fail(const std::string& what, std::vector<std::pair<std::string, std::string>> w) const {
        throw VerificationFailure("metric", what, std::move(w));
    }

    void validate() const {
        const std::size_t r = grp_.rank();
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j) {
                if (!(gram_[i][j] == gram_[j][i]))
                    fail("Gram matrix is not symmetric",
                         {{"i", std::to_string(i + 1)}, {"j", std::to_string(j + 1)}});
                if (gram_[i][j].level() > std::min(grp_.orders()[i], grp_.orders()[j]))
                    fail("B(g_i, g_j) is not killed by the order of g_i and g_j",
                         {{"i", std::to_string(i + 1)}, {"j", std::to_string(j + 1)},
                          {"B", gram_[i][j].to_string()}});
            }
        for (std::size_t i = 0; i < r; ++i) {
            // q(2 g) = 4 q(g) forces B(g, g) = 2 q(g).
            if (!(gram_[i][i] == q_gen_[i] * 2))
                fail("B(g, g) != 2 q(g)", {{"generator", std::to_string(i + 1)}, {"q(g)", q_gen_[i].to_string()},
                                           {"B(g,g)", gram_[i][i].to_string()}});
        }
        const std::int64_t N = ipow(p(), M_);
        const std::int64_t e = ipow(p(), grp_.exponent_log());
        for (std::int64_t idx = 0; idx < size(); ++idx) {
            Vec x = grp_.element(static_cast<std::size_t>(idx));
            const std::int64_t qx = q_num(x);
            for (std::size_t i = 0; i < r; ++i) {
                Vec g = grp_.basis(i);
                std::int64_t lhs = mod_reduce(q_num(grp_.add(x, g)) - qx - qn_[i], N);
                if (lhs != b_num(x, g))
                    fail("q(x + g) - q(x) - q(g) != B(x, g)",
                         {{"x", vec_to_text(x)}, {"generator", std::to_string(i + 1)}});
            }
            for (std::int64_t n = 2; n < e + 2; ++n)
                if (q_num(grp_.scale(n, x)) != mod_reduce(mod_reduce(n * n, N) * qx, N))
                    fail("q(nx) != n^2 q(x)", {{"x", vec_to_text(x)}, {"n", std::to_string(n)}});
        }
    }

    static std::string vec_to_text(const Vec& v) {
        std::string s = "(";
        for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
        return s + ")";
    }

    AbelianGroup grp_;
    std::vector<QpModZp> q_gen_;
    std::vector<std::vector<QpModZp>> gram_;
    int M_ = 0;
    std::vector<std::int64_t> qn_;
    std::vector<std::vector<std::int64_t>> bn_;
};

/// G(P, q) = sum_a q~(a).
inline CycNumber gauss_sum(const MetricGroup& m) {
    std::vector<Rational> w(static_cast<std::size_t>(ipow(m.p(), m.level())), Rational(0));
    for (std::int64_t idx = 0; idx < m.size(); ++idx)
        w[static_cast<std::size_t>(m.q_num(m.group().element(static_cast<std::size_t>(idx))))] += 1;
    return CycNumber::from_root_weights(m.p(), m.level(), w);
}

/// Additive subgroups A with q(A) = 0 and |A|^2 = |P|, as spans in the
/// embedding into (Z/p^K)^r. Exhaustive search; |P| must be at most `cap`.
inline std::vector<Span> lagrangian_subgroups(const MetricGroup& m, std::int64_t cap = 729) {
    if (m.size() > cap) throw InputError("lagrangians: |P| = " + std::to_string(m.size()) + " exceeds the cap");
    const AbelianGroup& G = m.group();
    const Modulus mod = G.embedding_modulus();
    int target_log2 = 0;
    for (int k : G.orders()) target_log2 += k;
    std::vector<Vec> isotropic;
    for (const auto& x : G.elements())
        if (m.q_num(x) == 0 && !detail::is_zero(x)) isotropic.push_back(x);
    std::vector<Span> found;
    std::vector<ModMatrix> seen;
    std::vector<Span> frontier{Span(mod, G.rank(), {})};
    while (!frontier.empty()) {
        std::vector<Span> next;
        for (const auto& s : frontier) {
            if (2 * s.log_size() == target_log2) {
                found.push_back(s);
                continue;
            }
            auto gens = s.generators();
            for (const auto& a : isotropic) {
                Vec ea = G.embed(a);
                if (s.contains(ea)) continue;
                bool ok = true;
                for (const auto& g : gens) ok = ok && m.b_num(a, G.unembed(g)) == 0;
                if (!ok) continue;
                Span t = s.with(ea);
                bool dup = false;
                for (const auto& u : next) dup = dup || u == t;
                if (!dup) next.push_back(std::move(t));
            }
        }
        frontier = std::move(next);
    }
    return found;
}

struct GaussReport {
    CycNumber gauss;
    std::int64_t order;
    bool nondegenerate;
    std::vector<Span> lagrangians;
};

/// Gauss sum with its checks: G conj(G) = |P| when nondegenerate, and
/// G = |A| for each Lagrangian A.
inline GaussReport gauss_report(const MetricGroup& m, std::int64_t lagrangian_cap = 729) {
    GaussReport r{gauss_sum(m), m.size(), m.nondegenerate(), {}};
    if (r.nondegenerate) {
        CycNumber n = r.gauss * r.gauss.conj();
        if (!(n == CycNumber(m.p(), m.level(), Rational(m.size()))))
            throw VerificationFailure("gauss", "G conj(G) != |P|", {{"G", r.gauss.to_string()}, {"G conj(G)", n.to_string()}});
    }
    if (m.size() <= lagrangian_cap) r.lagrangians = lagrangian_subgroups(m, lagrangian_cap);
    for (const auto& a : r.lagrangians)
        if (!(r.gauss == CycNumber(m.p(), m.level(), Rational(a.size()))))
            throw VerificationFailure("gauss", "G != Card(A) for a Lagrangian A",
                                      {{"G", r.gauss.to_string()}, {"Card(A)", std::to_string(a.size())}});
    return r;
}

/// A metric group on Z/p^k + Z/p^k with q(a, b) = ab/p^k, or its n-fold sum
/// ordered (a_1..a_n, b_1..b_n).
inline MetricGroup hyperbolic_metric(std::int64_t p, int k, int n = 1) {
    const std::size_t r = static_cast<std::size_t>(2 * n);
    std::vector<QpModZp> qv(r, QpModZp::zero(p));
    std::vector<std::vector<QpModZp>> gram(r, std::vector<QpModZp>(r, QpModZp::zero(p)));
    for (int i = 0; i < n; ++i) {
        gram[static_cast<std::size_t>(i)][static_cast<std::size_t>(n + i)] = QpModZp(p, 1, k);
        gram[static_cast<std::size_t>(n + i)][static_cast<std::size_t>(i)] = QpModZp(p, 1, k);
    }
    return MetricGroup::on_ring_group(p, k, 2 * n, std::move(qv), std::move(gram));
}

/// Z/p^k with q(x) = c x^2 / p^k.
inline MetricGroup cyclic_metric(std::int64_t p, int k, std::int64_t c = 1) {
    return MetricGroup(AbelianGroup(p, {k}), {QpModZp(p, c, k)}, {{QpModZp(p, 2 * c, k)}});
}

} // namespace orbitlab
