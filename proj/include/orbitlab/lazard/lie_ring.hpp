#pragma once

// Finite Lie rings on the free module (Z/p^k)^n given by structure constants
// [e_i, e_j] = sum_l c_ij^l e_l, and their subgroups (Howell spans).

#include <optional>
#include <string>
#include <vector>

#include "orbitlab/arith/howell.hpp"
#include "orbitlab/error.hpp"

namespace orbitlab {

class LieRing {
public:
    LieRing(Modulus m, int rank) : m_(m), n_(rank), table_(static_cast<std::size_t>(rank * rank), Vec(rank, 0)) {
        if (rank < 0) throw InputError("lie ring: negative rank");
    }

    /// Sets [e_i, e_j] = v and [e_j, e_i] = -v (0-based).
    void set_bracket(int i, int j, const Vec& v) {
        check_index(i);
        check_index(j);
        if (static_cast<int>(v.size()) != n_) throw InputError("lie ring: bracket vector has wrong length");
        if (i == j) {
            for (auto x : v)
                if (m_.reduce(x) != 0) throw InputError("lie ring: [e_i, e_i] must vanish");
            return;
        }
        Vec r(v.size()), s(v.size());
        for (std::size_t l = 0; l < v.size(); ++l) {
            r[l] = m_.reduce(v[l]);
            s[l] = m_.reduce(-v[l]);
        }
        at(i, j) = r;
        at(j, i) = s;
    }

    const Modulus& modulus() const noexcept { return m_; }
    std::int64_t p() const noexcept { return m_.p(); }
    int k() const noexcept { return m_.k(); }
    int rank() const noexcept { return n_; }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(n_); }

    /// log_p |g|
    int log_order() const noexcept { return n_ * m_.k(); }

    const Vec& basis_bracket(int i, int j) const { return table_[static_cast<std::size_t>(i * n_ + j)]; }

    Vec zero() const { return Vec(dim(), 0); }
    Vec basis(int i) const {
        Vec v = zero();
        v[static_cast<std::size_t>(i)] = 1;
        return v;
    }

    Vec add(const Vec& a, const Vec& b) const {
        Vec r(dim());
        for (std::size_t i = 0; i < dim(); ++i) r[i] = m_.add(a[i], b[i]);
        return r;
    }
    Vec sub(const Vec& a, const Vec& b) const {
        Vec r(dim());
        for (std::size_t i = 0; i < dim(); ++i) r[i] = m_.sub(a[i], b[i]);
        return r;
    }
    Vec neg(const Vec& a) const {
        Vec r(dim());
        for (std::size_t i = 0; i < dim(); ++i) r[i] = m_.reduce(-a[i]);
        return r;
    }
    Vec scale(std::int64_t s, const Vec& a) const {
        Vec r(dim());
        s = m_.reduce(s);
        for (std::size_t i = 0; i < dim(); ++i) r[i] = m_.mul(s, a[i]);
        return r;
    }

    Vec bracket(const Vec& a, const Vec& b) const {
        Vec r(dim(), 0);
        for (int i = 0; i < n_; ++i) {
            if (a[static_cast<std::size_t>(i)] == 0) continue;
            for (int j = 0; j < n_; ++j) {
                if (b[static_cast<std::size_t>(j)] == 0 || i == j) continue;
                std::int64_t c = m_.mul(a[static_cast<std::size_t>(i)], b[static_cast<std::size_t>(j)]);
                const Vec& e = basis_bracket(i, j);
                for (std::size_t l = 0; l < dim(); ++l)
                    if (e[l]) r[l] = m_.reduce(r[l] + c * e[l]);
            }
        }
        return r;
    }

    bool is_abelian() const {
        for (const auto& v : table_)
            if (!detail::is_zero(v)) return false;
        return true;
    }

    /// Every element, in mixed-radix order (first coordinate fastest).
    std::vector<Vec> elements() const {
        std::vector<Vec> out;
        Vec v = zero();
        while (true) {
            out.push_back(v);
            std::size_t i = 0;
            for (; i < dim(); ++i) {
                if (++v[i] < m_.value()) break;
                v[i] = 0;
            }
            if (i == dim()) break;
        }
        return out;
    }

    Span full() const { return Span::full(m_, dim()); }
    Span span(const std::vector<Vec>& gens) const { return Span(m_, dim(), gens); }

    friend bool operator==(const LieRing& a, const LieRing& b) {
        return a.m_ == b.m_ && a.n_ == b.n_ && a.table_ == b.table_;
    }

    std::optional<int> declared_class;

private:
    void check_index(int i) const {
        if (i < 0 || i >= n_) throw InputError("lie ring: basis index " + std::to_string(i + 1) + " out of range");
    }
    Vec& at(int i, int j) { return table_[static_cast<std::size_t>(i * n_ + j)]; }

    Modulus m_;
    int n_;
    std::vector<Vec> table_;
};

inline std::string vec_to_string(const Vec& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(v[i]);
    }
    return s + ")";
}

/// [A, B]: the span of brackets of generators.
inline Span bracket_span(const LieRing& g, const Span& a, const Span& b) {
    std::vector<Vec> gens;
    for (const auto& x : a.generators())
        for (const auto& y : b.generators()) {
            Vec z = g.bracket(x, y);
            if (!detail::is_zero(z)) gens.push_back(std::move(z));
        }
    return g.span(gens);
}

inline bool is_lie_subring(const LieRing& g, const Span& a) { return a.contains(bracket_span(g, a, a)); }
inline bool is_ideal(const LieRing& g, const Span& a) { return a.contains(bracket_span(g, g.full(), a)); }

/// Smallest Lie subring containing a.
inline Span lie_closure(const LieRing& g, Span a) {
    while (true) {
        Span next = a + bracket_span(g, a, a);
        if (next == a) return a;
        a = std::move(next);
    }
}

struct ClassReport {
    int nilpotency_class = 0;
    std::vector<int> lower_central_log_sizes;  ///< log_p |g^i|, i = 1.., ending with 0
};

/// Lower central series g^1 = g, g^{i+1} = [g, g^i]; throws InputError if not nilpotent.
inline ClassReport lower_central_series(const LieRing& g) {
    ClassReport r;
    Span cur = g.full();
    r.lower_central_log_sizes.push_back(cur.log_size());
    while (cur.log_size() > 0) {
        Span next = bracket_span(g, g.full(), cur);
        if (next == cur) throw InputError("lie ring: not nilpotent");
        cur = std::move(next);
        r.lower_central_log_sizes.push_back(cur.log_size());
    }
    r.nilpotency_class = static_cast<int>(r.lower_central_log_sizes.size()) - 1;
    return r;
}

/// Checks antisymmetry and the Jacobi identity on all basis triples, then the
/// class condition c < p. Jacobi and declared-class failures are verification
/// failures with a witness; c >= p is an input error.
inline ClassReport validate(const LieRing& g) {
    const int n = g.rank();
    for (int i = 0; i < n; ++i) {
        if (!detail::is_zero(g.basis_bracket(i, i)))
            throw VerificationFailure("antisymmetry", "[e_i, e_i] != 0", {{"i", std::to_string(i + 1)}});
        for (int j = 0; j < n; ++j)
            if (!(g.add(g.basis_bracket(i, j), g.basis_bracket(j, i)) == g.zero()))
                throw VerificationFailure("antisymmetry", "[e_i, e_j] != -[e_j, e_i]",
                                          {{"i", std::to_string(i + 1)}, {"j", std::to_string(j + 1)}});
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int l = j + 1; l < n; ++l) {
                Vec a = g.basis(i), b = g.basis(j), c = g.basis(l);
                Vec s = g.add(g.add(g.bracket(a, g.bracket(b, c)), g.bracket(b, g.bracket(c, a))),
                              g.bracket(c, g.bracket(a, b)));
                if (!detail::is_zero(s))
                    throw VerificationFailure("jacobi", "Jacobi identity fails on a basis triple",
                                              {{"i", std::to_string(i + 1)},
                                               {"j", std::to_string(j + 1)},
                                               {"l", std::to_string(l + 1)},
                                               {"jacobiator", vec_to_string(s)}});
            }
    ClassReport r = lower_central_series(g);
    if (r.nilpotency_class >= g.p())
        throw InputError("lie ring: nilpotency class " + std::to_string(r.nilpotency_class) + " is not less than p = " +
                         std::to_string(g.p()));
    if (g.declared_class && *g.declared_class != r.nilpotency_class)
        throw VerificationFailure("class", "declared class differs from the computed class",
                                  {{"declared", std::to_string(*g.declared_class)},
                                   {"computed", std::to_string(r.nilpotency_class)}});
    return r;
}

} // namespace orbitlab
