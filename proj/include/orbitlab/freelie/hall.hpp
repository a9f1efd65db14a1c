#pragma once

// Hall basis of the free nilpotent Lie algebra on m <= 3 generators, class
// c <= 6, and Lie polynomials over Q written in it.
//
// Trees are basic commutators: a letter, or t = [a, b] with a < b and, when
// b = [u, v], u <= a. Elements are ordered by degree, then by foliage
// (x < y < z); foliages are distinct, which is checked.

#include <algorithm>
#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "orbitlab/error.hpp"
#include "orbitlab/freelie/assoc.hpp"

namespace orbitlab {

struct HallTree {
    int letter = -1;  ///< generator index for degree-1 trees, else -1
    int left = -1;
    int right = -1;
    int degree = 1;
    std::string foliage;
    std::string text;  ///< "[x,[x,y]]"
};

/// Number of degree-d basis elements of the free Lie algebra on m generators.
inline std::int64_t witt_count(int m, int d) {
    auto mobius = [](int n) {
        int r = 1;
        for (int q = 2; q * q <= n; ++q) {
            if (n % q) continue;
            n /= q;
            if (n % q == 0) return 0;
            r = -r;
        }
        return n > 1 ? -r : r;
    };
    std::int64_t s = 0;
    for (int e = 1; e <= d; ++e)
        if (d % e == 0) s += mobius(e) * ipow(m, d / e);
    return s / d;
}

class HallBasis {
public:
    static constexpr int max_gens = 3;
    static constexpr int max_class = 6;

    HallBasis(int m, int c) : m_(m), c_(c) {
        if (m < 1 || m > max_gens) throw InputError("hall basis: generator count must be in [1, 3]");
        if (c < 1 || c > max_class) throw InputError("hall basis: class must be in [1, 6]");
        static const char* names = "xyz";
        for (int i = 0; i < m; ++i) {
            HallTree t;
            t.letter = i;
            t.foliage = std::string(1, names[i]);
            t.text = t.foliage;
            trees_.push_back(t);
        }
        by_degree_.assign(static_cast<std::size_t>(c + 1), {});
        for (int i = 0; i < m; ++i) by_degree_[1].push_back(i);

        for (int d = 2; d <= c; ++d) {
            std::vector<HallTree> fresh;
            for (int a = 0; a < static_cast<int>(trees_.size()); ++a)
                for (int b = a + 1; b < static_cast<int>(trees_.size()); ++b) {
                    if (trees_[a].degree + trees_[b].degree != d) continue;
                    if (trees_[b].letter < 0 && trees_[b].left > a) continue;
                    HallTree t;
                    t.left = a;
                    t.right = b;
                    t.degree = d;
                    t.foliage = trees_[a].foliage + trees_[b].foliage;
                    t.text = "[" + trees_[a].text + "," + trees_[b].text + "]";
                    fresh.push_back(std::move(t));
                }
            std::sort(fresh.begin(), fresh.end(),
                      [](const HallTree& s, const HallTree& t) { return s.foliage < t.foliage; });
            for (std::size_t i = 1; i < fresh.size(); ++i)
                if (fresh[i].foliage == fresh[i - 1].foliage)
                    throw InternalError("hall basis: repeated foliage " + fresh[i].foliage);
            if (static_cast<std::int64_t>(fresh.size()) != witt_count(m, d))
                throw InternalError("hall basis: degree " + std::to_string(d) + " count disagrees with Witt's formula");
            for (auto& t : fresh) {
                by_degree_[d].push_back(static_cast<int>(trees_.size()));
                trees_.push_back(std::move(t));
            }
        }
        for (std::size_t i = 0; i < trees_.size(); ++i) index_[trees_[i].text] = static_cast<int>(i);
        expansions_.resize(trees_.size());
        tables_.resize(static_cast<std::size_t>(c + 1));
    }

    int gens() const noexcept { return m_; }
    int cls() const noexcept { return c_; }
    std::size_t size() const noexcept { return trees_.size(); }
    const HallTree& tree(int i) const { return trees_.at(static_cast<std::size_t>(i)); }
    const std::vector<HallTree>& trees() const noexcept { return trees_; }
    const std::vector<int>& of_degree(int d) const { return by_degree_.at(static_cast<std::size_t>(d)); }

    std::optional<int> index_of(std::string_view text) const {
        auto it = index_.find(std::string(text));
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    /// Integer expansion of a tree as a degree-d block of the associative algebra.
    const std::vector<Rational>& expansion(int i) const {
        ensure(tree(i).degree);
        return expansions_[static_cast<std::size_t>(i)];
    }

    /// Coordinates in the Hall basis of a homogeneous degree-d associative block.
    /// Throws InternalError unless the block is a Lie element.
    std::vector<std::pair<int, Rational>> rewrite(int d, const std::vector<Rational>& block) const {
        ensure(d);
        const auto& tab = tables_[static_cast<std::size_t>(d)];
        const auto& ids = by_degree_[static_cast<std::size_t>(d)];
        const std::size_t n = ids.size();
        std::vector<Rational> coeff(n, Rational(0));
        for (std::size_t r = 0; r < n; ++r) {
            const Rational& t = block[tab.columns[r]];
            if (t == 0) continue;
            for (std::size_t j = 0; j < n; ++j)
                if (tab.inverse[j][r] != 0) coeff[j] += t * tab.inverse[j][r];
        }
        std::vector<Rational> residual = block;
        std::vector<std::pair<int, Rational>> out;
        for (std::size_t j = 0; j < n; ++j) {
            if (coeff[j] == 0) continue;
            const auto& e = expansions_[static_cast<std::size_t>(ids[j])];
            for (std::size_t w = 0; w < e.size(); ++w)
                if (e[w] != 0) residual[w] -= coeff[j] * e[w];
            out.emplace_back(ids[j], coeff[j]);
        }
        for (const auto& r : residual)
            if (r != 0)
                throw InternalError("hall rewrite: nonzero associative remainder in degree " + std::to_string(d));
        return out;
    }

private:
    struct Table {
        std::vector<std::size_t> columns;          // independent word columns
        std::vector<std::vector<Rational>> inverse;  // inverse of the minor on those columns
    };

    void ensure(int d) const {
        for (int e = 1; e <= d; ++e) std::call_once(once_[static_cast<std::size_t>(e)], [&] { build(e); });
    }

    void build(int d) const {
        std::size_t words = static_cast<std::size_t>(ipow(m_, d));
        const auto& ids = by_degree_[static_cast<std::size_t>(d)];
        for (int i : ids) {
            const HallTree& t = trees_[static_cast<std::size_t>(i)];
            std::vector<Rational> e(words, Rational(0));
            if (t.letter >= 0) {
                e[static_cast<std::size_t>(t.letter)] = 1;
            } else {
                const auto& a = expansions_[static_cast<std::size_t>(t.left)];
                const auto& b = expansions_[static_cast<std::size_t>(t.right)];
                const std::size_t sa = static_cast<std::size_t>(ipow(m_, trees_[t.left].degree));
                const std::size_t sb = static_cast<std::size_t>(ipow(m_, trees_[t.right].degree));
                for (std::size_t i1 = 0; i1 < sa; ++i1) {
                    if (a[i1] == 0) continue;
                    for (std::size_t j1 = 0; j1 < sb; ++j1) {
                        if (b[j1] == 0) continue;
                        e[i1 * sb + j1] += a[i1] * b[j1];
                        e[j1 * sa + i1] -= a[i1] * b[j1];
                    }
                }
            }
            expansions_[static_cast<std::size_t>(i)] = std::move(e);
        }

        // Pick n independent word columns by elimination modulo a large prime
        // (independence there implies independence over Q), then invert the
        // square minor M[r][j] = expansion_j[column_r] exactly.
        const std::size_t n = ids.size();
        Table tab;
        {
            constexpr std::int64_t q = 2147483629;
            std::vector<std::vector<std::int64_t>> red(n, std::vector<std::int64_t>(words));
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t w = 0; w < words; ++w)
                    red[j][w] = mod_reduce(numerator_of(expansions_[static_cast<std::size_t>(ids[j])][w])
                                               .convert_to<std::int64_t>(),
                                           q);
            std::size_t row = 0;
            for (std::size_t w = 0; w < words && row < n; ++w) {
                std::size_t piv = row;
                while (piv < n && red[piv][w] == 0) ++piv;
                if (piv == n) continue;
                std::swap(red[piv], red[row]);
                std::int64_t inv = mod_inverse(red[row][w], q);
                for (std::size_t i = row + 1; i < n; ++i) {
                    if (red[i][w] == 0) continue;
                    std::int64_t f = static_cast<std::int64_t>((static_cast<__int128>(red[i][w]) * inv) % q);
                    for (std::size_t v = w; v < words; ++v)
                        red[i][v] = mod_reduce(
                            static_cast<std::int64_t>((red[i][v] - static_cast<__int128>(f) * red[row][v]) % q), q);
                }
                tab.columns.push_back(w);
                ++row;
            }
            if (row != n) throw InternalError("hall basis: expansions are dependent in degree " + std::to_string(d));
        }
        std::vector<std::vector<Rational>> a(n, std::vector<Rational>(2 * n, Rational(0)));
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t j = 0; j < n; ++j)
                a[r][j] = expansions_[static_cast<std::size_t>(ids[j])][tab.columns[r]];
            a[r][n + r] = 1;
        }
        // Row-reduce [M | I] to [I | M^-1]; then coeff = M^-1 t restricted to the columns.
        for (std::size_t col = 0; col < n; ++col) {
            std::size_t piv = col;
            while (piv < n && a[piv][col] == 0) ++piv;
            if (piv == n) throw InternalError("hall basis: singular minor in degree " + std::to_string(d));
            std::swap(a[piv], a[col]);
            Rational inv = Rational(1) / a[col][col];
            for (auto& x : a[col])
                if (x != 0) x *= inv;
            for (std::size_t r = 0; r < n; ++r) {
                if (r == col || a[r][col] == 0) continue;
                Rational f = a[r][col];
                for (std::size_t j = 0; j < 2 * n; ++j)
                    if (a[col][j] != 0) a[r][j] -= f * a[col][j];
            }
        }
        tab.inverse.assign(n, std::vector<Rational>(n, Rational(0)));
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t j = 0; j < n; ++j) tab.inverse[r][j] = a[r][n + j];
        tables_[static_cast<std::size_t>(d)] = std::move(tab);
    }

    int m_, c_;
    std::vector<HallTree> trees_;
    std::vector<std::vector<int>> by_degree_;
    std::map<std::string, int> index_;

    mutable std::array<std::once_flag, max_class + 1> once_;
    mutable std::vector<std::vector<Rational>> expansions_;
    mutable std::vector<Table> tables_;
};

/// Shared, lazily built basis for (m, c).
inline std::shared_ptr<const HallBasis> hall_basis(int m, int c) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::shared_ptr<const HallBasis>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[{m, c}];
    if (!slot) slot = std::make_shared<const HallBasis>(m, c);
    return slot;
}

class LiePoly {
public:
    using BasisPtr = std::shared_ptr<const HallBasis>;

    explicit LiePoly(BasisPtr basis) : basis_(std::move(basis)), coef_(basis_->size(), Rational(0)) {}

    static LiePoly generator(BasisPtr basis, int i) {
        if (i < 0 || i >= basis->gens()) throw InputError("lie poly: generator index out of range");
        LiePoly f(std::move(basis));
        f.coef_[static_cast<std::size_t>(i)] = 1;
        return f;
    }

    static LiePoly basis_element(BasisPtr basis, int i) {
        LiePoly f(std::move(basis));
        f.coef_.at(static_cast<std::size_t>(i)) = 1;
        return f;
    }

    /// Rewrites an associative polynomial (a Lie element) into the Hall basis.
    static LiePoly from_assoc(BasisPtr basis, const AssocPoly& a) {
        if (a.gens() != basis->gens() || a.cls() != basis->cls()) throw InputError("lie poly: shape mismatch");
        if (a.block(0)[0] != 0) throw InternalError("hall rewrite: constant term in a Lie element");
        LiePoly f(basis);
        for (int d = 1; d <= basis->cls(); ++d) {
            bool any = false;
            for (const auto& r : a.block(d))
                if (r != 0) any = true;
            if (!any) continue;
            for (auto& [i, r] : basis->rewrite(d, a.block(d))) f.coef_[static_cast<std::size_t>(i)] = r;
        }
        return f;
    }

    const BasisPtr& basis() const noexcept { return basis_; }
    const std::vector<Rational>& coefficients() const noexcept { return coef_; }
    const Rational& operator[](int i) const { return coef_.at(static_cast<std::size_t>(i)); }

    /// Coefficient of a Hall tree given by its bracket text, e.g. "[x,[x,y]]".
    Rational coefficient(std::string_view text) const {
        auto i = basis_->index_of(text);
        if (!i) throw InputError("lie poly: '" + std::string(text) + "' is not a Hall basis element");
        return coef_[static_cast<std::size_t>(*i)];
    }

    bool is_zero() const {
        for (const auto& r : coef_)
            if (r != 0) return false;
        return true;
    }

    LiePoly degree_part(int d) const {
        LiePoly f(basis_);
        for (std::size_t i = 0; i < coef_.size(); ++i)
            if (basis_->tree(static_cast<int>(i)).degree == d) f.coef_[i] = coef_[i];
        return f;
    }

    AssocPoly to_assoc() const {
        AssocPoly a(basis_->gens(), basis_->cls());
        for (std::size_t i = 0; i < coef_.size(); ++i) {
            if (coef_[i] == 0) continue;
            int d = basis_->tree(static_cast<int>(i)).degree;
            const auto& e = basis_->expansion(static_cast<int>(i));
            auto& blk = a.block(d);
            for (std::size_t w = 0; w < e.size(); ++w)
                if (e[w] != 0) blk[w] += coef_[i] * e[w];
        }
        return a;
    }

    LiePoly& operator+=(const LiePoly& o) {
        same(o);
        for (std::size_t i = 0; i < coef_.size(); ++i)
            if (o.coef_[i] != 0) coef_[i] += o.coef_[i];
        return *this;
    }
    LiePoly& operator-=(const LiePoly& o) {
        same(o);
        for (std::size_t i = 0; i < coef_.size(); ++i)
            if (o.coef_[i] != 0) coef_[i] -= o.coef_[i];
        return *this;
    }
    LiePoly& operator*=(const Rational& r) {
        for (auto& x : coef_)
            if (x != 0) x *= r;
        return *this;
    }
    friend LiePoly operator+(LiePoly a, const LiePoly& b) { return a += b; }
    friend LiePoly operator-(LiePoly a, const LiePoly& b) { return a -= b; }
    friend LiePoly operator*(LiePoly a, const Rational& r) { return a *= r; }
    friend LiePoly operator*(const Rational& r, LiePoly a) { return a *= r; }
    LiePoly operator-() const { return *this * Rational(-1); }

    friend bool operator==(const LiePoly& a, const LiePoly& b) {
        return a.basis_->gens() == b.basis_->gens() && a.basis_->cls() == b.basis_->cls() && a.coef_ == b.coef_;
    }

    std::string to_string() const {
        std::string s;
        for (std::size_t i = 0; i < coef_.size(); ++i) {
            Rational r = coef_[i];
            if (r == 0) continue;
            if (s.empty()) {
                if (r < 0) s += "-";
            } else {
                s += r < 0 ? " - " : " + ";
            }
            if (r < 0) r = -r;
            if (r != 1) s += orbitlab::to_string(r);
            s += basis_->tree(static_cast<int>(i)).text;
        }
        return s.empty() ? "0" : s;
    }

private:
    void same(const LiePoly& o) const {
        if (o.basis_->gens() != basis_->gens() || o.basis_->cls() != basis_->cls())
            throw InputError("lie poly: mismatched bases");
    }

    BasisPtr basis_;
    std::vector<Rational> coef_;
};

inline LiePoly bracket(const LiePoly& a, const LiePoly& b) {
    return LiePoly::from_assoc(a.basis(), commutator(a.to_assoc(), b.to_assoc()));
}

/// Parses a bracket expression over x, y, z such as "[y,[y,x]]"; non-Hall
/// trees are rewritten.
inline LiePoly lie_element(const LiePoly::BasisPtr& basis, std::string_view text) {
    std::size_t pos = 0;
    auto fail = [&] { throw InputError("lie element: cannot parse '" + std::string(text) + "'"); };
    auto parse = [&](auto&& self) -> LiePoly {
        if (pos >= text.size()) fail();
        char ch = text[pos];
        if (ch == '[') {
            ++pos;
            LiePoly a = self(self);
            if (pos >= text.size() || text[pos] != ',') fail();
            ++pos;
            LiePoly b = self(self);
            if (pos >= text.size() || text[pos] != ']') fail();
            ++pos;
            return bracket(a, b);
        }
        if (ch < 'x' || ch > 'z') fail();
        ++pos;
        return LiePoly::generator(basis, ch - 'x');
    };
    LiePoly r = parse(parse);
    if (pos != text.size()) fail();
    return r;
}

/// Specializes a Lie polynomial: generators map to gens, brackets and linear
/// combinations are computed by ops (zero(), add, scale(Rational, T), bracket).
template <class T, class Ops>
T evaluate(const LiePoly& f, const std::vector<T>& gens, const Ops& ops) {
    const HallBasis& b = *f.basis();
    if (static_cast<int>(gens.size()) != b.gens()) throw InputError("evaluate: wrong number of generators");
    std::vector<std::optional<T>> memo(b.size());
    auto value = [&](auto&& self, int i) -> const T& {
        auto& slot = memo[static_cast<std::size_t>(i)];
        if (!slot) {
            const HallTree& t = b.tree(i);
            if (t.letter >= 0)
                slot = gens[static_cast<std::size_t>(t.letter)];
            else {
                T l = self(self, t.left);
                T r = self(self, t.right);
                slot = ops.bracket(l, r);
            }
        }
        return *slot;
    };
    T acc = ops.zero();
    for (std::size_t i = 0; i < b.size(); ++i) {
        const Rational& r = f.coefficients()[i];
        if (r == 0) continue;
        acc = ops.add(acc, ops.scale(r, value(value, static_cast<int>(i))));
    }
    return acc;
}

/// Substitution of Lie polynomials into a Lie polynomial.
struct LiePolyOps {
    LiePoly::BasisPtr basis;
    LiePoly zero() const { return LiePoly(basis); }
    LiePoly add(const LiePoly& a, const LiePoly& b) const { return a + b; }
    LiePoly scale(const Rational& r, const LiePoly& a) const { return a * r; }
    LiePoly bracket(const LiePoly& a, const LiePoly& b) const { return orbitlab::bracket(a, b); }
};

} // namespace orbitlab
