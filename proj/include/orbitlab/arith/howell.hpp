#pragma once

// Row spans over Z/p^k. The Howell normal form is the canonical echelon form
// of a row span over a chain ring: two matrices span the same submodule iff
// their Howell forms coincide, and for every j the rows of H that vanish in
// the first j columns span every element of the span that does.

#include <algorithm>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "orbitlab/arith/modulus.hpp"

namespace orbitlab {

using Vec = std::vector<std::int64_t>;

class ModMatrix {
public:
    ModMatrix(Modulus m, std::size_t rows, std::size_t cols)
        : m_(m), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

    ModMatrix(Modulus m, std::size_t cols, const std::vector<Vec>& rows) : ModMatrix(m, rows.size(), cols) {
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != cols) throw InputError("matrix: ragged row");
            for (std::size_t j = 0; j < cols; ++j) at(i, j) = m.reduce(rows[i][j]);
        }
    }

    static ModMatrix identity(Modulus m, std::size_t n) {
        ModMatrix r(m, n, n);
        for (std::size_t i = 0; i < n; ++i) r.at(i, i) = 1;
        return r;
    }

    const Modulus& modulus() const noexcept { return m_; }
    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    std::int64_t& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    std::int64_t at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    Vec row(std::size_t i) const { return {data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_}; }
    std::vector<Vec> row_list() const {
        std::vector<Vec> out;
        for (std::size_t i = 0; i < rows_; ++i) out.push_back(row(i));
        return out;
    }

    ModMatrix operator*(const ModMatrix& o) const {
        if (!(m_ == o.m_)) throw InputError("matrix: mismatched moduli");
        if (cols_ != o.rows_) throw InputError("matrix: shape mismatch");
        ModMatrix r(m_, rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t l = 0; l < cols_; ++l) {
                std::int64_t a = at(i, l);
                if (a == 0) continue;
                for (std::size_t j = 0; j < o.cols_; ++j) r.at(i, j) = m_.reduce(r.at(i, j) + a * o.at(l, j));
            }
        return r;
    }

    friend bool operator==(const ModMatrix& a, const ModMatrix& b) {
        return a.m_ == b.m_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    Modulus m_;
    std::size_t rows_, cols_;
    std::vector<std::int64_t> data_;
};

struct HowellResult {
    ModMatrix form;       ///< Howell form H (only nonzero rows)
    ModMatrix transform;  ///< T with T * m == H
};

namespace detail {

inline void axpy(const Modulus& m, Vec& y, std::int64_t a, const Vec& x) {
    if (a == 0) return;
    for (std::size_t j = 0; j < y.size(); ++j) y[j] = m.reduce(y[j] + a * x[j]);
}

inline void scale(const Modulus& m, Vec& y, std::int64_t a) {
    for (auto& v : y) v = m.mul(v, a);
}

inline bool is_zero(const Vec& v) {
    return std::all_of(v.begin(), v.end(), [](std::int64_t x) { return x == 0; });
}

} // namespace detail

inline HowellResult howell_form(const ModMatrix& input) {
    const Modulus& m = input.modulus();
    const std::size_t cols = input.cols();
    const std::size_t n_in = input.rows();

    std::vector<Vec> rows = input.row_list();
    std::vector<Vec> trans;
    for (std::size_t i = 0; i < n_in; ++i) {
        Vec t(n_in, 0);
        t[i] = 1;
        trans.push_back(std::move(t));
    }

    std::size_t r = 0;
    for (std::size_t col = 0; col < cols; ++col) {
        std::size_t best = rows.size();
        int best_v = m.k();
        for (std::size_t i = r; i < rows.size(); ++i) {
            int v = m.valuation(rows[i][col]);
            if (v < best_v) {
                best_v = v;
                best = i;
            }
        }
        if (best == rows.size()) continue;
        std::swap(rows[r], rows[best]);
        std::swap(trans[r], trans[best]);

        const std::int64_t pv = m.power_of_p(best_v);
        const std::int64_t unit_inv = m.inverse(rows[r][col] / pv);
        detail::scale(m, rows[r], unit_inv);
        detail::scale(m, trans[r], unit_inv);

        for (std::size_t i = r + 1; i < rows.size(); ++i) {
            std::int64_t e = rows[i][col];
            if (e == 0) continue;
            std::int64_t f = m.reduce(-(e / pv));
            detail::axpy(m, rows[i], f, rows[r]);
            detail::axpy(m, trans[i], f, trans[r]);
        }

        if (best_v > 0) {
            Vec ann = rows[r];
            Vec ann_t = trans[r];
            const std::int64_t factor = m.power_of_p(m.k() - best_v);
            detail::scale(m, ann, factor);
            detail::scale(m, ann_t, factor);
            if (!detail::is_zero(ann)) {
                rows.push_back(std::move(ann));
                trans.push_back(std::move(ann_t));
            }
        }

        for (std::size_t i = 0; i < r; ++i) {
            std::int64_t f = rows[i][col] / pv;
            if (f == 0) continue;
            detail::axpy(m, rows[i], m.reduce(-f), rows[r]);
            detail::axpy(m, trans[i], m.reduce(-f), trans[r]);
        }
        ++r;
    }

    ModMatrix h(m, r, cols), t(m, r, n_in);
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < cols; ++j) h.at(i, j) = rows[i][j];
        for (std::size_t j = 0; j < n_in; ++j) t.at(i, j) = trans[i][j];
    }
    return {std::move(h), std::move(t)};
}

/// Generators of the left kernel {x : x * m == 0}.
inline std::vector<Vec> kernel(const ModMatrix& m) {
    const std::size_t n = m.rows(), c = m.cols();
    ModMatrix aug(m.modulus(), n, c + n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < c; ++j) aug.at(i, j) = m.at(i, j);
        aug.at(i, c + i) = 1;
    }
    auto h = howell_form(aug).form;
    std::vector<Vec> out;
    for (std::size_t i = 0; i < h.rows(); ++i) {
        bool left_zero = true;
        for (std::size_t j = 0; j < c; ++j)
            if (h.at(i, j) != 0) left_zero = false;
        if (!left_zero) continue;
        Vec v(n);
        for (std::size_t j = 0; j < n; ++j) v[j] = h.at(i, c + j);
        out.push_back(std::move(v));
    }
    return out;
}

/// A submodule of (Z/p^k)^n kept in Howell normal form; equality is equality of forms.
class Span {
public:
    Span(Modulus m, std::size_t dim) : m_(m), dim_(dim), h_(m, 0, dim) {}

    Span(Modulus m, std::size_t dim, const std::vector<Vec>& generators)
        : m_(m), dim_(dim), h_(howell_form(ModMatrix(m, dim, generators)).form) {}

    static Span full(Modulus m, std::size_t dim) {
        std::vector<Vec> g;
        for (std::size_t i = 0; i < dim; ++i) {
            Vec v(dim, 0);
            v[i] = 1;
            g.push_back(v);
        }
        return Span(m, dim, g);
    }

    const Modulus& modulus() const noexcept { return m_; }
    std::size_t dim() const noexcept { return dim_; }
    const ModMatrix& form() const noexcept { return h_; }
    std::vector<Vec> generators() const { return h_.row_list(); }

    /// log_p of the cardinality.
    int log_size() const {
        int e = 0;
        for (std::size_t i = 0; i < h_.rows(); ++i) e += m_.k() - m_.valuation(pivot(i).second);
        return e;
    }

    std::int64_t size() const { return ipow(m_.p(), log_size()); }

    /// Canonical coset representative of v modulo the span.
    Vec reduce(Vec v) const {
        for (auto& x : v) x = m_.reduce(x);
        for (std::size_t i = 0; i < h_.rows(); ++i) {
            auto [col, pv] = pivot(i);
            std::int64_t f = v[col] / pv;
            if (f == 0) continue;
            Vec row = h_.row(i);
            detail::axpy(m_, v, m_.reduce(-f), row);
        }
        return v;
    }

    bool contains(const Vec& v) const { return detail::is_zero(reduce(v)); }

    bool contains(const Span& o) const {
        for (std::size_t i = 0; i < o.h_.rows(); ++i)
            if (!contains(o.h_.row(i))) return false;
        return true;
    }

    Span operator+(const Span& o) const {
        auto g = generators();
        auto og = o.generators();
        g.insert(g.end(), og.begin(), og.end());
        return Span(m_, dim_, g);
    }

    Span with(const Vec& v) const {
        auto g = generators();
        g.push_back(v);
        return Span(m_, dim_, g);
    }

    /// Every element, in the order of the mixed-radix enumeration of coefficient tuples.
    std::vector<Vec> elements() const {
        std::vector<Vec> gens;
        std::vector<std::int64_t> orders;
        for (std::size_t i = 0; i < h_.rows(); ++i) {
            gens.push_back(h_.row(i));
            orders.push_back(m_.value() / pivot(i).second);
        }
        std::vector<Vec> out;
        std::vector<std::int64_t> c(gens.size(), 0);
        while (true) {
            Vec v(dim_, 0);
            for (std::size_t i = 0; i < gens.size(); ++i) detail::axpy(m_, v, c[i], gens[i]);
            out.push_back(std::move(v));
            std::size_t i = 0;
            for (; i < c.size(); ++i) {
                if (++c[i] < orders[i]) break;
                c[i] = 0;
            }
            if (i == c.size()) break;
        }
        return out;
    }

    friend bool operator==(const Span& a, const Span& b) { return a.dim_ == b.dim_ && a.h_ == b.h_; }

private:
    std::pair<std::size_t, std::int64_t> pivot(std::size_t i) const {
        for (std::size_t j = 0; j < dim_; ++j)
            if (h_.at(i, j) != 0) return {j, h_.at(i, j)};
        throw InternalError("howell: zero row in normal form");
    }

    Modulus m_;
    std::size_t dim_;
    ModMatrix h_;
};

} // namespace orbitlab
