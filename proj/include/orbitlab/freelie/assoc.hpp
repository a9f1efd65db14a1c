#pragma once

// Truncated free associative algebra Q<x_1..x_m> / (words of length > c).
// A word of length d is stored at index sum_i letter_i * m^(d-1-i) in the
// dense degree-d block.

#include <cstdint>
#include <string>
#include <vector>

#include "orbitlab/arith/rational.hpp"
#include "orbitlab/error.hpp"

namespace orbitlab {

class AssocPoly {
public:
    AssocPoly(int gens, int cls) : m_(gens), c_(cls), blocks_(static_cast<std::size_t>(cls + 1)) {
        if (gens < 1 || cls < 0) throw InputError("assoc: bad shape");
        std::size_t len = 1;
        for (int d = 0; d <= cls; ++d) {
            blocks_[d].assign(len, Rational(0));
            len *= static_cast<std::size_t>(gens);
        }
    }

    static AssocPoly constant(int gens, int cls, const Rational& r) {
        AssocPoly a(gens, cls);
        a.blocks_[0][0] = r;
        return a;
    }

    static AssocPoly letter(int gens, int cls, int i) {
        AssocPoly a(gens, cls);
        if (cls >= 1) a.blocks_[1][static_cast<std::size_t>(i)] = 1;
        return a;
    }

    int gens() const noexcept { return m_; }
    int cls() const noexcept { return c_; }

    std::vector<Rational>& block(int d) { return blocks_[static_cast<std::size_t>(d)]; }
    const std::vector<Rational>& block(int d) const { return blocks_[static_cast<std::size_t>(d)]; }

    bool is_zero() const {
        for (const auto& b : blocks_)
            for (const auto& r : b)
                if (r != 0) return false;
        return true;
    }

    AssocPoly degree_part(int d) const {
        AssocPoly r(m_, c_);
        r.blocks_[d] = blocks_[d];
        return r;
    }

    AssocPoly& operator+=(const AssocPoly& o) {
        same(o);
        for (std::size_t d = 0; d < blocks_.size(); ++d)
            for (std::size_t i = 0; i < blocks_[d].size(); ++i)
                if (o.blocks_[d][i] != 0) blocks_[d][i] += o.blocks_[d][i];
        return *this;
    }
    AssocPoly& operator-=(const AssocPoly& o) {
        same(o);
        for (std::size_t d = 0; d < blocks_.size(); ++d)
            for (std::size_t i = 0; i < blocks_[d].size(); ++i)
                if (o.blocks_[d][i] != 0) blocks_[d][i] -= o.blocks_[d][i];
        return *this;
    }
    AssocPoly& operator*=(const Rational& r) {
        for (auto& b : blocks_)
            for (auto& x : b)
                if (x != 0) x *= r;
        return *this;
    }

    friend AssocPoly operator+(AssocPoly a, const AssocPoly& b) { return a += b; }
    friend AssocPoly operator-(AssocPoly a, const AssocPoly& b) { return a -= b; }
    friend AssocPoly operator*(AssocPoly a, const Rational& r) { return a *= r; }
    AssocPoly operator-() const { return *this * Rational(-1); }

    friend AssocPoly operator*(const AssocPoly& a, const AssocPoly& b) {
        a.same(b);
        AssocPoly r(a.m_, a.c_);
        for (int da = 0; da <= a.c_; ++da) {
            const auto& ba = a.blocks_[da];
            for (int db = 0; db + da <= a.c_; ++db) {
                const auto& bb = b.blocks_[db];
                auto& out = r.blocks_[da + db];
                const std::size_t shift = bb.size();
                for (std::size_t i = 0; i < ba.size(); ++i) {
                    if (ba[i] == 0) continue;
                    for (std::size_t j = 0; j < bb.size(); ++j) {
                        if (bb[j] == 0) continue;
                        out[i * shift + j] += ba[i] * bb[j];
                    }
                }
            }
        }
        return r;
    }

    friend bool operator==(const AssocPoly& a, const AssocPoly& b) {
        return a.m_ == b.m_ && a.c_ == b.c_ && a.blocks_ == b.blocks_;
    }

    std::string to_string() const {
        static const char* letters = "xyzuvw";
        std::string s;
        for (int d = 0; d <= c_; ++d) {
            for (std::size_t i = 0; i < blocks_[d].size(); ++i) {
                const Rational& r = blocks_[d][i];
                if (r == 0) continue;
                if (!s.empty()) s += " + ";
                s += orbitlab::to_string(r);
                std::string w(static_cast<std::size_t>(d), ' ');
                std::size_t idx = i;
                for (int pos = d - 1; pos >= 0; --pos) {
                    w[static_cast<std::size_t>(pos)] = letters[idx % static_cast<std::size_t>(m_)];
                    idx /= static_cast<std::size_t>(m_);
                }
                if (d) s += "*" + w;
            }
        }
        return s.empty() ? "0" : s;
    }

private:
    void same(const AssocPoly& o) const {
        if (o.m_ != m_ || o.c_ != c_) throw InputError("assoc: shape mismatch");
    }

    int m_, c_;
    std::vector<std::vector<Rational>> blocks_;
};

inline AssocPoly commutator(const AssocPoly& a, const AssocPoly& b) { return a * b - b * a; }

/// exp(a) for a without constant term.
inline AssocPoly assoc_exp(const AssocPoly& a) {
    if (a.block(0)[0] != 0) throw InputError("assoc_exp: argument has a constant term");
    AssocPoly result = AssocPoly::constant(a.gens(), a.cls(), Rational(1));
    AssocPoly term = result;
    for (int n = 1; n <= a.cls(); ++n) {
        term = term * a;
        term *= Rational(1, n);
        result += term;
    }
    return result;
}

/// log(u) for u with constant term 1.
inline AssocPoly assoc_log(const AssocPoly& u) {
    if (u.block(0)[0] != 1) throw InputError("assoc_log: argument does not have constant term 1");
    AssocPoly z = u - AssocPoly::constant(u.gens(), u.cls(), Rational(1));
    AssocPoly result(u.gens(), u.cls());
    AssocPoly power = AssocPoly::constant(u.gens(), u.cls(), Rational(1));
    for (int n = 1; n <= u.cls(); ++n) {
        power = power * z;
        result += power * Rational(n % 2 ? 1 : -1, n);
    }
    return result;
}

/// log(exp(a) exp(b)) computed in the truncated algebra.
inline AssocPoly assoc_bch(const AssocPoly& a, const AssocPoly& b) { return assoc_log(assoc_exp(a) * assoc_exp(b)); }

} // namespace orbitlab
