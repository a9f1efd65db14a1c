#pragma once

// Exact arithmetic in Q(zeta_N), N = p^M, in the power basis
// 1, zeta, ..., zeta^(phi(N)-1) modulo the N-th cyclotomic polynomial
// Phi_N(x) = sum_{j<p} x^(j p^(M-1)).

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "orbitlab/arith/qpmodzp.hpp"
#include "orbitlab/arith/rational.hpp"

namespace orbitlab {

class CycNumber {
public:
    /// Zero of Q(zeta_{p^M}).
    CycNumber(std::int64_t p, int M) : p_(p), M_(M), c_(static_cast<std::size_t>(phi()), Rational(0)) {
        if (!is_prime(p)) throw InputError("cyclotomic: p is not prime");
        if (M < 0 || M > 12) throw InputError("cyclotomic: conductor exponent out of range");
    }

    CycNumber(std::int64_t p, int M, const Rational& r) : CycNumber(p, M) { c_[0] = r; }

    /// zeta_{p^M}^e.
    static CycNumber root_of_unity(std::int64_t p, int M, std::int64_t e) {
        CycNumber z(p, M);
        z.add_power(e, Rational(1));
        return z;
    }

    /// sum_e weights[e] zeta_{p^M}^e, e < p^M.
    static CycNumber from_root_weights(std::int64_t p, int M, const std::vector<Rational>& weights) {
        CycNumber z(p, M);
        for (std::size_t e = 0; e < weights.size(); ++e)
            if (weights[e] != 0) z.add_power(static_cast<std::int64_t>(e), weights[e]);
        return z;
    }

    std::int64_t p() const noexcept { return p_; }
    int level() const noexcept { return M_; }
    std::int64_t conductor() const noexcept { return ipow(p_, M_); }
    std::int64_t phi() const noexcept { return M_ == 0 ? 1 : ipow(p_, M_ - 1) * (p_ - 1); }
    const std::vector<Rational>& coefficients() const noexcept { return c_; }

    bool is_zero() const {
        return std::all_of(c_.begin(), c_.end(), [](const Rational& r) { return r == 0; });
    }

    bool is_rational() const {
        return std::all_of(c_.begin() + 1, c_.end(), [](const Rational& r) { return r == 0; });
    }

    /// The same number viewed in Q(zeta_{p^M'}), M' >= M.
    CycNumber lift(int target) const {
        if (target < M_) throw InputError("cyclotomic: cannot lower the conductor");
        if (target == M_) return *this;
        CycNumber r(p_, target);
        std::int64_t step = ipow(p_, target - M_);
        for (std::size_t i = 0; i < c_.size(); ++i)
            if (c_[i] != 0) r.add_power(static_cast<std::int64_t>(i) * step, c_[i]);
        return r;
    }

    CycNumber& operator+=(const CycNumber& o) {
        align(o);
        if (o.M_ < M_) return *this += o.lift(M_);
        for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
        return *this;
    }
    CycNumber& operator-=(const CycNumber& o) {
        align(o);
        if (o.M_ < M_) return *this -= o.lift(M_);
        for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
        return *this;
    }
    CycNumber& operator*=(const Rational& r) {
        for (auto& x : c_) x *= r;
        return *this;
    }

    friend CycNumber operator+(CycNumber a, const CycNumber& b) { return a += b; }
    friend CycNumber operator-(CycNumber a, const CycNumber& b) { return a -= b; }
    friend CycNumber operator*(CycNumber a, const Rational& r) { return a *= r; }
    CycNumber operator-() const {
        CycNumber r = *this;
        for (auto& x : r.c_) x = -x;
        return r;
    }

    friend CycNumber operator*(const CycNumber& a, const CycNumber& b) {
        if (a.p_ != b.p_) throw InputError("cyclotomic: mismatched primes");
        if (a.M_ != b.M_) {
            int t = std::max(a.M_, b.M_);
            return a.lift(t) * b.lift(t);
        }
        const std::int64_t n = a.conductor();
        std::vector<Rational> acc(static_cast<std::size_t>(n), Rational(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i] == 0) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) {
                if (b.c_[j] == 0) continue;
                acc[(i + j) % static_cast<std::size_t>(n)] += a.c_[i] * b.c_[j];
            }
        }
        CycNumber r(a.p_, a.M_);
        for (std::size_t e = 0; e < acc.size(); ++e)
            if (acc[e] != 0) r.add_power(static_cast<std::int64_t>(e), acc[e]);
        return r;
    }
    CycNumber& operator*=(const CycNumber& o) { return *this = *this * o; }

    /// Multiplication by zeta^e; cheap, no general product needed.
    CycNumber times_root(std::int64_t e) const {
        CycNumber r(p_, M_);
        for (std::size_t i = 0; i < c_.size(); ++i)
            if (c_[i] != 0) r.add_power(static_cast<std::int64_t>(i) + e, c_[i]);
        return r;
    }

    /// The Galois automorphism zeta -> zeta^a, gcd(a, p) = 1.
    CycNumber galois(std::int64_t a) const {
        if (mod_reduce(a, p_) == 0 && M_ > 0) throw InputError("cyclotomic: galois exponent not a unit");
        CycNumber r(p_, M_);
        for (std::size_t i = 0; i < c_.size(); ++i)
            if (c_[i] != 0) r.add_power(static_cast<std::int64_t>(i) * a, c_[i]);
        return r;
    }

    /// Complex conjugation zeta -> zeta^-1.
    CycNumber conj() const { return galois(-1); }

    CycNumber inverse() const {
        if (is_zero()) throw InputError("cyclotomic: division by zero");
        const std::int64_t n = conductor();
        CycNumber others(p_, M_, Rational(1));
        for (std::int64_t a = 2; a < n; ++a)
            if (a % p_ != 0) others *= galois(a);
        CycNumber norm = *this * others;
        if (!norm.is_rational()) throw InternalError("cyclotomic: norm is not rational");
        return others * (Rational(1) / norm.c_[0]);
    }

    friend bool operator==(const CycNumber& a, const CycNumber& b) {
        if (a.p_ != b.p_) return false;
        if (a.M_ != b.M_) {
            int t = std::max(a.M_, b.M_);
            return a.lift(t).c_ == b.lift(t).c_;
        }
        return a.c_ == b.c_;
    }

    /// "[c0, c1, ...] @ p^M"
    std::string to_string() const {
        std::string s = "[";
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (i) s += ", ";
            s += orbitlab::to_string(c_[i]);
        }
        s += "] @ " + std::to_string(p_) + "^" + std::to_string(M_);
        return s;
    }

private:
    void align(const CycNumber& o) {
        if (o.p_ != p_) throw InputError("cyclotomic: mismatched primes");
        if (o.M_ > M_) *this = lift(o.M_);
    }

    // c_ += r * zeta^e, reduced.
    void add_power(std::int64_t e, const Rational& r) {
        const std::int64_t n = conductor();
        e = mod_reduce(e, n);
        const std::int64_t ph = phi();
        if (e < ph) {
            c_[static_cast<std::size_t>(e)] += r;
            return;
        }
        // zeta^phi = -sum_{j=0}^{p-2} zeta^{j p^{M-1}}
        const std::int64_t step = M_ == 0 ? 0 : ipow(p_, M_ - 1);
        if (M_ == 0) {
            c_[0] += r;
            return;
        }
        for (std::int64_t j = 0; j <= p_ - 2; ++j) c_[static_cast<std::size_t>(e - ph + j * step)] -= r;
    }

    std::int64_t p_;
    int M_;
    std::vector<Rational> c_;
};

/// psi: Q_p/Z_p -> Q(zeta_{p^M})^x, a/p^m -> zeta_{p^M}^{a p^{M-m}}.
inline CycNumber cyc_embed(const QpModZp& v, int M) {
    if (v.level() > M)
        throw InputError("cyc_embed: level " + std::to_string(v.level()) + " exceeds conductor exponent " +
                         std::to_string(M));
    return CycNumber::root_of_unity(v.p(), M, v.scaled_to(M));
}

} // namespace orbitlab
