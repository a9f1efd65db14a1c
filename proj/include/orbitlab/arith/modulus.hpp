#pragma once

#include <cstdint>
#include <numeric>
#include <string>

#include "orbitlab/error.hpp"

namespace orbitlab {

inline bool is_prime(std::int64_t n) {
    if (n < 2) return false;
    for (std::int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline std::int64_t ipow(std::int64_t base, int exp) {
    std::int64_t r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

/// Reduces into [0, m).
inline std::int64_t mod_reduce(std::int64_t a, std::int64_t m) {
    a %= m;
    return a < 0 ? a + m : a;
}

/// Inverse of a modulo m; throws if gcd(a, m) != 1.
inline std::int64_t mod_inverse(std::int64_t a, std::int64_t m) {
    std::int64_t r0 = m, r1 = mod_reduce(a, m), s0 = 0, s1 = 1;
    while (r1 != 0) {
        std::int64_t q = r0 / r1;
        std::int64_t t = r0 - q * r1;
        r0 = r1;
        r1 = t;
        t = s0 - q * s1;
        s0 = s1;
        s1 = t;
    }
    if (r0 != 1) throw InputError("mod_inverse: " + std::to_string(a) + " is not a unit modulo " + std::to_string(m));
    return mod_reduce(s0, m);
}

/// The modulus p^k of a chain ring Z/p^k with p certified prime.
class Modulus {
public:
    Modulus(std::int64_t p, int k) : p_(p), k_(k) {
        if (!is_prime(p)) throw InputError("modulus: p = " + std::to_string(p) + " is not prime");
        if (k < 1) throw InputError("modulus: exponent k must be >= 1");
        std::int64_t pk = 1;
        for (int i = 0; i < k; ++i) {
            if (pk > (std::int64_t{1} << 30) / p) throw InputError("modulus: p^k exceeds 2^30");
            pk *= p;
        }
        pk_ = pk;
    }

    std::int64_t p() const noexcept { return p_; }
    int k() const noexcept { return k_; }
    std::int64_t value() const noexcept { return pk_; }

    std::int64_t reduce(std::int64_t a) const noexcept { return mod_reduce(a, pk_); }
    std::int64_t add(std::int64_t a, std::int64_t b) const noexcept { return reduce(a + b); }
    std::int64_t sub(std::int64_t a, std::int64_t b) const noexcept { return reduce(a - b); }
    std::int64_t mul(std::int64_t a, std::int64_t b) const noexcept { return reduce(a * b); }
    std::int64_t inverse(std::int64_t a) const { return mod_inverse(a, pk_); }

    /// p-adic valuation of a residue; k for zero.
    int valuation(std::int64_t a) const noexcept {
        a = reduce(a);
        if (a == 0) return k_;
        int v = 0;
        while (a % p_ == 0) {
            a /= p_;
            ++v;
        }
        return v;
    }

    std::int64_t power_of_p(int e) const noexcept { return ipow(p_, e); }

    friend bool operator==(const Modulus&, const Modulus&) = default;

private:
    std::int64_t p_;
    int k_;
    std::int64_t pk_;
};

/// An element of Z/p^k.
class Residue {
public:
    Residue(std::int64_t value, Modulus m) : m_(m), v_(m.reduce(value)) {}

    std::int64_t value() const noexcept { return v_; }
    const Modulus& modulus() const noexcept { return m_; }

    Residue operator+(const Residue& o) const { return {m_.add(v_, same(o)), m_}; }
    Residue operator-(const Residue& o) const { return {m_.sub(v_, same(o)), m_}; }
    Residue operator*(const Residue& o) const { return {m_.mul(v_, same(o)), m_}; }
    Residue operator-() const { return {-v_, m_}; }
    Residue inverse() const { return {m_.inverse(v_), m_}; }

    friend bool operator==(const Residue& a, const Residue& b) { return a.m_ == b.m_ && a.v_ == b.v_; }

private:
    std::int64_t same(const Residue& o) const {
        if (!(o.m_ == m_)) throw InputError("residue: mismatched moduli");
        return o.v_;
    }

    Modulus m_;
    std::int64_t v_;
};

} // namespace orbitlab
