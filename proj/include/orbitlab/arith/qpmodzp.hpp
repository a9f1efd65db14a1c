#pragma once

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>

#include "orbitlab/arith/modulus.hpp"

namespace orbitlab {

/// numerator / p^level in Q_p/Z_p, kept in lowest terms.
class QpModZp {
public:
    QpModZp(std::int64_t p, std::int64_t numerator, int level) : p_(p), num_(numerator), level_(level) {
        if (!is_prime(p)) throw InputError("Q_p/Z_p: p = " + std::to_string(p) + " is not prime");
        if (level < 0) throw InputError("Q_p/Z_p: negative level");
        normalize();
    }

    static QpModZp zero(std::int64_t p) { return {p, 0, 0}; }

    std::int64_t p() const noexcept { return p_; }
    std::int64_t numerator() const noexcept { return num_; }
    int level() const noexcept { return level_; }
    bool is_zero() const noexcept { return num_ == 0; }

    /// The numerator over p^target (target >= level).
    std::int64_t scaled_to(int target) const {
        if (target < level_) throw InputError("Q_p/Z_p: value " + to_string() + " exceeds level " + std::to_string(target));
        return num_ * ipow(p_, target - level_);
    }

    QpModZp operator+(const QpModZp& o) const {
        check(o);
        int l = std::max(level_, o.level_);
        return {p_, scaled_to(l) + o.scaled_to(l), l};
    }
    QpModZp operator-() const { return {p_, -num_, level_}; }
    QpModZp operator-(const QpModZp& o) const { return *this + (-o); }
    QpModZp operator*(std::int64_t n) const {
        std::int64_t pl = ipow(p_, level_);
        return {p_, mod_reduce(num_, pl) * mod_reduce(n, pl), level_};
    }

    friend bool operator==(const QpModZp&, const QpModZp&) = default;

    /// "a/p^m" with the power spelled out, or "0".
    std::string to_string() const {
        if (num_ == 0) return "0";
        std::string s = std::to_string(num_) + "/" + std::to_string(p_);
        if (level_ > 1) s += "^" + std::to_string(level_);
        return s;
    }

    /// Parses "0", "a/p^m", "a/p" or "a/N" with N a power of p.
    static QpModZp parse(std::string_view text, std::int64_t p) {
        auto fail = [&] { throw InputError("malformed fraction '" + std::string(text) + "'"); };
        auto to_int = [&](std::string_view s) {
            std::int64_t v = 0;
            auto res = std::from_chars(s.data(), s.data() + s.size(), v);
            if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) fail();
            return v;
        };
        auto slash = text.find('/');
        if (slash == std::string_view::npos) {
            std::int64_t v = to_int(text);
            (void)v;
            return zero(p);  // integers are zero in Q_p/Z_p
        }
        std::int64_t a = to_int(text.substr(0, slash));
        std::string_view den = text.substr(slash + 1);
        auto caret = den.find('^');
        int level = 0;
        if (caret != std::string_view::npos) {
            if (to_int(den.substr(0, caret)) != p) fail();
            std::int64_t m = to_int(den.substr(caret + 1));
            if (m < 0 || m > 30) fail();
            level = static_cast<int>(m);
        } else {
            std::int64_t d = to_int(den);
            if (d <= 0) fail();
            while (d % p == 0) {
                d /= p;
                ++level;
            }
            if (d != 1) fail();
        }
        return {p, a, level};
    }

private:
    void check(const QpModZp& o) const {
        if (o.p_ != p_) throw InputError("Q_p/Z_p: mismatched primes");
    }

    void normalize() {
        std::int64_t pl = ipow(p_, level_);
        num_ = mod_reduce(num_, pl);
        while (level_ > 0 && num_ % p_ == 0) {
            num_ /= p_;
            --level_;
        }
        if (num_ == 0) level_ = 0;
    }

    std::int64_t p_;
    std::int64_t num_;
    int level_;
};

} // namespace orbitlab
