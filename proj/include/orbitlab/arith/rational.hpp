#pragma once

#include <cstdint>
#include <sstream>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "orbitlab/arith/modulus.hpp"

namespace orbitlab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt numerator_of(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt denominator_of(const Rational& r) { return boost::multiprecision::denominator(r); }

inline std::string to_string(const Rational& r) {
    std::ostringstream os;
    os << numerator_of(r);
    if (denominator_of(r) != 1) os << '/' << denominator_of(r);
    return os.str();
}

inline Rational factorial(int n) {
    BigInt f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return Rational(f);
}

/// Image of r in Z/p^k. The denominator must be prime to p.
inline std::int64_t rational_to_residue(const Rational& r, const Modulus& m) {
    BigInt pk = m.value();
    BigInt num = numerator_of(r) % pk;
    BigInt den = denominator_of(r) % pk;
    if (num < 0) num += pk;
    if (den % m.p() == 0)
        throw InputError("rational " + to_string(r) + " has a denominator divisible by p = " + std::to_string(m.p()));
    std::int64_t n = num.convert_to<std::int64_t>();
    std::int64_t d = den.convert_to<std::int64_t>();
    return m.mul(n, m.inverse(d));
}

} // namespace orbitlab
