#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <stdexcept>
#include <string>

namespace extmod {

/// Exact scalar field: arbitrary-precision rationals (always stored
/// gcd-reduced with positive denominator, so string output is canonical).
using Rat = boost::multiprecision::mpq_rational;

/// Arbitrary-precision integer.
using Int = boost::multiprecision::mpz_int;

/// Canonical rational string: "n" when the denominator is 1, else "n/d".
inline std::string rat_to_string(const Rat& r) {
    if (denominator(r) == 1)
        return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

/// Parses "n" or "n/d"; throws std::invalid_argument on malformed input
/// or zero denominator.
inline Rat parse_rat(const std::string& s) {
    if (s.empty())
        throw std::invalid_argument("empty rational literal");
    const auto slash = s.find('/');
    try {
        if (slash == std::string::npos)
            return Rat(Int(s));
        Int num(s.substr(0, slash));
        Int den(s.substr(slash + 1));
        if (den == 0)
            throw std::invalid_argument("zero denominator: " + s);
        return Rat(num, den);
    } catch (const std::runtime_error&) {
        throw std::invalid_argument("bad rational literal: " + s);
    }
}

/// Floor division for arbitrary-precision integers (rounds toward -inf).
inline Int floor_div(const Int& a, const Int& b) {
    Int q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0)))
        --q;
    return q;
}

inline Int floor_mod(const Int& a, const Int& b) {
    return a - floor_div(a, b) * b;
}

} // namespace extmod
