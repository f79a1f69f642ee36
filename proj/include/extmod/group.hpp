#pragma once

#include "extmod/errors.hpp"
#include "extmod/field.hpp"
#include "extmod/weights.hpp"

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

namespace extmod {

/**
 * Element of the rank-one abelian grading group in normal form
 *
 *     a * canon + sum_i coeffs[i] * x_{i+1},   0 <= coeffs[i] < p_{i+1},
 *
 * where canon is the common value of p_i * x_i over all arms.  Two
 * elements are equal iff all stored fields are equal; every operation
 * renormalizes, so equality of the stored data is equality in the group.
 */
struct GroupElement {
    Int a;                    // coefficient of the canonical element
    std::vector<long> coeffs; // arm coefficients, one per arm, in [0, p_i)

    bool operator==(const GroupElement& o) const {
        return a == o.a && coeffs == o.coeffs;
    }
    bool operator!=(const GroupElement& o) const { return !(*this == o); }
    // lexicographic, for use as a map/set key
    bool operator<(const GroupElement& o) const {
        if (a != o.a)
            return a < o.a;
        return coeffs < o.coeffs;
    }
};

namespace detail {
inline void check_same_shape(const WeightSpec& spec, const GroupElement& x) {
    if (static_cast<int>(x.coeffs.size()) != spec.t())
        throw SpecMismatch("element arm count does not match weights");
    for (int i = 1; i <= spec.t(); ++i) {
        long c = x.coeffs[static_cast<std::size_t>(i - 1)];
        if (c < 0 || c >= spec.p(i))
            throw SpecMismatch("element coefficient out of range for weights");
    }
}
} // namespace detail

/// Normal form of c * canon + sum e_i * x_i.  Each arm exponent is
/// reduced modulo its weight; the quotient carries into the canonical
/// coefficient via p_i * x_i = canon.
inline GroupElement make_element(const WeightSpec& spec, const Int& c,
                                 const std::vector<Int>& e) {
    if (static_cast<int>(e.size()) != spec.t())
        throw LengthMismatch("expected one exponent per arm");
    GroupElement r;
    r.a = c;
    r.coeffs.resize(e.size());
    for (int i = 0; i < spec.t(); ++i) {
        Int pi(spec.p(i + 1));
        r.a += floor_div(e[static_cast<std::size_t>(i)], pi);
        r.coeffs[static_cast<std::size_t>(i)] = static_cast<long>(
            floor_mod(e[static_cast<std::size_t>(i)], pi));
    }
    return r;
}

inline GroupElement make_element(const WeightSpec& spec, long c,
                                 const std::vector<long>& e) {
    std::vector<Int> ee(e.begin(), e.end());
    return make_element(spec, Int(c), ee);
}

inline GroupElement zero_element(const WeightSpec& spec) {
    return GroupElement{Int(0), std::vector<long>(static_cast<std::size_t>(spec.t()), 0)};
}

/// The canonical element p_i * x_i.
inline GroupElement canonical_element(const WeightSpec& spec) {
    return GroupElement{Int(1), std::vector<long>(static_cast<std::size_t>(spec.t()), 0)};
}

/// Generator x_i of arm i (1-based).
inline GroupElement generator(const WeightSpec& spec, int arm) {
    if (arm < 1 || arm > spec.t())
        throw std::out_of_range("arm index");
    GroupElement r = zero_element(spec);
    if (spec.p(arm) == 1)
        r.a = 1; // unreachable for valid specs (p_i >= 2)
    else
        r.coeffs[static_cast<std::size_t>(arm - 1)] = 1;
    return r;
}

/// Dualizing element (t-2) * canon - sum_i x_i.
inline GroupElement dualizing_element(const WeightSpec& spec) {
    std::vector<Int> e(static_cast<std::size_t>(spec.t()), Int(-1));
    return make_element(spec, Int(spec.t() - 2), e);
}

/// Dominant element (t-3) * canon + sum_i (p_i - 2) x_i; equals
/// 2 * dualizing + canon.
inline GroupElement dominant_element(const WeightSpec& spec) {
    std::vector<Int> e;
    e.reserve(static_cast<std::size_t>(spec.t()));
    for (int i = 1; i <= spec.t(); ++i)
        e.emplace_back(spec.p(i) - 2);
    return make_element(spec, Int(spec.t() - 3), e);
}

inline GroupElement add(const WeightSpec& spec, const GroupElement& x,
                        const GroupElement& y) {
    detail::check_same_shape(spec, x);
    detail::check_same_shape(spec, y);
    GroupElement r;
    r.a = x.a + y.a;
    r.coeffs.resize(x.coeffs.size());
    for (std::size_t i = 0; i < x.coeffs.size(); ++i) {
        long s = x.coeffs[i] + y.coeffs[i];
        long pi = spec.p(static_cast<int>(i) + 1);
        if (s >= pi) {
            s -= pi;
            r.a += 1;
        }
        r.coeffs[i] = s;
    }
    return r;
}

inline GroupElement negate(const WeightSpec& spec, const GroupElement& x) {
    detail::check_same_shape(spec, x);
    GroupElement r;
    r.a = -x.a;
    r.coeffs.resize(x.coeffs.size());
    for (std::size_t i = 0; i < x.coeffs.size(); ++i) {
        if (x.coeffs[i] == 0) {
            r.coeffs[i] = 0;
        } else {
            r.coeffs[i] = spec.p(static_cast<int>(i) + 1) - x.coeffs[i];
            r.a -= 1;
        }
    }
    return r;
}

inline GroupElement sub(const WeightSpec& spec, const GroupElement& x,
                        const GroupElement& y) {
    return add(spec, x, negate(spec, y));
}

/// k * x for an integer k.
inline GroupElement scale(const WeightSpec& spec, const Int& k,
                          const GroupElement& x) {
    detail::check_same_shape(spec, x);
    std::vector<Int> e;
    e.reserve(x.coeffs.size());
    for (long c : x.coeffs)
        e.emplace_back(k * c);
    return make_element(spec, k * x.a, e);
}

/// True iff x lies in the positive cone spanned by the generators,
/// equivalently iff the normal-form canonical coefficient is >= 0.
inline bool is_effective(const GroupElement& x) { return x.a >= 0; }

inline bool leq(const WeightSpec& spec, const GroupElement& x,
                const GroupElement& y) {
    return is_effective(sub(spec, y, x));
}

/// Dimension of the degree-z component of the graded coordinate algebra:
/// a + 1 when the normal-form canonical coefficient a is >= 0, else 0.
inline Int graded_dim(const GroupElement& z) {
    return is_effective(z) ? z.a + 1 : Int(0);
}

/**
 * Brute-force enumeration of the monomial basis of the degree-z component:
 * all exponent tuples (e_1, e_2, c_3, ..., c_t) with e_1, e_2 >= 0 and
 * 0 <= c_i < p_i whose weighted sum equals z.  Serves as an independent
 * counting oracle for graded_dim.
 */
inline std::vector<std::vector<Int>> monomial_basis(const WeightSpec& spec,
                                                    const GroupElement& z) {
    detail::check_same_shape(spec, z);
    std::vector<std::vector<Int>> out;
    if (!is_effective(z))
        return out;
    const int t = spec.t();
    // Any solution has e_1 <= a * p_1 + c_1 (the arm-1 carry is at most a).
    long e1max = static_cast<long>(z.a) * spec.p(1) + z.coeffs[0];
    long e2max = static_cast<long>(z.a) * spec.p(2) + z.coeffs[1];

    std::vector<long> tail(static_cast<std::size_t>(std::max(0, t - 2)), 0);
    auto scan_tail = [&](auto&& self, std::size_t idx, const GroupElement& rest) -> void {
        if (idx == tail.size()) {
            // rest must be e_1 x_1 + e_2 x_2
            for (long e1 = z.coeffs[0]; e1 <= e1max; e1 += spec.p(1))
                for (long e2 = z.coeffs[1]; e2 <= e2max; e2 += spec.p(2)) {
                    std::vector<Int> e(static_cast<std::size_t>(t), Int(0));
                    e[0] = e1;
                    e[1] = e2;
                    for (std::size_t k = 0; k < tail.size(); ++k)
                        e[k + 2] = tail[k];
                    if (make_element(spec, Int(0), e) == z) {
                        std::vector<Int> tuple;
                        tuple.reserve(static_cast<std::size_t>(t));
                        tuple.emplace_back(e1);
                        tuple.emplace_back(e2);
                        for (std::size_t k = 0; k < tail.size(); ++k)
                            tuple.emplace_back(tail[k]);
                        out.push_back(std::move(tuple));
                    }
                }
            return;
        }
        (void)rest;
        for (long c = 0; c < spec.p(static_cast<int>(idx) + 3); ++c) {
            tail[idx] = c;
            self(self, idx + 1, rest);
        }
    };
    scan_tail(scan_tail, 0, z);
    std::sort(out.begin(), out.end());
    return out;
}

/// Literal form "a;a1,a2,...,at".
inline std::string to_string(const GroupElement& x) {
    std::ostringstream os;
    os << x.a << ";";
    for (std::size_t i = 0; i < x.coeffs.size(); ++i)
        os << (i ? "," : "") << x.coeffs[i];
    return os.str();
}

/// Parses the literal form; arbitrary integers are accepted and reduced
/// to normal form.
inline GroupElement parse_element(const WeightSpec& spec, const std::string& s) {
    const auto semi = s.find(';');
    if (semi == std::string::npos)
        throw std::invalid_argument("element literal needs ';': " + s);
    Int c;
    try {
        c = Int(s.substr(0, semi));
    } catch (const std::runtime_error&) {
        throw std::invalid_argument("bad canonical coefficient in: " + s);
    }
    std::vector<Int> e;
    std::string rest = s.substr(semi + 1);
    std::istringstream is(rest);
    std::string item;
    while (std::getline(is, item, ',')) {
        try {
            e.emplace_back(item);
        } catch (const std::runtime_error&) {
            throw std::invalid_argument("bad arm coefficient in: " + s);
        }
    }
    if (static_cast<int>(e.size()) != spec.t())
        throw LengthMismatch("expected " + std::to_string(spec.t()) +
                             " arm coefficients in: " + s);
    return make_element(spec, c, e);
}

} // namespace extmod
