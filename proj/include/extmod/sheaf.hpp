#pragma once

#include "extmod/errors.hpp"
#include "extmod/group.hpp"

#include <array>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace extmod {

struct LineBundle {
    GroupElement det;
};

/// dim Hom(O(x), O(y)) = graded_dim(y - x).
inline Int hom_dim(const WeightSpec& spec, const GroupElement& x,
                   const GroupElement& y) {
    return graded_dim(sub(spec, y, x));
}

/// dim Ext^1(O(x), O(y)) = graded_dim(x + w - y) where w is the
/// dualizing element (Serre duality).
inline Int ext_dim(const WeightSpec& spec, const GroupElement& x,
                   const GroupElement& y) {
    return graded_dim(sub(spec, add(spec, x, dualizing_element(spec)), y));
}

/// The module attached to a line bundle has positive rank exactly when
/// the determinant is effective.
inline bool is_positive_module(const LineBundle& lb) {
    return is_effective(lb.det);
}

/**
 * Admissible pair (base, x) describing a rank-two bundle as the unique
 * non-split extension of O(base + x) by O(base + w).  Validity demands:
 * the normal form of x has canonical coefficient 0, x is between 0 and
 * the dominant element, and exactly t-3 arm coefficients are maximal
 * (p_i - 1).  arms lists the three non-maximal arms ascending; l their
 * coefficients.
 */
struct ExtensionDatum {
    GroupElement base;
    GroupElement x;
    std::array<int, 3> arms;
    std::array<long, 3> l;
};

inline std::optional<std::string> extension_datum_error(const WeightSpec& spec,
                                                        const GroupElement& x) {
    detail::check_same_shape(spec, x);
    if (x.a != 0)
        return "canonical coefficient of x must be 0, got " + x.a.str();
    if (!leq(spec, x, dominant_element(spec)))
        return "x exceeds the dominant element";
    int maxed = 0;
    for (int i = 1; i <= spec.t(); ++i)
        if (x.coeffs[static_cast<std::size_t>(i - 1)] == spec.p(i) - 1)
            ++maxed;
    if (maxed != spec.t() - 3)
        return "expected exactly " + std::to_string(spec.t() - 3) +
               " maximal arm coefficients, got " + std::to_string(maxed);
    return std::nullopt;
}

inline ExtensionDatum validate_extension_datum(const WeightSpec& spec,
                                               const GroupElement& base,
                                               const GroupElement& x) {
    detail::check_same_shape(spec, base);
    if (auto err = extension_datum_error(spec, x))
        throw NotExtensionDatum(*err);
    ExtensionDatum d;
    d.base = base;
    d.x = x;
    int k = 0;
    for (int i = 1; i <= spec.t(); ++i) {
        long li = x.coeffs[static_cast<std::size_t>(i - 1)];
        if (li <= spec.p(i) - 2) {
            d.arms[static_cast<std::size_t>(k)] = i;
            d.l[static_cast<std::size_t>(k)] = li;
            ++k;
        }
    }
    if (k != 3)
        throw InternalError("arm extraction produced " + std::to_string(k));
    return d;
}

struct PairClauses {
    bool hom_x_to_w_zero;
    bool hom_w_to_x_zero;
    bool ext_x_to_w_one;
    bool ext_w_to_x_zero;
    bool all() const {
        return hom_x_to_w_zero && hom_w_to_x_zero && ext_x_to_w_one &&
               ext_w_to_x_zero;
    }
};

/// The four numerical clauses making (O(base+x), O(base+w)) an orthogonal
/// pair with one-dimensional extension space.  Evaluable on any x.
inline PairClauses exceptional_pair_clauses(const WeightSpec& spec,
                                            const GroupElement& base,
                                            const GroupElement& x) {
    const GroupElement vx = add(spec, base, x);
    const GroupElement vwb = add(spec, base, dualizing_element(spec));
    PairClauses c;
    c.hom_x_to_w_zero = hom_dim(spec, vx, vwb) == 0;
    c.hom_w_to_x_zero = hom_dim(spec, vwb, vx) == 0;
    c.ext_x_to_w_one = ext_dim(spec, vx, vwb) == 1;
    c.ext_w_to_x_zero = ext_dim(spec, vwb, vx) == 0;
    return c;
}

inline bool check_exceptional_pair(const WeightSpec& spec,
                                   const ExtensionDatum& d) {
    return exceptional_pair_clauses(spec, d.base, d.x).all();
}

/// Determinants of the projective-cover summands: base + w first, then
/// base + x - (1 + l_j) x_j for the three arms ascending.
inline std::vector<GroupElement> projective_cover_summands(const WeightSpec& spec,
                                                           const ExtensionDatum& d) {
    std::vector<GroupElement> out;
    out.push_back(add(spec, d.base, dualizing_element(spec)));
    for (std::size_t k = 0; k < 3; ++k) {
        GroupElement step = scale(spec, Int(1 + d.l[k]), generator(spec, d.arms[k]));
        out.push_back(sub(spec, add(spec, d.base, d.x), step));
    }
    return out;
}

/// Determinants of the injective-hull summands: base + x first, then
/// base + (1 + l_j) x_j + w for the three arms ascending.
inline std::vector<GroupElement> injective_hull_summands(const WeightSpec& spec,
                                                         const ExtensionDatum& d) {
    std::vector<GroupElement> out;
    out.push_back(add(spec, d.base, d.x));
    for (std::size_t k = 0; k < 3; ++k) {
        GroupElement step = scale(spec, Int(1 + d.l[k]), generator(spec, d.arms[k]));
        out.push_back(add(spec, add(spec, d.base, step), dualizing_element(spec)));
    }
    return out;
}

/// The same bundle presented through the cover summand at arm i:
/// (base + x - (1+l_i) x_i - w,  2w + 2(1+l_i) x_i - x).  Involutive in i.
inline ExtensionDatum reattachment(const WeightSpec& spec, const ExtensionDatum& d,
                                   int arm) {
    std::size_t k = 3;
    for (std::size_t j = 0; j < 3; ++j)
        if (d.arms[j] == arm)
            k = j;
    if (k == 3)
        throw IndexNotInI("arm " + std::to_string(arm) + " not among the datum arms");
    const GroupElement vw = dualizing_element(spec);
    const GroupElement step = scale(spec, Int(1 + d.l[k]), generator(spec, arm));
    GroupElement nbase = sub(spec, sub(spec, add(spec, d.base, d.x), step), vw);
    GroupElement nx = sub(spec, add(spec, add(spec, vw, vw), scale(spec, Int(2), step)),
                          d.x);
    return validate_extension_datum(spec, nbase, nx);
}

/**
 * Source determinant, arm triple, power triple and scalar triple of an
 * injection O(y) -> sum of O(y + b_i x_i) whose cokernel is the attached
 * rank-two module.  arms ascending, 1 <= b_i <= p_i - 1, scalars nonzero
 * with default (1, 1, -1).
 */
struct CokernelDatum {
    GroupElement y;
    std::array<int, 3> arms;
    std::array<int, 3> b;
    std::array<Rat, 3> mu{Rat(1), Rat(1), Rat(-1)};
};

inline void check_cokernel_datum(const WeightSpec& spec, const CokernelDatum& c) {
    detail::check_same_shape(spec, c.y);
    if (!(c.arms[0] < c.arms[1] && c.arms[1] < c.arms[2]))
        throw std::invalid_argument("arm triple must be strictly ascending");
    for (std::size_t k = 0; k < 3; ++k) {
        if (c.arms[k] < 1 || c.arms[k] > spec.t())
            throw std::invalid_argument("arm index out of range");
        if (c.b[k] < 1 || c.b[k] > spec.p(c.arms[k]) - 1)
            throw PowerOutOfRange("power must lie in [1, p-1] on arm " +
                                  std::to_string(c.arms[k]));
        if (c.mu[k] == 0)
            throw std::invalid_argument("scalars must be nonzero");
    }
}

/// y = base + x - canon and b_i = p_i - l_i - 1 on the datum arms.
inline CokernelDatum datum_to_cokernel(const WeightSpec& spec,
                                       const ExtensionDatum& d) {
    CokernelDatum c;
    c.y = sub(spec, add(spec, d.base, d.x), canonical_element(spec));
    c.arms = d.arms;
    for (std::size_t k = 0; k < 3; ++k)
        c.b[k] = spec.p(d.arms[k]) - static_cast<int>(d.l[k]) - 1;
    return c;
}

/// base = y + b_{i0} x_{i0} - w and x = w + sum b_i x_i - 2 b_{i0} x_{i0}.
inline ExtensionDatum cokernel_to_datum(const WeightSpec& spec,
                                        const CokernelDatum& c, int arm0) {
    check_cokernel_datum(spec, c);
    std::size_t k0 = 3;
    for (std::size_t j = 0; j < 3; ++j)
        if (c.arms[j] == arm0)
            k0 = j;
    if (k0 == 3)
        throw IndexNotInI("arm " + std::to_string(arm0) + " not among the datum arms");
    const GroupElement vw = dualizing_element(spec);
    GroupElement bstep = scale(spec, Int(c.b[k0]), generator(spec, arm0));
    GroupElement base = sub(spec, add(spec, c.y, bstep), vw);
    GroupElement x = vw;
    for (std::size_t j = 0; j < 3; ++j)
        x = add(spec, x, scale(spec, Int(c.b[j]), generator(spec, c.arms[j])));
    x = sub(spec, x, scale(spec, Int(2), bstep));
    return validate_extension_datum(spec, base, x);
}

struct PositivePresentation {
    CokernelDatum datum;
    std::string origin; // "direct" or "reattach@<arm>"
};

/**
 * First effective cokernel presentation of the datum, trying the direct
 * conversion and then the reattachments in ascending arm order.  Every
 * target determinant of the returned datum is re-checked for
 * effectiveness.  Throws NotPositive when no candidate is effective.
 */
inline PositivePresentation positive_presentation(const WeightSpec& spec,
                                                  const ExtensionDatum& d) {
    std::vector<std::pair<CokernelDatum, std::string>> candidates;
    candidates.emplace_back(datum_to_cokernel(spec, d), "direct");
    for (std::size_t k = 0; k < 3; ++k) {
        ExtensionDatum r = reattachment(spec, d, d.arms[k]);
        candidates.emplace_back(datum_to_cokernel(spec, r),
                                "reattach@" + std::to_string(d.arms[k]));
    }
    for (auto& [c, origin] : candidates) {
        if (!is_effective(c.y))
            continue;
        for (std::size_t k = 0; k < 3; ++k) {
            GroupElement target = add(
                spec, c.y, scale(spec, Int(c.b[k]), generator(spec, c.arms[k])));
            if (!is_effective(target))
                throw InternalError("effective source with ineffective target " +
                                    to_string(target));
        }
        return PositivePresentation{c, origin};
    }
    throw NotPositive("no presentation has an effective source determinant");
}

enum class AlgebraType { Domestic, Tubular, Wild };

inline std::string to_string(AlgebraType t) {
    switch (t) {
    case AlgebraType::Domestic: return "domestic";
    case AlgebraType::Tubular: return "tubular";
    case AlgebraType::Wild: return "wild";
    }
    return "?";
}

/// chi = (2 - t) + sum 1/p_i, exact.
inline Rat euler_characteristic(const WeightSpec& spec) {
    Rat chi(2 - spec.t());
    for (int i = 1; i <= spec.t(); ++i)
        chi += Rat(1, spec.p(i));
    return chi;
}

inline AlgebraType algebra_type(const WeightSpec& spec) {
    const Rat chi = euler_characteristic(spec);
    if (chi > 0)
        return AlgebraType::Domestic;
    if (chi == 0)
        return AlgebraType::Tubular;
    return AlgebraType::Wild;
}

} // namespace extmod
