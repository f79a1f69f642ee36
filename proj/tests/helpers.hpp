#pragma once

#include "extmod/group.hpp"
#include "extmod/weights.hpp"

#include <cstdint>
#include <vector>

namespace testutil {

/// Deterministic pseudo-random stream for property-style tests.
struct Lcg {
    std::uint64_t state;
    explicit Lcg(std::uint64_t seed) : state(seed * 2654435761u + 1) {}
    std::uint64_t next() {
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        return state >> 33;
    }
    long range(long lo, long hi) { // inclusive
        return lo + static_cast<long>(next() % static_cast<std::uint64_t>(hi - lo + 1));
    }
};

inline extmod::GroupElement random_element(const extmod::WeightSpec& spec, Lcg& rng,
                                           long cmin = -5, long cmax = 5) {
    std::vector<extmod::Int> e;
    for (int i = 1; i <= spec.t(); ++i)
        e.emplace_back(rng.range(-10, 10));
    return extmod::make_element(spec, extmod::Int(rng.range(cmin, cmax)), e);
}

/// Random element with an effective normal form and canonical coefficient
/// at most cmax.
inline extmod::GroupElement random_effective(const extmod::WeightSpec& spec, Lcg& rng,
                                             long cmax) {
    while (true) {
        auto x = random_element(spec, rng, 0, cmax + 3);
        if (extmod::is_effective(x) && x.a <= cmax)
            return x;
    }
}

/// All normal-form elements with canonical coefficient in [lo, hi].
inline std::vector<extmod::GroupElement> element_box(const extmod::WeightSpec& spec,
                                                     long lo, long hi) {
    std::vector<extmod::GroupElement> out;
    for (long a = lo; a <= hi; ++a) {
        std::vector<long> c(static_cast<std::size_t>(spec.t()), 0);
        while (true) {
            out.push_back(extmod::GroupElement{extmod::Int(a), c});
            int i = 0;
            for (; i < spec.t(); ++i) {
                if (++c[static_cast<std::size_t>(i)] < spec.p(i + 1))
                    break;
                c[static_cast<std::size_t>(i)] = 0;
            }
            if (i == spec.t())
                break;
        }
    }
    return out;
}

} // namespace testutil
