#pragma once

#include "extmod/linalg.hpp"
#include "extmod/quiver.hpp"

#include <cstdint>
#include <set>
#include <vector>

namespace extmod {

namespace detail {

struct HomLayout {
    std::vector<std::size_t> offset; // per vertex
    std::size_t total = 0;
};

inline HomLayout vertex_layout(const Representation& M, const Representation& N) {
    HomLayout l;
    l.offset.resize(M.dims.size());
    for (std::size_t v = 0; v < M.dims.size(); ++v) {
        l.offset[v] = l.total;
        l.total += static_cast<std::size_t>(N.dims[v]) *
                   static_cast<std::size_t>(M.dims[v]);
    }
    return l;
}

inline HomLayout arrow_layout(const Representation& M, const Representation& N) {
    const auto& q = *M.quiver;
    HomLayout l;
    l.offset.resize(q.arrow_count());
    for (std::size_t k = 0; k < q.arrow_count(); ++k) {
        const auto& a = q.arrows()[k];
        l.offset[k] = l.total;
        l.total += static_cast<std::size_t>(N.dims[a.from]) *
                   static_cast<std::size_t>(M.dims[a.to]);
    }
    return l;
}

/// Commutativity system: rows indexed by arrow entries, columns by vertex
/// entries of a would-be morphism family f, encoding f_u M_a - N_a f_v.
inline Mat commutativity_matrix(const Representation& M, const Representation& N,
                                const HomLayout& vl, const HomLayout& al) {
    const auto& q = *M.quiver;
    Mat sys(al.total, vl.total);
    for (std::size_t k = 0; k < q.arrow_count(); ++k) {
        const auto& a = q.arrows()[k];
        const std::size_t dMu = static_cast<std::size_t>(M.dims[a.from]);
        const std::size_t dMv = static_cast<std::size_t>(M.dims[a.to]);
        const std::size_t dNu = static_cast<std::size_t>(N.dims[a.from]);
        const std::size_t dNv = static_cast<std::size_t>(N.dims[a.to]);
        const Mat& Ma = M.mats[k];
        const Mat& Na = N.mats[k];
        for (std::size_t r = 0; r < dNu; ++r)
            for (std::size_t c = 0; c < dMv; ++c) {
                const std::size_t row = al.offset[k] + r * dMv + c;
                for (std::size_t s = 0; s < dMu; ++s)
                    if (Ma(s, c) != 0)
                        sys(row, vl.offset[a.from] + r * dMu + s) += Ma(s, c);
                for (std::size_t s = 0; s < dNv; ++s)
                    if (Na(r, s) != 0)
                        sys(row, vl.offset[a.to] + s * dMv + c) -= Na(r, s);
            }
    }
    return sys;
}

} // namespace detail

/// Deterministic basis of the space of morphisms M -> N, computed as the
/// canonical kernel basis of the commutativity system.
inline std::vector<Morphism> hom_basis(const Representation& M,
                                       const Representation& N) {
    if (M.quiver->spec() != N.quiver->spec())
        throw SpecMismatch("hom between representations of different quivers");
    const auto vl = detail::vertex_layout(M, N);
    const auto al = detail::arrow_layout(M, N);
    Mat sys = detail::commutativity_matrix(M, N, vl, al);
    Mat basis = kernel_basis(std::move(sys));
    std::vector<Morphism> out;
    out.reserve(basis.cols());
    for (std::size_t j = 0; j < basis.cols(); ++j) {
        Morphism f;
        f.source = M;
        f.target = N;
        f.comps.reserve(M.dims.size());
        for (std::size_t v = 0; v < M.dims.size(); ++v) {
            const std::size_t rows = static_cast<std::size_t>(N.dims[v]);
            const std::size_t cols = static_cast<std::size_t>(M.dims[v]);
            Mat c(rows, cols);
            for (std::size_t r = 0; r < rows; ++r)
                for (std::size_t cc = 0; cc < cols; ++cc)
                    c(r, cc) = basis(vl.offset[v] + r * cols + cc, j);
            f.comps.push_back(std::move(c));
        }
        out.push_back(std::move(f));
    }
    return out;
}

/**
 * dim Ext^1(M, N) via the two-step complex
 *
 *   (vertex families) --d0--> (arrow families) --d1--> (relation families),
 *
 * where d0 is the commutativity system and d1 expands each arm relation
 * by the product rule: every factor of an arm composite is replaced in
 * turn by the corresponding family member, with target-side matrices on
 * the left and source-side matrices on the right.
 */
inline long ext1_dim(const Representation& M, const Representation& N) {
    if (M.quiver->spec() != N.quiver->spec())
        throw SpecMismatch("ext between representations of different quivers");
    const auto& q = *M.quiver;
    const auto& spec = q.spec();
    const auto vl = detail::vertex_layout(M, N);
    const auto al = detail::arrow_layout(M, N);
    const std::size_t dN0 = static_cast<std::size_t>(N.dims[q.source_vertex()]);
    const std::size_t dMs = static_cast<std::size_t>(M.dims[q.sink_vertex()]);

    Mat d0 = detail::commutativity_matrix(M, N, vl, al);
    const std::size_t rank_d0 = rank(std::move(d0));

    // Prefix products of N and suffix products of M along each arm.
    std::vector<std::vector<Mat>> prefixN(static_cast<std::size_t>(spec.t()) + 1);
    std::vector<std::vector<Mat>> suffixM(static_cast<std::size_t>(spec.t()) + 1);
    for (int arm = 1; arm <= spec.t(); ++arm) {
        const int p = spec.p(arm);
        auto& pre = prefixN[static_cast<std::size_t>(arm)];
        pre.resize(static_cast<std::size_t>(p) + 1);
        pre[1] = Mat::identity(dN0);
        for (int j = 2; j <= p; ++j)
            pre[static_cast<std::size_t>(j)] =
                pre[static_cast<std::size_t>(j - 1)] *
                N.mats[q.arrow_on_arm(arm, j - 1)];
        auto& suf = suffixM[static_cast<std::size_t>(arm)];
        suf.resize(static_cast<std::size_t>(p) + 1);
        suf[static_cast<std::size_t>(p)] = Mat::identity(dMs);
        for (int j = p - 1; j >= 1; --j)
            suf[static_cast<std::size_t>(j)] =
                M.mats[q.arrow_on_arm(arm, j + 1)] *
                suf[static_cast<std::size_t>(j + 1)];
    }

    const std::size_t rel_block = dN0 * dMs;
    Mat d1(q.relation_count() * rel_block, al.total);
    for (int i = 3; i <= spec.t(); ++i) {
        const std::size_t base =
            static_cast<std::size_t>(i - 3) * rel_block;
        struct Term {
            int arm;
            Rat sign;
        };
        const Term terms[3] = {{i, Rat(1)}, {1, Rat(-1)}, {2, -spec.lambda(i)}};
        for (const auto& term : terms) {
            for (int j = 1; j <= spec.p(term.arm); ++j) {
                const std::size_t k = q.arrow_on_arm(term.arm, j);
                const auto& a = q.arrows()[k];
                const std::size_t dNu = static_cast<std::size_t>(N.dims[a.from]);
                const std::size_t dMv = static_cast<std::size_t>(M.dims[a.to]);
                const Mat& P = prefixN[static_cast<std::size_t>(term.arm)]
                                      [static_cast<std::size_t>(j)];
                const Mat& S = suffixM[static_cast<std::size_t>(term.arm)]
                                      [static_cast<std::size_t>(j)];
                for (std::size_t x = 0; x < dNu; ++x)
                    for (std::size_t y = 0; y < dMv; ++y) {
                        const std::size_t col = al.offset[k] + x * dMv + y;
                        for (std::size_t r = 0; r < dN0; ++r) {
                            if (P(r, x) == 0)
                                continue;
                            for (std::size_t c = 0; c < dMs; ++c)
                                if (S(y, c) != 0)
                                    d1(base + r * dMs + c, col) +=
                                        term.sign * P(r, x) * S(y, c);
                        }
                    }
            }
        }
    }
    const std::size_t rank_d1 = rank(std::move(d1));
    return static_cast<long>(al.total - rank_d1 - rank_d0);
}

/// Bilinear form  sum_v d_v e_v - sum_{a:u->v} d_v e_u + (t-2) d_sink e_source,
/// equal to dim Hom - dim Ext^1 + dim Ext^2 on attached modules.
inline Int euler_form(const CanonicalQuiver& q, const std::vector<long>& d,
                      const std::vector<long>& e) {
    if (d.size() != q.vertex_count() || e.size() != q.vertex_count())
        throw LengthMismatch("dimension vector has wrong length");
    Int total(0);
    for (std::size_t v = 0; v < q.vertex_count(); ++v)
        total += Int(d[v]) * Int(e[v]);
    for (const auto& a : q.arrows())
        total -= Int(d[a.to]) * Int(e[a.from]);
    total += Int(q.spec().t() - 2) * Int(d[q.sink_vertex()]) *
             Int(e[q.source_vertex()]);
    return total;
}

/// End = k, no self-extensions in degree one, and self-pairing 1 under
/// the Euler form (which then forces degree two to vanish as well).
inline bool is_exceptional(const Representation& r) {
    if (euler_form(*r.quiver, r.dims, r.dims) != 1)
        return false;
    if (hom_basis(r, r).size() != 1)
        return false;
    return ext1_dim(r, r) == 0;
}

/**
 * Isomorphism test: equal dimension vectors, then a search for a member
 * of Hom(M, N) that is invertible at every vertex.  Each basis member is
 * tried, then up to 100 deterministic small-integer combinations.  For
 * modules with End = k a single nonzero morphism decides, so the search
 * is exact on every exceptional input.
 */
inline bool are_isomorphic(const Representation& M, const Representation& N) {
    if (M.quiver->spec() != N.quiver->spec())
        throw SpecMismatch("isomorphism across different quivers");
    if (M.dims != N.dims)
        return false;
    bool all_zero = true;
    for (long d : M.dims)
        if (d != 0)
            all_zero = false;
    if (all_zero)
        return true;
    const auto basis = hom_basis(M, N);
    if (basis.empty())
        return false;
    auto invertible_everywhere = [&](const std::vector<Mat>& comps) {
        for (const auto& c : comps)
            if (!is_invertible(c))
                return false;
        return true;
    };
    for (const auto& f : basis)
        if (invertible_everywhere(f.comps))
            return true;
    const std::size_t tries =
        basis.size() >= 100 ? 0 : 100 - basis.size();
    for (std::size_t trial = 0; trial < tries; ++trial) {
        std::uint64_t state = 0x9E3779B97F4A7C15ull + trial;
        std::vector<Mat> comps;
        bool nonzero = false;
        for (std::size_t v = 0; v < M.dims.size(); ++v)
            comps.push_back(Mat(static_cast<std::size_t>(N.dims[v]),
                                static_cast<std::size_t>(M.dims[v])));
        for (const auto& f : basis) {
            state = state * 6364136223846793005ull + 1442695040888963407ull;
            const long coeff = static_cast<long>((state >> 33) % 5) - 2;
            if (coeff == 0)
                continue;
            nonzero = true;
            for (std::size_t v = 0; v < comps.size(); ++v)
                comps[v] = comps[v] + Rat(coeff) * f.comps[v];
        }
        if (nonzero && invertible_everywhere(comps))
            return true;
    }
    return false;
}

/// True iff every entry of every arrow matrix lies in the allowed set.
inline bool entry_audit(const Representation& r, const std::set<Rat>& allowed) {
    for (const auto& m : r.mats)
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j)
                if (!allowed.count(m(i, j)))
                    return false;
    return true;
}

/// {0, 1, -1} for three arms; {0, +-1, +-lambda_i} otherwise.
inline std::set<Rat> audit_set(const WeightSpec& spec) {
    std::set<Rat> s{Rat(0), Rat(1), Rat(-1)};
    if (spec.t() > 3)
        for (int i = 3; i <= spec.t(); ++i) {
            s.insert(spec.lambda(i));
            s.insert(-spec.lambda(i));
        }
    return s;
}

} // namespace extmod
