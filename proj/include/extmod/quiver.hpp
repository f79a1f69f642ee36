#pragma once

#include "extmod/group.hpp"
#include "extmod/linalg.hpp"
#include "extmod/weights.hpp"

#include <memory>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

namespace extmod {

/**
 * Star-shaped quiver with t arms: one source vertex, p_i - 1 interior
 * vertices on arm i, one sink, and arrows a1@i ... a{p_i}@i running from
 * the source to the sink along each arm.  Arm i >= 3 satisfies the
 * relation  arm_i = arm_1 + lambda_i * arm_2  on composed arrow matrices.
 *
 * Orderings are fixed: vertex 0 first, then arm vertices ascending (arm
 * major), then the sink; arrows arm major, index ascending.
 */
class CanonicalQuiver {
public:
    struct Vertex {
        std::string id;
        int arm;   // 0 for the source and the sink
        int index; // position along the arm; 0 = source, p_i = sink
        GroupElement elem;
    };
    struct Arrow {
        std::string id;
        int arm;
        int index; // 1-based position along the arm
        std::size_t from; // vertex (index-1) * x_arm
        std::size_t to;   // vertex index * x_arm
    };

    explicit CanonicalQuiver(WeightSpec spec) : spec_(std::move(spec)) {
        vertices_.push_back(Vertex{"0", 0, 0, zero_element(spec_)});
        for (int i = 1; i <= spec_.t(); ++i)
            for (int j = 1; j < spec_.p(i); ++j) {
                Vertex v;
                v.id = std::to_string(j) + "@" + std::to_string(i);
                v.arm = i;
                v.index = j;
                v.elem = scale(spec_, Int(j), generator(spec_, i));
                vertices_.push_back(std::move(v));
            }
        vertices_.push_back(Vertex{"c", 0,
                                   0, canonical_element(spec_)});
        for (int i = 1; i <= spec_.t(); ++i)
            for (int j = 1; j <= spec_.p(i); ++j) {
                Arrow a;
                a.id = "a" + std::to_string(j) + "@" + std::to_string(i);
                a.arm = i;
                a.index = j;
                a.from = vertex_on_arm(i, j - 1);
                a.to = vertex_on_arm(i, j);
                arrows_.push_back(std::move(a));
            }
    }

    const WeightSpec& spec() const { return spec_; }
    const std::vector<Vertex>& vertices() const { return vertices_; }
    const std::vector<Arrow>& arrows() const { return arrows_; }
    std::size_t vertex_count() const { return vertices_.size(); }
    std::size_t arrow_count() const { return arrows_.size(); }
    std::size_t relation_count() const {
        return static_cast<std::size_t>(spec_.t() - 2);
    }
    std::size_t source_vertex() const { return 0; }
    std::size_t sink_vertex() const { return vertices_.size() - 1; }

    /// Vertex holding j * x_i; j = 0 is the source, j = p_i the sink.
    std::size_t vertex_on_arm(int arm, int j) const {
        if (j == 0)
            return source_vertex();
        if (j == spec_.p(arm))
            return sink_vertex();
        std::size_t off = 1;
        for (int i = 1; i < arm; ++i)
            off += static_cast<std::size_t>(spec_.p(i) - 1);
        return off + static_cast<std::size_t>(j - 1);
    }

    /// Arrow a{j}@{arm}, 1-based j in [1, p_arm].
    std::size_t arrow_on_arm(int arm, int j) const {
        std::size_t off = 0;
        for (int i = 1; i < arm; ++i)
            off += static_cast<std::size_t>(spec_.p(i));
        return off + static_cast<std::size_t>(j - 1);
    }

    std::size_t vertex_index(const std::string& id) const {
        for (std::size_t i = 0; i < vertices_.size(); ++i)
            if (vertices_[i].id == id)
                return i;
        throw std::out_of_range("unknown vertex id: " + id);
    }

    std::size_t arrow_index(const std::string& id) const {
        for (std::size_t i = 0; i < arrows_.size(); ++i)
            if (arrows_[i].id == id)
                return i;
        throw std::out_of_range("unknown arrow id: " + id);
    }

private:
    WeightSpec spec_;
    std::vector<Vertex> vertices_;
    std::vector<Arrow> arrows_;
};

using QuiverPtr = std::shared_ptr<const CanonicalQuiver>;

inline QuiverPtr build_quiver(WeightSpec spec) {
    return std::make_shared<CanonicalQuiver>(std::move(spec));
}

/**
 * Finite-dimensional representation: a dimension per vertex and one
 * matrix per arrow.  The arrow a: u -> v stores the matrix of the linear
 * map M_v -> M_u, so its shape is dims(u) x dims(v), and the composite
 * along an arm is the product of the arm's matrices in index order.
 */
struct Representation {
    QuiverPtr quiver;
    std::vector<long> dims;
    std::vector<Mat> mats;
};

inline Representation zero_representation(QuiverPtr q) {
    Representation r;
    r.dims.assign(q->vertex_count(), 0);
    r.mats.assign(q->arrow_count(), Mat(0, 0));
    r.quiver = std::move(q);
    return r;
}

/// Composite matrix of one arm, multiplied source-to-sink:
/// mat(a1) * mat(a2) * ... * mat(a_p), shape dims(source) x dims(sink).
inline Mat arm_composite(const Representation& r, int arm) {
    const auto& q = *r.quiver;
    Mat c = r.mats[q.arrow_on_arm(arm, 1)];
    for (int j = 2; j <= q.spec().p(arm); ++j)
        c = c * r.mats[q.arrow_on_arm(arm, j)];
    return c;
}

struct ValidationReport {
    bool ok = true;
    std::string message;
};

/// Shape consistency at every arrow plus the exact arm relations.
inline ValidationReport validate(const Representation& r) {
    const auto& q = *r.quiver;
    if (r.dims.size() != q.vertex_count() || r.mats.size() != q.arrow_count())
        return {false, "dimension or matrix table has wrong length"};
    for (long d : r.dims)
        if (d < 0)
            return {false, "negative dimension"};
    for (std::size_t k = 0; k < q.arrow_count(); ++k) {
        const auto& a = q.arrows()[k];
        const Mat& m = r.mats[k];
        if (m.rows() != static_cast<std::size_t>(r.dims[a.from]) ||
            m.cols() != static_cast<std::size_t>(r.dims[a.to]))
            return {false, "shape mismatch at arrow " + a.id};
    }
    const Mat c1 = arm_composite(r, 1);
    const Mat c2 = arm_composite(r, 2);
    for (int i = 3; i <= q.spec().t(); ++i) {
        const Mat ci = arm_composite(r, i);
        if (ci != c1 + q.spec().lambda(i) * c2)
            return {false, "relation fails on arm " + std::to_string(i)};
    }
    return {};
}

inline long rank(const Representation& r) {
    return r.dims[r.quiver->source_vertex()] - r.dims[r.quiver->sink_vertex()];
}

inline std::vector<long> dim_vector(const Representation& r) { return r.dims; }

inline std::string dims_to_string(const Representation& r) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < r.dims.size(); ++i)
        os << (i ? "," : "") << r.dims[i];
    os << ")";
    return os.str();
}

/// Per-vertex matrix family f_v: M_v -> N_v commuting with the structure
/// maps: f_u * M_a = N_a * f_v for every arrow a: u -> v.
struct Morphism {
    Representation source;
    Representation target;
    std::vector<Mat> comps; // comps[v] has shape targetdims(v) x sourcedims(v)
};

inline bool is_morphism(const Morphism& f) {
    const auto& q = *f.source.quiver;
    if (f.comps.size() != q.vertex_count())
        return false;
    for (std::size_t v = 0; v < q.vertex_count(); ++v) {
        const Mat& c = f.comps[v];
        if (c.rows() != static_cast<std::size_t>(f.target.dims[v]) ||
            c.cols() != static_cast<std::size_t>(f.source.dims[v]))
            return false;
    }
    for (std::size_t k = 0; k < q.arrow_count(); ++k) {
        const auto& a = q.arrows()[k];
        if (f.comps[a.from] * f.source.mats[k] !=
            f.target.mats[k] * f.comps[a.to])
            return false;
    }
    return true;
}

/// g after f, componentwise.
inline Morphism compose(const Morphism& g, const Morphism& f) {
    Morphism h;
    h.source = f.source;
    h.target = g.target;
    h.comps.reserve(f.comps.size());
    for (std::size_t v = 0; v < f.comps.size(); ++v)
        h.comps.push_back(g.comps[v] * f.comps[v]);
    return h;
}

inline Representation direct_sum(const std::vector<Representation>& parts) {
    if (parts.empty())
        throw std::invalid_argument("empty direct sum");
    Representation r;
    r.quiver = parts.front().quiver;
    const auto& q = *r.quiver;
    r.dims.assign(q.vertex_count(), 0);
    for (const auto& p : parts) {
        if (p.quiver->spec() != q.spec())
            throw SpecMismatch("direct sum across different quivers");
        for (std::size_t v = 0; v < q.vertex_count(); ++v)
            r.dims[v] += p.dims[v];
    }
    r.mats.reserve(q.arrow_count());
    for (std::size_t k = 0; k < q.arrow_count(); ++k) {
        std::vector<Mat> blocks;
        blocks.reserve(parts.size());
        for (const auto& p : parts)
            blocks.push_back(p.mats[k]);
        r.mats.push_back(block_diag(blocks));
    }
    return r;
}

} // namespace extmod
