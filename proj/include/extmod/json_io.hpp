#pragma once

#include "extmod/builder.hpp"
#include "extmod/quiver.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <optional>
#include <string>

namespace extmod {

using Json = nlohmann::ordered_json;

/// Generating data carried alongside an exported representation so that
/// verification can recompute the expected dimensions.
struct DatumInfo {
    GroupElement y;
    std::vector<int> arms;
    std::vector<int> powers;
    std::vector<Rat> mu;
    std::string method;
};

inline Json rep_to_json(const Representation& r,
                        const std::optional<DatumInfo>& info = std::nullopt) {
    const auto& q = *r.quiver;
    const auto& spec = q.spec();
    Json j;
    j["weights"] = spec.weights();
    Json lambdas = Json::array();
    for (const auto& l : spec.lambdas())
        lambdas.push_back(rat_to_string(l));
    j["lambdas"] = std::move(lambdas);
    Json vertices = Json::array();
    for (const auto& v : q.vertices())
        vertices.push_back(v.id);
    j["vertices"] = std::move(vertices);
    j["dims"] = r.dims;
    Json arrows = Json::array();
    for (const auto& a : q.arrows()) {
        Json ja;
        ja["id"] = a.id;
        ja["from"] = q.vertices()[a.from].id;
        ja["to"] = q.vertices()[a.to].id;
        arrows.push_back(std::move(ja));
    }
    j["arrows"] = std::move(arrows);
    Json mats;
    for (std::size_t k = 0; k < q.arrow_count(); ++k) {
        Json entries = Json::array();
        const Mat& m = r.mats[k];
        for (std::size_t rr = 0; rr < m.rows(); ++rr)
            for (std::size_t cc = 0; cc < m.cols(); ++cc)
                entries.push_back(rat_to_string(m(rr, cc)));
        mats[q.arrows()[k].id] = std::move(entries);
    }
    j["matrices"] = std::move(mats);
    if (info) {
        Json d;
        d["y"] = to_string(info->y);
        d["arms"] = info->arms;
        d["powers"] = info->powers;
        Json mus = Json::array();
        for (const auto& m : info->mu)
            mus.push_back(rat_to_string(m));
        d["mu"] = std::move(mus);
        d["method"] = info->method;
        j["datum"] = std::move(d);
    }
    return j;
}

struct LoadedRep {
    Representation rep;
    std::optional<DatumInfo> datum;
};

inline LoadedRep rep_from_json(const Json& j) {
    std::vector<int> weights = j.at("weights").get<std::vector<int>>();
    std::vector<Rat> lambdas;
    for (const auto& s : j.at("lambdas"))
        lambdas.push_back(parse_rat(s.get<std::string>()));
    QuiverPtr q = build_quiver(WeightSpec(weights, lambdas));
    const auto vertex_ids = j.at("vertices").get<std::vector<std::string>>();
    if (vertex_ids.size() != q->vertex_count())
        throw std::invalid_argument("unexpected vertex list");
    for (std::size_t v = 0; v < vertex_ids.size(); ++v)
        if (vertex_ids[v] != q->vertices()[v].id)
            throw std::invalid_argument("unexpected vertex id " + vertex_ids[v]);
    LoadedRep out;
    out.rep.quiver = q;
    out.rep.dims = j.at("dims").get<std::vector<long>>();
    if (out.rep.dims.size() != q->vertex_count())
        throw std::invalid_argument("dimension list has wrong length");
    out.rep.mats.resize(q->arrow_count());
    const auto& mats = j.at("matrices");
    for (std::size_t k = 0; k < q->arrow_count(); ++k) {
        const auto& a = q->arrows()[k];
        const auto& entries = mats.at(a.id);
        const std::size_t rows = static_cast<std::size_t>(out.rep.dims[a.from]);
        const std::size_t cols = static_cast<std::size_t>(out.rep.dims[a.to]);
        if (entries.size() != rows * cols)
            throw std::invalid_argument("entry count mismatch at arrow " + a.id);
        Mat m(rows, cols);
        std::size_t idx = 0;
        for (std::size_t rr = 0; rr < rows; ++rr)
            for (std::size_t cc = 0; cc < cols; ++cc)
                m(rr, cc) = parse_rat(entries[idx++].get<std::string>());
        out.rep.mats[k] = std::move(m);
    }
    if (j.contains("datum")) {
        const auto& d = j.at("datum");
        DatumInfo info;
        info.y = parse_element(q->spec(), d.at("y").get<std::string>());
        info.arms = d.at("arms").get<std::vector<int>>();
        info.powers = d.at("powers").get<std::vector<int>>();
        for (const auto& s : d.at("mu"))
            info.mu.push_back(parse_rat(s.get<std::string>()));
        info.method = d.at("method").get<std::string>();
        out.datum = std::move(info);
    }
    return out;
}

inline std::string canonical_dump(const Json& j) { return j.dump(2) + "\n"; }

/// Writes via a temporary file in the same directory, then renames.
inline void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os)
            throw std::runtime_error("cannot open " + tmp + " for writing");
        os << content;
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("cannot rename " + tmp + " to " + path);
}

} // namespace extmod
