// End-to-end acceptance suite.  Runs every criterion exactly as stated,
// prints one PASS/FAIL line per criterion, and exits with the number of
// failing criteria.

#include "extmod/builder.hpp"
#include "extmod/homalg.hpp"
#include "extmod/json_io.hpp"
#include "extmod/sheaf.hpp"

#include <chrono>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <vector>

using namespace extmod;

namespace {

struct Harness {
    int failures = 0;
    void run(const std::string& name, const std::function<bool(std::string&)>& body) {
        std::string detail;
        bool ok = false;
        const auto start = std::chrono::steady_clock::now();
        try {
            ok = body(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        const auto secs =
            std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::steady_clock::now() - start)
                .count() /
            1000.0;
        std::ostringstream line;
        line << (ok ? "PASS" : "FAIL") << "  " << name;
        if (!detail.empty())
            line << " (" << detail << ")";
        line << " [" << secs << "s]";
        std::cout << line.str() << std::endl;
        if (!ok)
            ++failures;
    }
};

std::vector<GroupElement> coefficient_box(const WeightSpec& spec, long lo, long hi) {
    std::vector<GroupElement> out;
    for (long a = lo; a <= hi; ++a) {
        std::vector<long> c(static_cast<std::size_t>(spec.t()), 0);
        while (true) {
            out.push_back(GroupElement{Int(a), c});
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

const std::vector<std::vector<int>> kWeightLists = {
    {2, 3, 7}, {2, 4, 5}, {3, 3, 4}, {2, 2, 2, 3}};

struct SweepRecord {
    std::size_t spec_index;
    CokernelDatum datum;
    CaseLabel label;
};

struct SweepOutcome {
    long total = 0;
    long build_failures = 0;
    long audit_failures = 0;
    std::string first_failure;
    std::map<CaseLabel, std::vector<SweepRecord>> by_label;
};

// Shared enumeration for the build-correctness and coefficient criteria:
// every datum with source coefficient at most 1 over the four weight lists,
// built by the closed route.
SweepOutcome run_build_sweep(const std::vector<WeightSpec>& specs,
                             const std::vector<QuiverPtr>& quivers) {
    SweepOutcome out;
    for (std::size_t si = 0; si < specs.size(); ++si) {
        const WeightSpec& spec = specs[si];
        const QuiverPtr& q = quivers[si];
        const int t = spec.t();
        std::vector<std::array<int, 3>> triples;
        for (int a = 1; a <= t; ++a)
            for (int b = a + 1; b <= t; ++b)
                for (int c = b + 1; c <= t; ++c)
                    triples.push_back({a, b, c});
        for (const auto& y : coefficient_box(spec, 0, 1)) {
            for (const auto& tri : triples) {
                std::array<int, 3> b{1, 1, 1};
                while (true) {
                    CokernelDatum c;
                    c.y = y;
                    c.arms = tri;
                    c.b = b;
                    ++out.total;
                    const auto trace = reduce_with_trace(spec, c);
                    out.by_label[trace.front().label].push_back(
                        {si, c, trace.front().label});
                    const Representation closed = build(q, c, BuildMethod::Closed);
                    std::vector<int> arms(c.arms.begin(), c.arms.end());
                    std::vector<int> powers(c.b.begin(), c.b.end());
                    const bool ok = validate(closed).ok && rank(closed) == 2 &&
                                    closed.dims ==
                                        expected_dims(*q, c.y, arms, powers) &&
                                    closed.dims ==
                                        proposition_dims(*q, trace.back().datum) &&
                                    is_exceptional(closed);
                    if (!ok) {
                        ++out.build_failures;
                        if (out.first_failure.empty())
                            out.first_failure = spec.describe() + " y=" + to_string(y);
                    }
                    if (!entry_audit(closed, audit_set(spec)))
                        ++out.audit_failures;
                    std::size_t k = 0;
                    for (; k < 3; ++k) {
                        if (++b[k] <= spec.p(tri[k]) - 1)
                            break;
                        b[k] = 1;
                    }
                    if (k == 3)
                        break;
                }
            }
        }
    }
    return out;
}

} // namespace

int main() {
    Harness h;
    std::vector<WeightSpec> specs;
    std::vector<QuiverPtr> quivers;
    for (const auto& w : kWeightLists) {
        specs.emplace_back(w);
        quivers.push_back(build_quiver(specs.back()));
    }

    h.run("1 graded-dimension oracle: monomial count equals component dimension",
          [&](std::string& detail) {
              long checked = 0;
              for (const auto& spec : specs) {
                  const auto low = scale(spec, Int(-2), canonical_element(spec));
                  const auto high = scale(spec, Int(3), canonical_element(spec));
                  for (const auto& z : coefficient_box(spec, -2, 3)) {
                      if (!leq(spec, low, z) || !leq(spec, z, high))
                          continue;
                      ++checked;
                      if (Int(monomial_basis(spec, z).size()) != graded_dim(z)) {
                          detail = "mismatch at " + to_string(z);
                          return false;
                      }
                  }
              }
              detail = std::to_string(checked) + " elements, 4 weight lists";
              return true;
          });

    h.run("2 pair characterization: numeric clauses match the coefficient pattern",
          [&](std::string& detail) {
              long checked = 0;
              for (const auto& spec : {specs[0], specs[3]}) {
                  const auto vdom = dominant_element(spec);
                  for (const auto& x :
                       coefficient_box(spec, 0, static_cast<long>(vdom.a))) {
                      if (!leq(spec, x, vdom))
                          continue;
                      ++checked;
                      const bool pair_ok =
                          exceptional_pair_clauses(spec, zero_element(spec), x).all();
                      const bool datum_ok =
                          !extension_datum_error(spec, x).has_value();
                      if (pair_ok != datum_ok) {
                          detail = "disagreement at x=" + to_string(x);
                          return false;
                      }
                  }
              }
              detail = std::to_string(checked) + " admissible-range elements";
              return true;
          });

    SweepOutcome sweep;
    h.run("3 build correctness sweep: relations, rank, dimensions, exceptionality",
          [&](std::string& detail) {
              sweep = run_build_sweep(specs, quivers);
              detail = std::to_string(sweep.total) + " data";
              if (sweep.build_failures > 0) {
                  detail += ", first failure " + sweep.first_failure;
                  return false;
              }
              return true;
          });

    std::vector<SweepRecord> method_sample;
    h.run("4 method agreement and scalar independence on sampled data",
          [&](std::string& detail) {
              for (const auto& [label, records] : sweep.by_label) {
                  (void)label;
                  for (std::size_t i = 0; i < records.size() && i < 13; ++i)
                      method_sample.push_back(records[i]);
              }
              if (sweep.by_label.size() != 8) {
                  detail = "only " + std::to_string(sweep.by_label.size()) +
                           " case labels reached";
                  return false;
              }
              if (method_sample.size() < 100) {
                  detail = "sample too small";
                  return false;
              }
              for (const auto& rec : method_sample) {
                  const QuiverPtr& q = quivers[rec.spec_index];
                  const auto closed = build(q, rec.datum, BuildMethod::Closed);
                  const auto viaCok = build(q, rec.datum, BuildMethod::Cokernel);
                  if (!are_isomorphic(closed, viaCok)) {
                      detail = "methods disagree at y=" + to_string(rec.datum.y);
                      return false;
                  }
                  CokernelDatum scaled = rec.datum;
                  scaled.mu = {Rat(2), Rat(1), Rat(-3)};
                  if (!are_isomorphic(viaCok,
                                      build(q, scaled, BuildMethod::Cokernel))) {
                      detail = "scalar dependence at y=" + to_string(rec.datum.y);
                      return false;
                  }
              }
              detail = std::to_string(method_sample.size()) +
                       " data over all 8 labels";
              return true;
          });

    h.run("5 reduction invariance on sampled overflow data",
          [&](std::string& detail) {
              long checked = 0;
              for (const auto& rec : method_sample) {
                  if (rec.label == CaseLabel::A || rec.label == CaseLabel::B3)
                      continue;
                  if (checked >= 40)
                      break;
                  ++checked;
                  const WeightSpec& spec = specs[rec.spec_index];
                  const QuiverPtr& q = quivers[rec.spec_index];
                  const CokernelDatum red = reduce(spec, rec.datum);
                  const CaseLabel rl = classify(spec, red);
                  if (rl != CaseLabel::A && rl != CaseLabel::B3) {
                      detail = "reduction left the terminal labels";
                      return false;
                  }
                  if (!are_isomorphic(build(q, rec.datum, BuildMethod::Cokernel),
                                      build(q, red, BuildMethod::Cokernel))) {
                      detail = "module changed at y=" + to_string(rec.datum.y);
                      return false;
                  }
              }
              detail = std::to_string(checked) + " non-terminal data";
              return checked > 0;
          });

    h.run("6 coefficient theorems: entries stay in the allowed sets",
          [&](std::string& detail) {
              detail = std::to_string(sweep.total) + " builds audited";
              return sweep.total > 0 && sweep.audit_failures == 0;
          });

    h.run("7 tilting consistency: module-side hom/ext equal sheaf-side dimensions",
          [&](std::string& detail) {
              const WeightSpec& spec = specs[0];
              const QuiverPtr& q = quivers[0];
              const auto box = coefficient_box(spec, 0, 2);
              std::vector<Representation> lines;
              lines.reserve(box.size());
              for (const auto& x : box)
                  lines.push_back(line_bundle_rep(q, x));
              long pairs = 0;
              for (std::size_t i = 0; i < box.size(); ++i)
                  for (std::size_t j = 0; j < box.size(); ++j) {
                      ++pairs;
                      if (Int(hom_basis(lines[i], lines[j]).size()) !=
                          hom_dim(spec, box[i], box[j])) {
                          detail = "hom mismatch at " + to_string(box[i]) + " vs " +
                                   to_string(box[j]);
                          return false;
                      }
                      if (Int(ext1_dim(lines[i], lines[j])) !=
                          ext_dim(spec, box[i], box[j])) {
                          detail = "ext mismatch at " + to_string(box[i]) + " vs " +
                                   to_string(box[j]);
                          return false;
                      }
                  }
              detail = std::to_string(pairs) + " line-bundle pairs";
              return true;
          });

    h.run("8 cover/hull orthogonality and effective presentations",
          [&](std::string& detail) {
              long data = 0, positives = 0;
              for (const auto& spec : {specs[0], specs[3]}) {
                  std::vector<GroupElement> valid_x;
                  for (const auto& x : coefficient_box(spec, 0, 0))
                      if (!extension_datum_error(spec, x))
                          valid_x.push_back(x);
                  for (const auto& base : coefficient_box(spec, -1, 2)) {
                      for (const auto& x : valid_x) {
                          ++data;
                          const auto d = validate_extension_datum(spec, base, x);
                          const auto cover = projective_cover_summands(spec, d);
                          const auto hull = injective_hull_summands(spec, d);
                          for (const auto& summands : {cover, hull})
                              for (std::size_t i = 0; i < summands.size(); ++i)
                                  for (std::size_t j = 0; j < summands.size(); ++j) {
                                      if (i != j &&
                                          hom_dim(spec, summands[i], summands[j]) != 0) {
                                          detail = "orthogonality fails at base=" +
                                                   to_string(base);
                                          return false;
                                      }
                                  }
                          try {
                              positive_presentation(spec, d);
                              ++positives;
                              long effective = 0;
                              for (const auto& det : cover)
                                  if (is_effective(det))
                                      ++effective;
                              if (effective < 3) {
                                  detail = "only " + std::to_string(effective) +
                                           " effective cover summands at base=" +
                                           to_string(base);
                                  return false;
                              }
                          } catch (const NotPositive&) {
                          }
                      }
                  }
              }
              detail = std::to_string(data) + " data, " + std::to_string(positives) +
                       " effective presentations";
              return positives > 0;
          });

    h.run("9 higher-rank quotients: rank |J|-1 and exceptional for |J|=2,3,4",
          [&](std::string& detail) {
              long built = 0;
              for (const auto& w :
                   {std::vector<int>{2, 2, 2, 3}, std::vector<int>{2, 2, 2, 2, 2}}) {
                  const WeightSpec spec(w);
                  auto q = build_quiver(spec);
                  const auto y = zero_element(spec);
                  for (std::size_t size : {2u, 3u, 4u}) {
                      std::vector<int> arms, powers;
                      for (std::size_t k = 0; k < size; ++k) {
                          arms.push_back(static_cast<int>(k) + 1);
                          powers.push_back(1);
                      }
                      const Representation e = higher_rank(q, y, arms, powers);
                      ++built;
                      if (rank(e) != static_cast<long>(size) - 1 ||
                          !is_exceptional(e)) {
                          detail = "failure at |J|=" + std::to_string(size);
                          return false;
                      }
                      if (size == 2 && e.dims != expected_dims(*q, y, arms, powers)) {
                          detail = "rank-one dimensions off";
                          return false;
                      }
                  }
              }
              detail = std::to_string(built) + " quotients";
              return true;
          });

    std::cout << (h.failures == 0 ? "all criteria passed"
                                  : std::to_string(h.failures) + " criteria failed")
              << std::endl;
    return h.failures;
}
