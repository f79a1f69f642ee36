// Command-line front end: inspect weight data, build extension modules,
// verify exported representations, and run batch sweeps.
//
// Exit codes: 0 success, 1 verification failure, 2 input error.

#include "extmod/builder.hpp"
#include "extmod/json_io.hpp"
#include "extmod/latex_io.hpp"
#include "extmod/sheaf.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace {

using namespace extmod;

constexpr int kOk = 0;
constexpr int kVerifyFailure = 1;
constexpr int kInputError = 2;

WeightSpec make_spec(const std::vector<int>& weights,
                     const std::vector<std::string>& lambda_strs) {
    std::vector<Rat> lambdas;
    for (const auto& s : lambda_strs)
        lambdas.push_back(parse_rat(s));
    return WeightSpec(weights, lambdas);
}

std::string audit_label(const WeightSpec& spec) {
    return spec.t() == 3 ? "{0,1,-1}" : "{0,+-1,+-lambda_i}";
}

std::string lambdas_str(const WeightSpec& spec) {
    std::string s;
    for (std::size_t i = 0; i < spec.lambdas().size(); ++i)
        s += (i ? "," : "") + rat_to_string(spec.lambdas()[i]);
    return s;
}

int cmd_info(const WeightSpec& spec) {
    CanonicalQuiver q(spec);
    std::cout << "weights: " << spec.describe() << "  t: " << spec.t() << "\n";
    std::cout << "lambdas: " << lambdas_str(spec) << "\n";
    std::cout << "canonical: " << to_string(canonical_element(spec)) << "\n";
    std::cout << "dualizing: " << to_string(dualizing_element(spec)) << "\n";
    std::cout << "dominant: " << to_string(dominant_element(spec)) << "\n";
    std::cout << "euler characteristic: " << rat_to_string(euler_characteristic(spec))
              << "  type: " << to_string(algebra_type(spec)) << "\n";
    std::cout << "vertices: " << q.vertex_count() << "  arrows: " << q.arrow_count()
              << "  relations: " << q.relation_count() << "\n";
    return kOk;
}

struct CheckTable {
    std::vector<std::pair<std::string, bool>> rows;
    void add(const std::string& name, bool ok) { rows.emplace_back(name, ok); }
    bool all() const {
        for (const auto& [n, ok] : rows)
            if (!ok)
                return false;
        return true;
    }
    void print() const {
        for (const auto& [n, ok] : rows)
            std::cout << "  " << n << ": " << (ok ? "pass" : "FAIL") << "\n";
    }
};

CheckTable verify_rep(const Representation& rep,
                      const std::optional<DatumInfo>& datum) {
    const auto& q = *rep.quiver;
    CheckTable table;
    const auto report = validate(rep);
    table.add("relations", report.ok);
    if (!report.ok)
        std::cout << "  note: " << report.message << "\n";
    if (datum) {
        table.add("dimension oracle",
                  rep.dims == expected_dims(q, datum->y, datum->arms, datum->powers));
        table.add("rank",
                  rank(rep) == static_cast<long>(datum->arms.size()) - 1);
    }
    table.add("exceptional", report.ok && is_exceptional(rep));
    table.add("entry audit " + audit_label(q.spec()),
              entry_audit(rep, audit_set(q.spec())));
    return table;
}

CokernelDatum parse_datum(const WeightSpec& spec, const std::string& ystr,
                          const std::vector<int>& arms, const std::vector<int>& powers,
                          const std::vector<std::string>& mu_strs) {
    if (arms.size() != 3 || powers.size() != 3)
        throw std::invalid_argument("need exactly three arms and three powers");
    CokernelDatum c;
    c.y = parse_element(spec, ystr);
    std::copy(arms.begin(), arms.end(), c.arms.begin());
    std::copy(powers.begin(), powers.end(), c.b.begin());
    if (!mu_strs.empty()) {
        if (mu_strs.size() != 3)
            throw std::invalid_argument("need exactly three scalars");
        for (std::size_t k = 0; k < 3; ++k)
            c.mu[k] = parse_rat(mu_strs[k]);
    }
    check_cokernel_datum(spec, c);
    if (!is_effective(c.y))
        throw NotEffective("source determinant must be effective");
    return c;
}

std::string trace_str(const std::vector<ReduceStep>& trace) {
    std::string s;
    for (std::size_t i = 0; i < trace.size(); ++i)
        s += (i ? " -> " : "") + to_string(trace[i].label);
    return s;
}

int cmd_build(const WeightSpec& spec, const CokernelDatum& c,
              const std::string& method, const std::string& out,
              const std::string& format) {
    QuiverPtr q = build_quiver(spec);
    const auto trace = reduce_with_trace(spec, c);
    std::cout << "datum: y=" << to_string(c.y) << " arms=" << c.arms[0] << ","
              << c.arms[1] << "," << c.arms[2] << " powers=" << c.b[0] << ","
              << c.b[1] << "," << c.b[2] << " mu=" << rat_to_string(c.mu[0]) << ","
              << rat_to_string(c.mu[1]) << "," << rat_to_string(c.mu[2]) << "\n";
    std::cout << "case: " << to_string(trace.front().label) << "\n";
    std::cout << "reduction: " << trace_str(trace) << "\n";
    if (trace.size() > 1) {
        const auto& r = trace.back().datum;
        std::cout << "reduced datum: y=" << to_string(r.y) << " powers=" << r.b[0]
                  << "," << r.b[1] << "," << r.b[2] << "\n";
    }
    const BuildMethod m =
        method == "cokernel" ? BuildMethod::Cokernel : BuildMethod::Closed;
    Representation rep = build(q, c, m);
    std::cout << "dims: " << dims_to_string(rep) << "\n";
    std::cout << "rank: " << rank(rep) << "\n";

    std::vector<int> arms(c.arms.begin(), c.arms.end());
    std::vector<int> powers(c.b.begin(), c.b.end());
    CheckTable table;
    table.add("relations", validate(rep).ok);
    table.add("dimension oracle",
              rep.dims == expected_dims(*q, c.y, arms, powers));
    table.add("rank two", rank(rep) == 2);
    table.add("exceptional", is_exceptional(rep));
    table.add("entry audit " + audit_label(spec),
              entry_audit(rep, audit_set(spec)));
    if (m == BuildMethod::Cokernel) {
        const bool agree = are_isomorphic(rep, build(q, c, BuildMethod::Closed));
        table.add("methods agree", agree);
    }
    table.print();

    if (!out.empty()) {
        if (format == "latex") {
            write_file_atomic(out, rep_to_latex(rep));
        } else {
            DatumInfo info{c.y, arms, powers,
                           {c.mu.begin(), c.mu.end()},
                           m == BuildMethod::Cokernel ? "cokernel" : "closed"};
            write_file_atomic(out, canonical_dump(rep_to_json(rep, info)));
        }
        std::cout << "wrote: " << out << "\n";
    }
    return table.all() ? kOk : kVerifyFailure;
}

int cmd_verify(const std::string& path) {
    Json j;
    LoadedRep loaded;
    try {
        std::ifstream is(path);
        if (!is)
            throw std::runtime_error("cannot open " + path);
        is >> j;
        loaded = rep_from_json(j);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    }
    std::cout << "file: " << path << "\n";
    CheckTable table = verify_rep(loaded.rep, loaded.datum);
    table.print();
    return table.all() ? kOk : kVerifyFailure;
}

std::string datum_file_name(const CokernelDatum& c) {
    std::ostringstream os;
    os << "y" << c.y.a;
    for (long v : c.y.coeffs)
        os << "." << v;
    os << "__I" << c.arms[0] << "." << c.arms[1] << "." << c.arms[2];
    os << "__b" << c.b[0] << "." << c.b[1] << "." << c.b[2] << ".json";
    return os.str();
}

int cmd_sweep(const WeightSpec& spec, int maxc, const std::vector<int>& arms_opt,
              const std::string& outdir) {
    QuiverPtr q = build_quiver(spec);
    const int t = spec.t();
    std::vector<std::array<int, 3>> triples;
    if (!arms_opt.empty()) {
        if (arms_opt.size() != 3)
            throw std::invalid_argument("--arms needs exactly three entries");
        std::array<int, 3> tr{arms_opt[0], arms_opt[1], arms_opt[2]};
        triples.push_back(tr);
    } else {
        for (int a = 1; a <= t; ++a)
            for (int b = a + 1; b <= t; ++b)
                for (int c = b + 1; c <= t; ++c)
                    triples.push_back({a, b, c});
    }
    std::filesystem::create_directories(outdir);
    std::map<std::string, long> histogram;
    long total = 0, failures = 0;
    std::string first_failure;
    std::ostringstream tsv;
    tsv << "datum\tcase\treduced\trank\tdims\texceptional\taudit\tagree\n";

    std::vector<long> coeff(static_cast<std::size_t>(t), 0);
    for (long n = 0; n <= maxc; ++n) {
        std::fill(coeff.begin(), coeff.end(), 0);
        while (true) {
            const GroupElement y = make_element(spec, n, coeff);
            for (const auto& tri : triples) {
                std::array<int, 3> b{1, 1, 1};
                while (true) {
                    CokernelDatum c;
                    c.y = y;
                    c.arms = tri;
                    c.b = b;
                    ++total;
                    const auto trace = reduce_with_trace(spec, c);
                    const std::string label = to_string(trace.front().label);
                    const std::string reduced = to_string(trace.back().label);
                    ++histogram[label];
                    Representation closed = build(q, c, BuildMethod::Closed);
                    Representation viaCok = build(q, c, BuildMethod::Cokernel);
                    std::vector<int> arms(c.arms.begin(), c.arms.end());
                    std::vector<int> powers(c.b.begin(), c.b.end());
                    const bool dims_ok =
                        closed.dims == expected_dims(*q, c.y, arms, powers) &&
                        closed.dims == proposition_dims(*q, trace.back().datum);
                    const bool rank_ok = rank(closed) == 2;
                    const bool rel_ok =
                        validate(closed).ok && validate(viaCok).ok;
                    const bool exc_ok = is_exceptional(closed);
                    const bool audit_ok = entry_audit(closed, audit_set(spec));
                    const bool agree = are_isomorphic(closed, viaCok);
                    const bool ok = dims_ok && rank_ok && rel_ok && exc_ok &&
                                    audit_ok && agree;
                    const std::string name = datum_file_name(c);
                    DatumInfo info{c.y, arms, powers,
                                   {c.mu.begin(), c.mu.end()}, "closed"};
                    write_file_atomic(
                        (std::filesystem::path(outdir) / name).string(),
                        canonical_dump(rep_to_json(closed, info)));
                    tsv << name << "\t" << label << "\t" << reduced << "\t"
                        << rank(closed) << "\t" << (dims_ok ? "pass" : "FAIL")
                        << "\t" << (exc_ok ? "pass" : "FAIL") << "\t"
                        << (audit_ok ? "pass" : "FAIL") << "\t"
                        << (agree ? "pass" : "FAIL") << "\n";
                    if (!ok) {
                        ++failures;
                        if (first_failure.empty())
                            first_failure = name;
                    }
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
            int i = 0;
            for (; i < t; ++i) {
                if (++coeff[static_cast<std::size_t>(i)] < spec.p(i + 1))
                    break;
                coeff[static_cast<std::size_t>(i)] = 0;
            }
            if (i == t)
                break;
        }
    }
    write_file_atomic((std::filesystem::path(outdir) / "summary.tsv").string(),
                      tsv.str());
    std::cout << "data: " << total << "\n";
    std::cout << "case histogram:";
    for (const auto& [label, count] : histogram)
        std::cout << " " << label << "=" << count;
    std::cout << "\n";
    if (failures > 0) {
        std::cout << "failures: " << failures << " (first: " << first_failure
                  << ")\n";
        return kVerifyFailure;
    }
    std::cout << "all checks passed\n";
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact extension modules over canonical star algebras"};
    app.require_subcommand(1);

    std::vector<int> weights;
    std::vector<std::string> lambda_strs;
    auto add_spec_flags = [&](CLI::App* cmd) {
        cmd->add_option("--weights", weights, "arm lengths, e.g. 2,3,7")
            ->required()
            ->delimiter(',');
        cmd->add_option("--lambdas", lambda_strs,
                        "arm parameters for arms >= 3 (rationals)")
            ->delimiter(',');
    };

    auto* info = app.add_subcommand("info", "weight data, distinguished elements");
    add_spec_flags(info);

    auto* build = app.add_subcommand("build", "build one extension module");
    add_spec_flags(build);
    std::string ystr, method = "closed", out, format = "json";
    std::vector<int> arms, powers;
    std::vector<std::string> mu_strs;
    build->add_option("--y", ystr, "source determinant, e.g. \"0;0,0,0\"")
        ->required();
    build->add_option("--arms", arms, "three ascending arm indices")
        ->required()
        ->delimiter(',');
    build->add_option("--powers", powers, "three powers")->required()->delimiter(',');
    build->add_option("--mu", mu_strs, "three nonzero scalars (default 1,1,-1)")
        ->delimiter(',');
    build->add_option("--method", method, "closed|cokernel")
        ->check(CLI::IsMember({"closed", "cokernel"}));
    build->add_option("--out", out, "output path");
    build->add_option("--format", format, "json|latex")
        ->check(CLI::IsMember({"json", "latex"}));

    auto* verify = app.add_subcommand("verify", "check an exported representation");
    std::string path;
    verify->add_option("path", path, "representation JSON file")->required();

    auto* sweep = app.add_subcommand("sweep", "enumerate, build and verify");
    add_spec_flags(sweep);
    int maxc = 0;
    std::vector<int> sweep_arms;
    std::string outdir = "sweep-out";
    sweep->add_option("--max-c", maxc, "bound on the canonical coefficient of y")
        ->required();
    sweep->add_option("--arms", sweep_arms, "restrict to one arm triple")
        ->delimiter(',');
    sweep->add_option("--out", outdir, "output directory (default sweep-out)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0)
            return app.exit(e); // --help
        app.exit(e);
        return kInputError;
    }

    try {
        if (app.got_subcommand(verify))
            return cmd_verify(path);
        const WeightSpec spec = make_spec(weights, lambda_strs);
        if (app.got_subcommand(info))
            return cmd_info(spec);
        if (app.got_subcommand(build)) {
            const CokernelDatum c = parse_datum(spec, ystr, arms, powers, mu_strs);
            return cmd_build(spec, c, method, out, format);
        }
        if (app.got_subcommand(sweep))
            return cmd_sweep(spec, maxc, sweep_arms, outdir);
    } catch (const NotPositive& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kVerifyFailure;
    }
    return kInputError;
}
