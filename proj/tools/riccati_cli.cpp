// Command-line front end: decomposition, solving, enumeration and report
// generation over JSON instance files.
//
// Payloads go to stdout (or --out FILE) as canonical JSON — byte-identical
// across repeated runs with equal arguments. The run report (input digests,
// output digest, stage timings, tolerance echo) goes to stderr so it never
// perturbs the reproducible stream.
//
// Exit codes: 0 success; 2 unreadable/invalid input (syntax or content);
// 3 dimension mismatch; 4 an enumeration cap was exceeded; 1 any other
// computational failure.

#include "riccati/json_io.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

using namespace riccati;

namespace {

struct RunLog {
    std::string command;
    std::vector<std::pair<std::string, std::string>> inputs; // (name, digest)
    std::vector<std::pair<std::string, double>> timings_ms;
    std::string output_dest;
    std::string output_digest;
    std::size_t output_bytes = 0;
    TolerancePolicy pol;
};

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double lap_ms() {
        auto now = std::chrono::steady_clock::now();
        double ms = std::chrono::duration<double, std::milli>(now - start_).count();
        start_ = now;
        return ms;
    }

private:
    std::chrono::steady_clock::time_point start_;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InvalidSpec("cannot read file: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Json load_input(const std::string& path, RunLog& log) {
    const std::string bytes = slurp(path);
    log.inputs.emplace_back(path, digest_hex(bytes));
    return parse_text(bytes, path);
}

void deliver(const std::string& text, const std::string& out_path, RunLog& log) {
    if (out_path.empty()) {
        std::fwrite(text.data(), 1, text.size(), stdout);
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) {
            throw InvalidSpec("cannot write file: " + out_path);
        }
        out << text;
    }
    log.output_dest = out_path.empty() ? "stdout" : out_path;
    log.output_digest = digest_hex(text);
    log.output_bytes = text.size();
}

void print_report(const RunLog& log) {
    std::ostringstream r;
    r << "command: " << log.command << "\n";
    for (const auto& [name, digest] : log.inputs) {
        r << "input: " << name << " fnv1a:" << digest << "\n";
    }
    r << "output: " << log.output_dest << " " << log.output_bytes
      << " bytes fnv1a:" << log.output_digest << "\n";
    for (const auto& [stage, ms] : log.timings_ms) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.3f", ms);
        r << "timing: " << stage << " " << buf << " ms\n";
    }
    r << "tolerances: rank_rtol=" << log.pol.rank_rtol << " cluster_atol=" << log.pol.cluster_atol
      << " residual_atol=" << log.pol.residual_atol << " residual_rtol=" << log.pol.residual_rtol
      << "\n";
    std::fputs(r.str().c_str(), stderr);
}

// Resolved for every subcommand, even tolerance-free ones, so an invalid
// profile value is rejected uniformly and the report echo is truthful.
TolerancePolicy resolve_profile() {
    TolerancePolicy pol;
    if (const char* profile = std::getenv("RICCATI_TOL_PROFILE")) {
        const std::string_view name(profile);
        if (name == "strict") {
            pol = TolerancePolicy::strict();
        } else if (name != "default" && !name.empty()) {
            throw InvalidSpec("RICCATI_TOL_PROFILE must be \"default\" or \"strict\"");
        }
    }
    return pol;
}

struct ToleranceFlags {
    std::optional<double> rank_rtol;
    std::optional<double> cluster_atol;
    std::optional<double> residual_atol;
    std::optional<double> residual_rtol;

    void attach(CLI::App* cmd) {
        cmd->add_option("--rank-rtol", rank_rtol, "Relative singular-value cutoff for rank decisions");
        cmd->add_option("--cluster-atol", cluster_atol, "Eigenvalue clustering width");
        cmd->add_option("--residual-atol", residual_atol, "Absolute residual acceptance floor");
        cmd->add_option("--residual-rtol", residual_rtol, "Relative residual acceptance factor");
    }

    TolerancePolicy resolve() const {
        TolerancePolicy pol = resolve_profile();
        if (rank_rtol) pol.rank_rtol = *rank_rtol;
        if (cluster_atol) pol.cluster_atol = *cluster_atol;
        if (residual_atol) pol.residual_atol = *residual_atol;
        if (residual_rtol) pol.residual_rtol = *residual_rtol;
        pol.validate();
        return pol;
    }
};

long long parse_integer(const std::string& text, const std::string& what) {
    std::size_t used = 0;
    long long value = 0;
    try {
        value = std::stoll(text, &used);
    } catch (const std::exception&) {
        throw InvalidSpec(what + ": \"" + text + "\" is not an integer");
    }
    if (used != text.size()) {
        throw InvalidSpec(what + ": \"" + text + "\" is not an integer");
    }
    return value;
}

double parse_number(const std::string& text, const std::string& what) {
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &used);
    } catch (const std::exception&) {
        throw InvalidSpec(what + ": \"" + text + "\" is not a number");
    }
    if (used != text.size()) {
        throw InvalidSpec(what + ": \"" + text + "\" is not a number");
    }
    return value;
}

int run_decompose(const std::string& p_file, const std::string& q_file,
                  const ToleranceFlags& flags, const std::string& out_path) {
    RunLog log;
    log.command = "decompose";
    log.pol = flags.resolve();
    Stopwatch watch;

    const Subspace p = decode_subspace(load_input(p_file, log));
    const Subspace q = decode_subspace(load_input(q_file, log));
    log.timings_ms.emplace_back("parse", watch.lap_ms());

    const CanonicalDecomposition d = halmos_decompose(p, q, log.pol);
    const GraphReport graph = analyze_graph(p, q, log.pol);
    log.timings_ms.emplace_back("decompose", watch.lap_ms());

    Json payload{{"decomposition", encode(d)},
                 {"dist", projection_distance(d)},
                 {"is_graph", graph.is_graph}};
    deliver(canonical_dump(payload), out_path, log);
    log.timings_ms.emplace_back("serialize", watch.lap_ms());
    print_report(log);
    return 0;
}

int run_solve(const std::string& b_file, bool enumerate, bool check_uniqueness, int samples,
              std::uint64_t sample_seed, const ToleranceFlags& flags, const std::string& out_path) {
    RunLog log;
    log.command = "solve";
    log.pol = flags.resolve();
    Stopwatch watch;

    const BlockOperator b = decode_block(load_input(b_file, log), log.pol);
    log.timings_ms.emplace_back("parse", watch.lap_ms());

    const auto sols = solve_spectral(b, log.pol);
    log.timings_ms.emplace_back("solve", watch.lap_ms());

    Json payload;
    Json list = Json::array();
    for (const auto& sol : sols) list.push_back(encode(sol));
    payload["solutions"] = std::move(list);

    if (enumerate) {
        std::optional<SampleSpec> sampling;
        if (samples > 0) sampling = SampleSpec{samples, sample_seed};
        Json families = Json::array();
        for (std::size_t i = 0; i < sols.size(); ++i) {
            if (!sols[i].is_contractive) continue;
            const auto family = enumerate_contractive(b, sols[i].x, log.pol, sampling);
            families.push_back(
                Json{{"solution_index", i}, {"family", encode(family)}});
        }
        payload["contractive_families"] = std::move(families);
        log.timings_ms.emplace_back("enumerate", watch.lap_ms());
    }
    if (check_uniqueness) {
        Json verdicts = Json::array();
        for (std::size_t i = 0; i < sols.size(); ++i) {
            if (!sols[i].is_contractive) continue;
            const UniquenessReport rep = uniqueness(b, sols[i].x, log.pol);
            Json entry = encode(rep);
            entry["solution_index"] = i;
            verdicts.push_back(std::move(entry));
        }
        payload["uniqueness"] = std::move(verdicts);
        log.timings_ms.emplace_back("uniqueness", watch.lap_ms());
    }

    deliver(canonical_dump(payload), out_path, log);
    log.timings_ms.emplace_back("serialize", watch.lap_ms());
    print_report(log);
    return 0;
}

int run_example(const std::string& kind, const std::vector<std::string>& params,
                const std::string& out_path) {
    RunLog log;
    log.command = "example";
    log.pol = resolve_profile();
    Stopwatch watch;

    Json payload;
    if (kind == "corpus") {
        if (!params.empty()) {
            throw InvalidSpec("example corpus takes no parameters");
        }
        payload = Json::array();
        for (const auto& spec : builtin_corpus()) {
            payload.push_back(encode(build(spec)));
        }
    } else {
        InstanceSpec spec;
        if (kind == "involution") {
            if (params.size() != 1) throw InvalidSpec("example involution needs: K");
            spec = InstanceSpec::involution(parse_integer(params[0], "involution K"));
        } else if (kind == "multiplication") {
            if (params.size() != 1) throw InvalidSpec("example multiplication needs: N");
            spec = InstanceSpec::multiplication(parse_integer(params[0], "multiplication N"));
        } else if (kind == "random") {
            if (params.size() != 3 && params.size() != 4) {
                throw InvalidSpec("example random needs: N0 N1 SEED [GAP]");
            }
            std::optional<double> gap;
            if (params.size() == 4) gap = parse_number(params[3], "random GAP");
            spec = InstanceSpec::random(parse_integer(params[0], "random N0"),
                                        parse_integer(params[1], "random N1"),
                                        static_cast<std::uint64_t>(
                                            parse_integer(params[2], "random SEED")),
                                        gap);
        } else if (kind == "constructed_nonunique") {
            if (params.size() != 1) throw InvalidSpec("example constructed_nonunique needs: SEED");
            spec = InstanceSpec::constructed_nonunique(
                static_cast<std::uint64_t>(parse_integer(params[0], "constructed_nonunique SEED")));
        } else {
            throw InvalidSpec("unknown example kind \"" + kind +
                              "\" (expected involution, multiplication, random, "
                              "constructed_nonunique, or corpus)");
        }
        payload = encode(build(spec));
    }
    log.timings_ms.emplace_back("build", watch.lap_ms());

    deliver(canonical_dump(payload), out_path, log);
    log.timings_ms.emplace_back("serialize", watch.lap_ms());
    print_report(log);
    return 0;
}

int run_refine(const std::string& n_list, const std::string& out_path) {
    RunLog log;
    log.command = "refine";
    log.pol = resolve_profile();
    Stopwatch watch;

    std::vector<Index> ns;
    std::stringstream parts(n_list);
    std::string item;
    while (std::getline(parts, item, ',')) {
        ns.push_back(static_cast<Index>(parse_integer(item, "refine grid size")));
    }
    if (ns.empty()) {
        throw InvalidSpec("refine needs a comma-separated list of grid sizes");
    }

    const auto rows = refinement_study(ns);
    log.timings_ms.emplace_back("refine", watch.lap_ms());

    std::ostringstream csv;
    csv << "n,norm_x,dist\n";
    for (const auto& row : rows) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "%lld,%.17g,%.17g\n", static_cast<long long>(row.n),
                      row.norm_x, row.dist);
        csv << buf;
    }
    deliver(csv.str(), out_path, log);
    log.timings_ms.emplace_back("serialize", watch.lap_ms());
    print_report(log);
    return 0;
}

int run_check(const std::string& b_file, const std::string& x_file, const ToleranceFlags& flags,
              const std::string& out_path) {
    RunLog log;
    log.command = "check";
    log.pol = flags.resolve();
    Stopwatch watch;

    const BlockOperator b = decode_block(load_input(b_file, log), log.pol);
    const ComplexMatrix x = decode_matrix(load_input(x_file, log));
    if (x.rows() != b.n1 || x.cols() != b.n0) {
        std::ostringstream msg;
        msg << "candidate must be " << b.n1 << "x" << b.n0 << ", got " << x.rows() << "x"
            << x.cols();
        throw DimensionMismatch(msg.str());
    }
    log.timings_ms.emplace_back("parse", watch.lap_ms());

    const auto [res, invariance] = invariance_check(b, x);
    const RiccatiSolution sol = classify(b, x, log.pol);
    const double bound = log.pol.residual_bound(op_norm(b.assembled()), op_norm(x));
    log.timings_ms.emplace_back("check", watch.lap_ms());

    Json payload{{"residual", res},
                 {"invariance_defect", invariance},
                 {"residual_bound", bound},
                 {"is_solution", res <= bound},
                 {"solution", encode(sol)}};
    deliver(canonical_dump(payload), out_path, log);
    log.timings_ms.emplace_back("serialize", watch.lap_ms());
    print_report(log);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral toolkit for block operators, projection pairs and Riccati equations"};
    app.require_subcommand(1);

    std::string p_file, q_file, b_file, x_file, kind, n_list, out_path_store;
    std::vector<std::string> params;
    bool enumerate = false;
    bool check_uniqueness = false;
    int samples = 0;
    std::uint64_t sample_seed = 0;
    ToleranceFlags dec_tol, sol_tol, chk_tol;
    std::string dec_out, sol_out, ex_out, ref_out, chk_out;

    CLI::App* dec = app.add_subcommand(
        "decompose", "Canonical decomposition of a projection pair from two subspace files");
    dec->add_option("p_file", p_file, "Subspace JSON for the base projection")->required();
    dec->add_option("q_file", q_file, "Subspace JSON for the compared projection")->required();
    dec->add_option("--out", dec_out, "Write the payload to a file instead of stdout");
    dec_tol.attach(dec);

    CLI::App* sol = app.add_subcommand(
        "solve", "Enumerate spectral-subspace solutions of a block operator's Riccati equation");
    sol->add_option("b_file", b_file, "Block operator JSON")->required();
    sol->add_flag("--enumerate-contractive", enumerate,
                  "Append the contractive family of each contractive solution");
    sol->add_flag("--check-uniqueness", check_uniqueness,
                  "Append a uniqueness verdict for each contractive solution");
    sol->add_option("--samples", samples,
                    "Sample this many extra members inside multiplicity components");
    sol->add_option("--sample-seed", sample_seed, "Seed for the sampling stream");
    sol->add_option("--out", sol_out, "Write the payload to a file instead of stdout");
    sol_tol.attach(sol);

    CLI::App* ex = app.add_subcommand("example", "Emit a built-in instance (or the whole corpus)");
    ex->add_option("kind", kind,
                   "involution | multiplication | random | constructed_nonunique | corpus")
        ->required();
    ex->add_option("params", params, "Kind-specific parameters");
    ex->add_option("--out", ex_out, "Write the payload to a file instead of stdout");

    CLI::App* ref = app.add_subcommand(
        "refine", "Refinement table (CSV: n,norm_x,dist) for the discretized multiplication family");
    ref->add_option("n_list", n_list, "Comma-separated grid sizes, e.g. 16,32,64")->required();
    ref->add_option("--out", ref_out, "Write the CSV to a file instead of stdout");

    CLI::App* chk = app.add_subcommand(
        "check", "Residual and graph-invariance report for a candidate (B, X) pair");
    chk->add_option("b_file", b_file, "Block operator JSON")->required();
    chk->add_option("x_file", x_file, "Candidate matrix JSON")->required();
    chk->add_option("--out", chk_out, "Write the payload to a file instead of stdout");
    chk_tol.attach(chk);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }

    try {
        if (dec->parsed()) return run_decompose(p_file, q_file, dec_tol, dec_out);
        if (sol->parsed())
            return run_solve(b_file, enumerate, check_uniqueness, samples, sample_seed, sol_tol,
                             sol_out);
        if (ex->parsed()) return run_example(kind, params, ex_out);
        if (ref->parsed()) return run_refine(n_list, ref_out);
        if (chk->parsed()) return run_check(b_file, x_file, chk_tol, chk_out);
    } catch (const InvalidSpec& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const NotHermitian& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const InvalidSubspace& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const DimensionMismatch& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const TooManyClusters& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    } catch (const TooManyComponents& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
