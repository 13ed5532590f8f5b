// qapsdp: solve the lifted relaxation of quadratic assignment instances,
// search for and verify optimality certificates, and run the experiment
// sweeps over graph pairs and random point-cloud distance matrices.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qapcert/qapcert.hpp"

using namespace qapcert;

namespace {

struct OutputSink {
    std::string format = "text";  // text | json | csv
    std::string path;             // empty = stdout

    void write(const std::string& text) const {
        if (path.empty()) {
            std::cout << text;
            if (!text.empty() && text.back() != '\n') std::cout << "\n";
            return;
        }
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write output file: " + path);
        out << text;
        if (!text.empty() && text.back() != '\n') out << "\n";
    }
};

void emit_report(const ExperimentReport& rep, const OutputSink& sink) {
    if (sink.format == "json")
        sink.write(rep.to_json().dump(2));
    else if (sink.format == "csv")
        sink.write(rep.to_csv());
    else
        sink.write(rep.to_text());
}

int parse_shard(const std::string& spec, ExperimentOptions& opts) {
    if (spec.empty()) return 0;
    const size_t slash = spec.find('/');
    if (slash == std::string::npos) return -1;
    opts.shard_index = std::stoi(spec.substr(0, slash));
    opts.shard_count = std::stoi(spec.substr(slash + 1));
    if (opts.shard_count < 1 || opts.shard_index < 0 || opts.shard_index >= opts.shard_count) return -1;
    return 0;
}

ordered_json verdict_json(const QapInstance& inst, const ConicProblem& prob, const SolverReport& rep) {
    ordered_json j{{"n", inst.n()},
                   {"sdp_objective", rep.objective},
                   {"iterations", rep.iterations},
                   {"converged", rep.converged},
                   {"primal_residual", rep.primal_residual},
                   {"psd_residual", rep.psd_residual},
                   {"nonneg_residual", rep.nonneg_residual}};
    if (inst.n() <= 10) {
        const BruteForceResult bf = brute_force_qap(inst);
        const ExactnessVerdict v = decide_exactness(inst, prob, rep, ExactnessCriterion::ObjectiveMatch);
        ordered_json sigma = ordered_json::array();
        for (int i = 0; i < inst.n(); ++i) sigma.push_back(bf.best_sigma(i) + 1);
        j["qap_optimum"] = bf.best_value;
        j["optimal_permutation"] = std::move(sigma);
        j["verdict"] = v.exact() ? "exact"
                                 : (v.status == ExactnessVerdict::Status::NotExact ? "not-exact" : "indeterminate");
        j["gap"] = bf.best_value - rep.objective;
    }
    const Mat x = extract_x(prob, rep.Y);
    const Permutation rounded = round_to_permutation(x);
    ordered_json rj = ordered_json::array();
    for (int i = 0; i < inst.n(); ++i) rj.push_back(rounded(i) + 1);
    j["rounded_permutation"] = std::move(rj);
    j["rounded_objective"] = qap_objective(inst, rounded);
    return j;
}

std::string text_of(const ordered_json& j) {
    std::string out;
    for (auto& [key, val] : j.items()) out += key + ": " + val.dump() + "\n";
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"QAP semidefinite relaxation solver and exactness certificates"};
    app.require_subcommand(1);
    app.fallthrough();

    OutputSink sink;
    app.add_option("--format", sink.format, "Output format: text, json or csv")
        ->check(CLI::IsMember({"text", "json", "csv"}));
    app.add_option("--out", sink.path, "Write output to a file instead of stdout");

    ExperimentOptions opts;
    app.add_option("--workers", opts.workers, "Worker threads for experiment sweeps");
    app.add_flag("--timings", opts.timings, "Include wall-clock times in reports (breaks byte determinism)");

    std::string a_path, b_path, export_problem_path;
    auto* solve_cmd = app.add_subcommand("solve", "Solve the relaxation for a matrix pair");
    solve_cmd->fallthrough();
    solve_cmd->add_option("A", a_path, "Matrix file for A")->required();
    solve_cmd->add_option("B", b_path, "Matrix file for B")->required();
    solve_cmd->add_option("--export-problem", export_problem_path,
                          "Also write the assembled constraint catalogue as JSON");

    auto* certify_cmd = app.add_subcommand("certify", "Search for an optimality certificate");
    certify_cmd->fallthrough();
    certify_cmd->add_option("A", a_path, "Matrix file for A")->required();
    certify_cmd->add_option("B", b_path, "Matrix file for B")->required();

    auto* experiment_cmd = app.add_subcommand("experiment", "Run an experiment sweep");
    experiment_cmd->fallthrough();
    int exp_n = 4;
    int trials = 25;
    uint64_t seed = 1;
    std::string pair_mode = "with-self";
    std::string shard_spec;
    bool full = false;
    auto* graphs_cmd = experiment_cmd->add_subcommand("graphs", "All pairs of non-isomorphic graphs");
    graphs_cmd->fallthrough();
    graphs_cmd->add_option("--n", exp_n, "Vertex count (3..6)")->required();
    graphs_cmd->add_option("--pair-mode", pair_mode, "with-self or distinct")
        ->check(CLI::IsMember({"with-self", "distinct"}));
    graphs_cmd->add_flag("--full", full, "Allow the long n=6 sweep");
    graphs_cmd->add_option("--shard", shard_spec, "Run shard i of m, as i/m");
    auto* dist_cmd = experiment_cmd->add_subcommand("distances", "Random point-cloud distance matrices");
    dist_cmd->fallthrough();
    dist_cmd->add_option("--n", exp_n, "Point count (3..10)")->required();
    dist_cmd->add_option("--trials", trials, "Number of seeded trials");
    dist_cmd->add_option("--seed", seed, "Base seed");
    dist_cmd->add_option("--shard", shard_spec, "Run shard i of m, as i/m");
    experiment_cmd->require_subcommand(1);

    auto* table3_cmd = app.add_subcommand("table3", "Pairwise alignment values over the 5-vertex classes");
    table3_cmd->fallthrough();

    int list_n = 4;
    auto* graphlist_cmd = app.add_subcommand("graphs", "Export the enumerated isomorphism classes");
    graphlist_cmd->fallthrough();
    graphlist_cmd->add_option("--n", list_n, "Vertex count (1..6)")->required();

    auto* demo_cmd = app.add_subcommand("demo", "Built-in demonstrations");
    demo_cmd->fallthrough();
    auto* counter_cmd = demo_cmd->add_subcommand("counterexample", "The 6-vertex instance with a relaxation gap");
    counter_cmd->fallthrough();
    auto* geometry_cmd = demo_cmd->add_subcommand("geometry", "The non-closed dual set example");
    geometry_cmd->fallthrough();
    demo_cmd->require_subcommand(1);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*solve_cmd || *certify_cmd) {
            const QapInstance inst(load_matrix_file(a_path), load_matrix_file(b_path));
            if (*solve_cmd) {
                const ConicProblem prob = build_relaxation(inst);
                if (!export_problem_path.empty()) {
                    std::ofstream pf(export_problem_path);
                    if (!pf) throw std::runtime_error("cannot write " + export_problem_path);
                    pf << problem_to_json(prob).dump(2) << "\n";
                }
                const SolverReport rep = solve_relaxation(prob, opts.solve);
                const ordered_json j = verdict_json(inst, prob, rep);
                sink.write(sink.format == "json" ? j.dump(2) : text_of(j));
            } else {
                if (inst.n() > 10) throw std::runtime_error("certify: n > 10 unsupported (brute-force relabeling)");
                const BruteForceResult bf = brute_force_qap(inst);
                const QapInstance rel = relabel(inst, bf.best_sigma);
                const CertificateSearchResult res = search_certificate(rel);
                ordered_json j{{"n", inst.n()}, {"qap_optimum", bf.best_value}};
                ordered_json sigma = ordered_json::array();
                for (int i = 0; i < inst.n(); ++i) sigma.push_back(bf.best_sigma(i) + 1);
                j["relabeling_permutation"] = std::move(sigma);
                if (res.status == SearchStatus::Found) {
                    const CertificateReport crep = verify_certificate(rel, res.certificate);
                    j["status"] = crep.valid ? "certified" : "found-but-invalid";
                    j["report"] = report_to_json(crep);
                    j["certificate"] = certificate_to_json(res.certificate);
                } else {
                    j["status"] = res.status == SearchStatus::Infeasible ? "infeasible" : "indeterminate";
                }
                sink.write(sink.format == "json" ? j.dump(2) : text_of(j));
            }
            return 0;
        }

        if (*graphs_cmd) {
            if (exp_n < 2 || exp_n > 6) throw std::runtime_error("graphs: need 2 <= n <= 6");
            if (exp_n == 6 && !full)
                throw std::runtime_error("the n=6 sweep is hours-long; pass --full (optionally with --shard i/m)");
            if (parse_shard(shard_spec, opts) != 0) throw std::runtime_error("bad --shard, expected i/m");
            const PairMode mode = pair_mode == "distinct" ? PairMode::Distinct : PairMode::WithSelf;
            emit_report(run_graph_experiment(exp_n, mode, opts), sink);
            return 0;
        }
        if (*dist_cmd) {
            if (exp_n < 2 || exp_n > 10) throw std::runtime_error("distances: need 2 <= n <= 10");
            if (parse_shard(shard_spec, opts) != 0) throw std::runtime_error("bad --shard, expected i/m");
            emit_report(run_distance_experiment(exp_n, trials, seed, opts), sink);
            return 0;
        }
        if (*table3_cmd) {
            const AlignmentTable table = pairwise_alignment_table(opts);
            if (sink.format == "csv" || sink.format == "text") {
                std::ostringstream out;
                for (int a = 0; a < table.m; ++a) {
                    for (int b = 0; b < table.m; ++b)
                        out << (b ? "," : "") << (b >= a ? std::to_string(table.values(a, b)) : std::string());
                    out << "\n";
                }
                sink.write(out.str());
            } else {
                ordered_json rows = ordered_json::array();
                for (int a = 0; a < table.m; ++a) {
                    ordered_json row = ordered_json::array();
                    for (int b = 0; b < table.m; ++b) row.push_back(table.values(a, b));
                    rows.push_back(std::move(row));
                }
                sink.write(ordered_json{{"m", table.m}, {"values", std::move(rows)}}.dump(2));
            }
            return 0;
        }
        if (*graphlist_cmd) {
            sink.write(graph_list_json(list_n).dump(2));
            return 0;
        }
        if (*counter_cmd) {
            const ordered_json j = demo_counterexample(opts);
            sink.write(sink.format == "json" ? j.dump(2) : text_of(j));
            return 0;
        }
        if (*geometry_cmd) {
            const ordered_json j = demo_geometry(opts);
            sink.write(sink.format == "json" ? j.dump(2) : text_of(j));
            return 0;
        }
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 0;
}
