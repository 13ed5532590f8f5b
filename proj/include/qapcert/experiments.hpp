#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "qapcert/certify.hpp"
#include "qapcert/duality.hpp"
#include "qapcert/oracle.hpp"
#include "qapcert/rng.hpp"
#include "qapcert/sdp.hpp"

namespace qapcert {

using ordered_json = nlohmann::ordered_json;

/// Two point clouds in R^3 and their Euclidean distance matrices.
/// S_c ~ N(0, I_3) per point, S_d ~ N(mu, I_3) with mu = (4,4,4); draw order
/// is row-major over points then coordinates, S_c first, one shared stream.
struct PointCloudPair {
    int n = 0;
    uint64_t seed = 0;
    Mat S_c, S_d;  // n x 3
    Mat C, D;      // n x n distances
};

inline Mat distance_matrix(const Mat& pts) {
    const int n = pts.rows();
    Mat d(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double s = 0.0;
            for (int c = 0; c < pts.cols(); ++c) {
                const double diff = pts(i, c) - pts(j, c);
                s += diff * diff;
            }
            d(i, j) = d(j, i) = std::sqrt(s);
        }
    return d;
}

inline PointCloudPair sample_point_clouds(int n, uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample_point_clouds: n must be >= 1");
    PointCloudPair pc;
    pc.n = n;
    pc.seed = seed;
    GaussianStream g(seed);
    pc.S_c = Mat(n, 3);
    for (int i = 0; i < n; ++i)
        for (int c = 0; c < 3; ++c) pc.S_c(i, c) = g.next();
    pc.S_d = Mat(n, 3);
    for (int i = 0; i < n; ++i)
        for (int c = 0; c < 3; ++c) pc.S_d(i, c) = 4.0 + g.next();
    pc.C = distance_matrix(pc.S_c);
    pc.D = distance_matrix(pc.S_d);
    return pc;
}

enum class PairMode { WithSelf, Distinct };

struct ExperimentOptions {
    int workers = 1;
    int shard_index = 0;
    int shard_count = 1;
    bool timings = false;  // wall times are kept out of reports by default so
                           // reruns emit identical bytes
    SolveOptions solve;
    ExactnessOptions exactness;
};

struct InstanceRecord {
    int id = 0;
    std::string label;
    double qap_value = 0.0;
    double sdp_value = 0.0;
    bool exact = false;
    bool certified = false;
    std::string certificate_status = "not-attempted";
    std::string verdict = "indeterminate";
    double primal_residual = 0.0;
    double cone_residual = 0.0;
    long iterations = 0;
    bool converged = false;
    std::string error;
    double wall_ms = 0.0;
};

struct ExperimentReport {
    std::string kind;  // "graphs" | "distances" | "table3"
    int n = 0;
    std::string conventions_note;
    uint64_t seed = 0;
    int instance_count = 0;
    int exact_count = 0;
    int certified_count = 0;
    bool timings = false;
    std::vector<InstanceRecord> records;

    ordered_json to_json() const {
        ordered_json recs = ordered_json::array();
        for (const auto& r : records) {
            ordered_json jr = {{"id", r.id},
                               {"label", r.label},
                               {"qap_value", r.qap_value},
                               {"sdp_value", r.sdp_value},
                               {"exact", r.exact},
                               {"certified", r.certified},
                               {"certificate_status", r.certificate_status},
                               {"verdict", r.verdict},
                               {"primal_residual", r.primal_residual},
                               {"cone_residual", r.cone_residual},
                               {"iterations", r.iterations},
                               {"converged", r.converged}};
            if (!r.error.empty()) jr["error"] = r.error;
            if (timings) jr["wall_ms"] = r.wall_ms;
            recs.push_back(std::move(jr));
        }
        return ordered_json{{"schema_version", 1},
                            {"kind", kind},
                            {"n", n},
                            {"seed", seed},
                            {"conventions_note", conventions_note},
                            {"instance_count", instance_count},
                            {"exact_count", exact_count},
                            {"certified_count", certified_count},
                            {"records", std::move(recs)}};
    }

    std::string to_csv() const {
        std::ostringstream out;
        out << "kind,n,instances,exact,certified,exact_pct,certified_pct_of_exact\n";
        const double ep = instance_count ? 100.0 * exact_count / instance_count : 0.0;
        const double cp = exact_count ? 100.0 * certified_count / exact_count : 0.0;
        out << kind << "," << n << "," << instance_count << "," << exact_count << ","
            << certified_count << "," << ep << "," << cp << "\n";
        return out.str();
    }

    std::string to_text() const {
        std::ostringstream out;
        out << kind << " experiment, n = " << n << "\n";
        out << "  instances: " << instance_count << "\n";
        out << "  exact:     " << exact_count;
        if (instance_count) out << "  (" << 100.0 * exact_count / instance_count << "%)";
        out << "\n";
        out << "  certified: " << certified_count;
        if (exact_count) out << "  (" << 100.0 * certified_count / exact_count << "% of exact)";
        out << "\n";
        if (!conventions_note.empty()) out << "  note: " << conventions_note << "\n";
        int failures = 0;
        for (const auto& r : records)
            if (!r.error.empty()) ++failures;
        if (failures) out << "  failures: " << failures << "\n";
        return out.str();
    }
};

namespace detail {

template <class F>
inline void parallel_for(int count, int workers, F&& body) {
    if (workers <= 1) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    const int nthreads = std::min(workers, count);
    pool.reserve(nthreads);
    for (int w = 0; w < nthreads; ++w)
        pool.emplace_back([&]() {
            for (int i; (i = next.fetch_add(1)) < count;) body(i);
        });
    for (auto& t : pool) t.join();
}

// Shared per-instance pipeline: solve, decide, then search for a certificate
// on exact instances after relabeling to make the identity optimal.
inline void run_instance(const QapInstance& inst, ExactnessCriterion criterion,
                         const ExperimentOptions& opts, InstanceRecord& rec) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
        const ConicProblem prob = build_relaxation(inst);
        const SolverReport rep = solve_relaxation(prob, opts.solve);
        rec.sdp_value = rep.objective;
        rec.primal_residual = rep.primal_residual;
        rec.cone_residual = std::max(rep.psd_residual, rep.nonneg_residual);
        rec.iterations = rep.iterations;
        rec.converged = rep.converged;

        const BruteForceResult bf = brute_force_qap(inst);
        rec.qap_value = bf.best_value;

        const ExactnessVerdict verdict = decide_exactness(inst, prob, rep, criterion, opts.exactness);
        rec.exact = verdict.exact();
        rec.verdict = verdict.status == ExactnessVerdict::Status::Exact       ? "exact"
                      : verdict.status == ExactnessVerdict::Status::NotExact ? "not-exact"
                                                                             : "indeterminate";
        if (rec.exact) {
            const QapInstance relabeled = relabel(inst, bf.best_sigma);
            const CertificateSearchResult search = search_certificate(relabeled);
            if (search.status == SearchStatus::Found) {
                const CertificateReport crep = verify_certificate(relabeled, search.certificate);
                rec.certified = crep.valid;
                rec.certificate_status = crep.valid ? "found" : "found-but-invalid";
            } else {
                rec.certificate_status =
                    search.status == SearchStatus::Infeasible ? "infeasible" : "indeterminate";
            }
        }
    } catch (const std::exception& ex) {
        rec.error = ex.what();
        rec.verdict = "error";
    }
    rec.wall_ms =
        std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(std::chrono::steady_clock::now() - t0)
            .count();
}

}  // namespace detail

/// All pairs of non-isomorphic graphs on n vertices, instance (A, B) =
/// (adj_C, -adj_D): brute-force optimum, SDP solve, objective-match verdict,
/// certificate search on exact pairs.
inline ExperimentReport run_graph_experiment(int n, PairMode mode, const ExperimentOptions& opts = {}) {
    const std::vector<Graph> graphs = enumerate_graphs(n);
    const int m = static_cast<int>(graphs.size());
    std::vector<std::pair<int, int>> pairs;
    for (int a = 0; a < m; ++a)
        for (int b = (mode == PairMode::WithSelf ? a : a + 1); b < m; ++b) pairs.push_back({a, b});

    std::vector<int> selected;
    for (int t = 0; t < static_cast<int>(pairs.size()); ++t)
        if (t % opts.shard_count == opts.shard_index) selected.push_back(t);

    ExperimentReport report;
    report.kind = "graphs";
    report.n = n;
    report.timings = opts.timings;
    {
        std::ostringstream note;
        note << m << " isomorphism classes; " << m * (m + 1) / 2 << " pairs with self-pairs, "
             << m * (m - 1) / 2 << " distinct pairs; this run uses "
             << (mode == PairMode::WithSelf ? "with-self" : "distinct") << " mode";
        if (opts.shard_count > 1)
            note << "; shard " << opts.shard_index << "/" << opts.shard_count;
        report.conventions_note = note.str();
    }
    report.records.resize(selected.size());

    detail::parallel_for(static_cast<int>(selected.size()), opts.workers, [&](int t) {
        const auto [a, b] = pairs[selected[t]];
        InstanceRecord& rec = report.records[t];
        rec.id = selected[t];
        rec.label = "g" + std::to_string(a + 1) + "-g" + std::to_string(b + 1);
        Mat bm = graphs[b].adj;
        bm *= -1.0;
        detail::run_instance(QapInstance(graphs[a].adj, bm), ExactnessCriterion::ObjectiveMatch, opts, rec);
    });

    report.instance_count = static_cast<int>(report.records.size());
    for (const auto& r : report.records) {
        report.exact_count += r.exact;
        report.certified_count += r.certified;
    }
    return report;
}

/// Seeded trials on random point-cloud distance matrices, instance (C, -D),
/// permutation-solution verdict, certificate search on exact trials.
inline ExperimentReport run_distance_experiment(int n, int trials, uint64_t seed,
                                                const ExperimentOptions& opts = {}) {
    if (n > 10) throw std::invalid_argument("run_distance_experiment: n > 10 unsupported");
    ExperimentReport report;
    report.kind = "distances";
    report.n = n;
    report.seed = seed;
    report.timings = opts.timings;
    report.conventions_note = "exactness = permutation-solution criterion";

    std::vector<int> selected;
    for (int t = 0; t < trials; ++t)
        if (t % opts.shard_count == opts.shard_index) selected.push_back(t);
    report.records.resize(selected.size());

    detail::parallel_for(static_cast<int>(selected.size()), opts.workers, [&](int t) {
        const int trial = selected[t];
        InstanceRecord& rec = report.records[t];
        rec.id = trial;
        const uint64_t s = trial_seed(seed, static_cast<uint64_t>(trial));
        rec.label = "trial" + std::to_string(trial) + "-seed" + std::to_string(s);
        const PointCloudPair pc = sample_point_clouds(n, s);
        Mat d = pc.D;
        d *= -1.0;
        detail::run_instance(QapInstance(pc.C, d), ExactnessCriterion::PermutationSolution, opts, rec);
    });

    report.instance_count = static_cast<int>(report.records.size());
    for (const auto& r : report.records) {
        report.exact_count += r.exact;
        report.certified_count += r.certified;
    }
    return report;
}

/// ||X C X^T - D||_F^2 over all pairs of 5-vertex graph classes, X taken from
/// the SDP solve and replaced by its permutation rounding whenever that
/// rounding reproduces the SDP objective (which it does on exact pairs).
struct AlignmentTable {
    int m = 0;
    Mat values;  // upper triangle incl. diagonal; lower mirrored
    std::vector<InstanceRecord> records;
};

inline double alignment_value(const Mat& x, const Mat& c, const Mat& d) {
    Mat diff = x * c * x.transpose();
    diff -= d;
    const double f = diff.frob_norm();
    return f * f;
}

inline AlignmentTable pairwise_alignment_table(const ExperimentOptions& opts = {}) {
    const int n = 5;
    const std::vector<Graph> graphs = enumerate_graphs(n);
    const int m = static_cast<int>(graphs.size());
    AlignmentTable table;
    table.m = m;
    table.values = Mat(m, m);
    std::vector<std::pair<int, int>> cells;
    for (int a = 0; a < m; ++a)
        for (int b = a; b < m; ++b) cells.push_back({a, b});
    table.records.resize(cells.size());

    detail::parallel_for(static_cast<int>(cells.size()), opts.workers, [&](int t) {
        const auto [a, b] = cells[t];
        InstanceRecord& rec = table.records[t];
        rec.id = t;
        rec.label = "g" + std::to_string(a + 1) + "-g" + std::to_string(b + 1);
        try {
            Mat bm = graphs[b].adj;
            bm *= -1.0;
            const QapInstance inst(graphs[a].adj, bm);
            const ConicProblem prob = build_relaxation(inst);
            const SolverReport rep = solve_relaxation(prob, opts.solve);
            rec.sdp_value = rep.objective;
            rec.iterations = rep.iterations;
            rec.converged = rep.converged;
            const BruteForceResult bf = brute_force_qap(inst);
            rec.qap_value = bf.best_value;
            rec.exact = std::fabs(bf.best_value - rep.objective) <=
                        opts.exactness.tol_exact * (1.0 + std::fabs(bf.best_value));

            // ||X C X^T - D||^2 at X = tau.matrix() equals
            // ||C||^2 + ||D||^2 + 2*objective(tau^-1), so the cell of an exact
            // pair uses the inverse of an objective-optimal permutation
            Mat x = extract_x(prob, rep.Y);
            const Permutation rounded = round_to_permutation(x);
            if (std::fabs(qap_objective(inst, rounded) - rep.objective) <=
                opts.exactness.tol_exact * (1.0 + std::fabs(rep.objective))) {
                x = rounded.inverse().matrix();
            } else if (rec.exact) {
                x = bf.best_sigma.inverse().matrix();
            }
            table.values(a, b) = table.values(b, a) = alignment_value(x, graphs[a].adj, graphs[b].adj);
        } catch (const std::exception& ex) {
            rec.error = ex.what();
        }
    });
    return table;
}

// --- demos ---

/// The explicit 6-vertex instance where the relaxation has a gap: feasibility
/// of the printed pair, its objective, the solver's optimum, and the verdict.
inline ordered_json demo_counterexample(const ExperimentOptions& opts = {}) {
    const auto [inst, point] = counterexample_instance();
    const ConicProblem prob = build_relaxation(inst);
    const FeasibilityReport feas = check_feasibility(prob, point);
    const BruteForceResult bf = brute_force_qap(inst);
    const SolverReport rep = solve_relaxation(prob, opts.solve);
    const ExactnessVerdict verdict =
        decide_exactness(inst, prob, rep, ExactnessCriterion::ObjectiveMatch, opts.exactness);
    const double gap = bf.best_value - feas.objective;
    return ordered_json{{"qap_optimum", bf.best_value},
                        {"point_objective", feas.objective},
                        {"point_max_residual", feas.max_residual()},
                        {"solver_objective", rep.objective},
                        {"solver_converged", rep.converged},
                        {"verdict", verdict.exact() ? "exact" : "not-exact"},
                        {"gap", gap},
                        {"relaxation_strictly_below_optimum", feas.objective < bf.best_value - 0.5}};
}

inline ordered_json matrix_json_rows(const Mat& m) {
    ordered_json rows = ordered_json::array();
    for (int i = 0; i < m.rows(); ++i) {
        ordered_json row = ordered_json::array();
        for (int k = 0; k < m.cols(); ++k) {
            const double v = m(i, k);
            row.push_back(v == 0.0 ? 0.0 : v);  // flush negative zeros
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

/// One record per enumerated isomorphism class.
inline ordered_json graph_list_json(int n) {
    ordered_json out = ordered_json::array();
    const auto graphs = enumerate_graphs(n);
    for (size_t t = 0; t < graphs.size(); ++t)
        out.push_back(ordered_json{{"index", t + 1},
                                   {"edges", graphs[t].edge_count()},
                                   {"adjacency", matrix_json_rows(graphs[t].adj)}});
    return out;
}

/// The non-closed dual set: eigenvalue formula agreement on an s-grid and the
/// PSD-feasible sequence whose P_k converges to the target bigP.
inline ordered_json demo_geometry(const ExperimentOptions& opts = {}) {
    (void)opts;
    const GeometricExample g = geometric_example();
    ordered_json sgrid = ordered_json::array();
    const double svals[] = {-10.0, -5.0, -1.0, 0.0, 0.5, 1.0, 5.0, 10.0};
    const int n = 4;
    const Mat e = Mat::ones(n, n);
    for (double s : svals) {
        Mat m = g.P_small;
        m *= -1.0;
        Mat se = e;
        se *= s;
        m += se;
        const double lam = min_eigenvalue(m);
        sgrid.push_back(ordered_json{{"s", s},
                                     {"lambda_min", lam},
                                     {"formula", geometric_min_eig_formula(s)},
                                     {"abs_diff", std::fabs(lam - geometric_min_eig_formula(s))}});
    }

    Vec u(n, 0.0);
    u[1] = -1.0;
    const Mat target = s_sequence_target(u, 0, 1);
    ordered_json seq = ordered_json::array();
    double dev1 = 0.0;
    for (double k : {1.0, 10.0, 100.0, 1000.0}) {
        const SSequenceStep step = s_sequence(u, 0, 1, k);
        Mat diff = step.P;
        diff -= target;
        const double dev = diff.max_abs();
        if (k == 1.0) dev1 = dev;
        const double slack_min = min_eigenvalue(s_sequence_slack(step));
        seq.push_back(ordered_json{
            {"k", k}, {"deviation_sup", dev}, {"slack_lambda_min", slack_min}});
    }
    const double devK = seq.back()["deviation_sup"].get<double>();
    return ordered_json{{"A", matrix_json_rows(g.inst.A())},
                        {"B", matrix_json_rows(g.inst.B())},
                        {"P", matrix_json_rows(g.P_small)},
                        {"s_grid", std::move(sgrid)},
                        {"sequence", std::move(seq)},
                        {"deviation_ratio_k1000_over_k1", dev1 > 0 ? devK / dev1 : 0.0}};
}

}  // namespace qapcert
