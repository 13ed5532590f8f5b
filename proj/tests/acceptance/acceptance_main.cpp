// Acceptance suite: one pass/fail line per criterion, exit code = #failures.
// Criterion 4 (the hours-long n = 6 graph sweep) runs only with --full.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "qapcert/qapcert.hpp"

using namespace qapcert;

namespace {

struct Gate {
    int failed = 0;
    int skipped = 0;

    void report(const std::string& id, bool ok, const std::string& detail, double secs) {
        std::printf("[%s] %s (%.1fs)%s%s\n", ok ? "PASS" : "FAIL", id.c_str(), secs,
                    detail.empty() ? "" : " — ", detail.c_str());
        std::fflush(stdout);
        if (!ok) ++failed;
    }
    void skip(const std::string& id, const std::string& why) {
        std::printf("[SKIP] %s — %s\n", id.c_str(), why.c_str());
        std::fflush(stdout);
        ++skipped;
    }
    void run(const std::string& id, const std::function<std::pair<bool, std::string>()>& body) {
        const auto t0 = std::chrono::steady_clock::now();
        bool ok = false;
        std::string detail;
        try {
            auto [o, d] = body();
            ok = o;
            detail = d;
        } catch (const std::exception& ex) {
            detail = std::string("exception: ") + ex.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        report(id, ok, detail, secs);
    }
};

QapInstance random_integer_instance(int n, SplitMix64& rng, int lo, int hi) {
    Mat a(n, n), b(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            a(i, j) = a(j, i) = rng.next_int(lo, hi);
            b(i, j) = b(j, i) = rng.next_int(lo, hi);
        }
    return QapInstance(a, b);
}

double identity_value(const QapInstance& inst) {
    double s = 0.0;
    for (int i = 0; i < inst.n(); ++i)
        for (int j = 0; j < inst.n(); ++j) s += inst.A()(i, j) * inst.B()(i, j);
    return s;
}

double req3_by_enumeration(const Certificate& cert) {
    const int n = cert.n();
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    auto value = [&](const std::vector<int>& sigma) {
        std::vector<int> inv(n);
        for (int i = 0; i < n; ++i) inv[sigma[i]] = i;
        double s = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                s += cert.u(i, j)[sigma[i]] + cert.u(i, j)[sigma[j]] + cert.v(i, j)[inv[i]] +
                     cert.v(i, j)[inv[j]];
        return s;
    };
    const double at_id = value(perm);
    double best = 1e300;
    do {
        best = std::min(best, value(perm));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best - at_id;
}

}  // namespace

int main(int argc, char** argv) {
    bool full = false;
    int workers = 2;
    int shard_index = 0, shard_count = 1;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--full") == 0) full = true;
        if (std::strcmp(argv[i], "--workers") == 0 && i + 1 < argc) workers = std::atoi(argv[++i]);
        if (std::strcmp(argv[i], "--shard") == 0 && i + 1 < argc) {
            const std::string spec = argv[++i];
            const size_t slash = spec.find('/');
            shard_index = std::stoi(spec.substr(0, slash));
            shard_count = std::stoi(spec.substr(slash + 1));
        }
    }
    Gate gate;
    ExperimentOptions opts;
    opts.workers = workers;

    // 1. the explicit 6-vertex instance with a relaxation gap
    gate.run("criterion 1: explicit 6-vertex gap instance", [&]() -> std::pair<bool, std::string> {
        const auto [inst, point] = counterexample_instance();
        const ConicProblem prob = build_relaxation(inst);
        const FeasibilityReport feas = check_feasibility(prob, point);
        const BruteForceResult bf = brute_force_qap(inst);
        const SolverReport rep = solve_relaxation(prob, opts.solve);
        const ExactnessVerdict verdict =
            decide_exactness(inst, prob, rep, ExactnessCriterion::ObjectiveMatch);
        std::ostringstream d;
        bool ok = true;
        if (bf.best_value != -4.0) {
            ok = false;
            d << "target qap optimum -4 not met (observed " << bf.best_value << "); ";
        }
        if (feas.max_residual() > 1e-9) {
            ok = false;
            d << "feasibility residual " << feas.max_residual() << " > 1e-9; ";
        }
        if (std::fabs(feas.objective - (-8.0)) > 1e-9) {
            ok = false;
            d << "target point objective -8 not met (observed " << feas.objective << "); ";
        }
        if (!(rep.objective <= -7.999)) {
            ok = false;
            d << "target solver objective <= -7.999 not met (observed " << rep.objective << "); ";
        }
        if (verdict.status != ExactnessVerdict::Status::NotExact) {
            ok = false;
            d << "verdict is not 'not-exact'; ";
        }
        return {ok, d.str()};
    });
    // the same instance judged against values computed from its own data:
    // the printed matrices give optimum -2 and point objective -3, and the
    // relaxation gap is real (about 1); recorded here so the phenomenon is
    // checked even though the published -4/-8 targets above are inconsistent
    // with the printed matrices
    gate.run("addendum 1*: gap instance, data-derived targets", [&]() -> std::pair<bool, std::string> {
        const auto [inst, point] = counterexample_instance();
        const ConicProblem prob = build_relaxation(inst);
        const FeasibilityReport feas = check_feasibility(prob, point);
        const BruteForceResult bf = brute_force_qap(inst);
        const SolverReport rep = solve_relaxation(prob, opts.solve);
        const ExactnessVerdict verdict =
            decide_exactness(inst, prob, rep, ExactnessCriterion::ObjectiveMatch);
        std::ostringstream d;
        bool ok = true;
        if (bf.best_value != -2.0) ok = false;
        if (feas.max_residual() > 1e-9) ok = false;
        if (std::fabs(feas.objective - (-3.0)) > 1e-9) ok = false;
        if (!(rep.objective <= -2.999)) ok = false;
        if (verdict.status != ExactnessVerdict::Status::NotExact) ok = false;
        if (!(bf.best_value - rep.objective > 0.9)) ok = false;
        if (!ok)
            d << "qap " << bf.best_value << " point " << feas.objective << " solver " << rep.objective
              << " residual " << feas.max_residual();
        return {ok, d.str()};
    });

    // 2. n = 3 closed-form certificates at desk scale
    gate.run("criterion 2: 200 random n=3 instances, closed form + solver", [&]() -> std::pair<bool, std::string> {
        SplitMix64 rng(20240001);
        int bad = 0;
        std::ostringstream d;
        for (int trial = 0; trial < 200; ++trial) {
            const QapInstance raw = random_integer_instance(3, rng, -3, 3);
            const QapInstance inst = relabel(raw, brute_force_qap(raw).best_sigma);
            const BruteForceResult bf = brute_force_qap(inst);
            const SolverReport rep = solve_relaxation(build_relaxation(inst), opts.solve);
            const Certificate cert = construct_n3(inst);
            const CertificateReport crep = verify_certificate(inst, cert);
            const bool ok = rep.converged && std::fabs(rep.objective - bf.best_value) <= 1e-4 &&
                            crep.valid && std::fabs(crep.req1_margin) <= 1e-8;
            if (!ok && bad++ < 3)
                d << "trial " << trial << ": sdp " << rep.objective << " bf " << bf.best_value
                  << " valid " << crep.valid << " r1 " << crep.req1_margin << "; ";
        }
        return {bad == 0, d.str()};
    });

    // 3. graph sweeps at n = 3, 4, 5: every pair exact, every pair certified
    for (int n : {3, 4, 5}) {
        gate.run("criterion 3: graph sweep n=" + std::to_string(n), [&, n]() -> std::pair<bool, std::string> {
            const ExperimentReport rep = run_graph_experiment(n, PairMode::WithSelf, opts);
            const int classes = static_cast<int>(enumerate_graphs(n).size());
            std::ostringstream d;
            d << rep.instance_count << " pairs with self-pairs (distinct: " << rep.instance_count - classes
              << "), " << rep.exact_count << " exact, " << rep.certified_count << " certified";
            const bool ok =
                rep.exact_count == rep.instance_count && rep.certified_count == rep.instance_count;
            if (!ok)
                for (const auto& r : rep.records)
                    if (!r.exact || !r.certified)
                        d << "; " << r.label << " exact=" << r.exact << " cert=" << r.certificate_status;
            return {ok, d.str()};
        });
    }

    // 4. the n = 6 sweep (hours): target 94.5% exact, 99.2% of exact certified
    if (full) {
        gate.run("criterion 4: graph sweep n=6 (full)", [&]() -> std::pair<bool, std::string> {
            ExperimentOptions o = opts;
            o.shard_index = shard_index;
            o.shard_count = shard_count;
            const ExperimentReport rep = run_graph_experiment(6, PairMode::WithSelf, o);
            const double exact_pct = 100.0 * rep.exact_count / std::max(1, rep.instance_count);
            const double cert_pct = 100.0 * rep.certified_count / std::max(1, rep.exact_count);
            std::ostringstream d;
            d << rep.instance_count << " pairs, " << rep.exact_count << " exact (" << exact_pct << "%), "
              << rep.certified_count << " certified (" << cert_pct << "% of exact)";
            if (shard_count > 1) {
                d << " [shard " << shard_index << "/" << shard_count << ": rates are partial]";
                return {true, d.str()};
            }
            const bool ok = std::fabs(exact_pct - 94.5) <= 1.0 && std::fabs(cert_pct - 99.2) <= 1.0;
            return {ok, d.str()};
        });
    } else {
        gate.skip("criterion 4: graph sweep n=6", "hours-long; run with --full [--shard i/m]");
    }

    // 5. distance-matrix trials at reduced scale
    {
        const double table_cert_pct[4] = {100.0, 100.0, 100.0, 98.0};
        for (int n = 3; n <= 6; ++n) {
            gate.run("criterion 5: distance trials n=" + std::to_string(n), [&, n]() -> std::pair<bool, std::string> {
                const ExperimentReport rep = run_distance_experiment(n, 25, 20240000 + n, opts);
                const double exact_pct = 100.0 * rep.exact_count / std::max(1, rep.instance_count);
                const double cert_pct = 100.0 * rep.certified_count / std::max(1, rep.exact_count);
                std::ostringstream d;
                d << rep.exact_count << "/25 exact (" << exact_pct << "%), " << rep.certified_count
                  << " certified (" << cert_pct << "% of exact)";
                const bool ok = exact_pct >= 90.0 && std::fabs(cert_pct - table_cert_pct[n - 3]) <= 10.0;
                return {ok, d.str()};
            });
        }
    }

    // 6. perturbation family
    gate.run("criterion 6: 100 perturbation-family instances", [&]() -> std::pair<bool, std::string> {
        SplitMix64 rng(20240006);
        int bad = 0;
        std::ostringstream d;
        for (int trial = 0; trial < 100; ++trial) {
            const int n = 4;
            Mat c(n, n), delta(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j) {
                    c(i, j) = c(j, i) = 2.0 * rng.next_double() - 1.0;
                    delta(i, j) = delta(j, i) = 2.0 * rng.next_double() - 1.0;
                }
            int guard = 0;
            while (!perturbation_condition_holds(c, delta) && guard++ < 80) delta *= 0.5;
            if (guard >= 80) {
                ++bad;
                continue;
            }
            const QapInstance inst = perturbation_instance(c, delta);
            const CertificateReport crep = verify_certificate(inst, construct_perturbation(c, delta));
            const SolverReport rep = solve_relaxation(build_relaxation(inst), opts.solve);
            const bool ok =
                crep.valid && rep.converged && std::fabs(rep.objective - identity_value(inst)) <= 1e-4;
            if (!ok && bad++ < 3)
                d << "trial " << trial << ": valid " << crep.valid << " sdp " << rep.objective << " id "
                  << identity_value(inst) << "; ";
        }
        return {bad == 0, d.str()};
    });

    // 7. subgraph family on 5 vertices
    gate.run("criterion 7: 100 subgraph-family instances", [&]() -> std::pair<bool, std::string> {
        SplitMix64 rng(20240007);
        int bad = 0;
        std::ostringstream d;
        for (int trial = 0; trial < 100; ++trial) {
            const int n = 5;
            Mat super_adj(n, n), sub_adj(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j)
                    if (rng.next_double() < 0.6) {
                        super_adj(i, j) = super_adj(j, i) = 1.0;
                        if (rng.next_double() < 0.6) sub_adj(i, j) = sub_adj(j, i) = 1.0;
                    }
            const Graph gb(n, super_adj), ga(n, sub_adj);
            const QapInstance inst = subgraph_instance(ga, gb);
            const CertificateReport crep = verify_certificate(inst, construct_subgraph(ga, gb));
            const SolverReport rep = solve_relaxation(build_relaxation(inst), opts.solve);
            const bool ok =
                crep.valid && rep.converged && std::fabs(rep.objective - identity_value(inst)) <= 1e-4;
            if (!ok && bad++ < 3)
                d << "trial " << trial << ": valid " << crep.valid << " conv " << rep.converged << " sdp "
                  << rep.objective << " id " << identity_value(inst) << "; ";
        }
        return {bad == 0, d.str()};
    });

    // 8. comonotone family with B = -A, A >= 0
    gate.run("criterion 8: 100 comonotone-family instances", [&]() -> std::pair<bool, std::string> {
        SplitMix64 rng(20240008);
        int bad = 0;
        std::ostringstream d;
        for (int trial = 0; trial < 100; ++trial) {
            const int n = 4;
            Mat a(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j) a(i, j) = a(j, i) = 3.0 * rng.next_double();
            Mat b = a;
            b *= -1.0;
            const QapInstance inst(a, b);
            const CertificateReport crep = verify_certificate(inst, construct_comonotone(inst));
            const SolverReport rep = solve_relaxation(build_relaxation(inst), opts.solve);
            const bool ok =
                crep.valid && rep.converged && std::fabs(rep.objective - identity_value(inst)) <= 1e-4;
            if (!ok && bad++ < 3)
                d << "trial " << trial << ": valid " << crep.valid << " sdp " << rep.objective << " id "
                  << identity_value(inst) << "; ";
        }
        return {bad == 0, d.str()};
    });

    // 9. redundancy of the arrow rows on all n = 3 and n = 4 pairs
    gate.run("criterion 9: arrow-variant agreement and implied marginals", [&]() -> std::pair<bool, std::string> {
        std::ostringstream d;
        int bad = 0;
        for (int n : {3, 4}) {
            const auto graphs = enumerate_graphs(n);
            for (size_t a = 0; a < graphs.size(); ++a)
                for (size_t b = a; b < graphs.size(); ++b) {
                    Mat bm = graphs[b].adj;
                    bm *= -1.0;
                    const QapInstance inst(graphs[a].adj, bm);
                    const ConicProblem std_prob = build_relaxation(inst);
                    const SolverReport std_rep = solve_relaxation(std_prob, opts.solve);
                    const SolverReport arrow_rep =
                        solve_relaxation(build_relaxation(inst, Variant::WithArrow), opts.solve);
                    double marg = 0.0;
                    const Mat x = extract_x(std_prob, std_rep.Y);
                    for (int j = 0; j < n; ++j)
                        for (int k = 0; k < n; ++k)
                            for (int l = 0; l < n; ++l) {
                                double s1 = 0.0, s2 = 0.0;
                                for (int i = 0; i < n; ++i) {
                                    s1 += std_rep.Y(pair_index(i, j, n), pair_index(k, l, n));
                                    s2 += std_rep.Y(pair_index(j, i, n), pair_index(k, l, n));
                                }
                                marg = std::max({marg, std::fabs(s1 - x(k, l)), std::fabs(s2 - x(k, l))});
                            }
                    const bool ok = std_rep.converged && arrow_rep.converged &&
                                    std::fabs(std_rep.objective - arrow_rep.objective) <= 1e-4 &&
                                    marg <= 1e-4;
                    if (!ok && bad++ < 3)
                        d << "n=" << n << " g" << a + 1 << "-g" << b + 1 << ": std " << std_rep.objective
                          << " arrow " << arrow_rep.objective << " marg " << marg << "; ";
                }
        }
        return {bad == 0, d.str()};
    });

    // 10. geometry: eigenvalue formula, PSD sequence, 1/k decay
    gate.run("criterion 10: geometry example", [&]() -> std::pair<bool, std::string> {
        const GeometricExample g = geometric_example();
        const Mat e = Mat::ones(4, 4);
        std::ostringstream d;
        bool ok = true;
        for (double s : {-10.0, -5.0, -1.0, 0.0, 0.5, 1.0, 5.0, 10.0}) {
            Mat m = g.P_small;
            m *= -1.0;
            Mat se = e;
            se *= s;
            m += se;
            if (std::fabs(min_eigenvalue(m) - geometric_min_eig_formula(s)) > 1e-8) {
                ok = false;
                d << "formula mismatch at s=" << s << "; ";
            }
        }
        Vec u(4, 0.0);
        u[1] = -1.0;
        const Mat target = s_sequence_target(u, 0, 1);
        double dev1 = 0.0, dev1000 = 0.0;
        for (double k : {1.0, 10.0, 100.0, 1000.0}) {
            const SSequenceStep step = s_sequence(u, 0, 1, k);
            const Mat slack = s_sequence_slack(step);
            if (min_eigenvalue(slack) < -1e-9 * (1.0 + slack.max_abs())) {
                ok = false;
                d << "sequence emission at k=" << k << " not PSD; ";
            }
            Mat diff = step.P;
            diff -= target;
            if (k == 1.0) dev1 = diff.max_abs();
            if (k == 1000.0) dev1000 = diff.max_abs();
        }
        if (!(dev1000 < 0.01 * dev1)) {
            ok = false;
            d << "deviation at k=1000 is " << dev1000 << " vs " << dev1 << " at k=1; ";
        }
        return {ok, d.str()};
    });

    // 11. property suites
    gate.run("criterion 11a: requirement-3 assignment vs n! enumeration", [&]() -> std::pair<bool, std::string> {
        SplitMix64 rng(20241101);
        for (int trial = 0; trial < 200; ++trial) {
            const int n = 2 + trial % 5;  // 2..6
            Certificate cert(n);
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j)
                    for (int k = 0; k < n; ++k) {
                        cert.u(i, j)[k] = 2.0 * rng.next_double() - 1.0;
                        cert.v(i, j)[k] = 2.0 * rng.next_double() - 1.0;
                    }
            const double lap = requirement3_margin(cert);
            const double enumd = req3_by_enumeration(cert);
            if (std::fabs(lap - enumd) > 1e-10)
                return {false, "margin mismatch at trial " + std::to_string(trial)};
        }
        return {true, ""};
    });

    gate.run("criterion 11b: psd_project idempotence and Lipschitz, 500 matrices", [&]() -> std::pair<bool, std::string> {
        SplitMix64 rng(20241102);
        for (int trial = 0; trial < 250; ++trial) {
            const int m = 2 + trial % 9;
            Mat s1(m, m), s2(m, m);
            for (int i = 0; i < m; ++i)
                for (int j = i; j < m; ++j) {
                    s1(i, j) = s1(j, i) = 4.0 * rng.next_double() - 2.0;
                    s2(i, j) = s2(j, i) = 4.0 * rng.next_double() - 2.0;
                }
            const Mat p1 = psd_project(s1), p2 = psd_project(s2);
            Mat again = psd_project(p1);
            again -= p1;
            if (again.frob_norm() > 1e-10 * (1.0 + p1.frob_norm()))
                return {false, "idempotence failed at trial " + std::to_string(trial)};
            Mat dp = p1;
            dp -= p2;
            Mat ds = s1;
            ds -= s2;
            if (dp.frob_norm() > ds.frob_norm() + 1e-10)
                return {false, "Lipschitz failed at trial " + std::to_string(trial)};
        }
        return {true, ""};
    });

    gate.run("criterion 11c: solve_lap vs enumeration up to n=6", [&]() -> std::pair<bool, std::string> {
        SplitMix64 rng(20241103);
        for (int trial = 0; trial < 120; ++trial) {
            const int n = 2 + trial % 5;
            Mat k(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) k(i, j) = rng.next_int(-30, 30);
            std::vector<int> perm(n);
            for (int i = 0; i < n; ++i) perm[i] = i;
            double best = 1e300;
            do {
                double c = 0.0;
                for (int i = 0; i < n; ++i) c += k(i, perm[i]);
                best = std::min(best, c);
            } while (std::next_permutation(perm.begin(), perm.end()));
            if (solve_lap(k).cost != best) return {false, "mismatch at trial " + std::to_string(trial)};
        }
        return {true, ""};
    });

    gate.run("criterion 11d: solve_lp vs vertex-enumeration oracle, 200 LPs", [&]() -> std::pair<bool, std::string> {
        SplitMix64 rng(20241104);
        int feasible_seen = 0, infeasible_seen = 0;
        for (int trial = 0; trial < 200; ++trial) {
            const int n = 3 + trial % 2;
            LinearProgram lp;
            lp.num_vars = n;
            lp.objective.assign(n, 0.0);
            for (int j = 0; j < n; ++j) lp.objective[j] = rng.next_int(-4, 4);
            const int rows = 2 + rng.next_int(0, 4);
            for (int r = 0; r < rows; ++r) {
                Vec a(n, 0.0);
                for (int j = 0; j < n; ++j) a[j] = rng.next_int(-3, 3);
                const double b = rng.next_int(-6, 6);
                if (rng.next_double() < 0.25)
                    lp.eq_constraints.emplace_back(std::move(a), b);
                else
                    lp.ineq_constraints.emplace_back(std::move(a), b);
            }
            lp.var_bounds.assign(n, {-5.0, 5.0});

            // oracle: enumerate vertices of the boxed polytope
            std::vector<std::pair<Vec, double>> pool;
            for (const auto& [a, b] : lp.eq_constraints) pool.push_back({a, b});
            for (const auto& [a, b] : lp.ineq_constraints) pool.push_back({a, b});
            for (int j = 0; j < n; ++j) {
                Vec lo(n, 0.0), hi(n, 0.0);
                lo[j] = 1.0;
                hi[j] = 1.0;
                pool.push_back({lo, -5.0});
                pool.push_back({hi, 5.0});
            }
            bool any = false;
            double best = 0.0;
            std::vector<int> pick;
            std::function<void(int)> rec = [&](int start) {
                if (static_cast<int>(pick.size()) == n) {
                    Mat aa(n, n);
                    Vec bb(n);
                    for (int t = 0; t < n; ++t) {
                        for (int j = 0; j < n; ++j) aa(t, j) = pool[pick[t]].first[j];
                        bb[t] = pool[pick[t]].second;
                    }
                    bool singular = false;
                    for (int c = 0; c < n && !singular; ++c) {
                        int piv = -1;
                        double mx = 1e-9;
                        for (int r = c; r < n; ++r)
                            if (std::fabs(aa(r, c)) > mx) {
                                mx = std::fabs(aa(r, c));
                                piv = r;
                            }
                        if (piv < 0) {
                            singular = true;
                            break;
                        }
                        for (int j = 0; j < n; ++j) std::swap(aa(c, j), aa(piv, j));
                        std::swap(bb[c], bb[piv]);
                        for (int r = 0; r < n; ++r) {
                            if (r == c) continue;
                            const double f = aa(r, c) / aa(c, c);
                            if (f == 0.0) continue;
                            for (int j = c; j < n; ++j) aa(r, j) -= f * aa(c, j);
                            bb[r] -= f * bb[c];
                        }
                    }
                    if (!singular) {
                        Vec x(n, 0.0);
                        for (int c = 0; c < n; ++c) x[c] = bb[c] / aa(c, c);
                        bool feas = true;
                        for (const auto& [arow, brhs] : lp.eq_constraints)
                            if (std::fabs(dot(arow, x) - brhs) > 1e-7) feas = false;
                        for (const auto& [arow, brhs] : lp.ineq_constraints)
                            if (dot(arow, x) - brhs > 1e-7) feas = false;
                        for (int j = 0; j < n; ++j)
                            if (x[j] < -5.0 - 1e-7 || x[j] > 5.0 + 1e-7) feas = false;
                        if (feas) {
                            const double obj = dot(lp.objective, x);
                            if (!any || obj < best) {
                                any = true;
                                best = obj;
                            }
                        }
                    }
                    return;
                }
                for (int id = start; id < static_cast<int>(pool.size()); ++id) {
                    pick.push_back(id);
                    rec(id + 1);
                    pick.pop_back();
                }
            };
            rec(0);

            const LpOutcome out = solve_lp(lp);
            if (any) {
                ++feasible_seen;
                if (out.status != LpStatus::Optimal)
                    return {false, "status mismatch (feasible) at trial " + std::to_string(trial)};
                if (std::fabs(out.objective_value - best) > 1e-6)
                    return {false, "optimum mismatch at trial " + std::to_string(trial)};
            } else {
                ++infeasible_seen;
                if (out.status != LpStatus::Infeasible)
                    return {false, "status mismatch (infeasible) at trial " + std::to_string(trial)};
            }
        }
        return {true,
                std::to_string(feasible_seen) + " feasible / " + std::to_string(infeasible_seen) + " infeasible"};
    });

    gate.run("criterion 11e: Slater point margin on 100 random instances", [&]() -> std::pair<bool, std::string> {
        SplitMix64 rng(20241105);
        for (int trial = 0; trial < 100; ++trial) {
            const int n = 2 + trial % 5;
            Mat a(n, n), b(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j) {
                    a(i, j) = a(j, i) = 4.0 * rng.next_double() - 2.0;
                    b(i, j) = b(j, i) = 4.0 * rng.next_double() - 2.0;
                }
            const QapInstance inst(a, b);
            const DualPoint dp = slater_point(inst);
            if (min_eigenvalue(dual_slack(dp, inst)) < 1.0 - 1e-9)
                return {false, "margin below 1 at trial " + std::to_string(trial)};
        }
        return {true, ""};
    });

    std::printf("\n%s: %d criterion(s) failed%s\n", gate.failed == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL",
                gate.failed, gate.skipped ? " (some skipped)" : "");
    return gate.failed;
}
