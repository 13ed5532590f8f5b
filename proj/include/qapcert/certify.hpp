#pragma once

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qapcert/assignment.hpp"
#include "qapcert/core.hpp"
#include "qapcert/lp.hpp"
#include "qapcert/oracle.hpp"

namespace qapcert {

/// Vector families {u^(ij)} and {v^(kl)} with the symmetric-index convention
/// u^(ij) = u^(ji), v^(kl) = v^(lk); storage is one slot per unordered pair.
class Certificate {
public:
    Certificate() = default;
    explicit Certificate(int n)
        : n_(n), u_(n * (n + 1) / 2, Vec(n, 0.0)), v_(n * (n + 1) / 2, Vec(n, 0.0)) {
        if (n < 1) throw std::invalid_argument("Certificate: n must be >= 1");
    }

    int n() const { return n_; }

    Vec& u(int i, int j) { return u_[tri(i, j)]; }
    const Vec& u(int i, int j) const { return u_[tri(i, j)]; }
    Vec& v(int k, int l) { return v_[tri(k, l)]; }
    const Vec& v(int k, int l) const { return v_[tri(k, l)]; }

    /// LHS of Requirement 1 at the quadruple (i,j,k,l).
    double pair_value(int i, int j, int k, int l) const {
        return u(i, j)[k] + u(i, j)[l] + v(k, l)[i] + v(k, l)[j];
    }

private:
    int tri(int i, int j) const {
        if (i < 0 || j < 0 || i >= n_ || j >= n_) throw std::out_of_range("Certificate: bad index");
        if (i > j) std::swap(i, j);
        return i * n_ - i * (i - 1) / 2 + (j - i);
    }
    int n_ = 0;
    std::vector<Vec> u_, v_;
};

struct CertificateReport {
    double req1_margin = 0.0;    // min over the index set of A_ij B_kl - pair_value
    double req2_violation = 0.0; // max |pair_value(i,j,i,j) - A_ij B_ij|
    double req3_margin = 0.0;    // min over permutations of <P_sigma - I, K>
    double tol = 0.0;
    bool valid = false;
};

/// K(a,b) = 2 sum_j u^(bj)_a + 2 sum_j v^(aj)_b, so that
/// <P_sigma, K> = sum_{i,j} u^(ij)_{sigma(i)} + u^(ij)_{sigma(j)}
///              + v^(ij)_{sigma^-1(i)} + v^(ij)_{sigma^-1(j)}
/// where P_sigma maps e_i to e_{sigma(i)}.
inline Mat gradient_matrix(const Certificate& cert) {
    const int n = cert.n();
    Mat k(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            double s = 0.0;
            for (int j = 0; j < n; ++j) s += 2.0 * cert.u(b, j)[a] + 2.0 * cert.v(a, j)[b];
            k(a, b) = s;
        }
    return k;
}

inline double certificate_tolerance(const QapInstance& inst) {
    return 1e-7 * (1.0 + inst.A().max_abs() * inst.B().max_abs());
}

/// Requirement 3 margin via the Birkhoff reduction: the minimum of the linear
/// functional over permutations is a linear assignment problem, so no n!
/// enumeration is needed.
inline double requirement3_margin(const Certificate& cert) {
    const Mat k = gradient_matrix(cert);
    const int n = cert.n();
    Mat cost(n, n);
    for (int i = 0; i < n; ++i)
        for (int b = 0; b < n; ++b) cost(i, b) = k(b, i);  // sigma(i) = b contributes K(b,i)
    double trace = 0.0;
    for (int i = 0; i < n; ++i) trace += k(i, i);
    return solve_lap(cost).cost - trace;
}

inline CertificateReport verify_certificate(const QapInstance& inst, const Certificate& cert) {
    const int n = inst.n();
    if (cert.n() != n) throw std::invalid_argument("verify_certificate: dimension mismatch");
    CertificateReport rep;
    rep.tol = certificate_tolerance(inst);

    double margin1 = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    const bool in_set = (i != j && k != l) || (i == j && k == l);
                    if (!in_set) continue;
                    margin1 = std::min(margin1, inst.A()(i, j) * inst.B()(k, l) - cert.pair_value(i, j, k, l));
                }
    rep.req1_margin = margin1;

    double viol2 = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            viol2 = std::max(viol2, std::fabs(cert.pair_value(i, j, i, j) - inst.A()(i, j) * inst.B()(i, j)));
    rep.req2_violation = viol2;

    rep.req3_margin = requirement3_margin(cert);
    rep.valid = rep.req1_margin >= -rep.tol && rep.req2_violation <= rep.tol && rep.req3_margin >= -rep.tol;
    return rep;
}

/// n = 3 closed form. For distinct i, u^(ij) = A_ij * f with
/// f_k = (B_{ka} + B_{kb} - B_{ab})/4 over {a,b} = [3] \ {k}, and v mirrors it
/// with the roles of A and B swapped; diagonal families use
/// u^(ii)_j = A_ii B_jj / 4 and v^(ii)_j = A_jj B_ii / 4. Requirement 1 then
/// holds with equality on its whole index set, so validity is exactly
/// optimality of the identity.
inline Certificate construct_n3(const QapInstance& inst) {
    if (inst.n() != 3) throw std::invalid_argument("construct_n3: requires n = 3");
    const Mat& a = inst.A();
    const Mat& b = inst.B();
    Certificate cert(3);
    Vec f(3), g(3);
    for (int k = 0; k < 3; ++k) {
        const int p = (k + 1) % 3, q = (k + 2) % 3;
        f[k] = (b(k, p) + b(k, q) - b(p, q)) / 4.0;
        g[k] = (a(k, p) + a(k, q) - a(p, q)) / 4.0;
    }
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) {
            if (i == j) continue;
            for (int k = 0; k < 3; ++k) {
                cert.u(i, j)[k] = a(i, j) * f[k];
                cert.v(i, j)[k] = b(i, j) * g[k];
            }
        }
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) {
            cert.u(i, i)[k] = a(i, i) * b(k, k) / 4.0;
            cert.v(i, i)[k] = a(k, k) * b(i, i) / 4.0;
        }
    return cert;
}

/// Perturbation family for (A, B) = (C + Delta, -C + Delta): constant vectors
/// u^(ij) = -(C_ij + D_ij)^2/4 + D_ij^2/2, v^(kl) = -(-C_kl + D_kl)^2/4 + D_kl^2/2.
inline Certificate construct_perturbation(const Mat& c, const Mat& delta) {
    if (!c.square() || c.rows() != delta.rows() || !delta.square())
        throw std::invalid_argument("construct_perturbation: shape mismatch");
    const int n = c.rows();
    Certificate cert(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            const double uc = -std::pow(c(i, j) + delta(i, j), 2) / 4.0 + delta(i, j) * delta(i, j) / 2.0;
            const double vc = -std::pow(-c(i, j) + delta(i, j), 2) / 4.0 + delta(i, j) * delta(i, j) / 2.0;
            std::fill(cert.u(i, j).begin(), cert.u(i, j).end(), uc);
            std::fill(cert.v(i, j).begin(), cert.v(i, j).end(), vc);
        }
    return cert;
}

inline QapInstance perturbation_instance(const Mat& c, const Mat& delta) {
    Mat a = c;
    a += delta;
    Mat b = c;
    b *= -1.0;
    b += delta;
    return QapInstance(a, b);
}

/// Checks the perturbation condition 2(D_ij^2 + D_kl^2) <= (C_ij - C_kl + D_ij + D_kl)^2
/// on the Requirement-1 index set; slack absorbs the identical-pair equality case.
inline bool perturbation_condition_holds(const Mat& c, const Mat& delta, double slack = 1e-12) {
    const int n = c.rows();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    const bool in_set = (i != j && k != l) || (i == j && k == l);
                    if (!in_set) continue;
                    const double lhs = 2.0 * (delta(i, j) * delta(i, j) + delta(k, l) * delta(k, l));
                    const double rhs = std::pow(c(i, j) - c(k, l) + delta(i, j) + delta(k, l), 2);
                    if (lhs > rhs + slack * (1.0 + std::fabs(rhs))) return false;
                }
    return true;
}

/// Subgraph family for (A, B) = (adj_A, -adj_B): u^(ij) = -A_ij 1/2, v = 0.
inline Certificate construct_subgraph(const Graph& ga, const Graph& gb) {
    if (ga.n != gb.n) throw std::invalid_argument("construct_subgraph: size mismatch");
    const int n = ga.n;
    Certificate cert(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            std::fill(cert.u(i, j).begin(), cert.u(i, j).end(), -ga.adj(i, j) / 2.0);
    return cert;
}

inline QapInstance subgraph_instance(const Graph& ga, const Graph& gb) {
    Mat b = gb.adj;
    b *= -1.0;
    return QapInstance(ga.adj, b);
}

/// Comonotone family: u^(ij)_k = A_ij B_ij / 4, v^(kl)_i = A_kl B_kl / 4.
inline Certificate construct_comonotone(const QapInstance& inst) {
    const int n = inst.n();
    Certificate cert(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            const double w = inst.A()(i, j) * inst.B()(i, j) / 4.0;
            std::fill(cert.u(i, j).begin(), cert.u(i, j).end(), w);
            std::fill(cert.v(i, j).begin(), cert.v(i, j).end(), w);
        }
    return cert;
}

/// Decomposition M = -W + 1 p^T + q 1^T with W >= 0, diag(W) = 0, which
/// places M in the normal cone of the doubly stochastic polytope at I.
struct NormalConeDecomposition {
    Mat W;
    Vec p, q;
};

enum class SearchStatus { Found, Infeasible, Indeterminate };

struct NormalConeResult {
    SearchStatus status = SearchStatus::Indeterminate;
    NormalConeDecomposition decomposition;
};

inline NormalConeResult normal_cone_decompose(const Mat& m) {
    if (!m.square()) throw std::invalid_argument("normal_cone_decompose: not square");
    const int n = m.rows();
    // variables: W offdiag (n^2 - n, bounded >= 0), p (n), q (n)
    const int nw = n * n - n;
    LinearProgram lp;
    lp.num_vars = nw + 2 * n;
    std::map<std::pair<int, int>, int> wcol;
    int c = 0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (a != b) wcol[{a, b}] = c++;
    auto pcol = [&](int b) { return nw + b; };
    auto qcol = [&](int a) { return nw + n + a; };
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            Vec row(lp.num_vars, 0.0);
            if (a != b) row[wcol[{a, b}]] = -1.0;
            row[pcol(b)] += 1.0;
            row[qcol(a)] += 1.0;
            lp.eq_constraints.emplace_back(std::move(row), m(a, b));
        }
    lp.var_bounds.assign(lp.num_vars, {std::nullopt, std::nullopt});
    for (auto& [ab, col] : wcol) lp.var_bounds[col].first = 0.0;

    const LpOutcome out = solve_lp(lp);
    NormalConeResult res;
    if (out.status == LpStatus::Infeasible) {
        res.status = SearchStatus::Infeasible;
        return res;
    }
    if (out.status != LpStatus::Optimal) {
        res.status = SearchStatus::Indeterminate;
        return res;
    }
    res.status = SearchStatus::Found;
    res.decomposition.W = Mat(n, n);
    for (auto& [ab, col] : wcol) res.decomposition.W(ab.first, ab.second) = out.point[col];
    res.decomposition.p.assign(n, 0.0);
    res.decomposition.q.assign(n, 0.0);
    for (int b = 0; b < n; ++b) res.decomposition.p[b] = out.point[pcol(b)];
    for (int a = 0; a < n; ++a) res.decomposition.q[a] = out.point[qcol(a)];
    return res;
}

struct CertificateSearchResult {
    SearchStatus status = SearchStatus::Indeterminate;
    Certificate certificate;
    NormalConeDecomposition decomposition;
};

/// One feasibility LP over {u^(ij)_k}, {v^(kl)_i}, W, p, q:
///   (a) Requirement-1 inequalities on the full index set (deduped to
///       unordered pair representatives, which the symmetry convention allows),
///   (b) Requirement-2 equalities,
///   (c) -K = -W + 1 p^T + q 1^T entrywise, W >= 0, diag W = 0.
/// Feasibility yields a certificate whose Requirement 3 follows from the
/// normal-cone containment, so the verifier passes up to LP tolerance.
/// The caller must pass an instance whose QAP optimum sits at the identity.
inline CertificateSearchResult search_certificate(const QapInstance& inst) {
    const int n = inst.n();
    const int npairs = n * (n + 1) / 2;
    auto tri = [&](int i, int j) {
        if (i > j) std::swap(i, j);
        return i * n - i * (i - 1) / 2 + (j - i);
    };
    const int nu = npairs * n;
    const int nw = n * n - n;
    LinearProgram lp;
    lp.num_vars = 2 * nu + nw + 2 * n;
    auto ucol = [&](int i, int j, int k) { return tri(i, j) * n + k; };
    auto vcol = [&](int k, int l, int i) { return nu + tri(k, l) * n + i; };
    std::map<std::pair<int, int>, int> wcol;
    {
        int c = 0;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                if (a != b) wcol[{a, b}] = 2 * nu + c++;
    }
    auto pcol = [&](int b) { return 2 * nu + nw + b; };
    auto qcol = [&](int a) { return 2 * nu + nw + n + a; };

    // (a) i<j, k<l representatives plus the diagonal family
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = k + 1; l < n; ++l) {
                    Vec row(lp.num_vars, 0.0);
                    row[ucol(i, j, k)] += 1.0;
                    row[ucol(i, j, l)] += 1.0;
                    row[vcol(k, l, i)] += 1.0;
                    row[vcol(k, l, j)] += 1.0;
                    lp.ineq_constraints.emplace_back(std::move(row), inst.A()(i, j) * inst.B()(k, l));
                }
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            Vec row(lp.num_vars, 0.0);
            row[ucol(i, i, k)] += 2.0;
            row[vcol(k, k, i)] += 2.0;
            lp.ineq_constraints.emplace_back(std::move(row), inst.A()(i, i) * inst.B()(k, k));
        }
    // (b)
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            Vec row(lp.num_vars, 0.0);
            row[ucol(i, j, i)] += 1.0;
            row[ucol(i, j, j)] += 1.0;
            row[vcol(i, j, i)] += 1.0;
            row[vcol(i, j, j)] += 1.0;
            lp.eq_constraints.emplace_back(std::move(row), inst.A()(i, j) * inst.B()(i, j));
        }
    // (c) -K_ab + W_ab - p_b - q_a = 0 with K_ab = 2 sum_j u^(bj)_a + 2 sum_j v^(aj)_b
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            Vec row(lp.num_vars, 0.0);
            for (int j = 0; j < n; ++j) {
                row[ucol(b, j, a)] -= 2.0;
                row[vcol(a, j, b)] -= 2.0;
            }
            if (a != b) row[wcol[{a, b}]] += 1.0;
            row[pcol(b)] -= 1.0;
            row[qcol(a)] -= 1.0;
            lp.eq_constraints.emplace_back(std::move(row), 0.0);
        }
    lp.var_bounds.assign(lp.num_vars, {std::nullopt, std::nullopt});
    for (auto& [ab, col] : wcol) lp.var_bounds[col].first = 0.0;

    const LpOutcome out = solve_lp(lp);
    CertificateSearchResult res;
    if (out.status == LpStatus::Infeasible) {
        res.status = SearchStatus::Infeasible;
        return res;
    }
    if (out.status != LpStatus::Optimal) {
        res.status = SearchStatus::Indeterminate;
        return res;
    }
    res.status = SearchStatus::Found;
    res.certificate = Certificate(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                res.certificate.u(i, j)[k] = out.point[ucol(i, j, k)];
                res.certificate.v(i, j)[k] = out.point[vcol(i, j, k)];
            }
    res.decomposition.W = Mat(n, n);
    for (auto& [ab, col] : wcol) res.decomposition.W(ab.first, ab.second) = out.point[col];
    res.decomposition.p.assign(n, 0.0);
    res.decomposition.q.assign(n, 0.0);
    for (int b = 0; b < n; ++b) res.decomposition.p[b] = out.point[pcol(b)];
    for (int a = 0; a < n; ++a) res.decomposition.q[a] = out.point[qcol(a)];
    return res;
}

// --- serialization ---

inline nlohmann::json certificate_to_json(const Certificate& cert) {
    nlohmann::json u = nlohmann::json::object(), v = nlohmann::json::object();
    for (int i = 0; i < cert.n(); ++i)
        for (int j = i; j < cert.n(); ++j) {
            const std::string key = std::to_string(i + 1) + "," + std::to_string(j + 1);
            u[key] = cert.u(i, j);
            v[key] = cert.v(i, j);
        }
    return {{"n", cert.n()}, {"u", std::move(u)}, {"v", std::move(v)}};
}

inline Certificate certificate_from_json(const nlohmann::json& j) {
    Certificate cert(j.at("n").get<int>());
    for (auto& [key, val] : j.at("u").items()) {
        const size_t comma = key.find(',');
        const int i = std::stoi(key.substr(0, comma)) - 1;
        const int jj = std::stoi(key.substr(comma + 1)) - 1;
        cert.u(i, jj) = val.get<Vec>();
    }
    for (auto& [key, val] : j.at("v").items()) {
        const size_t comma = key.find(',');
        const int k = std::stoi(key.substr(0, comma)) - 1;
        const int l = std::stoi(key.substr(comma + 1)) - 1;
        cert.v(k, l) = val.get<Vec>();
    }
    return cert;
}

inline nlohmann::json report_to_json(const CertificateReport& rep) {
    return {{"req1_margin", rep.req1_margin},
            {"req2_violation", rep.req2_violation},
            {"req3_margin", rep.req3_margin},
            {"tol", rep.tol},
            {"valid", rep.valid}};
}

}  // namespace qapcert
