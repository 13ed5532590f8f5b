#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "qapcert/matrix.hpp"

namespace qapcert {

/// minimize objective . x
///   subject to  eq:   a . x  = rhs
///               ineq: a . x <= rhs
///               per-variable optional bounds
struct LinearProgram {
    int num_vars = 0;
    Vec objective;  // empty means pure feasibility
    std::vector<std::pair<Vec, double>> eq_constraints;
    std::vector<std::pair<Vec, double>> ineq_constraints;
    std::vector<std::pair<std::optional<double>, std::optional<double>>> var_bounds;

    void require_well_formed() const {
        if (num_vars <= 0) throw std::invalid_argument("LinearProgram: num_vars must be positive");
        if (!objective.empty() && static_cast<int>(objective.size()) != num_vars)
            throw std::invalid_argument("LinearProgram: objective length mismatch");
        auto check = [&](const std::vector<std::pair<Vec, double>>& rows) {
            for (const auto& [a, b] : rows) {
                if (static_cast<int>(a.size()) != num_vars)
                    throw std::invalid_argument("LinearProgram: row length mismatch");
                if (!std::isfinite(b)) throw std::invalid_argument("LinearProgram: non-finite rhs");
                for (double c : a)
                    if (!std::isfinite(c)) throw std::invalid_argument("LinearProgram: non-finite coefficient");
            }
        };
        check(eq_constraints);
        check(ineq_constraints);
        if (!var_bounds.empty() && static_cast<int>(var_bounds.size()) != num_vars)
            throw std::invalid_argument("LinearProgram: bounds length mismatch");
    }
};

enum class LpStatus { Optimal, Infeasible, Unbounded, Failed };

struct LpOutcome {
    LpStatus status = LpStatus::Failed;
    Vec point;                   // valid when status == Optimal
    double objective_value = 0;  // valid when status == Optimal
    double max_violation = 0;    // constraint violation of the returned point
};

namespace detail {

// Dense tableau simplex over min c.x s.t. Ax = b, x >= 0. Ratio tests run on
// a deterministically perturbed rhs column (carried alongside the true one),
// which breaks the degenerate ties these certificate LPs are full of; the
// reported solution always comes from the unperturbed column. Dantzig pricing
// up to a pivot budget, Bland afterwards as the anti-cycling backstop.
class SimplexTableau {
public:
    SimplexTableau(std::vector<Vec> rows, Vec rhs, int ncols)
        : m_(static_cast<int>(rows.size())), ncols_(ncols), a_(std::move(rows)), b_(rhs), bp_(std::move(rhs)) {
        basis_.assign(m_, -1);
        for (int r = 0; r < m_; ++r) {
            // multiplicative + absolute jitter, deterministic in the row index
            uint64_t z = static_cast<uint64_t>(r) + 0x9e3779b97f4a7c15ull;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
            const double jitter = 1e-7 * (1.0 + static_cast<double>(z % 1024) / 1024.0);
            bp_[r] = b_[r] * (1.0 + 1e-10) + jitter;
        }
    }

    int m() const { return m_; }
    int basis(int r) const { return basis_[r]; }
    void set_basis(int r, int col) { basis_[r] = col; }
    double coeff(int r, int c) const { return a_[r][c]; }

    void pivot(int r, int s) {
        const double inv = 1.0 / a_[r][s];
        for (int j = 0; j < ncols_; ++j) a_[r][j] *= inv;
        b_[r] *= inv;
        bp_[r] *= inv;
        a_[r][s] = 1.0;
        for (int i = 0; i < m_; ++i) {
            if (i == r) continue;
            const double f = a_[i][s];
            if (f == 0.0) continue;
            double* ai = a_[i].data();
            const double* ar = a_[r].data();
            for (int j = 0; j < ncols_; ++j) ai[j] -= f * ar[j];
            ai[s] = 0.0;
            b_[i] -= f * b_[r];
            bp_[i] -= f * bp_[r];
        }
        basis_[r] = s;
    }

    Vec reduced_costs(const Vec& c) const {
        Vec y(m_);
        for (int i = 0; i < m_; ++i) y[i] = c[basis_[i]];
        Vec rc(ncols_);
        for (int j = 0; j < ncols_; ++j) rc[j] = c[j];
        for (int i = 0; i < m_; ++i) {
            const double yi = y[i];
            if (yi == 0.0) continue;
            const double* ai = a_[i].data();
            for (int j = 0; j < ncols_; ++j) rc[j] -= yi * ai[j];
        }
        return rc;
    }

    double objective(const Vec& c) const {
        double s = 0.0;
        for (int i = 0; i < m_; ++i) s += c[basis_[i]] * b_[i];
        return s;
    }

    Vec solution() const {
        Vec x(ncols_, 0.0);
        for (int i = 0; i < m_; ++i) x[basis_[i]] = std::max(0.0, b_[i]);
        return x;
    }

    template <class Allowed>
    LpStatus run(const Vec& c, long pivot_cap, long dantzig_cap, const Allowed& allowed) {
        constexpr double rc_eps = 1e-9;
        constexpr double piv_eps = 1e-11;
        for (long it = 0; it < pivot_cap; ++it) {
            const Vec rc = reduced_costs(c);
            int s = -1;
            if (it < dantzig_cap) {
                double best = -rc_eps;
                for (int j = 0; j < ncols_; ++j)
                    if (allowed(j) && rc[j] < best) {
                        best = rc[j];
                        s = j;
                    }
            } else {
                for (int j = 0; j < ncols_; ++j)
                    if (allowed(j) && rc[j] < -rc_eps) {
                        s = j;
                        break;
                    }
            }
            if (s < 0) return LpStatus::Optimal;

            // ratio test on the perturbed column
            int r = -1;
            double best_ratio = 0.0;
            for (int i = 0; i < m_; ++i) {
                const double ais = a_[i][s];
                if (ais <= piv_eps) continue;
                const double ratio = bp_[i] / ais;
                if (r < 0 || ratio < best_ratio - 1e-15 ||
                    (ratio < best_ratio + 1e-15 && basis_[i] < basis_[r])) {
                    r = i;
                    best_ratio = ratio;
                }
            }
            if (r < 0) return LpStatus::Unbounded;
            pivot(r, s);
        }
        return LpStatus::Failed;
    }

private:
    int m_, ncols_;
    std::vector<Vec> a_;
    Vec b_;   // true rhs in the current basis
    Vec bp_;  // perturbed rhs driving the ratio test
    std::vector<int> basis_;
};

}  // namespace detail

/// Two-phase dense simplex. Rows whose slack can seed the basis skip their
/// artificial. Infeasibility is declared only when the phase-1 optimum stays
/// above 1e-9 (scaled); pivot-cap exhaustion reports Failed rather than
/// guessing.
inline LpOutcome solve_lp(const LinearProgram& prog) {
    prog.require_well_formed();
    const int nv = prog.num_vars;

    // Variable transform to x' >= 0:
    //   lower bound l:        x = l + x'
    //   upper bound only u:   x = u - x'
    //   free:                 x = x'+ - x'-
    // Upper bounds of low-bounded variables become inequality rows.
    struct VarMap {
        int col = -1;
        int neg_col = -1;
        double shift = 0.0;
        double sign = 1.0;
    };
    std::vector<VarMap> vmap(nv);
    int ncols = 0;
    std::vector<std::pair<Vec, double>> extra_ineq;
    for (int j = 0; j < nv; ++j) {
        std::optional<double> lo, hi;
        if (!prog.var_bounds.empty()) {
            lo = prog.var_bounds[j].first;
            hi = prog.var_bounds[j].second;
        }
        if (lo && hi && *hi < *lo) return LpOutcome{LpStatus::Infeasible, {}, 0.0, 0.0};
        if (lo) {
            vmap[j] = {ncols++, -1, *lo, 1.0};
            if (hi) {
                Vec row(nv, 0.0);
                row[j] = 1.0;
                extra_ineq.emplace_back(std::move(row), *hi);
            }
        } else if (hi) {
            vmap[j] = {ncols++, -1, *hi, -1.0};
        } else {
            vmap[j] = {ncols, ncols + 1, 0.0, 1.0};
            ncols += 2;
        }
    }

    auto transform_row = [&](const Vec& a, double rhs, int width) {
        Vec row(width, 0.0);
        double b = rhs;
        for (int j = 0; j < nv; ++j) {
            const double c = a[j];
            if (c == 0.0) continue;
            b -= c * vmap[j].shift;
            row[vmap[j].col] += c * vmap[j].sign;
            if (vmap[j].neg_col >= 0) row[vmap[j].neg_col] -= c;
        }
        return std::make_pair(std::move(row), b);
    };

    const int n_ineq = static_cast<int>(prog.ineq_constraints.size() + extra_ineq.size());
    const int n_rows = static_cast<int>(prog.eq_constraints.size()) + n_ineq;
    const int total_cols = ncols + n_ineq + n_rows;  // structurals, slacks, artificials

    std::vector<Vec> rows;
    Vec rhs;
    std::vector<int> seed_basis;  // initial basic column per row
    rows.reserve(n_rows);
    rhs.reserve(n_rows);
    const int slack_base = ncols;
    const int art_base = ncols + n_ineq;
    int slack_at = 0;
    int n_art = 0;
    auto push_row = [&](Vec row, double b, bool is_ineq) {
        row.resize(total_cols, 0.0);
        int slack_col = -1;
        if (is_ineq) {
            slack_col = slack_base + slack_at++;
            row[slack_col] = 1.0;
        }
        bool flipped = false;
        if (b < 0.0) {
            for (double& x : row) x = -x;
            b = -b;
            flipped = true;
        }
        if (is_ineq && !flipped) {
            seed_basis.push_back(slack_col);  // slack seeds the basis, no artificial
        } else {
            const int art = art_base + n_art++;
            row[art] = 1.0;
            seed_basis.push_back(art);
        }
        rows.push_back(std::move(row));
        rhs.push_back(b);
    };
    for (const auto& [a, b] : prog.eq_constraints) {
        auto [row, bb] = transform_row(a, b, ncols);
        push_row(std::move(row), bb, false);
    }
    for (const auto& [a, b] : prog.ineq_constraints) {
        auto [row, bb] = transform_row(a, b, ncols);
        push_row(std::move(row), bb, true);
    }
    for (const auto& [a, b] : extra_ineq) {
        auto [row, bb] = transform_row(a, b, ncols);
        push_row(std::move(row), bb, true);
    }

    double rhs_scale = 1.0;
    for (double b : rhs) rhs_scale = std::max(rhs_scale, std::fabs(b));

    detail::SimplexTableau tab(std::move(rows), std::move(rhs), total_cols);
    for (int r = 0; r < tab.m(); ++r) tab.set_basis(r, seed_basis[r]);

    Vec phase1(total_cols, 0.0);
    for (int c = art_base; c < art_base + n_art; ++c) phase1[c] = 1.0;

    const long dantzig_cap = 50L * (tab.m() + total_cols);
    const long pivot_cap = 2000L * (tab.m() + total_cols) + 20000;

    if (n_art > 0) {
        LpStatus st = tab.run(phase1, pivot_cap, dantzig_cap, [](int) { return true; });
        if (st == LpStatus::Failed) return LpOutcome{LpStatus::Failed, {}, 0.0, 0.0};
        if (tab.objective(phase1) > 1e-9 * rhs_scale) return LpOutcome{LpStatus::Infeasible, {}, 0.0, 0.0};
        // drive leftover artificials out of the basis where possible
        for (int r = 0; r < tab.m(); ++r) {
            if (tab.basis(r) < art_base) continue;
            for (int j = 0; j < art_base; ++j)
                if (std::fabs(tab.coeff(r, j)) > 1e-9) {
                    tab.pivot(r, j);
                    break;
                }
        }
    }

    Vec cost(total_cols, 0.0);
    if (!prog.objective.empty()) {
        for (int j = 0; j < nv; ++j) {
            const double c = prog.objective[j];
            cost[vmap[j].col] += c * vmap[j].sign;
            if (vmap[j].neg_col >= 0) cost[vmap[j].neg_col] -= c;
        }
    }
    auto allowed = [&](int j) { return j < art_base; };
    LpStatus st = tab.run(cost, pivot_cap, dantzig_cap, allowed);
    if (st == LpStatus::Failed) return LpOutcome{LpStatus::Failed, {}, 0.0, 0.0};
    if (st == LpStatus::Unbounded) return LpOutcome{LpStatus::Unbounded, {}, 0.0, 0.0};

    const Vec xt = tab.solution();
    Vec x(nv, 0.0);
    for (int j = 0; j < nv; ++j) {
        double val = vmap[j].shift + vmap[j].sign * xt[vmap[j].col];
        if (vmap[j].neg_col >= 0) val -= xt[vmap[j].neg_col];
        x[j] = val;
    }

    double viol = 0.0;
    for (const auto& [a, b] : prog.eq_constraints) viol = std::max(viol, std::fabs(dot(a, x) - b));
    for (const auto& [a, b] : prog.ineq_constraints) viol = std::max(viol, dot(a, x) - b);
    if (!prog.var_bounds.empty())
        for (int j = 0; j < nv; ++j) {
            if (prog.var_bounds[j].first) viol = std::max(viol, *prog.var_bounds[j].first - x[j]);
            if (prog.var_bounds[j].second) viol = std::max(viol, x[j] - *prog.var_bounds[j].second);
        }

    double obj = 0.0;
    if (!prog.objective.empty()) obj = dot(prog.objective, x);
    return LpOutcome{LpStatus::Optimal, std::move(x), obj, viol};
}

}  // namespace qapcert
