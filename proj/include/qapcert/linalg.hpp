#pragma once

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "qapcert/matrix.hpp"

namespace qapcert {

/// Eigenvalues ascending; vectors(:,t) is the eigenvector for values[t].
struct EigenDecomposition {
    Vec values;
    Mat vectors;
};

namespace detail {

inline double offdiag_frob(const Mat& s) {
    double acc = 0.0;
    for (int i = 0; i < s.rows(); ++i)
        for (int j = i + 1; j < s.cols(); ++j) acc += 2.0 * s(i, j) * s(i, j);
    return std::sqrt(acc);
}

// One cyclic Jacobi pass over the strict upper triangle of `a`,
// accumulating rotations into the columns of `v`.
inline void jacobi_sweep(Mat& a, Mat& v, double skip_tol) {
    const int m = a.rows();
    for (int p = 0; p < m - 1; ++p) {
        for (int q = p + 1; q < m; ++q) {
            const double apq = a(p, q);
            if (std::fabs(apq) <= skip_tol) continue;
            const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
            const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                             (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
            const double c = 1.0 / std::sqrt(t * t + 1.0);
            const double s = t * c;
            const double tau = s / (1.0 + c);
            const double app = a(p, p), aqq = a(q, q);
            a(p, p) = app - t * apq;
            a(q, q) = aqq + t * apq;
            a(p, q) = 0.0;
            a(q, p) = 0.0;
            for (int k = 0; k < m; ++k) {
                if (k == p || k == q) continue;
                const double akp = a(k, p), akq = a(k, q);
                a(k, p) = akp - s * (akq + tau * akp);
                a(p, k) = a(k, p);
                a(k, q) = akq + s * (akp - tau * akq);
                a(q, k) = a(k, q);
            }
            for (int k = 0; k < m; ++k) {
                const double vkp = v(k, p), vkq = v(k, q);
                v(k, p) = vkp - s * (vkq + tau * vkp);
                v(k, q) = vkq + s * (vkp - tau * vkq);
            }
        }
    }
}

inline void sort_ascending(Vec& w, Mat& v) {
    const int m = static_cast<int>(w.size());
    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return w[a] < w[b]; });
    Vec w2(m);
    Mat v2(v.rows(), v.cols());
    for (int t = 0; t < m; ++t) {
        w2[t] = w[order[t]];
        for (int k = 0; k < v.rows(); ++k) v2(k, t) = v(k, order[t]);
    }
    w = std::move(w2);
    v = std::move(v2);
}

}  // namespace detail

/// Cyclic Jacobi eigensolver. `basis` carries the eigenvector estimate between
/// calls on nearby matrices, which cuts the sweep count sharply inside
/// iterative solvers; default-constructed state starts cold.
class JacobiEigenSolver {
public:
    explicit JacobiEigenSolver(int max_sweeps = 100, double tol_factor = 1e-12)
        : max_sweeps_(max_sweeps), tol_factor_(tol_factor) {}

    EigenDecomposition decompose(const Mat& s) {
        if (!s.square()) throw std::invalid_argument("sym_eig: matrix not square");
        const int m = s.rows();
        const double scale = s.max_abs();
        if (s.max_asymmetry() > 1e-12 * std::max(1.0, scale))
            throw std::invalid_argument("sym_eig: matrix not symmetric");

        Mat a = s;
        Mat v = Mat::identity(m);
        if (warm_ && basis_.rows() == m) {
            // rotate into the previous eigenbasis; `a` is then near-diagonal
            a = basis_.transpose() * s * basis_;
            for (int i = 0; i < m; ++i)
                for (int j = i + 1; j < m; ++j) {
                    double avg = 0.5 * (a(i, j) + a(j, i));
                    a(i, j) = avg;
                    a(j, i) = avg;
                }
            v = basis_;
        }

        const double frob = s.frob_norm();
        const double stop = tol_factor_ * frob;
        bool done = (m <= 1) || detail::offdiag_frob(a) <= stop;
        for (int sweep = 0; sweep < max_sweeps_ && !done; ++sweep) {
            detail::jacobi_sweep(a, v, 0.1 * stop / std::max(1, m * m));
            done = detail::offdiag_frob(a) <= stop;
        }
        if (!done) throw std::runtime_error("sym_eig: Jacobi failed to converge within sweep cap");

        Vec w(m);
        for (int i = 0; i < m; ++i) w[i] = a(i, i);
        if (warm_) basis_ = v;  // unsorted basis is fine for warm starts
        detail::sort_ascending(w, v);
        return EigenDecomposition{std::move(w), std::move(v)};
    }

    void enable_warm_start() { warm_ = true; }

private:
    int max_sweeps_;
    double tol_factor_;
    bool warm_ = false;
    Mat basis_;
};

inline EigenDecomposition sym_eig(const Mat& s) {
    JacobiEigenSolver solver;
    return solver.decompose(s);
}

inline double min_eigenvalue(const Mat& s) { return sym_eig(s).values.front(); }

/// Frobenius-nearest PSD matrix: negative eigenvalues clamped to zero.
/// Eigenvalues within 1e-12 of zero are clamped as well to kill sign noise.
inline Mat psd_project(const Mat& s) {
    EigenDecomposition ed = sym_eig(s);
    const int m = s.rows();
    Mat r(m, m);
    for (int t = 0; t < m; ++t) {
        double w = ed.values[t];
        if (w <= 1e-12) continue;
        for (int i = 0; i < m; ++i) {
            const double wi = w * ed.vectors(i, t);
            for (int j = i; j < m; ++j) r(i, j) += wi * ed.vectors(j, t);
        }
    }
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < i; ++j) r(i, j) = r(j, i);
    return r;
}

}  // namespace qapcert
