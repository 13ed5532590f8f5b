#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "qapcert/matrix.hpp"

// Index conventions used throughout:
//  * internal indices are 0-based; file formats and reports are 1-based
//  * vec(X) is row-major: vec(X)[i*n + k] = X(i,k)
//  * (A kron B)[(i,k),(j,l)] = A(i,j) * B(k,l) under the same pairing
//  * the permutation matrix of sigma has a 1 in row i, column sigma(i)

namespace qapcert {

/// 1-based pair index: (i,k) -> (i-1)*n + k, the row-major vec position.
inline int idx(int i, int k, int n) {
    if (i < 1 || i > n || k < 1 || k > n) throw std::invalid_argument("idx: index out of range");
    return (i - 1) * n + k;
}

/// Inverse of idx: linear position in [1, n^2] back to the (i,k) pair.
inline std::pair<int, int> unidx(int p, int n) {
    if (p < 1 || p > n * n) throw std::invalid_argument("unidx: index out of range");
    return {(p - 1) / n + 1, (p - 1) % n + 1};
}

/// 0-based flavor used internally.
inline int pair_index(int i, int k, int n) { return i * n + k; }

class Permutation {
public:
    Permutation() = default;
    explicit Permutation(std::vector<int> map) : map_(std::move(map)) {
        std::vector<char> seen(map_.size(), 0);
        for (int v : map_) {
            if (v < 0 || v >= static_cast<int>(map_.size()) || seen[v])
                throw std::invalid_argument("Permutation: map is not a bijection");
            seen[v] = 1;
        }
    }
    static Permutation identity(int n) {
        std::vector<int> m(n);
        std::iota(m.begin(), m.end(), 0);
        return Permutation(std::move(m));
    }

    int size() const { return static_cast<int>(map_.size()); }
    int operator()(int i) const { return map_[i]; }
    const std::vector<int>& map() const { return map_; }

    Permutation inverse() const {
        std::vector<int> inv(map_.size());
        for (size_t i = 0; i < map_.size(); ++i) inv[map_[i]] = static_cast<int>(i);
        return Permutation(std::move(inv));
    }

    /// P(i, sigma(i)) = 1.
    Mat matrix() const {
        Mat p(size(), size());
        for (int i = 0; i < size(); ++i) p(i, map_[i]) = 1.0;
        return p;
    }

    bool operator==(const Permutation& o) const { return map_ == o.map_; }

private:
    std::vector<int> map_;
};

/// A QAP instance min_sigma sum_{i,j} A(i,j) B(sigma(i),sigma(j)).
/// Inputs are symmetrized on construction; material asymmetry is an error.
class QapInstance {
public:
    QapInstance(const Mat& a, const Mat& b) {
        if (!a.square() || !b.square() || a.rows() != b.rows())
            throw std::invalid_argument("QapInstance: A and B must be square of equal size");
        if (a.rows() < 1) throw std::invalid_argument("QapInstance: n must be >= 1");
        if (!a.all_finite() || !b.all_finite())
            throw std::invalid_argument("QapInstance: entries must be finite");
        const double tol_a = 1e-12 * std::max(1.0, a.max_abs());
        const double tol_b = 1e-12 * std::max(1.0, b.max_abs());
        if (a.max_asymmetry() > tol_a || b.max_asymmetry() > tol_b)
            throw std::invalid_argument("QapInstance: input matrix is not symmetric");
        a_ = symmetrized(a);
        b_ = symmetrized(b);
    }

    int n() const { return a_.rows(); }
    const Mat& A() const { return a_; }
    const Mat& B() const { return b_; }

private:
    Mat a_, b_;
};

inline double qap_objective(const QapInstance& inst, const Permutation& sigma) {
    const int n = inst.n();
    if (sigma.size() != n) throw std::invalid_argument("qap_objective: size mismatch");
    double s = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s += inst.A()(i, j) * inst.B()(sigma(i), sigma(j));
    return s;
}

/// The lifted pair (X, bigX) with bigX[(i,k),(j,l)] = X(i,k) * X(j,l).
struct LiftedPoint {
    Mat X;     // n x n
    Mat bigX;  // n^2 x n^2 symmetric
};

inline bool is_permutation_matrix(const Mat& p) {
    if (!p.square()) return false;
    const int n = p.rows();
    for (int i = 0; i < n; ++i) {
        int row_ones = 0;
        for (int j = 0; j < n; ++j) {
            if (p(i, j) == 1.0)
                ++row_ones;
            else if (p(i, j) != 0.0)
                return false;
        }
        if (row_ones != 1) return false;
    }
    for (int j = 0; j < n; ++j) {
        int col_ones = 0;
        for (int i = 0; i < n; ++i)
            if (p(i, j) == 1.0) ++col_ones;
        if (col_ones != 1) return false;
    }
    return true;
}

inline LiftedPoint lift(const Mat& p) {
    if (!is_permutation_matrix(p)) throw std::invalid_argument("lift: not a permutation matrix");
    const int n = p.rows();
    const int nn = n * n;
    Mat big(nn, nn);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            if (p(i, k) == 0.0) continue;
            for (int j = 0; j < n; ++j)
                for (int l = 0; l < n; ++l)
                    big(pair_index(i, k, n), pair_index(j, l, n)) = p(i, k) * p(j, l);
        }
    return LiftedPoint{p, std::move(big)};
}

inline LiftedPoint lift(const Permutation& sigma) { return lift(sigma.matrix()); }

/// Conjugate B by sigma so that relabeled B'(i,j) = B(sigma(i), sigma(j)).
/// If sigma is optimal for (A,B), the identity is optimal for the result,
/// and the multiset of objective values over all permutations is unchanged.
inline QapInstance relabel(const QapInstance& inst, const Permutation& sigma) {
    const int n = inst.n();
    if (sigma.size() != n) throw std::invalid_argument("relabel: size mismatch");
    Mat b2(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) b2(i, j) = inst.B()(sigma(i), sigma(j));
    return QapInstance(inst.A(), b2);
}

/// Row-major vec of an n x n matrix.
inline Vec rvec(const Mat& x) {
    Vec v(static_cast<size_t>(x.rows()) * x.cols());
    for (int i = 0; i < x.rows(); ++i)
        for (int k = 0; k < x.cols(); ++k) v[static_cast<size_t>(i) * x.cols() + k] = x(i, k);
    return v;
}

inline Mat unrvec(const Vec& v, int rows, int cols) {
    if (static_cast<int>(v.size()) != rows * cols) throw std::invalid_argument("unrvec: size mismatch");
    Mat x(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int k = 0; k < cols; ++k) x(i, k) = v[static_cast<size_t>(i) * cols + k];
    return x;
}

}  // namespace qapcert
