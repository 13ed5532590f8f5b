#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "qapcert/core.hpp"
#include "qapcert/matrix.hpp"

namespace qapcert {

struct AssignmentResult {
    Permutation sigma;  // row i assigned to column sigma(i)
    double cost;        // sum_i K(i, sigma(i)), the global minimum
};

/// Exact linear assignment via the O(n^3) Hungarian method with potentials.
/// Deterministic: scans rows and columns in index order, so ties break the
/// same way on every run.
inline AssignmentResult solve_lap(const Mat& k) {
    if (!k.square()) throw std::invalid_argument("solve_lap: cost matrix not square");
    if (!k.all_finite()) throw std::invalid_argument("solve_lap: cost matrix has NaN/Inf");
    const int n = k.rows();
    const double inf = std::numeric_limits<double>::infinity();

    // 1-based arrays; p[j] = row matched to column j, column 0 is the staging slot
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::fill(minv.begin(), minv.end(), inf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            double delta = inf;
            int j1 = 0;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = k(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    std::vector<int> map(n);
    for (int j = 1; j <= n; ++j) map[p[j] - 1] = j - 1;
    double cost = 0.0;
    for (int i = 0; i < n; ++i) cost += k(i, map[i]);
    return AssignmentResult{Permutation(std::move(map)), cost};
}

/// Nearest permutation to a doubly-stochastic-like matrix:
/// argmin over sigma of sum_i (1 - X(i, sigma(i))).
inline Permutation round_to_permutation(const Mat& x) {
    if (!x.square()) throw std::invalid_argument("round_to_permutation: not square");
    const int n = x.rows();
    Mat cost(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) cost(i, j) = 1.0 - x(i, j);
    return solve_lap(cost).sigma;
}

}  // namespace qapcert
