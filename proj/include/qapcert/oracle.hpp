#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <set>
#include <stdexcept>
#include <vector>

#include "qapcert/core.hpp"

namespace qapcert {

/// Simple undirected graph as a 0/1 adjacency matrix, zero diagonal.
struct Graph {
    int n = 0;
    Mat adj;

    Graph() = default;
    Graph(int nn, const Mat& a) : n(nn), adj(a) {
        if (!a.square() || a.rows() != nn) throw std::invalid_argument("Graph: bad adjacency shape");
        for (int i = 0; i < nn; ++i) {
            if (a(i, i) != 0.0) throw std::invalid_argument("Graph: nonzero diagonal");
            for (int j = 0; j < nn; ++j) {
                if (a(i, j) != 0.0 && a(i, j) != 1.0) throw std::invalid_argument("Graph: entries must be 0/1");
                if (a(i, j) != a(j, i)) throw std::invalid_argument("Graph: adjacency not symmetric");
            }
        }
    }

    int edge_count() const {
        int e = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (adj(i, j) != 0.0) ++e;
        return e;
    }
};

namespace detail {

// Edge set packed into bits in (i,j) i<j lexicographic order.
inline uint32_t graph_to_mask(const Graph& g) {
    uint32_t mask = 0;
    int bit = 0;
    for (int i = 0; i < g.n; ++i)
        for (int j = i + 1; j < g.n; ++j, ++bit)
            if (g.adj(i, j) != 0.0) mask |= (1u << bit);
    return mask;
}

inline Graph mask_to_graph(uint32_t mask, int n) {
    Mat a(n, n);
    int bit = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j, ++bit)
            if (mask & (1u << bit)) a(i, j) = a(j, i) = 1.0;
    return Graph(n, a);
}

inline uint32_t relabel_mask(uint32_t mask, int n, const std::vector<int>& perm) {
    Mat a(n, n);
    int bit = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j, ++bit)
            if (mask & (1u << bit)) a(perm[i], perm[j]) = a(perm[j], perm[i]) = 1.0;
    uint32_t out = 0;
    bit = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j, ++bit)
            if (a(i, j) != 0.0) out |= (1u << bit);
    return out;
}

inline uint32_t canonical_mask(uint32_t mask, int n) {
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    uint32_t best = mask;
    do {
        best = std::min(best, relabel_mask(mask, n, perm));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

// Order-independent 64-bit digest of a multiset of reals. Values are
// quantized at 1e-9 so bit-level noise cannot flip the hash.
inline uint64_t multiset_hash_accumulate(uint64_t acc, double value) {
    const double q = std::round(value * 1e9);
    uint64_t z = static_cast<uint64_t>(static_cast<int64_t>(q));
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    z = z ^ (z >> 31);
    return acc + z;  // wrap-add keeps it order-independent
}

}  // namespace detail

/// Lexicographically minimal relabeling over all n! permutations.
/// Two graphs are isomorphic iff their canonical forms are equal.
inline Graph canonical_form(const Graph& g) {
    if (g.n > 6) throw std::invalid_argument("canonical_form: n > 6 not supported");
    return detail::mask_to_graph(detail::canonical_mask(detail::graph_to_mask(g), g.n), g.n);
}

/// One representative per isomorphism class, ordered by (edge count, canonical
/// bit pattern). Exact by exhaustion; n <= 6 keeps both loops trivial.
inline std::vector<Graph> enumerate_graphs(int n) {
    if (n < 1 || n > 6) throw std::invalid_argument("enumerate_graphs: need 1 <= n <= 6");
    const int bits = n * (n - 1) / 2;
    std::set<uint32_t> canon;
    for (uint32_t mask = 0; mask < (1u << bits); ++mask) canon.insert(detail::canonical_mask(mask, n));
    std::vector<uint32_t> sorted(canon.begin(), canon.end());
    std::stable_sort(sorted.begin(), sorted.end(), [](uint32_t a, uint32_t b) {
        const int pa = std::popcount(a), pb = std::popcount(b);
        return pa != pb ? pa < pb : a < b;
    });
    std::vector<Graph> out;
    out.reserve(sorted.size());
    for (uint32_t mask : sorted) out.push_back(detail::mask_to_graph(mask, n));
    return out;
}

/// Identity-labeled containment: every edge of g1 is an edge of g2.
inline bool is_subgraph(const Graph& g1, const Graph& g2) {
    if (g1.n != g2.n) throw std::invalid_argument("is_subgraph: size mismatch");
    for (int i = 0; i < g1.n; ++i)
        for (int j = 0; j < g1.n; ++j)
            if (g1.adj(i, j) > g2.adj(i, j)) return false;
    return true;
}

struct BruteForceResult {
    Permutation best_sigma;
    double best_value = 0;
    uint64_t value_multiset_hash = 0;  // digest over all n! objective values
};

/// Exhaustive QAP minimum in lexicographic permutation order; the reported
/// optimum is the lexicographically first one. Trust anchor: no pruning.
inline BruteForceResult brute_force_qap(const QapInstance& inst) {
    const int n = inst.n();
    if (n > 10) throw std::invalid_argument("brute_force_qap: n > 10 refused (n! too large)");
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> best_perm = perm;
    uint64_t hash = 0;
    const Mat& a = inst.A();
    const Mat& b = inst.B();
    do {
        double val = 0.0;
        for (int i = 0; i < n; ++i) {
            const int pi = perm[i];
            for (int j = 0; j < n; ++j) val += a(i, j) * b(pi, perm[j]);
        }
        hash = detail::multiset_hash_accumulate(hash, val);
        if (val < best) {
            best = val;
            best_perm = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return BruteForceResult{Permutation(std::move(best_perm)), best, hash};
}

}  // namespace qapcert
