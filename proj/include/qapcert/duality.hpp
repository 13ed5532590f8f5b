#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "qapcert/assignment.hpp"
#include "qapcert/certify.hpp"
#include "qapcert/core.hpp"
#include "qapcert/linalg.hpp"

namespace qapcert {

/// A point (G, H, Z) of the dual program; feasible when
/// A kron B + G kron E + E kron H - Z is PSD and Z has the required signs.
struct DualPoint {
    Mat G;  // n x n
    Mat H;  // n x n
    Mat Z;  // n^2 x n^2
};

/// f(x, G, H, Z) = x^T (A kron B + G kron E + E kron H - Z) x - <G + H, E>.
inline double dual_objective(const Vec& x, const DualPoint& dp, const QapInstance& inst) {
    const int n = inst.n();
    const int nn = n * n;
    if (static_cast<int>(x.size()) != nn || dp.G.rows() != n || dp.H.rows() != n || dp.Z.rows() != nn)
        throw std::invalid_argument("dual_objective: dimension mismatch");
    const Mat e = Mat::ones(n, n);
    Mat m = kron(inst.A(), inst.B());
    m += kron(dp.G, e);
    m += kron(e, dp.H);
    m -= dp.Z;
    double quad = 0.0;
    for (int p = 0; p < nn; ++p) {
        double row = 0.0;
        for (int q = 0; q < nn; ++q) row += m(p, q) * x[q];
        quad += x[p] * row;
    }
    double ge = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) ge += dp.G(i, j) + dp.H(i, j);
    return quad - ge;
}

/// Strictly feasible dual point: t = max(0, -lambda_min(A kron B)), G = 0,
/// H = (t+2) E, Z = (t+2) E - (t+1) I, so the dual slack matrix collapses to
/// A kron B + (t+1) I, which dominates the identity.
inline DualPoint slater_point(const QapInstance& inst) {
    const int n = inst.n();
    const int nn = n * n;
    const double t = std::max(0.0, -min_eigenvalue(kron(inst.A(), inst.B())));
    DualPoint dp;
    dp.G = Mat(n, n);
    dp.H = Mat::ones(n, n);
    dp.H *= t + 2.0;
    dp.Z = Mat::ones(nn, nn);
    dp.Z *= t + 2.0;
    Mat id = Mat::identity(nn);
    id *= t + 1.0;
    dp.Z -= id;
    return dp;
}

/// The slack matrix A kron B + G kron E + E kron H - Z of a dual point.
inline Mat dual_slack(const DualPoint& dp, const QapInstance& inst) {
    const int n = inst.n();
    const Mat e = Mat::ones(n, n);
    Mat m = kron(inst.A(), inst.B());
    m += kron(dp.G, e);
    m += kron(e, dp.H);
    m -= dp.Z;
    return m;
}

/// P[(i,k),(j,l)] = u^(ij)_k + u^(ij)_l + v^(kl)_i + v^(kl)_j. Entrywise this
/// equals the ordered Kronecker sum
///   (1/2) sum_{i,j} (E_ij + E_ji) kron (u 1^T + 1 u^T) + (v 1^T + 1 v^T) kron (E_ij + E_ji),
/// each summand of which lies in the cone S.
inline Mat build_P(const Certificate& cert) {
    const int n = cert.n();
    const int nn = n * n;
    Mat p(nn, nn);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                    p(pair_index(i, k, n), pair_index(j, l, n)) = cert.pair_value(i, j, k, l);
    return p;
}

/// Same matrix assembled through the Kronecker-sum route; used as the
/// independent check against the entrywise formula.
inline Mat build_P_kron(const Certificate& cert) {
    const int n = cert.n();
    const int nn = n * n;
    const Vec one(n, 1.0);
    Mat p(nn, nn);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Mat eij(n, n);
            eij(i, j) += 1.0;
            eij(j, i) += 1.0;
            Mat mu = outer(cert.u(i, j), one);
            mu += outer(one, cert.u(i, j));
            Mat mv = outer(cert.v(i, j), one);
            mv += outer(one, cert.v(i, j));
            Mat term = kron(eij, mu);
            term += kron(mv, eij);
            term *= 0.5;
            p += term;
        }
    return p;
}

/// One element of the sequence certifying (E_ij + E_ji) kron (u 1^T + 1 u^T)
/// in cl{ X : G kron E + E kron H + X PSD }. G_k kron E + E kron H_k + P_k is
/// a nonnegative combination of rank-one matrices, hence PSD by construction,
/// and ||P_k - P||_inf decays like 1/k.
struct SSequenceStep {
    Mat G, H;  // n x n
    Mat P;     // n^2 x n^2 (the P_k term)
};

inline Mat s_sequence_target(const Vec& u, int i, int j) {
    const int n = static_cast<int>(u.size());
    const Vec one(n, 1.0);
    Mat m = outer(u, one);
    m += outer(one, u);
    Mat eij(n, n);
    eij(i, j) += 1.0;
    eij(j, i) += 1.0;
    return kron(eij, m);
}

inline SSequenceStep s_sequence(const Vec& u, int i, int j, double k) {
    const int n = static_cast<int>(u.size());
    if (i < 0 || j < 0 || i >= n || j >= n) throw std::invalid_argument("s_sequence: bad indices");
    if (k < 1.0) throw std::invalid_argument("s_sequence: need k >= 1");
    const int nn = n * n;
    const Vec one(n, 1.0);
    const Mat e = Mat::ones(n, n);
    Mat m = outer(u, one);
    m += outer(one, u);

    SSequenceStep step;
    if (i != j) {
        Vec a(n), b(n);
        for (int t = 0; t < n; ++t) {
            a[t] = 1.0 - u[t] / k;
            b[t] = 1.0 + u[t] / k;
        }
        Vec v1(nn, 0.0), v2(nn, 0.0), v3(nn, 0.0);
        for (int blk = 0; blk < n; ++blk)
            for (int t = 0; t < n; ++t) {
                const int at = blk * n + t;
                if (blk == i) {
                    v1[at] = a[t];
                    v3[at] = b[t];
                } else if (blk == j) {
                    v1[at] = -a[t];
                    v3[at] = b[t];
                } else {
                    v2[at] = a[t];
                    v3[at] = -b[t];
                }
            }
        Mat vk = outer(v1, v1);
        vk *= 2.0;
        Mat t2 = outer(v2, v2);
        t2 *= 2.0;
        vk += t2;
        vk += outer(v3, v3);
        vk *= k / 4.0;

        // blocks touching exactly one of {i,j} carry -k/4; everything else +3k/4
        // except the (i,j) block at -k/4
        step.G = Mat(n, n);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) {
                const bool ri = (r == i || r == j), ci = (c == i || c == j);
                double val;
                if (ri && ci)
                    val = (r == c) ? 3.0 : -1.0;
                else if (ri || ci)
                    val = -1.0;
                else
                    val = 3.0;
                step.G(r, c) = val * k / 4.0;
            }
        step.H = m;
        step.H *= -0.25;
        step.P = vk;
        step.P -= kron(step.G, e);
        step.P -= kron(e, step.H);
    } else {
        // rank-one case, scaled so P_k converges to (E_ii + E_ii) kron M = 2 E_ii kron M
        Vec v(nn, 0.0);
        for (int t = 0; t < n; ++t) v[i * n + t] = 1.0 + u[t] / k;
        Mat vk = outer(v, v);
        vk *= 2.0 * k;
        step.G = Mat(n, n);
        step.G(i, i) = 2.0 * k;
        step.H = Mat(n, n);
        step.P = vk;
        step.P -= kron(step.G, e);
    }
    return step;
}

inline Mat s_sequence_slack(const SSequenceStep& step) {
    const int n = step.G.rows();
    const Mat e = Mat::ones(n, n);
    Mat s = kron(step.G, e);
    s += kron(e, step.H);
    s += step.P;
    return s;
}

/// P of the certificate lies in T iff <P_sigma - I, K> >= 0 for every
/// permutation; the Birkhoff reduction turns that into one assignment solve.
struct TMembership {
    bool member = false;
    double margin = 0.0;
};

inline TMembership t_membership(const Certificate& cert, double tol = 1e-9) {
    TMembership t;
    t.margin = requirement3_margin(cert);
    t.member = t.margin >= -tol;
    return t;
}

/// The 4-vertex pair whose dual feasible set is not closed, together with the
/// block matrix bigP and Z = A kron B - bigP.
struct GeometricExample {
    QapInstance inst;
    Mat P_small;  // 4 x 4, equal to -(e2 1^T + 1 e2^T)
    Mat bigP;     // 16 x 16
    Mat Z;        // 16 x 16
    Certificate cert;  // u^(12) = u^(34) = -e2, the families behind bigP
};

inline GeometricExample geometric_example() {
    const int n = 4;
    Mat a(n, n), badj(n, n);
    const int aedges[2][2] = {{0, 1}, {2, 3}};
    for (auto& e : aedges) a(e[0], e[1]) = a(e[1], e[0]) = 1.0;
    const int bedges[2][2] = {{0, 1}, {1, 2}};
    for (auto& e : bedges) badj(e[0], e[1]) = badj(e[1], e[0]) = 1.0;
    Mat b = badj;
    b *= -1.0;
    QapInstance inst(a, b);

    Vec u(n, 0.0);
    u[1] = -1.0;  // -e2
    Certificate cert(n);
    cert.u(0, 1) = u;
    cert.u(2, 3) = u;

    GeometricExample g{inst, Mat(n, n), Mat(), Mat(), cert};
    const Vec one(n, 1.0);
    g.P_small = outer(u, one);
    g.P_small += outer(one, u);
    g.bigP = build_P(cert);
    g.Z = kron(a, b);
    g.Z -= g.bigP;
    return g;
}

/// lambda_min(-P + s E) for the geometric example equals
/// 2s + 1 - 2 sqrt(s^2 + s + 1), which stays negative for every s since
/// (2s+1)^2 < 4(s^2+s+1).
inline double geometric_min_eig_formula(double s) { return 2.0 * s + 1.0 - 2.0 * std::sqrt(s * s + s + 1.0); }

}  // namespace qapcert
