#include <catch2/catch_amalgamated.hpp>

#include "qapcert/duality.hpp"
#include "qapcert/rng.hpp"

using namespace qapcert;
using Catch::Approx;

namespace {

QapInstance random_instance(int n, SplitMix64& rng, double scale = 2.0) {
    Mat a(n, n), b(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            a(i, j) = a(j, i) = scale * (2.0 * rng.next_double() - 1.0);
            b(i, j) = b(j, i) = scale * (2.0 * rng.next_double() - 1.0);
        }
    return QapInstance(a, b);
}

Mat random_doubly_stochastic(int n, SplitMix64& rng) {
    Mat x(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) x(i, j) = rng.next_double() + 0.05;
    // Sinkhorn-style row/column normalization
    for (int sweep = 0; sweep < 200; ++sweep) {
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (int j = 0; j < n; ++j) s += x(i, j);
            for (int j = 0; j < n; ++j) x(i, j) /= s;
        }
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int i = 0; i < n; ++i) s += x(i, j);
            for (int i = 0; i < n; ++i) x(i, j) /= s;
        }
    }
    return x;
}

Certificate random_certificate(int n, SplitMix64& rng) {
    Certificate cert(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                cert.u(i, j)[k] = 2.0 * rng.next_double() - 1.0;
                cert.v(i, j)[k] = 2.0 * rng.next_double() - 1.0;
            }
    return cert;
}

}  // namespace

TEST_CASE("dual objective cancellation over doubly stochastic points") {
    SplitMix64 rng(1);
    const int n = 4;
    const QapInstance inst = random_instance(n, rng);
    DualPoint dp;
    dp.G = Mat(n, n);
    dp.H = Mat(n, n);
    dp.Z = Mat(n * n, n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            dp.G(i, j) = rng.next_double();
            dp.H(i, j) = rng.next_double();
        }
    for (int trial = 0; trial < 100; ++trial) {
        const Mat x = random_doubly_stochastic(n, rng);
        const Vec xv = rvec(x);
        const double f = dual_objective(xv, dp, inst);
        // G and H terms cancel: f = x^T (A kron B - Z) x
        const Mat ab = kron(inst.A(), inst.B());
        double direct = 0.0;
        for (int p = 0; p < n * n; ++p)
            for (int q = 0; q < n * n; ++q) direct += xv[p] * (ab(p, q) - dp.Z(p, q)) * xv[q];
        CHECK(f == Approx(direct).margin(1e-10 * (1.0 + std::fabs(direct))));
    }
}

TEST_CASE("dual objective with zero multipliers at the identity") {
    SplitMix64 rng(2);
    const int n = 3;
    const QapInstance inst = random_instance(n, rng);
    DualPoint dp{Mat(n, n), Mat(n, n), Mat(n * n, n * n)};
    double expect = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) expect += inst.A()(i, j) * inst.B()(i, j);
    CHECK(dual_objective(rvec(Mat::identity(n)), dp, inst) == Approx(expect).margin(1e-12));
}

TEST_CASE("dual objective matches an independent term-by-term expansion") {
    SplitMix64 rng(3);
    const int n = 3;
    const QapInstance inst = random_instance(n, rng);
    DualPoint dp{Mat(n, n), Mat(n, n), Mat(n * n, n * n)};
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            dp.G(i, j) = rng.next_double();
            dp.H(i, j) = rng.next_double();
        }
    for (int p = 0; p < n * n; ++p)
        for (int q = 0; q < n * n; ++q) dp.Z(p, q) = rng.next_double();
    const Permutation sigma({1, 2, 0});
    const Vec x = rvec(sigma.matrix());
    // expansion: sum over pairs of x_p M_pq x_q minus <G+H, E>
    const Mat m = dual_slack(dp, inst);
    double quad = 0.0;
    for (int p = 0; p < n * n; ++p)
        for (int q = 0; q < n * n; ++q) quad += x[p] * m(p, q) * x[q];
    double ge = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) ge += dp.G(i, j) + dp.H(i, j);
    CHECK(dual_objective(x, dp, inst) == Approx(quad - ge).margin(1e-12));
}

TEST_CASE("slater point is strictly feasible with unit margin") {
    SplitMix64 rng(4);
    // zero instance: t = 0 and the slack matrix is exactly I
    const QapInstance zero(Mat(3, 3), Mat(3, 3));
    const DualPoint dz = slater_point(zero);
    CHECK(min_eigenvalue(dual_slack(dz, zero)) == Approx(1.0).margin(1e-9));

    const GeometricExample g = geometric_example();
    CHECK(min_eigenvalue(dual_slack(slater_point(g.inst), g.inst)) >= 1.0 - 1e-9);

    for (int trial = 0; trial < 10; ++trial) {
        const int n = 2 + trial % 4;
        const QapInstance inst = random_instance(n, rng);
        const DualPoint dp = slater_point(inst);
        CHECK(min_eigenvalue(dual_slack(dp, inst)) >= 1.0 - 1e-9);
        // Z sign pattern: off-diagonal t+2 > 0, diagonal 1
        CHECK(dp.Z(0, 0) == Approx(1.0));
        if (n > 1) CHECK(dp.Z(0, 1) >= 2.0);
    }
}

TEST_CASE("build_P entrywise formula agrees with the Kronecker-sum route") {
    SplitMix64 rng(5);
    for (int n : {2, 3, 4}) {
        const Certificate cert = random_certificate(n, rng);
        Mat diff = build_P(cert);
        diff -= build_P_kron(cert);
        CHECK(diff.max_abs() <= 1e-12);
    }
}

TEST_CASE("geometry example block structure") {
    const GeometricExample g = geometric_example();
    // P_small is the printed 4x4 pattern
    Mat expect(4, 4);
    const double rows[4][4] = {{0, 1, 0, 0}, {1, 2, 1, 1}, {0, 1, 0, 0}, {0, 1, 0, 0}};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) expect(i, j) = -rows[i][j];
    Mat dp = g.P_small;
    dp -= expect;
    CHECK(dp.max_abs() == 0.0);

    // bigP carries P_small exactly on the (1,2), (2,1), (3,4), (4,3) blocks
    const int n = 4;
    for (int bi = 0; bi < n; ++bi)
        for (int bj = 0; bj < n; ++bj) {
            const bool active = (bi == 0 && bj == 1) || (bi == 1 && bj == 0) || (bi == 2 && bj == 3) ||
                                (bi == 3 && bj == 2);
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    const double v = g.bigP(pair_index(bi, k, n), pair_index(bj, l, n));
                    CHECK(v == (active ? g.P_small(k, l) : 0.0));
                }
        }
    // entry check of the block identity against the pair formula
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
            CHECK(g.bigP(pair_index(0, k, n), pair_index(1, l, n)) == g.P_small(k, l));
}

TEST_CASE("geometry example Z satisfies the sign and diagonal conditions") {
    const GeometricExample g = geometric_example();
    const int n = 4;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    const double z = g.Z(pair_index(i, k, n), pair_index(j, l, n));
                    if ((i != j && k != l) || (i == j && k == l)) CHECK(z >= -1e-12);
                    if (i == k && j == l) CHECK(std::fabs(g.Z(pair_index(i, i, n), pair_index(j, j, n))) <= 1e-12);
                }
    // the certificate behind bigP is in T with margin exactly zero
    const TMembership t = t_membership(g.cert);
    CHECK(t.member);
    CHECK(t.margin == Approx(0.0).margin(1e-12));
}

TEST_CASE("min eigenvalue of -P + sE matches the closed formula on the grid") {
    const GeometricExample g = geometric_example();
    const Mat e = Mat::ones(4, 4);
    for (double s : {-10.0, -5.0, -1.0, 0.0, 0.5, 1.0, 5.0, 10.0}) {
        Mat m = g.P_small;
        m *= -1.0;
        Mat se = e;
        se *= s;
        m += se;
        CHECK(min_eigenvalue(m) == Approx(geometric_min_eig_formula(s)).margin(1e-8));
        // the formula is negative for every s: (2s+1)^2 < 4(s^2+s+1)
        CHECK((2 * s + 1) * (2 * s + 1) < 4 * (s * s + s + 1));
        CHECK(geometric_min_eig_formula(s) < 0.0);
    }
}

TEST_CASE("eigenvector of -P + sE from the alpha/beta parameterization") {
    const GeometricExample g = geometric_example();
    const int n = 4;
    const Mat e = Mat::ones(n, n);
    for (double s : {-2.0, 0.0, 0.7, 3.0}) {
        Mat m = g.P_small;
        m *= -1.0;
        Mat se = e;
        se *= s;
        m += se;
        const double alpha = s + 1.0;
        const double beta = -2.0 * s - 2.0 * std::sqrt(s * s + s + 1.0);
        Vec v(n, alpha);
        v[1] += beta;
        const double lam = geometric_min_eig_formula(s);
        const Vec mv = matvec(m, v);
        double worst = 0.0;
        for (int i = 0; i < n; ++i) worst = std::max(worst, std::fabs(mv[i] - lam * v[i]));
        CHECK(worst <= 1e-9 * (1.0 + std::fabs(lam)));
    }
}

TEST_CASE("s_sequence emissions are PSD-feasible and converge to the target") {
    SplitMix64 rng(6);
    const int n = 4;
    Vec u(n);
    for (auto& x : u) x = 2.0 * rng.next_double() - 1.0;

    SECTION("distinct indices") {
        const Mat target = s_sequence_target(u, 0, 2);
        double dev1 = 0.0;
        double prev = 1e300;
        for (double k : {1.0, 10.0, 100.0, 1000.0}) {
            const SSequenceStep step = s_sequence(u, 0, 2, k);
            const Mat slack = s_sequence_slack(step);
            const double lam = min_eigenvalue(slack);
            CHECK(lam >= -1e-10 * (1.0 + slack.max_abs()));
            Mat diff = step.P;
            diff -= target;
            const double dev = diff.max_abs();
            if (k == 1.0) dev1 = dev;
            CHECK(dev <= prev);
            prev = dev;
            if (k == 1000.0) CHECK(dev < dev1 / 100.0);
        }
    }

    SECTION("equal indices") {
        const Mat target = s_sequence_target(u, 1, 1);
        double dev1 = 0.0;
        for (double k : {1.0, 10.0, 100.0, 1000.0}) {
            const SSequenceStep step = s_sequence(u, 1, 1, k);
            const double lam = min_eigenvalue(s_sequence_slack(step));
            CHECK(lam >= -1e-10 * (1.0 + step.P.max_abs() * k));
            Mat diff = step.P;
            diff -= target;
            if (k == 1.0) dev1 = diff.max_abs();
            if (k == 1000.0) CHECK(diff.max_abs() < dev1 / 100.0);
        }
    }

    SECTION("zero vector collapses the deviation at every k") {
        const Vec zero(n, 0.0);
        const Mat target = s_sequence_target(zero, 0, 1);
        CHECK(target.max_abs() == 0.0);
        for (double k : {1.0, 100.0}) {
            const SSequenceStep step = s_sequence(zero, 0, 1, k);
            CHECK(step.P.max_abs() <= 1e-12);
        }
    }
}

TEST_CASE("t_membership distinguishes favorable and adversarial certificates") {
    SplitMix64 rng(7);
    const int n = 4;
    // constant certificates sit on the boundary with margin zero
    Certificate constant(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            std::fill(constant.u(i, j).begin(), constant.u(i, j).end(), rng.next_double());
            std::fill(constant.v(i, j).begin(), constant.v(i, j).end(), rng.next_double());
        }
    const TMembership tc = t_membership(constant);
    CHECK(tc.member);
    CHECK(tc.margin == Approx(0.0).margin(1e-10));

    // an adversarial u makes a transposition strictly better than the identity
    Certificate adv(n);
    adv.u(0, 1)[0] = 1.0;  // K rewards sigma(0) = 1 over sigma(0) = 0
    adv.u(0, 1)[1] = -1.0;
    const TMembership ta = t_membership(adv);
    CHECK_FALSE(ta.member);
    CHECK(ta.margin < 0.0);
}
