#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "qchaos/classical.hpp"

using namespace qchaos;

namespace {

const SymplecticMatrix S_DEGI = degi_matrix();
const SymplecticMatrix S_CAT = cat_matrix();

void expect_point(PhasePoint got, double x, double p, double tol = 1e-15) {
    EXPECT_NEAR(got.x, x, tol);
    EXPECT_NEAR(got.p, p, tol);
}

// q-rational points fixed by S^n, by exhaustive search.
std::set<std::pair<long long, long long>> brute_fixed(const SymplecticMatrix& S, long long n, long long q) {
    const SymplecticMatrix P = S.pow(n);
    std::set<std::pair<long long, long long>> out;
    for (long long i = 0; i < q; ++i)
        for (long long j = 0; j < q; ++j) {
            const long long x = mod_int(mod_int(P.a, q) * i + mod_int(P.b, q) * j, q);
            const long long p = mod_int(mod_int(P.c, q) * i + mod_int(P.d, q) * j, q);
            if (x == i && p == j) out.emplace(i, j);
        }
    return out;
}

}  // namespace

TEST(PhasePoint, ReducedModOne) {
    const PhasePoint a(1.25, -0.25);
    EXPECT_DOUBLE_EQ(a.x, 0.25);
    EXPECT_DOUBLE_EQ(a.p, 0.75);
    const PhasePoint b(-1e-20, 3.0);
    EXPECT_GE(b.x, 0.0);
    EXPECT_LT(b.x, 1.0);
    EXPECT_EQ(b.p, 0.0);
}

TEST(CatApply, Examples) {
    expect_point(cat_apply(S_CAT, {0.0, 0.0}), 0.0, 0.0);
    expect_point(cat_apply(S_CAT, {0.5, 0.5}), 0.0, 0.5);
    const long long q = 97;
    for (int i = 0; i < q; i += 7)
        for (int j = 0; j < q; j += 5) {
            const PhasePoint y = cat_apply(S_DEGI, {double(i) / q, double(j) / q});
            EXPECT_NEAR(y.x * q, std::round(y.x * q), 1e-9);
            EXPECT_NEAR(y.p * q, std::round(y.p * q), 1e-9);
            EXPECT_EQ(std::llround(y.x * q) % q, mod_int(2 * i + j, q));
            EXPECT_EQ(std::llround(y.p * q) % q, mod_int(3 * i + 2 * j, q));
        }
}

TEST(BakerApply, Examples) {
    expect_point(baker_apply({0.25, 0.5}), 0.5, 0.25);
    expect_point(baker_apply({0.75, 0.0}), 0.5, 0.5);
    expect_point(baker_apply({0.0, 0.0}), 0.0, 0.0);
    expect_point(baker_apply({0.5, 0.0}), 0.0, 0.5);  // left-closed second branch
    for (double x : {0.1, 0.49, 0.5, 0.9})
        for (double p : {0.0, 0.3, 0.7}) {
            const PhasePoint y = baker_inverse(baker_apply({x, p}));
            EXPECT_NEAR(y.x, x, 1e-15);
            EXPECT_NEAR(y.p, p, 1e-15);
        }
}

TEST(Maps, AreaPreservation) {
    constexpr int B = 32;
    constexpr long long n = 1000000;
    for (const ClassicalMap& map : {ClassicalMap::cat(S_CAT), ClassicalMap::cat(S_DEGI), ClassicalMap::baker()}) {
        Rng rng(17, "area", 0);
        std::vector<long long> bins(B * B, 0);
        for (long long s = 0; s < n; ++s) {
            const PhasePoint y = map.apply({rng.uniform(), rng.uniform()});
            ++bins[std::min(B - 1, int(y.x * B)) * B + std::min(B - 1, int(y.p * B))];
        }
        const double mu = double(n) / (B * B);
        for (long long c : bins) EXPECT_LT(std::abs(c - mu), 4.0 * std::sqrt(mu) + 1.0) << map.name();
    }
}

TEST(Maps, PerturbedCatInverse) {
    const ClassicalMap m = ClassicalMap::perturbed_cat(S_DEGI, 0.1, TorusObservable::cos_mode(1, 0) + TorusObservable::cos_mode(0, 1));
    for (double x : {0.1, 0.37, 0.8}) {
        const PhasePoint y = m.apply_inverse(m.apply({x, 0.6}));
        EXPECT_LT(torus_distance(y, {x, 0.6}), 1e-6);  // RK4 at step 1/400
    }
}

TEST(Maps, HamiltonianFlowOfMomentumCosine) {
    // H = cos 2 pi p: dx/dt = -2 pi sin 2 pi p, p constant
    const TorusObservable H = TorusObservable::cos_mode(0, 1);
    const PhasePoint y = hamiltonian_flow(H, 0.3, {0.2, 0.1});
    EXPECT_NEAR(y.p, 0.1, 1e-14);
    EXPECT_NEAR(y.x, mod1(0.2 - 0.3 * 2.0 * kPi * std::sin(2.0 * kPi * 0.1)), 1e-12);
}

TEST(Birkhoff, CatAverageConverges) {
    const ClassicalMap m = ClassicalMap::cat(S_CAT);
    const long long T = 100000;
    Rng rng(3, "birkhoff", 0);
    for (int trial = 0; trial < 3; ++trial) {
        PhasePoint X(rng.uniform(), rng.uniform());
        double s = 0.0;
        for (long long t = 0; t < T; ++t) {
            s += std::cos(2.0 * kPi * X.x);
            X = m.apply(X);
        }
        EXPECT_LT(std::abs(s / T), 5.0 / std::sqrt(double(T)));
    }
}

TEST(FixedPoints, CatExamples) {
    const FixedPointSet one = fixed_points(S_CAT, 1);
    EXPECT_EQ(one.count, 1);
    ASSERT_EQ(one.points.size(), 1u);
    expect_point(one.points[0], 0.0, 0.0);
    EXPECT_EQ(fixed_points(S_CAT, 2).count, 5);
    EXPECT_THROW(fixed_points(SymplecticMatrix::identity(), 1), DomainError);
    EXPECT_THROW(fixed_points(SymplecticMatrix(0, -1, 1, 0), 4), DomainError);
}

TEST(FixedPoints, MatchBruteForce) {
    for (const SymplecticMatrix& S : {S_CAT, S_DEGI, SymplecticMatrix(1, 2, 2, 5)})
        for (long long n = 1; n <= 6; ++n) {
            const FixedPointSet fp = fixed_points(S, n);
            const SymplecticMatrix P = S.pow(n);
            const long long det = std::llabs((P.a - 1) * (P.d - 1) - P.b * P.c);
            EXPECT_EQ(fp.count, det);
            ASSERT_EQ(static_cast<long long>(fp.points.size()), det);
            if (det > 3000) continue;
            const auto brute = brute_fixed(S, n, det);
            const std::set<std::pair<long long, long long>> got(fp.numerators.begin(), fp.numerators.end());
            EXPECT_EQ(got, brute) << S.str() << " n=" << n;
            for (const PhasePoint& x : fp.points) EXPECT_LT(torus_distance(ClassicalMap::cat(S).iterate(x, n), x), 1e-9);
        }
}

TEST(Lyapunov, ClosedForms) {
    EXPECT_NEAR(lyapunov(S_CAT), 0.962424, 1e-6);
    EXPECT_NEAR(lyapunov(S_CAT), std::log((3.0 + std::sqrt(5.0)) / 2.0), 1e-15);
    EXPECT_NEAR(lyapunov(S_DEGI), 1.316958, 1e-6);
    EXPECT_NEAR(lyapunov(S_DEGI), std::log(2.0 + std::sqrt(3.0)), 1e-15);
    EXPECT_DOUBLE_EQ(lyapunov(S_DEGI.inverse()), lyapunov(S_DEGI));
    EXPECT_THROW(lyapunov(SymplecticMatrix(1, 1, 0, 1)), DomainError);
}

TEST(Correlation, CatExact) {
    const ClassicalMap m = ClassicalMap::cat(S_CAT);
    const TorusObservable f = TorusObservable::cos_mode(1, 0);
    EXPECT_EQ(correlation(m, f, f, 1).value, 0.0);
    EXPECT_TRUE(correlation(m, f, f, 1).exact);
    EXPECT_NEAR(correlation(m, f, f, 0).value, 0.5, 1e-15);
    const TorusObservable c = TorusObservable::constant(2.0);
    for (int t = 0; t < 4; ++t) EXPECT_EQ(correlation(m, c, c, t).value, 0.0);
    // f = g = cos 2 pi x + cos 2 pi (x + p): (S^T) (1,0) = (1,1), so C(1) = 1/2
    const TorusObservable h = TorusObservable::cos_mode(1, 0) + TorusObservable::cos_mode(1, 1);
    EXPECT_NEAR(correlation(m, h, h, 1).value, 0.5, 1e-15);
}

TEST(Correlation, BakerMonteCarlo) {
    // C_{f,g}(1) with f = cos 2 pi p, g = sin 2 pi x sin 2 pi p equals 8 / (3 pi^2) by direct integration
    const TorusObservable f = TorusObservable::cos_mode(0, 1);
    const TorusObservable g = TorusObservable::cos_mode(1, -1, 0.5) + TorusObservable::cos_mode(1, 1, -0.5);
    const CorrelationEstimate e = correlation(ClassicalMap::baker(), f, g, 1, {5, 200000, 0.0});
    EXPECT_GT(e.stderr_, 0.0);
    EXPECT_FALSE(e.exact);
    EXPECT_LT(std::abs(e.value - 8.0 / (3.0 * kPi * kPi)), 5.0 * e.stderr_);
    EXPECT_TRUE(correlation(ClassicalMap::baker(), f, g, 1, {5, 1000, 1e-6}).flagged);
}

TEST(ClassicalVariance, CatExactAndStable) {
    const ClassicalMap m = ClassicalMap::cat(S_DEGI);
    const TorusObservable f = TorusObservable::cos_mode(1, 0);
    const ClassicalVariance v5 = classical_variance(m, f, 5);
    const ClassicalVariance v10 = classical_variance(m, f, 10);
    EXPECT_NEAR(v5.value, 0.5, 1e-15);
    EXPECT_LT(std::abs(v10.value - v5.value), 1e-12);
    EXPECT_LT(v5.remainder_bound, 1e-12);
    EXPECT_EQ(classical_variance(m, TorusObservable::constant(1.0), 5).value, 0.0);
}

TEST(ClassicalVariance, OrbitEstimatorAtZeroKick) {
    // the Monte Carlo path at eps = 0 must agree with the exact cat answer
    const ClassicalMap m = ClassicalMap::perturbed_cat(S_DEGI, 0.0, TorusObservable::cos_mode(1, 0));
    const TorusObservable f = TorusObservable::cos_mode(1, 0);
    const ClassicalVariance v = classical_variance(m, f, 6, {9, 40000, 0.0});
    ASSERT_EQ(v.series.size(), 7u);
    EXPECT_NEAR(v.series[0].value, 0.5, 5.0 * v.series[0].stderr_ + 1e-12);
    for (int t = 1; t <= 6; ++t) EXPECT_LT(std::abs(v.series[t].value), 5.0 * v.series[t].stderr_);
    EXPECT_LT(std::abs(v.value - 0.5), 5.0 * v.stderr_);
}
