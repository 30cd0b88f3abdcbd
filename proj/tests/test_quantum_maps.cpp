#include <gtest/gtest.h>

#include <cmath>

#include "qchaos/eigen_stats.hpp"
#include "qchaos/phase_space.hpp"
#include "qchaos/quantum_maps.hpp"

using namespace qchaos;

namespace {

const SymplecticMatrix S_DEGI = degi_matrix();
const SymplecticMatrix S_CAT = cat_matrix();

TorusObservable kick_h() { return TorusObservable::cos_mode(1, 0) + TorusObservable::cos_mode(0, 1); }

// Brute force: smallest T with U^T proportional to I, by repeated multiplication.
long long brute_period(const CMatrix& U, long long T_max) {
    const int N = static_cast<int>(U.rows());
    CMatrix P = CMatrix::Identity(N, N);
    for (long long T = 1; T <= T_max; ++T) {
        P = U * P;
        const cplx z = P(0, 0);
        if (std::abs(std::abs(z) - 1.0) > 1e-6) continue;
        if (max_abs(CMatrix(P - z * CMatrix::Identity(N, N))) < 1e-8) return T;
    }
    return -1;
}

}  // namespace

TEST(SymplecticMatrix, DeterminantAndParity) {
    EXPECT_THROW(SymplecticMatrix(1, 1, 1, 1), DomainError);
    EXPECT_TRUE(S_DEGI.satisfies_parity());
    EXPECT_FALSE(S_CAT.satisfies_parity());
    EXPECT_FALSE((S_CAT * S_CAT).satisfies_parity());
    EXPECT_TRUE(S_DEGI.is_hyperbolic());
    EXPECT_EQ(S_DEGI * S_DEGI.inverse(), SymplecticMatrix::identity());
    EXPECT_EQ(S_CAT.pow(2), SymplecticMatrix(2, 3, 3, 5));
    EXPECT_EQ(S_CAT.pow(-2) * S_CAT.pow(2), SymplecticMatrix::identity());
}

TEST(QuantizeCat, UnitaryForDegi) {
    for (int N : {1, 2, 5, 64, 107}) {
        const UnitaryPropagator U = quantize_cat(S_DEGI, N);
        EXPECT_EQ(U.N, N);
        EXPECT_LT(U.unitarity_defect(), 1e-11) << N;
    }
}

TEST(QuantizeCat, ParityPolicy) {
    EXPECT_THROW(quantize_cat(S_CAT, 16), DomainError);
    EXPECT_THROW(quantize_cat(SymplecticMatrix(2, 3, 3, 5), 16), DomainError);
    const UnitaryPropagator U = quantize_cat(S_CAT, 16, CatQuantization::AllowGenerators);
    EXPECT_LT(U.unitarity_defect(), 1e-11);
}

TEST(QuantizeCat, ExactEgorov) {
    const ClassicalMap degi = ClassicalMap::cat(S_DEGI);
    const UnitaryPropagator U32 = quantize_cat(S_DEGI, 32);
    for (int k1 = -4; k1 <= 4; ++k1)
        for (int k2 = -4; k2 <= 4; ++k2)
            EXPECT_LT(egorov_defect(U32, degi, TorusObservable::cos_mode(k1, k2), 1), 1e-10) << k1 << "," << k2;
    EXPECT_EQ(egorov_defect(U32, degi, TorusObservable::cos_mode(1, 0), 0), 0.0);

    for (int N : {5, 16, 33, 128})
        for (const SymplecticMatrix& S : {S_DEGI, SymplecticMatrix(2, 3, 1, 2), SymplecticMatrix(1, 2, 2, 5)}) {
            const UnitaryPropagator U = quantize_cat(S, N);
            for (int n = -3; n <= 3; ++n) {
                const TorusObservable f = TorusObservable::cos_mode(3, -2) + TorusObservable::sin_mode(1, 4, 0.5);
                EXPECT_LT(egorov_defect(U, ClassicalMap::cat(S), f, n), 1e-9) << N << " " << S.str() << " n=" << n;
            }
        }
}

TEST(QuantizeCat, GeneratorBranchEgorov) {
    for (int N : {6, 32}) {
        const UnitaryPropagator U = quantize_cat(S_CAT, N, CatQuantization::AllowGenerators);
        for (int n : {-2, 1, 2})
            for (int k2 = -2; k2 <= 2; ++k2)
                EXPECT_LT(egorov_defect(U, ClassicalMap::cat(S_CAT), TorusObservable::cos_mode(1, k2), n), 1e-9) << N;
    }
}

TEST(QuantizeCat, GeneratorBranchOddNCovariantUpToSign) {
    // with the symmetric Weyl phase, T(n + N m) = (-1)^{...} T(n) for odd N, so a
    // non-checkerboard map intertwines translations only up to a sign character
    const int N = 7;
    const CMatrix U = quantize_cat(S_CAT, N, CatQuantization::AllowGenerators).matrix;
    const SymplecticMatrix Si = S_CAT.inverse();
    for (int n1 = -2; n1 <= 2; ++n1)
        for (int n2 = -2; n2 <= 2; ++n2) {
            const CMatrix lhs = U.adjoint() * translation_matrix(N, {n1, n2}) * U;
            const CMatrix rhs = translation_matrix(N, {Si.a * n1 + Si.b * n2, Si.c * n1 + Si.d * n2});
            const cplx c = (rhs.adjoint() * lhs).trace() / double(N);
            EXPECT_NEAR(std::abs(std::abs(c.real()) - 1.0), 0.0, 1e-10);
            EXPECT_LT(max_abs(CMatrix(lhs - c * rhs)), 1e-10);
        }
}

TEST(QuantizeCat, Covariance) {
    for (int N : {5, 32}) {
        const CMatrix U = quantize_cat(S_DEGI, N).matrix;
        const SymplecticMatrix Si = S_DEGI.inverse();
        for (int n1 = -3; n1 <= 3; ++n1)
            for (int n2 = -3; n2 <= 3; ++n2) {
                const CMatrix lhs = U.adjoint() * translation_matrix(N, {n1, n2}) * U;
                const Mode m{Si.a * n1 + Si.b * n2, Si.c * n1 + Si.d * n2};
                const CMatrix rhs = translation_matrix(N, m);
                // lhs = c rhs with |c| = 1
                const cplx c = (rhs.adjoint() * lhs).trace() / double(N);
                EXPECT_NEAR(std::abs(c), 1.0, 1e-10);
                EXPECT_LT(max_abs(CMatrix(lhs - c * rhs)), 1e-10);
            }
    }
}

TEST(QuantizeBaker, TwoByTwo) {
    const CMatrix U = quantize_baker(2).matrix;
    const double r = 1.0 / std::sqrt(2.0);
    EXPECT_NEAR(std::abs(U(0, 0) - r), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(U(0, 1) - r), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(U(1, 0) - r), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(U(1, 1) + r), 0.0, 1e-15);
}

TEST(QuantizeBaker, OddRejectedAndUnitary) {
    EXPECT_THROW(quantize_baker(3), DomainError);
    EXPECT_THROW(quantize_baker(15), DomainError);
    EXPECT_LT(quantize_baker(128).unitarity_defect(), 1e-12);
}

TEST(PerturbedCat, ZeroKickAndUnitarity) {
    const CMatrix U0 = quantize_cat(S_DEGI, 32).matrix;
    EXPECT_EQ(max_abs(CMatrix(perturbed_cat(S_DEGI, 32, 0.0, kick_h()).matrix - U0)), 0.0);
    EXPECT_LT(perturbed_cat(S_DEGI, 64, 0.1, kick_h()).unitarity_defect(), 1e-11);
}

TEST(PerturbedCat, PositionKickIsDiagonalPhase) {
    const int N = 16;
    const double eps = 0.07;
    const CMatrix K = kick_unitary(TorusObservable::cos_mode(1, 0), N, eps);
    for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b) {
            const cplx want = a == b ? std::exp(cplx(0, -2.0 * kPi * N * eps * std::cos(2.0 * kPi * a / N))) : cplx(0.0);
            EXPECT_NEAR(std::abs(K(a, b) - want), 0.0, 1e-12);
        }
}

TEST(PerturbedCat, EgorovDefectDecays) {
    const ClassicalMap map = ClassicalMap::perturbed_cat(S_DEGI, 0.1, kick_h());
    const TorusObservable f = TorusObservable::cos_mode(1, 0);
    const double d64 = egorov_defect(perturbed_cat(S_DEGI, 64, 0.1, kick_h()), map, f, 1);
    const double d128 = egorov_defect(perturbed_cat(S_DEGI, 128, 0.1, kick_h()), map, f, 1);
    EXPECT_LT(d128, 0.7 * d64) << d64 << " " << d128;
}

TEST(Baker, EgorovDefectDecreases) {
    const ClassicalMap map = ClassicalMap::baker();
    const TorusObservable f = TorusObservable::cos_mode(0, 1);
    double prev = 1e9;
    for (int N : {32, 64, 128}) {
        const double d = egorov_defect(quantize_baker(N), map, f, 1);
        EXPECT_LT(d, prev) << N;
        prev = d;
    }
}

TEST(Egorov, CutoffOverflow) {
    const ClassicalMap map = ClassicalMap::baker();
    EXPECT_THROW(evolve_observable(map, TorusObservable::cos_mode(1, 0), 1, 2), DomainError);
}

TEST(Eigensystem, BakerContract) {
    const SpectralData s = eigensystem(quantize_baker(16));
    EXPECT_LT(s.max_residual(), 1e-9);
    EXPECT_LT(s.gram_defect(), 1e-9);
    for (int j = 1; j < s.N; ++j) EXPECT_LE(s.phases[j - 1], s.phases[j]);
    for (double t : s.phases) {
        EXPECT_GE(t, 0.0);
        EXPECT_LT(t, kTwoPi);
    }
    const CVector phi = coherent_state(16, 0.2, 0.7).amps();
    EXPECT_NEAR((s.vectors.adjoint() * phi).squaredNorm(), 1.0, 1e-12);
}

TEST(Eigensystem, DegenerateCatSpectrum) {
    // S_DEGI at N=64 has period far below N, so clusters are large
    const UnitaryPropagator U = quantize_cat(S_DEGI, 64);
    const SpectralData s = eigensystem(U);
    EXPECT_LT(s.max_residual(), 1e-9);
    EXPECT_LT(s.gram_defect(), 1e-9);
    const auto per = propagator_period(U, 3 * 64);
    ASSERT_TRUE(per.has_value());
    const double step = kTwoPi / double(per->period);
    const double theta0 = per->phase / double(per->period);
    for (double th : s.phases) {
        const double m = (th - theta0) / step;
        EXPECT_NEAR(m, std::round(m), 1e-8 / step);
    }
}

TEST(Eigensystem, Deterministic) {
    const UnitaryPropagator U = quantize_cat(S_DEGI, 30);
    const SpectralData a = eigensystem(U);
    const SpectralData b = eigensystem(U);
    EXPECT_EQ(a.phases, b.phases);
    EXPECT_TRUE(a.vectors == b.vectors);
}

TEST(Period, IdentityAndBruteForce) {
    const UnitaryPropagator I{4, CMatrix::Identity(4, 4), "identity"};
    const auto p = propagator_period(I, 5);
    ASSERT_TRUE(p.has_value());
    EXPECT_EQ(p->period, 1);

    for (int N : {2, 3, 5, 8, 13, 20}) {
        const UnitaryPropagator U = quantize_cat(S_DEGI, N);
        const auto q = propagator_period(U, 3 * N);
        const long long want = brute_period(U.matrix, 3 * N);
        ASSERT_TRUE(q.has_value()) << N;
        EXPECT_EQ(q->period, want) << N;
        EXPECT_LT(q->defect, 1e-8);
    }
}

TEST(Period, BakerNotPeriodic) {
    for (int N : {16, 32}) EXPECT_FALSE(propagator_period(quantize_baker(N), 3 * N).has_value()) << N;
}

TEST(Period, BoundForScannedN) {
    for (int N = 2; N <= 60; ++N) {
        const auto q = propagator_period(quantize_cat(S_DEGI, N), 3 * N);
        EXPECT_TRUE(q.has_value()) << N;
    }
}
