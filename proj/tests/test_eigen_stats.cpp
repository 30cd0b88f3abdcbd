#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qchaos/eigen_stats.hpp"

using namespace qchaos;

namespace {

// Exact law of cyclic sign changes by enumerating all 2^N sign patterns.
std::vector<double> enumerate_sign_changes(int N) {
    std::vector<double> p(N + 1, 0.0);
    for (unsigned m = 0; m < (1u << N); ++m) {
        int c = 0;
        for (int l = 0; l < N; ++l) c += ((m >> l) & 1u) != ((m >> ((l + 1) % N)) & 1u);
        p[c] += 1.0;
    }
    for (double& v : p) v /= double(1u << N);
    return p;
}

TorusState real_state(std::vector<double> a) {
    CVector v(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) v[i] = a[i];
    return TorusState(v);
}

}  // namespace

TEST(Summarize, MomentsAndHistogram) {
    const StatReport r = summarize({1.0, 2.0, 3.0, 4.0}, "x", 4, 0.5, 4.5);
    EXPECT_DOUBLE_EQ(r.mean, 2.5);
    EXPECT_DOUBLE_EQ(r.var, 1.25);
    EXPECT_NEAR(r.skew, 0.0, 1e-15);
    EXPECT_NEAR(r.kurtosis, (0.5 * (1.5 * 1.5 * 1.5 * 1.5 + 0.5 * 0.5 * 0.5 * 0.5)) / (1.25 * 1.25), 1e-14);
    EXPECT_EQ(r.hist.counts, (std::vector<long long>{1, 1, 1, 1}));
    EXPECT_EQ(r.n_samples, std::accumulate(r.hist.counts.begin(), r.hist.counts.end(), 0LL));
}

TEST(Summarize, ExponentialKs) {
    std::vector<double> v;
    Rng rng(1, "ks", 0);
    for (int i = 0; i < 20000; ++i) v.push_back(-std::log(1.0 - rng.uniform()));
    EXPECT_LT(ks_distance_exponential(v), 0.015);
    for (double& x : v) x *= 2.0;
    EXPECT_GT(ks_distance_exponential(v), 0.2);
}

TEST(RandomState, NormAndDeterminism) {
    const TorusState a = random_state(64, 7), b = random_state(64, 7), c = random_state(64, 8);
    EXPECT_NEAR(a.norm(), 1.0, 1e-14);
    EXPECT_TRUE(a.amps() == b.amps());
    EXPECT_FALSE(a.amps() == c.amps());
}

TEST(RandomState, OverlapStatistics) {
    // |<psi1, psi2>|^2 ~ Beta(1, N - 1): mean 1/N, variance (N - 1) / (N^2 (N + 1))
    const int N = 64, pairs = 200;
    double s = 0.0;
    for (int i = 0; i < pairs; ++i) s += std::norm(inner(random_state(N, 1000 + 2 * i), random_state(N, 1001 + 2 * i)));
    const double sd = std::sqrt((N - 1.0) / (double(N) * N * (N + 1.0)) / pairs);
    EXPECT_LT(std::abs(s / pairs - 1.0 / N), 3.0 * sd);
}

TEST(RandomRealState, RealAndNormalized) {
    const TorusState a = random_real_state(100, 3);
    EXPECT_NEAR(a.norm(), 1.0, 1e-14);
    EXPECT_EQ(a.amps().imag().norm(), 0.0);
}

TEST(SignChangeLaw, MatchesEnumeration) {
    for (int N = 2; N <= 12; ++N) {
        const auto exact = enumerate_sign_changes(N);
        const auto law = sign_change_law(N);
        for (int c = 0; c <= N; ++c) EXPECT_NEAR(law[c], exact[c], 1e-14) << N << " " << c;
    }
    double total = 0.0;
    for (double p : sign_change_law(100)) total += p;
    EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(NodalCount, Examples) {
    EXPECT_EQ(position_nodal_count(real_state({1, -1, 1, -1, 1, -1})).count, 6);
    EXPECT_EQ(position_nodal_count(real_state({1, 2, 3})).count, 1);
    EXPECT_EQ(position_nodal_count(real_state({-1, -2, -3})).count, 1);
    EXPECT_EQ(position_nodal_count(real_state({1, 1, -1, -1, 1})).count, 2);  // cyclic: last joins first
    const NodalCount z = position_nodal_count(real_state({1, 0, -1, 1}));
    EXPECT_TRUE(z.had_zero);
    EXPECT_EQ(z.count, 2);
    EXPECT_THROW(position_nodal_count(random_state(4, 1)), DomainError);
}

TEST(NodalCount, ShiftInvariant) {
    const TorusState psi = random_real_state(30, 4);
    const int base = position_nodal_count(psi).count;
    for (int s = 1; s < 30; s += 7) EXPECT_EQ(position_nodal_count(translation(psi, {s, 0})).count, base);
}

TEST(NodalCount, MeanOfRandomRealStates) {
    const int N = 100, n = 500;
    const auto law = sign_change_law(N);
    double mu = 0.0, m2 = 0.0;
    for (int c = 0; c <= N; ++c) {
        mu += std::max(c, 1) * law[c];
        m2 += double(std::max(c, 1)) * std::max(c, 1) * law[c];
    }
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += position_nodal_count(random_real_state(N, 50 + i)).count;
    EXPECT_LT(std::abs(s / n - mu), 3.0 * std::sqrt((m2 - mu * mu) / n));
}

TEST(NodalCount, ChiSquareAgainstLaw) {
    const int N = 100, n = 2000;
    std::vector<long long> counts(N + 1, 0);
    for (int i = 0; i < n; ++i) ++counts[position_nodal_count(random_real_state(N, 7000 + i)).count];
    auto law = sign_change_law(N);
    // nu = max(c, 1): the c = 0 mass sits at nu = 1
    law[1] += law[0];
    law[0] = 0.0;
    const ChiSquareResult r = chi_square_gof(counts, law);
    EXPECT_GT(r.p_value, 0.01) << r.statistic << " dof " << r.dof;
}

TEST(ChiSquare, KnownValue) {
    // two equiprobable bins, 60/40 out of 100: statistic 4, p = erfc(sqrt(2))
    const ChiSquareResult r = chi_square_gof({60, 40}, {0.5, 0.5});
    EXPECT_NEAR(r.statistic, 4.0, 1e-12);
    EXPECT_EQ(r.dof, 1);
    EXPECT_NEAR(r.p_value, std::erfc(std::sqrt(2.0)), 1e-12);
    EXPECT_EQ(chi_square_gof({1, 5, 5}, {0.0, 0.5, 0.5}).p_value, 0.0);
}

TEST(QuantumAverage, Examples) {
    EXPECT_NEAR(std::abs(quantum_average(random_state(16, 1), TorusObservable::constant(1.0)) - 1.0), 0.0, 1e-14);
    for (int l = 0; l < 12; ++l)
        EXPECT_NEAR(quantum_average_real(position_state(12, l), TorusObservable::cos_mode(1, 0)), std::cos(2.0 * kPi * l / 12), 1e-14);
    EXPECT_THROW(quantum_average(random_state(8, 1), TorusObservable::cos_mode(4, 0)), DomainError);
}

TEST(QuantumAverage, MatchesMatrixElement) {
    const int N = 20;
    const TorusObservable f = TorusObservable::cos_mode(2, -3, 0.7) + TorusObservable::sin_mode(1, 1) + TorusObservable::constant(0.2);
    const TorusState psi = random_state(N, 2);
    const cplx ref = psi.amps().dot(quantize_observable(f, N) * psi.amps());
    EXPECT_NEAR(std::abs(quantum_average(psi, f) - ref), 0.0, 1e-13);
    const TorusState rotated(psi.amps() * std::polar(1.0, 1.234));
    EXPECT_NEAR(std::abs(quantum_average(rotated, f) - quantum_average(psi, f)), 0.0, 1e-14);
}

TEST(QuantumAverage, DegiEigenstatesSmall) {
    const SpectralData spec = eigensystem(quantize_cat(degi_matrix(), 107));
    const auto avg = eigenstate_averages(spec, TorusObservable::cos_mode(1, 0));
    double worst = 0.0;
    for (double a : avg) worst = std::max(worst, std::abs(a));
    EXPECT_LT(worst, 0.2);
}

TEST(QuantumVariance, Invariances) {
    const SpectralData spec = eigensystem(quantize_baker(32));
    EXPECT_EQ(quantum_variance(spec, TorusObservable::constant(3.0)), 0.0);
    const TorusObservable f = TorusObservable::cos_mode(1, 0);
    const double v = quantum_variance(spec, f);
    EXPECT_NEAR(quantum_variance(spec, f + TorusObservable::constant(5.0)), v, 1e-12);
    SpectralData perm = spec;
    for (int j = 0; j < spec.N; ++j) perm.vectors.col(j) = spec.vectors.col(spec.N - 1 - j);
    EXPECT_EQ(quantum_variance(perm, f), v);
    // direct definition
    const CMatrix A = quantize_observable(f, 32);
    double ref = 0.0;
    for (int j = 0; j < 32; ++j) ref += std::norm(spec.vectors.col(j).dot(A * spec.vectors.col(j)));
    EXPECT_NEAR(v, ref / 32, 1e-14);
}

TEST(QuantumErgodicity, BakerFractionDecreases) {
    const TorusObservable f = TorusObservable::cos_mode(1, 0);
    double prev = 2.0;
    for (int N : {64, 128, 256}) {
        const auto avg = eigenstate_averages(eigensystem(quantize_baker(N)), f);
        const double frac = std::count_if(avg.begin(), avg.end(), [](double a) { return std::abs(a) > 0.1; }) / double(N);
        EXPECT_LT(frac, prev) << N;
        prev = frac;
    }
}

TEST(HusimiStats, RandomStatesAreExponential) {
    // the ensemble value distribution: Husimi values of 50 states pooled
    std::vector<double> pooled;
    for (int s = 0; s < 50; ++s) {
        const StatReport r = husimi_value_stats(random_state(64, 300 + s), 64);
        EXPECT_NEAR(r.mean, 1.0, 1e-10);
        const HusimiGrid h = husimi_grid(random_state(64, 300 + s), 64);
        pooled.insert(pooled.end(), h.values.data(), h.values.data() + h.values.size());
    }
    EXPECT_LT(ks_distance_exponential(pooled), 0.02);
}

TEST(HusimiStats, CoherentStateIsNot) {
    const StatReport r = husimi_value_stats(coherent_state(64, 0.4, 0.4), 64);
    EXPECT_GT(r.extra.at("ks_exponential"), 0.3);
    EXPECT_NEAR(r.mean, 1.0, 1e-10);
    EXPECT_THROW(husimi_value_stats(random_state(64, 1), 31), DomainError);
}

TEST(HusimiNorms, Ordering) {
    const int N = 64, M = 128;
    const auto rnd = husimi_norms(random_state(N, 11), M, {1.0, 2.0, kInfNorm});
    const auto coh = husimi_norms(coherent_state(N, 0.3, 0.6), M, {1.0, 2.0, kInfNorm});
    const auto mom = husimi_norms(momentum_state(N, 5), M, {1.0, 2.0, kInfNorm});
    for (const auto& v : {rnd, coh, mom}) EXPECT_NEAR(v[0], 1.0, 1e-12);
    EXPECT_GT(coh[2], rnd[2]);
    EXPECT_GT(mom[1], rnd[1]);
    EXPECT_LT(mom[1], coh[1]);
    EXPECT_THROW(husimi_norms(random_state(N, 1), M, {0.0}), DomainError);
}

TEST(Realify, RecoversRealVector) {
    const TorusState r = random_real_state(40, 9);
    const TorusState rotated(r.amps() * std::polar(1.0, 0.77));
    const Realified out = realify(rotated);
    EXPECT_LT(out.residual, 1e-13);
    EXPECT_EQ(position_nodal_count(out.state).count, position_nodal_count(r).count);
    EXPECT_GT(realify(random_state(40, 9)).residual, 1e-3);
}

TEST(StellarEnsemble, PredictionAndDeterminism) {
    const double apery = 1.2020569031595942;
    EXPECT_NEAR(stellar_fourier_variance_prediction(64, {1, 0}), kPi * kPi * apery / (64.0 * 64.0 * 64.0), 1e-20);
    EXPECT_NEAR(stellar_fourier_variance_prediction(10, {1, 1}) / stellar_fourier_variance_prediction(10, {1, 0}), 4.0, 1e-12);
    const StellarFourierEnsemble a = stellar_fourier_ensemble(16, {1, 0}, 12, 5), b = stellar_fourier_ensemble(16, {1, 0}, 12, 5);
    EXPECT_EQ(a.values, b.values);
    ASSERT_EQ(a.values.size(), 12u);
    const cplx c0 = stellar_fourier(stellar_zeros(random_state(16, substream_seed(5, "stellar-ensemble", 0))), {1, 0});
    EXPECT_NEAR(a.values[0], std::norm(c0) * 16 * 16 * 16, 1e-9);
    EXPECT_THROW(stellar_fourier_ensemble(16, {1, 0}, 1, 5), DomainError);
}
