#include <gtest/gtest.h>

#include <functional>
#include <cmath>
#include <numeric>

#include "qchaos/random_waves.hpp"

using namespace qchaos;

namespace {

ScalarField2D from_function(int M, double k, const std::function<double(double, double)>& fn) {
    ScalarField2D f{M, RMatrix(M, M), k, "test", 0};
    for (int i = 0; i < M; ++i)
        for (int j = 0; j < M; ++j) f.values(i, j) = fn(double(i) / M, double(j) / M);
    return f;
}

}  // namespace

TEST(Bessel, MatchesStandardLibrary) {
    std::vector<double> seq;
    double worst = 0.0;
    for (double x : {1e-3, 0.1, 0.5, 1.0, 2.5, 7.0, 13.3, 30.0, 55.5, 99.0, 141.0}) {
        bessel_j_sequence(150, x, seq);
        for (int n = 0; n <= 150; ++n) worst = std::max(worst, std::abs(seq[n] - std::cyl_bessel_j(double(n), x)));
    }
    EXPECT_LT(worst, 1e-10);
    EXPECT_EQ(bessel_j(0, 0.0), 1.0);
    EXPECT_EQ(bessel_j(3, 0.0), 0.0);
    EXPECT_NEAR(bessel_j(-3, 2.0), -std::cyl_bessel_j(3.0, 2.0), 1e-14);
    EXPECT_NEAR(bessel_j(3, -2.0), -std::cyl_bessel_j(3.0, 2.0), 1e-14);
    EXPECT_NEAR(bessel_j(-2, -2.0), std::cyl_bessel_j(2.0, 2.0), 1e-14);
}

TEST(Bessel, SeriesAgreesAtSmallArgument) {
    for (int n = 0; n <= 10; ++n)
        for (double x : {0.01, 0.3, 1.0, 3.0}) EXPECT_NEAR(bessel_j(n, x), bessel_j_series(n, x), 1e-13);
}

TEST(PlaneWaveField, MeanVarianceDeterminism) {
    const ScalarField2D f = sample_plane_wave_field(100.0, 5, 1024);
    EXPECT_LT(std::abs(f.values.mean()), 0.05);
    EXPECT_NEAR(f.values.array().square().mean(), 1.0, 1e-12);
    EXPECT_TRUE(f.values == sample_plane_wave_field(100.0, 5, 1024).values);
    EXPECT_FALSE(f.values == sample_plane_wave_field(100.0, 6, 1024).values);
    EXPECT_THROW(sample_plane_wave_field(100.0, 8, 7, 1024), DomainError);
    EXPECT_THROW(sample_plane_wave_field(100.0, 5, 64), DomainError);  // 4 samples per wavelength
}

TEST(PlaneWaveField, SingleDirectionIsCosine) {
    const double k = 60.0, th = 0.7, ph = 0.4;
    const int M = 256;
    const ScalarField2D f = single_plane_wave(k, th, ph, M);
    const ScalarField2D ref = from_function(M, k, [&](double x, double y) { return std::cos(k * (std::cos(th) * x + std::sin(th) * y) + ph); });
    const double rms = std::sqrt(ref.values.array().square().mean());
    EXPECT_LT((f.values - ref.values / rms).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(PlaneWaveField, SinusoidMoments) {
    // 16 whole periods along x: kurtosis 3/2, max/rms = sqrt 2
    const ScalarField2D f = single_plane_wave(kTwoPi * 16, 0.0, 0.0, 256);
    const StatReport r = value_moments(f);
    EXPECT_NEAR(r.kurtosis, 1.5, 1e-10);
    EXPECT_NEAR(r.var, 1.0, 1e-12);
    EXPECT_NEAR(sup_ratio(f), std::sqrt(2.0), 1e-12);
}

TEST(BesselField, RealNormalizedAndCorrelatedLikePlaneWaves) {
    const double k = 100.0;
    const int M = 256;
    const auto rs = kr_grid(k, 10.0, 21);
    std::vector<ScalarField2D> bf, pf;
    for (int s = 0; s < 10; ++s) {
        bf.push_back(sample_bessel_field(k, 40 + s, M));
        pf.push_back(sample_plane_wave_field(k, 40 + s, M));
    }
    EXPECT_NEAR(bf[0].values.array().square().mean(), 1.0, 1e-12);
    EXPECT_TRUE(bf[0].values.allFinite());
    const CorrelationCurve cb = correlation_estimate(bf, 0.2, rs), cp = correlation_estimate(pf, 0.2, rs);
    double s = 0.0;
    for (std::size_t q = 0; q < rs.size(); ++q) s += (cb.value[q] - cp.value[q]) * (cb.value[q] - cp.value[q]);
    EXPECT_LT(std::sqrt(s / rs.size()), 0.03);
}

TEST(Correlation, NormalizationAndSymmetry) {
    const ScalarField2D f = sample_plane_wave_field(150.0, 3, 512);
    const double r = 3.0 / 150.0;
    const auto c = correlation_single(f, 0.2, {0.0, r, -r});
    EXPECT_NEAR(c[0], 1.0, 1e-12);
    EXPECT_NEAR(c[1], c[2], 1e-12);
    EXPECT_THROW(correlation_single(f, 0.05, {0.0}), DomainError);
    EXPECT_THROW(correlation_single(f, 0.35, {0.0}), DomainError);
    EXPECT_THROW(correlation_single(f, 0.3, {0.25}), DomainError);
}

TEST(Correlation, PlaneWaveEnsembleFollowsJ0) {
    const double k = 200.0;
    std::vector<ScalarField2D> fields;
    for (int s = 0; s < 6; ++s) fields.push_back(sample_plane_wave_field(k, 100 + s, 512));
    const CorrelationCurve c = correlation_estimate(fields, 0.2, kr_grid(k, 10.0, 41));
    EXPECT_LT(rms_deviation_from_j0(c, k), 0.05);
}

TEST(Correlation, DirectionAverageOfSingleWaves) {
    // angle-averaging cos(k n.r) over directions gives J_0(k r)
    const double k = 120.0;
    const int J = 256;
    std::vector<cplx> amps(J, 1.0);
    std::vector<double> angles(J);
    for (int j = 0; j < J; ++j) angles[j] = kTwoPi * (j + 0.37) / J;
    ScalarField2D f{512, plane_wave_sum(512, k, amps, angles), k, "equal directions", 0};
    normalize_variance(f.values);
    const CorrelationCurve c = correlation_estimate({f}, 0.2, kr_grid(k, 10.0, 41));
    EXPECT_LT(rms_deviation_from_j0(c, k), 0.05);
    const CorrelationCurve one = correlation_estimate({single_plane_wave(k, 0.3, 0.1, 512)}, 0.2, kr_grid(k, 10.0, 41));
    EXPECT_LT(rms_deviation_from_j0(one, k), 0.05);
}

TEST(ValueMoments, GaussianAtModerateK) {
    std::vector<ScalarField2D> fields;
    for (int s = 0; s < 8; ++s) fields.push_back(sample_plane_wave_field(100.0, 200 + s, 512));
    const StatReport r = value_moments(fields);
    EXPECT_LT(std::abs(r.skew), 0.1);
    EXPECT_LT(std::abs(r.kurtosis - 3.0), 0.2);
    EXPECT_NEAR(r.var, 1.0, 1e-3);
}

TEST(NodalDomains, PositiveField) {
    const NodalReport r = nodal_domains(from_function(64, 10.0, [](double, double) { return 1.0; }));
    EXPECT_EQ(r.count, 1);
    EXPECT_DOUBLE_EQ(r.areas[0], 1.0);
    EXPECT_TRUE(r.touches_boundary[0]);
    // exact zeros count as positive
    EXPECT_EQ(nodal_domains(from_function(64, 10.0, [](double x, double) { return x < 0.5 ? 0.0 : 1.0; })).count, 1);
}

TEST(NodalDomains, CheckerboardRectangles) {
    // cos(kx/sqrt2) cos(ky/sqrt2) with k/sqrt2 = c pi has c zeros per axis in (0, 1), hence (c + 1)^2 rectangles
    for (auto [c, M] : {std::pair{20, 1024}, std::pair{100, 2048}}) {
        const double k = c * kPi * std::sqrt(2.0);
        const NodalReport r = nodal_domains(from_function(M, k, [&](double x, double y) {
            return std::cos(k * x / std::sqrt(2.0)) * std::cos(k * y / std::sqrt(2.0));
        }));
        EXPECT_EQ(r.count, (c + 1) * (c + 1));
        EXPECT_NEAR(std::accumulate(r.areas.begin(), r.areas.end(), 0.0), 1.0, 1e-12);
    }
}

TEST(NodalDomains, SymmetriesAndPartition) {
    ScalarField2D f = sample_plane_wave_field(80.0, 9, 512);
    const NodalReport a = nodal_domains(f), b = nodal_domains(f, ScanOrder::ColumnMajor);
    EXPECT_EQ(a.count, b.count);
    EXPECT_EQ(a.areas, b.areas);
    EXPECT_NEAR(std::accumulate(a.areas.begin(), a.areas.end(), 0.0), 1.0, 1e-12);
    f.values = -f.values;
    EXPECT_EQ(nodal_domains(f).count, a.count);
}

TEST(NodalDomains, RefinementStable) {
    const int coarse = nodal_domains(sample_plane_wave_field(100.0, 12, 1024)).count;
    const int fine = nodal_domains(sample_plane_wave_field(100.0, 12, 2048)).count;
    EXPECT_LT(std::abs(fine - coarse), 0.02 * fine);
}

TEST(PowerLaw, RecoversExponent) {
    // inverse-CDF samples of A^{-2.05} on [1e-4, 1e-1]
    Rng rng(4, "powerlaw", 0);
    const double tau = 2.05, lo = 1e-4, hi = 1e-1, s = 1.0 - tau;
    std::vector<double> x;
    for (int i = 0; i < 20000; ++i) {
        const double u = rng.uniform();
        x.push_back(std::pow(std::pow(lo, s) + u * (std::pow(hi, s) - std::pow(lo, s)), 1.0 / s));
    }
    x.push_back(0.5);  // outside the window, ignored
    const PowerLawFit fit = fit_power_law(x, lo, hi);
    EXPECT_EQ(fit.n, 20000);
    EXPECT_LT(std::abs(fit.exponent + tau), 4.0 * fit.stderr_);
    EXPECT_THROW(fit_power_law({0.5, 0.6}, lo, hi), NumericalError);
}

TEST(NodalCensus, Reproducible) {
    CensusOptions opt;
    opt.M = 512;
    opt.window_hi = 0.05;
    const StatReport a = nodal_census(60.0, 3, 77, opt), b = nodal_census(60.0, 3, 77, opt);
    EXPECT_EQ(a.samples, b.samples);
    EXPECT_EQ(a.extra.at("mean_ratio"), b.extra.at("mean_ratio"));
    EXPECT_NEAR(a.extra.at("Nbar"), 3600.0 / (4.0 * kPi), 1e-12);
    for (int i = 0; i < 3; ++i) {
        const ScalarField2D f = sample_plane_wave_field(60.0, 60, substream_seed(77, "rwm-nodal", i), 512);
        EXPECT_EQ(a.samples[i], nodal_domains(f).count);
    }
    const double mean = (a.samples[0] + a.samples[1] + a.samples[2]) / 3.0;
    EXPECT_NEAR(a.extra.at("mean_ratio"), mean / a.extra.at("Nbar"), 1e-12);
}

TEST(SupNorm, GrowsSlowly) {
    const SupNormScan s = sup_norm_scan({50.0, 400.0}, 8, 3);
    ASSERT_EQ(s.p90.size(), 2u);
    EXPECT_GT(s.p90[1], s.p90[0]);
    EXPECT_LT(s.p90[1] / s.p90[0], 1.6);
    EXPECT_GT(s.slope, 0.0);
    EXPECT_NEAR(percentile({1.0, 2.0, 3.0}, 0.5), 2.0, 1e-15);
    EXPECT_NEAR(percentile({1.0, 2.0}, 0.9), 1.9, 1e-15);
}
