#pragma once

// Random-wave ensembles on the unit square: plane-wave and Bessel
// superpositions, isotropic correlation estimates, value moments,
// nodal-domain counting and sup-norm scans.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <string>
#include <vector>

#include "qchaos/bessel.hpp"
#include "qchaos/eigen_stats.hpp"
#include "qchaos/rng.hpp"
#include "qchaos/types.hpp"

namespace qchaos {

inline constexpr double kNodalMeanConstant = 0.0624;
inline constexpr double kNodalVarianceConstant = 0.0502;
inline constexpr double kAreaExponent = -187.0 / 91.0;

struct ScalarField2D {
    int M = 0;
    RMatrix values;  ///< values(i, j) at (x, y) = (i / M, j / M)
    double k = 0.0;
    std::string descriptor;
    std::uint64_t seed = 0;

    double operator()(int i, int j) const { return values(i, j); }
    /// M * 2 pi / k.
    double samples_per_wavelength() const { return M * kTwoPi / k; }
};

inline void check_resolution(int M, double k) {
    if (M < 2) throw DomainError("random field: grid size must be >= 2");
    if (!(k > 0.0)) throw DomainError("random field: k must be positive");
    if (M * kTwoPi / k < 8.0)
        throw DomainError("random field: fewer than 8 samples per wavelength (M=" + std::to_string(M) +
                          ", k=" + std::to_string(k) + ")");
}

inline void normalize_variance(RMatrix& v) {
    const double rms = std::sqrt(v.array().square().mean());
    if (!(rms > 0.0)) throw NumericalError("random field: vanishing field");
    v /= rms;
}

/// Re sum_j a_j exp(i k n_j . x) given amplitudes and direction angles, not normalized.
/// The double sum is separable: A(i, j) B(l, j)^T with A = a_j e^{i k cos(t_j) x_i}, B = e^{i k sin(t_j) y_l}.
inline RMatrix plane_wave_sum(int M, double k, const std::vector<cplx>& amps, const std::vector<double>& angles) {
    const int J = static_cast<int>(amps.size());
    RMatrix Ar(M, J), Ai(M, J), Br(M, J), Bi(M, J);
    for (int j = 0; j < J; ++j) {
        const double c = std::cos(angles[j]) * k, s = std::sin(angles[j]) * k;
        for (int i = 0; i < M; ++i) {
            const double x = static_cast<double>(i) / M;
            const cplx a = amps[j] * std::polar(1.0, c * x);
            Ar(i, j) = a.real();
            Ai(i, j) = a.imag();
            const cplx b = std::polar(1.0, s * x);
            Br(i, j) = b.real();
            Bi(i, j) = b.imag();
        }
    }
    RMatrix out = Ar * Br.transpose();
    out.noalias() -= Ai * Bi.transpose();
    return out;
}

/// Plane-wave ensemble with J i.i.d. uniform directions and complex Gaussian amplitudes.
inline ScalarField2D sample_plane_wave_field(double k, int J, std::uint64_t seed, int M) {
    check_resolution(M, k);
    if (J < 16) throw DomainError("sample_plane_wave_field: need J >= 16 directions");
    Rng rng(seed, "plane-wave", 0);
    std::vector<cplx> amps(J);
    std::vector<double> angles(J);
    for (int j = 0; j < J; ++j) {
        angles[j] = kTwoPi * rng.uniform();
        amps[j] = rng.complex_normal();
    }
    ScalarField2D f{M, plane_wave_sum(M, k, amps, angles), k,
                    "plane-wave k=" + std::to_string(k) + " J=" + std::to_string(J), seed};
    normalize_variance(f.values);
    return f;
}

inline ScalarField2D sample_plane_wave_field(double k, std::uint64_t seed, int M) {
    return sample_plane_wave_field(k, std::max(16, static_cast<int>(std::ceil(k))), seed, M);
}

/// One fixed plane wave cos(k n.x + phase); the degenerate member of the ensemble.
inline ScalarField2D single_plane_wave(double k, double angle, double phase, int M) {
    check_resolution(M, k);
    ScalarField2D f{M, plane_wave_sum(M, k, {std::polar(1.0, phase)}, {angle}), k, "single plane wave", 0};
    normalize_variance(f.values);
    return f;
}

/// sum_{m=-Mmax}^{Mmax} b_m J_|m|(k r) e^{i m theta} about (1/2, 1/2) with b_{-m} = conj(b_m).
inline ScalarField2D sample_bessel_field(double k, int M_max, std::uint64_t seed, int M) {
    check_resolution(M, k);
    if (M_max < 1) throw DomainError("sample_bessel_field: M_max must be >= 1");
    Rng rng(seed, "bessel-wave", 0);
    std::vector<cplx> b(M_max + 1);
    b[0] = rng.normal();
    for (int m = 1; m <= M_max; ++m) b[m] = rng.complex_normal();
    ScalarField2D f{M, RMatrix(M, M), k, "bessel k=" + std::to_string(k) + " Mmax=" + std::to_string(M_max), seed};
    std::vector<double> jn;
    for (int i = 0; i < M; ++i) {
        for (int j = 0; j < M; ++j) {
            const double dx = static_cast<double>(i) / M - 0.5, dy = static_cast<double>(j) / M - 0.5;
            const double r = std::hypot(dx, dy), th = std::atan2(dy, dx);
            bessel_j_sequence(M_max, k * r, jn);
            double s = b[0].real() * jn[0];
            const cplx e1 = std::polar(1.0, th);
            cplx e = e1;
            for (int m = 1; m <= M_max; ++m) {
                // b_m e^{im th} + conj(b_m) e^{-im th} = 2 Re(b_m e^{im th})
                s += 2.0 * jn[m] * (b[m] * e).real();
                e *= e1;
            }
            f.values(i, j) = s;
        }
    }
    normalize_variance(f.values);
    return f;
}

inline ScalarField2D sample_bessel_field(double k, std::uint64_t seed, int M) {
    return sample_bessel_field(k, static_cast<int>(std::ceil(k)), seed, M);
}

// ---------------------------------------------------------------------------
// Correlations

/// Periodic-free bilinear interpolation; the caller keeps points inside the square.
inline double bilinear(const ScalarField2D& f, double x, double y) {
    const double u = x * f.M, v = y * f.M;
    int i = static_cast<int>(std::floor(u)), j = static_cast<int>(std::floor(v));
    i = std::clamp(i, 0, f.M - 2);
    j = std::clamp(j, 0, f.M - 2);
    const double a = u - i, b = v - j;
    return (1 - a) * (1 - b) * f.values(i, j) + a * (1 - b) * f.values(i + 1, j) + (1 - a) * b * f.values(i, j + 1) +
           a * b * f.values(i + 1, j + 1);
}

struct CorrelationCurve {
    std::vector<double> r;
    std::vector<double> value;
    std::vector<double> stderr_;  ///< across fields; zero for a single field
};

struct CorrelationOptions {
    int angles = 32;
    int stride = 2;  ///< subsampling of disk grid points
};

/// Isotropic average of psi(x) psi(x + r e^{i phi}) over x in the disk of radius R at the centre
/// and phi uniform, divided by the mean of psi(x)^2 on the same disk.
inline std::vector<double> correlation_single(const ScalarField2D& f, double R, const std::vector<double>& rs,
                                              const CorrelationOptions& opt = {}) {
    if (R < 10.0 / f.k) throw DomainError("correlation_estimate: averaging radius below 10/k");
    if (R > 0.3) throw DomainError("correlation_estimate: averaging radius above 0.3");
    double rmax = 0.0;
    for (double r : rs) rmax = std::max(rmax, std::abs(r));
    if (R + rmax > 0.5 - 1.0 / f.M) throw DomainError("correlation_estimate: r-grid leaves the square");
    std::vector<double> acc(rs.size(), 0.0);
    double norm = 0.0;
    const int c = f.M / 2;
    const int rad = static_cast<int>(std::floor(R * f.M));
    std::vector<double> ca(opt.angles), sa(opt.angles);
    for (int a = 0; a < opt.angles; ++a) {
        ca[a] = std::cos(kTwoPi * a / opt.angles);
        sa[a] = std::sin(kTwoPi * a / opt.angles);
    }
    for (int di = -rad; di <= rad; di += opt.stride) {
        for (int dj = -rad; dj <= rad; dj += opt.stride) {
            if (di * di + dj * dj > rad * rad) continue;
            const int i = c + di, j = c + dj;
            const double x = static_cast<double>(i) / f.M, y = static_cast<double>(j) / f.M;
            const double v0 = f.values(i, j);
            norm += v0 * v0;
            for (std::size_t q = 0; q < rs.size(); ++q) {
                double s = 0.0;
                for (int a = 0; a < opt.angles; ++a) s += bilinear(f, x + rs[q] * ca[a], y + rs[q] * sa[a]);
                acc[q] += v0 * s / opt.angles;
            }
        }
    }
    for (double& v : acc) v /= norm;
    return acc;
}

/// Mean and standard error of the per-field curves.
inline CorrelationCurve correlation_estimate(const std::vector<ScalarField2D>& fields, double R, const std::vector<double>& rs,
                                             const CorrelationOptions& opt = {}) {
    if (fields.empty()) throw DomainError("correlation_estimate: no fields");
    const std::size_t n = fields.size();
    std::vector<std::vector<double>> curves;
    for (const auto& f : fields) curves.push_back(correlation_single(f, R, rs, opt));
    CorrelationCurve out{rs, std::vector<double>(rs.size(), 0.0), std::vector<double>(rs.size(), 0.0)};
    for (std::size_t q = 0; q < rs.size(); ++q) {
        double m = 0.0;
        for (const auto& c : curves) m += c[q];
        m /= n;
        double v = 0.0;
        for (const auto& c : curves) v += (c[q] - m) * (c[q] - m);
        out.value[q] = m;
        out.stderr_[q] = n > 1 ? std::sqrt(v / (n - 1.0) / n) : 0.0;
    }
    return out;
}

/// RMS of C(r) - J_0(k r) over the curve's r-grid.
inline double rms_deviation_from_j0(const CorrelationCurve& c, double k) {
    double s = 0.0;
    for (std::size_t q = 0; q < c.r.size(); ++q) {
        const double d = c.value[q] - bessel_j(0, k * c.r[q]);
        s += d * d;
    }
    return std::sqrt(s / c.r.size());
}

/// r-grid with k r = 0, step, ..., kr_max.
inline std::vector<double> kr_grid(double k, double kr_max, int points) {
    std::vector<double> rs(points);
    for (int q = 0; q < points; ++q) rs[q] = kr_max * q / (points - 1) / k;
    return rs;
}

inline StatReport value_moments(const std::vector<ScalarField2D>& fields) {
    std::vector<double> v;
    for (const auto& f : fields) v.insert(v.end(), f.values.data(), f.values.data() + f.values.size());
    StatReport r = summarize(v, "field values, " + std::to_string(fields.size()) + " fields", 60, -5.0, 5.0);
    if (!fields.empty()) r.seed = fields.front().seed;
    return r;
}

inline StatReport value_moments(const ScalarField2D& f) { return value_moments(std::vector<ScalarField2D>{f}); }

// ---------------------------------------------------------------------------
// Nodal domains

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n), rank_(n, 0) { std::iota(parent_.begin(), parent_.end(), 0); }

    std::size_t find(std::size_t a) {
        while (parent_[a] != a) {
            parent_[a] = parent_[parent_[a]];
            a = parent_[a];
        }
        return a;
    }

    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (rank_[a] < rank_[b]) std::swap(a, b);
        parent_[b] = a;
        if (rank_[a] == rank_[b]) ++rank_[a];
    }

private:
    std::vector<std::size_t> parent_;
    std::vector<unsigned char> rank_;
};

struct NodalReport {
    int count = 0;
    std::vector<double> areas;          ///< cell count / M^2
    std::vector<bool> touches_boundary;
    int M = 0;
};

enum class ScanOrder { RowMajor, ColumnMajor };

/// Same-sign 4-connected components of the sample grid. Zero counts as positive.
inline NodalReport nodal_domains(const ScalarField2D& f, ScanOrder order = ScanOrder::RowMajor) {
    const int M = f.M;
    const auto idx = [M](int i, int j) { return static_cast<std::size_t>(i) * M + j; };
    const auto pos = [&f](int i, int j) { return f.values(i, j) >= 0.0; };
    UnionFind uf(static_cast<std::size_t>(M) * M);
    for (int a = 0; a < M; ++a) {
        for (int b = 0; b < M; ++b) {
            const int i = order == ScanOrder::RowMajor ? a : b;
            const int j = order == ScanOrder::RowMajor ? b : a;
            if (i + 1 < M && pos(i, j) == pos(i + 1, j)) uf.unite(idx(i, j), idx(i + 1, j));
            if (j + 1 < M && pos(i, j) == pos(i, j + 1)) uf.unite(idx(i, j), idx(i, j + 1));
        }
    }
    std::vector<int> label(static_cast<std::size_t>(M) * M, -1);
    std::vector<long long> cells;
    NodalReport rep;
    rep.M = M;
    // labels in row-major order of first appearance, independent of the union order
    for (int i = 0; i < M; ++i) {
        for (int j = 0; j < M; ++j) {
            const std::size_t root = uf.find(idx(i, j));
            if (label[root] < 0) {
                label[root] = static_cast<int>(cells.size());
                cells.push_back(0);
                rep.touches_boundary.push_back(false);
            }
            const int d = label[root];
            ++cells[d];
            if (i == 0 || j == 0 || i == M - 1 || j == M - 1) rep.touches_boundary[d] = true;
        }
    }
    rep.count = static_cast<int>(cells.size());
    const double cell = 1.0 / (static_cast<double>(M) * M);
    for (long long c : cells) rep.areas.push_back(c * cell);
    return rep;
}

/// Expected number of wavelength cells, Vol * k^2 / (4 pi), for the unit square.
inline double mean_cell_count(double k) { return k * k / (4.0 * kPi); }

struct PowerLawFit {
    double exponent = 0.0;  ///< fitted slope of P(A) ~ A^exponent
    double stderr_ = 0.0;
    int n = 0;
    double lo = 0.0, hi = 0.0;
};

/// Maximum-likelihood exponent of a power law truncated to [lo, hi].
inline PowerLawFit fit_power_law(const std::vector<double>& data, double lo, double hi) {
    std::vector<double> x;
    for (double a : data)
        if (a >= lo && a <= hi) x.push_back(a);
    PowerLawFit fit;
    fit.lo = lo;
    fit.hi = hi;
    fit.n = static_cast<int>(x.size());
    if (x.size() < 10) throw NumericalError("fit_power_law: fewer than 10 points in the window");
    double slog = 0.0;
    for (double a : x) slog += std::log(a);
    const double n = static_cast<double>(x.size());
    const double L = std::log(lo), H = std::log(hi);
    // log Z(tau) = log int_lo^hi A^{-tau} dA
    const auto logZ = [&](double tau) {
        const double s = 1.0 - tau;
        if (std::abs(s) < 1e-9) return std::log(H - L);
        // (e^{sH} - e^{sL}) / s, evaluated stably
        const double big = std::max(s * H, s * L), small = std::min(s * H, s * L);
        return big + std::log1p(-std::exp(small - big)) - std::log(std::abs(s));
    };
    const auto ll = [&](double tau) { return -tau * slog - n * logZ(tau); };
    double a = -3.0, b = 6.0;
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - g * (b - a), d = a + g * (b - a);
    for (int it = 0; it < 200; ++it) {
        if (ll(c) > ll(d))
            b = d;
        else
            a = c;
        c = b - g * (b - a);
        d = a + g * (b - a);
    }
    const double tau = 0.5 * (a + b);
    const double h = 1e-4;
    const double curv = (ll(tau + h) - 2.0 * ll(tau) + ll(tau - h)) / (h * h);
    fit.exponent = -tau;
    fit.stderr_ = curv < 0.0 ? 1.0 / std::sqrt(-curv) : 0.0;
    return fit;
}

struct CensusOptions {
    int M = 2048;
    int directions = 0;  ///< 0 means ceil(k)
    double window_lo_k2 = 10.0;  ///< window lower edge in units of k^-2
    double window_hi = 1e-2;
};

/// Pooled nodal statistics over n_samples plane-wave fields.
/// extra: mean_ratio, var_ratio, area_exponent, area_exponent_stderr, n_areas_fit, Nbar.
/// samples: per-sample domain counts. hist: log10(area) of interior domains.
inline StatReport nodal_census(double k, int n_samples, std::uint64_t seed, const CensusOptions& opt = {}) {
    if (n_samples < 2) throw DomainError("nodal_census: need at least 2 samples");
    const int J = opt.directions > 0 ? opt.directions : std::max(16, static_cast<int>(std::ceil(k)));
    std::vector<double> counts, ratios, interior_areas;
    const double Nbar = mean_cell_count(k);
    for (int s = 0; s < n_samples; ++s) {
        const ScalarField2D f = sample_plane_wave_field(k, J, substream_seed(seed, "rwm-nodal", s), opt.M);
        const NodalReport rep = nodal_domains(f);
        counts.push_back(rep.count);
        ratios.push_back(rep.count / Nbar);
        for (std::size_t d = 0; d < rep.areas.size(); ++d)
            if (!rep.touches_boundary[d]) interior_areas.push_back(rep.areas[d]);
    }
    std::vector<double> logs;
    for (double a : interior_areas) logs.push_back(std::log10(a));
    StatReport r = summarize(ratios, "nodal census k=" + std::to_string(k) + " M=" + std::to_string(opt.M), 40);
    const StatReport ah = summarize(logs, "", 40);
    r.hist = ah.hist;
    r.seed = seed;
    r.samples = counts;
    double mc = 0.0;
    for (double c : counts) mc += c;
    mc /= counts.size();
    double vc = 0.0;
    for (double c : counts) vc += (c - mc) * (c - mc);
    vc /= (counts.size() - 1.0);
    r.extra["Nbar"] = Nbar;
    r.extra["mean_ratio"] = mc / Nbar;
    r.extra["var_ratio"] = vc / Nbar;
    r.extra["mean_ratio_stderr"] = std::sqrt(vc / counts.size()) / Nbar;
    r.extra["var_ratio_rel_stderr"] = std::sqrt(2.0 / (counts.size() - 1.0));
    const PowerLawFit fit = fit_power_law(interior_areas, opt.window_lo_k2 / (k * k), opt.window_hi);
    r.extra["area_exponent"] = fit.exponent;
    r.extra["area_exponent_stderr"] = fit.stderr_;
    r.extra["n_areas_fit"] = fit.n;
    r.extra["directions"] = J;
    return r;
}

// ---------------------------------------------------------------------------
// Sup norms

struct SupNormScan {
    std::vector<double> ks;
    std::vector<std::vector<double>> ratios;  ///< max|psi| / rms per sample, per k
    std::vector<double> p90;
    double slope = 0.0;      ///< p90 against sqrt(log k)
    double intercept = 0.0;
};

inline double percentile(std::vector<double> v, double q) {
    if (v.empty()) throw DomainError("percentile: empty sample");
    std::sort(v.begin(), v.end());
    const double pos = q * (v.size() - 1);
    const std::size_t i = static_cast<std::size_t>(std::floor(pos));
    const double t = pos - i;
    return i + 1 < v.size() ? v[i] * (1 - t) + v[i + 1] * t : v[i];
}

/// Grid size used by the sup-norm scan: power of two with >= 16 samples per wavelength.
inline int supnorm_grid(double k) {
    int M = 64;
    while (M * kTwoPi / k < 16.0) M *= 2;
    return M;
}

inline double sup_ratio(const ScalarField2D& f) {
    const double rms = std::sqrt(f.values.array().square().mean());
    return f.values.cwiseAbs().maxCoeff() / rms;
}

inline SupNormScan sup_norm_scan(const std::vector<double>& ks, int n_samples, std::uint64_t seed) {
    if (ks.empty() || n_samples < 1) throw DomainError("sup_norm_scan: empty scan");
    SupNormScan out;
    out.ks = ks;
    for (std::size_t q = 0; q < ks.size(); ++q) {
        std::vector<double> r;
        const int M = supnorm_grid(ks[q]);
        for (int s = 0; s < n_samples; ++s) {
            const auto tag = "rwm-supnorm-" + std::to_string(q);
            r.push_back(sup_ratio(sample_plane_wave_field(ks[q], substream_seed(seed, tag, s), M)));
        }
        out.p90.push_back(percentile(r, 0.9));
        out.ratios.push_back(std::move(r));
    }
    if (ks.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double n = static_cast<double>(ks.size());
        for (std::size_t q = 0; q < ks.size(); ++q) {
            const double x = std::sqrt(std::log(ks[q]));
            sx += x;
            sy += out.p90[q];
            sxx += x * x;
            sxy += x * out.p90[q];
        }
        out.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        out.intercept = (sy - out.slope * sx) / n;
    }
    return out;
}

inline StatReport sup_norm_report(const SupNormScan& scan, std::uint64_t seed) {
    std::vector<double> all;
    for (const auto& r : scan.ratios) all.insert(all.end(), r.begin(), r.end());
    StatReport rep = summarize(all, "sup-norm ratios", 40);
    rep.seed = seed;
    rep.samples = all;
    for (std::size_t q = 0; q < scan.ks.size(); ++q) {
        char key[64];
        std::snprintf(key, sizeof key, "p90_k%g", scan.ks[q]);
        rep.extra[key] = scan.p90[q];
    }
    rep.extra["slope_sqrt_log_k"] = scan.slope;
    rep.extra["intercept"] = scan.intercept;
    return rep;
}

}  // namespace qchaos
