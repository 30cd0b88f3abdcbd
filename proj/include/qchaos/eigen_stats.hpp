#pragma once

// Random-state ensembles on H_N and statistics of states: quantum averages,
// quantum variance over an eigenbasis, Husimi value distributions and norms,
// and nodal counts of real states on Z_N.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/special_functions/zeta.hpp>

#include "qchaos/phase_space.hpp"
#include "qchaos/quantum_maps.hpp"
#include "qchaos/rng.hpp"
#include "qchaos/torus.hpp"

namespace qchaos {

struct Histogram {
    std::vector<double> edges;
    std::vector<long long> counts;
};

struct StatReport {
    std::string descriptor;
    long long n_samples = 0;
    double mean = 0.0;
    double var = 0.0;
    double skew = 0.0;
    double kurtosis = 0.0;  ///< Pearson kurtosis, 3 for a Gaussian
    Histogram hist;
    double stderr_mean = 0.0;
    double stderr_var = 0.0;
    std::uint64_t seed = 0;
    std::map<std::string, double> extra;  ///< operation-specific scalars
    std::vector<double> samples;          ///< raw per-sample values when the caller keeps them
};

/// Moments and an equal-width histogram over [lo, hi] (data range when lo >= hi).
inline StatReport summarize(const std::vector<double>& v, std::string descriptor, int bins = 50, double lo = 0.0,
                            double hi = 0.0) {
    StatReport r;
    r.descriptor = std::move(descriptor);
    r.n_samples = static_cast<long long>(v.size());
    if (v.empty()) return r;
    const double n = static_cast<double>(v.size());
    double m = 0.0;
    for (double x : v) m += x;
    m /= n;
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double x : v) {
        const double d = x - m;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    r.mean = m;
    r.var = m2;
    r.skew = m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
    r.kurtosis = m2 > 0.0 ? m4 / (m2 * m2) : 0.0;
    r.stderr_mean = n > 1 ? std::sqrt(m2 / (n - 1.0)) : 0.0;
    r.stderr_var = n > 1 ? std::sqrt(std::max(0.0, m4 - m2 * m2) / n) : 0.0;

    if (!(lo < hi)) {
        lo = *std::min_element(v.begin(), v.end());
        hi = *std::max_element(v.begin(), v.end());
        if (!(lo < hi)) hi = lo + 1.0;
    }
    bins = std::max(1, bins);
    r.hist.edges.resize(bins + 1);
    for (int b = 0; b <= bins; ++b) r.hist.edges[b] = lo + (hi - lo) * b / bins;
    r.hist.counts.assign(bins, 0);
    for (double x : v) {
        int b = static_cast<int>(std::floor((x - lo) / (hi - lo) * bins));
        b = std::clamp(b, 0, bins - 1);
        ++r.hist.counts[b];
    }
    return r;
}

/// Kolmogorov-Smirnov distance between the empirical law of v and Exp(1).
inline double ks_distance_exponential(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const double n = static_cast<double>(v.size());
    double d = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double F = 1.0 - std::exp(-std::max(0.0, v[i]));
        d = std::max({d, std::abs(F - static_cast<double>(i) / n), std::abs(static_cast<double>(i + 1) / n - F)});
    }
    return d;
}

// ---------------------------------------------------------------------------
// Ensembles

/// (1/sqrt(N)) sum_l a_l e_l with i.i.d. standard complex Gaussians, normalized.
inline TorusState random_state(int N, std::uint64_t seed) {
    if (N < 1) throw DomainError("random_state: N must be >= 1");
    Rng rng(seed, "random_state", 0);
    CVector v(N);
    for (int l = 0; l < N; ++l) v[l] = rng.complex_normal();
    v /= v.norm();
    return TorusState(std::move(v), "random seed=" + std::to_string(seed));
}

/// Real Gaussian coefficients, normalized.
inline TorusState random_real_state(int N, std::uint64_t seed) {
    if (N < 1) throw DomainError("random_real_state: N must be >= 1");
    Rng rng(seed, "random_real_state", 0);
    CVector v(N);
    for (int l = 0; l < N; ++l) v[l] = rng.normal();
    v /= v.norm();
    return TorusState(std::move(v), "random-real seed=" + std::to_string(seed));
}

// ---------------------------------------------------------------------------
// Quantum averages

/// <psi, f_N psi> summed mode by mode, O(modes * N).
inline cplx quantum_average(const TorusState& psi, const TorusObservable& f) {
    const int N = psi.dim();
    if (2 * f.cutoff() >= N) throw DomainError("quantum_average: cutoff too large for N=" + std::to_string(N));
    cplx total = 0.0;
    for (const auto& [k, c] : f.coeffs()) {
        const Mode n = weyl_index(k);
        cplx s = 0.0;
        for (int l = 0; l < N; ++l)
            s += std::conj(psi[l]) * translation_phase(n.k1, n.k2, l, N) * psi[static_cast<int>(mod_int(l - n.k1, N))];
        total += c * s;
    }
    return total;
}

/// Real average of a real observable; the imaginary part is checked against 1e-12.
inline double quantum_average_real(const TorusState& psi, const TorusObservable& f) {
    if (!f.is_real()) throw DomainError("quantum_average_real: observable is not real");
    const cplx a = quantum_average(psi, f);
    double scale = 0.0;
    for (const auto& [k, c] : f.coeffs()) scale += std::abs(c);
    if (std::abs(a.imag()) > 1e-12 * std::max(1.0, scale) * psi.norm() * psi.norm())
        throw NumericalError("quantum_average_real: imaginary part " + std::to_string(a.imag()));
    return a.real();
}

/// (1/N) sum_j |<psi_j, (f_N - c_0) psi_j>|^2.
inline double quantum_variance(const SpectralData& spec, const TorusObservable& f) {
    if (!f.is_real()) throw DomainError("quantum_variance: observable must be real");
    TorusObservable::Coeffs fluct = f.coeffs();
    fluct.erase(Mode{0, 0});
    const TorusObservable g(std::move(fluct), true);
    std::vector<double> terms(spec.N);
    for (int j = 0; j < spec.N; ++j) terms[j] = std::norm(quantum_average(spec.state(j), g));
    // a fixed summation order makes the result independent of how the basis is listed
    std::sort(terms.begin(), terms.end());
    double s = 0.0;
    for (double t : terms) s += t;
    return s / spec.N;
}

/// Per-eigenstate averages <psi_j, f_N psi_j>.
inline std::vector<double> eigenstate_averages(const SpectralData& spec, const TorusObservable& f) {
    std::vector<double> out(spec.N);
    for (int j = 0; j < spec.N; ++j) out[j] = quantum_average_real(spec.state(j), f);
    return out;
}

// ---------------------------------------------------------------------------
// Husimi statistics

inline StatReport husimi_value_stats(const TorusState& psi, int M) {
    if (static_cast<long long>(M) * M < 16LL * psi.dim())
        throw DomainError("husimi_value_stats: need M^2 >= 16 N");
    const HusimiGrid h = husimi_grid(psi, M);
    std::vector<double> v(h.values.data(), h.values.data() + h.values.size());
    StatReport r = summarize(v, "husimi values N=" + std::to_string(psi.dim()) + " M=" + std::to_string(M), 50);
    r.extra["ks_exponential"] = ks_distance_exponential(v);
    return r;
}

inline constexpr double kInfNorm = std::numeric_limits<double>::infinity();

/// Discrete L^p norms ((1/M^2) sum h^p)^{1/p} of the grid-mean-normalized density; p = inf gives the max.
inline std::vector<double> husimi_norms(const TorusState& psi, int M, const std::vector<double>& ps) {
    const HusimiGrid h = husimi_grid(psi, M);
    std::vector<double> out;
    for (double p : ps) {
        if (std::isinf(p)) {
            out.push_back(h.values.maxCoeff());
            continue;
        }
        if (!(p > 0.0)) throw DomainError("husimi_norms: p must be positive");
        out.push_back(std::pow(h.values.array().pow(p).mean(), 1.0 / p));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Nodal counts on Z_N

struct NodalCount {
    int count = 0;
    bool had_zero = false;  ///< an exact zero was counted as positive
};

/// Maximal constant-sign cyclic intervals of the real amplitudes. Zero counts as positive.
inline NodalCount position_nodal_count(const TorusState& psi) {
    const int N = psi.dim();
    NodalCount r;
    for (int l = 0; l < N; ++l) {
        if (std::abs(psi[l].imag()) >= 1e-9) throw DomainError("position_nodal_count: amplitudes are not real");
        if (psi[l].real() == 0.0) r.had_zero = true;
    }
    int changes = 0;
    for (int l = 0; l < N; ++l) {
        const bool a = psi[l].real() >= 0.0;
        const bool b = psi[(l + 1) % N].real() >= 0.0;
        if (a != b) ++changes;
    }
    r.count = changes == 0 ? 1 : changes;
    return r;
}

/// Law of the cyclic sign-change count for N i.i.d. symmetric signs:
/// P(c) = C(N, c) / 2^{N-1} for even c. Index is c.
inline std::vector<double> sign_change_law(int N) {
    std::vector<double> p(N + 1, 0.0);
    // log-binomials keep large N finite
    for (int c = 0; c <= N; c += 2)
        p[c] = std::exp(std::lgamma(N + 1.0) - std::lgamma(c + 1.0) - std::lgamma(N - c + 1.0) - (N - 1) * std::log(2.0));
    return p;
}

struct ChiSquareResult {
    double statistic = 0.0;
    int dof = 0;
    double p_value = 1.0;
    std::vector<double> observed;  ///< pooled bins
    std::vector<double> expected;
};

/// Pearson goodness of fit of counts[i] against probabilities probs[i]. Outcomes
/// with zero probability must have zero count; adjacent outcomes are pooled
/// until every bin expects at least min_expected.
inline ChiSquareResult chi_square_gof(const std::vector<long long>& counts, const std::vector<double>& probs,
                                      double min_expected = 5.0) {
    if (counts.size() != probs.size()) throw DomainError("chi_square_gof: size mismatch");
    long long n = 0;
    for (long long c : counts) n += c;
    if (n == 0) throw DomainError("chi_square_gof: no samples");
    ChiSquareResult r;
    double o = 0.0, e = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (probs[i] == 0.0) {
            if (counts[i] != 0) {
                r.statistic = std::numeric_limits<double>::infinity();
                r.p_value = 0.0;
                return r;
            }
            continue;
        }
        o += static_cast<double>(counts[i]);
        e += probs[i] * static_cast<double>(n);
        if (e >= min_expected) {
            r.observed.push_back(o);
            r.expected.push_back(e);
            o = e = 0.0;
        }
    }
    if (e > 0.0 || o > 0.0) {
        if (r.observed.empty()) {
            r.observed.push_back(o);
            r.expected.push_back(e);
        } else {
            r.observed.back() += o;
            r.expected.back() += e;
        }
    }
    for (std::size_t b = 0; b < r.observed.size(); ++b)
        r.statistic += (r.observed[b] - r.expected[b]) * (r.observed[b] - r.expected[b]) / r.expected[b];
    r.dof = static_cast<int>(r.observed.size()) - 1;
    if (r.dof < 1) throw DomainError("chi_square_gof: fewer than two bins after pooling");
    r.p_value = boost::math::cdf(boost::math::complement(boost::math::chi_squared(r.dof), r.statistic));
    return r;
}

// ---------------------------------------------------------------------------
// Fourier coefficients of random zero sets

/// Large-N law pi^2 zeta(3) |k|^4 / N^3 for E |mu^Z(e^{2 pi i k.x})|^2 over random states.
inline double stellar_fourier_variance_prediction(int N, Mode k) {
    if (N < 1) throw DomainError("stellar_fourier_variance_prediction: N must be >= 1");
    const double k2 = static_cast<double>(k.k1 * k.k1 + k.k2 * k.k2);
    return kPi * kPi * boost::math::zeta(3.0) * k2 * k2 / std::pow(static_cast<double>(N), 3);
}

struct StellarFourierEnsemble {
    int N = 0;
    Mode k;
    int samples = 0;
    double mean_square = 0.0;  ///< sample mean of |c|^2
    double stderr_ = 0.0;
    double prediction = 0.0;
    cplx mean;                 ///< sample mean of c, zero in expectation
    std::vector<double> values;  ///< N^3 |c|^2 per state
};

/// Zero sets of `samples` random states, state s drawn with substream (seed, "stellar-ensemble", s).
inline StellarFourierEnsemble stellar_fourier_ensemble(int N, Mode k, int samples, std::uint64_t seed) {
    if (samples < 2) throw DomainError("stellar_fourier_ensemble: need at least 2 samples");
    StellarFourierEnsemble e;
    e.N = N;
    e.k = k;
    e.samples = samples;
    e.prediction = stellar_fourier_variance_prediction(N, k);
    const double n3 = std::pow(static_cast<double>(N), 3);
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < samples; ++i) {
        const TorusState psi = random_state(N, substream_seed(seed, "stellar-ensemble", static_cast<std::uint64_t>(i)));
        const cplx c = stellar_fourier(stellar_zeros(psi), k);
        const double v = std::norm(c);
        e.mean += c;
        e.values.push_back(v * n3);
        s += v;
        s2 += v * v;
    }
    const double n = samples;
    e.mean /= n;
    e.mean_square = s / n;
    e.stderr_ = std::sqrt(std::max(0.0, s2 / n - e.mean_square * e.mean_square) / (n - 1.0));
    return e;
}

struct Realified {
    TorusState state;
    double residual = 0.0;  ///< ||Im||_2 after the best global rotation
};

/// Global phase rotation minimizing the imaginary mass: alpha = -arg(sum psi^2) / 2.
inline Realified realify(const TorusState& psi) {
    cplx s = 0.0;
    for (int l = 0; l < psi.dim(); ++l) s += psi[l] * psi[l];
    const cplx rot = std::polar(1.0, -0.5 * std::arg(s));
    CVector v = psi.amps() * rot;
    const double res = v.imag().norm();
    return {TorusState(std::move(v), psi.description()), res};
}

}  // namespace qchaos
