#pragma once

// Wavepacket dynamics near periodic orbits: coherent-state autocorrelation,
// smoothed local density of states, Ehrenfest time, short-period scans and
// the projection of a coherent state onto an eigenspace of a periodic
// propagator (half-scarred eigenstates).

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qchaos/classical.hpp"
#include "qchaos/phase_space.hpp"
#include "qchaos/quantum_maps.hpp"

namespace qchaos {

/// a(t) = <phi_x0, U^t phi_x0> for t = t_begin .. t_end by repeated matrix-vector products.
inline std::vector<cplx> autocorrelation(const UnitaryPropagator& U, PhasePoint x0, long long t_begin, long long t_end) {
    if (t_end < t_begin) throw DomainError("autocorrelation: empty time range");
    const CVector phi = coherent_state(U.N, x0.x, x0.p).amps();
    CVector w = phi;
    const CMatrix step = t_begin < 0 ? CMatrix(U.matrix.adjoint()) : U.matrix;
    for (long long t = 0; t < std::llabs(t_begin); ++t) w = step * w;
    std::vector<cplx> out;
    out.reserve(t_end - t_begin + 1);
    for (long long t = t_begin; t <= t_end; ++t) {
        out.push_back(phi.dot(w));
        w = U.matrix * w;
    }
    return out;
}

/// Same series through the spectral decomposition: sum_j |<psi_j, phi>|^2 e^{i theta_j t}.
inline std::vector<cplx> autocorrelation_spectral(const SpectralData& spec, PhasePoint x0, long long t_begin, long long t_end) {
    const CVector phi = coherent_state(spec.N, x0.x, x0.p).amps();
    const CVector ov = spec.vectors.adjoint() * phi;
    std::vector<cplx> out;
    for (long long t = t_begin; t <= t_end; ++t) {
        cplx s = 0.0;
        for (int j = 0; j < spec.N; ++j) s += std::norm(ov[j]) * std::polar(1.0, spec.phases[j] * static_cast<double>(t));
        out.push_back(s);
    }
    return out;
}

/// Overlaps |<phi, psi_j>|^2 for a given probe state.
inline std::vector<double> spectral_weights(const SpectralData& spec, const TorusState& probe) {
    const CVector ov = spec.vectors.adjoint() * probe.normalized().amps();
    std::vector<double> w(spec.N);
    for (int j = 0; j < spec.N; ++j) w[j] = std::norm(ov[j]);
    return w;
}

inline double ehrenfest_time(int N, double lambda) {
    if (!(lambda > 0.0)) throw DomainError("ehrenfest_time: Lyapunov exponent must be positive");
    if (N < 1) throw DomainError("ehrenfest_time: N must be >= 1");
    return std::log(kTwoPi * N) / lambda;
}

struct LdosCurve {
    std::vector<double> theta;
    std::vector<double> weight;  ///< density w.r.t. d theta / 2 pi
    double width = 0.0;
    PhasePoint anchor;
    bool below_mean_spacing = false;  ///< width < 2 pi / N

    /// Riemann sum of weight d theta / 2 pi over the grid.
    double mass() const {
        double s = 0.0;
        for (double w : weight) s += w;
        return weight.empty() ? 0.0 : s / static_cast<double>(weight.size());
    }
};

/// Wrapped Gaussian with unit mass against d theta / 2 pi.
inline double wrapped_gaussian(double d, double w) {
    double s = 0.0;
    const int reps = static_cast<int>(std::ceil(8.0 * w / kTwoPi)) + 1;
    for (int m = -reps; m <= reps; ++m) {
        const double u = d + kTwoPi * m;
        s += std::exp(-u * u / (2.0 * w * w));
    }
    return s * kTwoPi / (std::sqrt(kTwoPi) * w);
}

/// sum_j chi_w(theta - theta_j) |<probe, psi_j>|^2 on a uniform grid of `points` angles.
inline LdosCurve smoothed_ldos_for(const SpectralData& spec, const TorusState& probe, double width, int points = 1024) {
    if (!(width > 0.0)) throw DomainError("smoothed_ldos: width must be positive");
    const std::vector<double> wts = spectral_weights(spec, probe);
    LdosCurve c;
    c.width = width;
    c.below_mean_spacing = width < kTwoPi / spec.N;
    c.theta.resize(points);
    c.weight.assign(points, 0.0);
    for (int i = 0; i < points; ++i) {
        c.theta[i] = kTwoPi * i / points;
        for (int j = 0; j < spec.N; ++j) c.weight[i] += wts[j] * wrapped_gaussian(c.theta[i] - spec.phases[j], width);
    }
    return c;
}

inline LdosCurve smoothed_ldos(const SpectralData& spec, PhasePoint x0, double width, int points = 1024) {
    LdosCurve c = smoothed_ldos_for(spec, coherent_state(spec.N, x0.x, x0.p), width, points);
    c.anchor = x0;
    return c;
}

/// Default smoothing width 2 pi / (2 T_E).
inline double default_ldos_width(int N, double lambda) { return kTwoPi / (2.0 * ehrenfest_time(N, lambda)); }

// ---------------------------------------------------------------------------
// Short periods and half-scarred states

struct PeriodScanEntry {
    int N = 0;
    std::optional<long long> period;
    double defect = 0.0;
    double ehrenfest = 0.0;
    bool candidate = false;  ///< T_N <= 4 T_E
};

struct ScanOptions {
    CatQuantization policy = CatQuantization::Strict;
    /// Largest period searched, as a function of N. Defaults to 3N.
    std::function<long long(int)> period_cap;
    double candidate_factor = 4.0;
};

inline std::vector<PeriodScanEntry> scan_short_periods(const SymplecticMatrix& S, int N_min, int N_max,
                                                       const ScanOptions& opt = {}) {
    if (N_min < 1 || N_max < N_min) throw DomainError("scan_short_periods: bad N range");
    const double lambda = lyapunov(S);
    std::vector<PeriodScanEntry> out;
    for (int N = N_min; N <= N_max; ++N) {
        PeriodScanEntry e;
        e.N = N;
        e.ehrenfest = ehrenfest_time(N, lambda);
        const long long cap = opt.period_cap ? opt.period_cap(N) : 3LL * N;
        const UnitaryPropagator U = quantize_cat(S, N, opt.policy);
        if (auto r = propagator_period(U, std::max(1LL, cap))) {
            e.period = r->period;
            e.defect = r->defect;
            e.candidate = static_cast<double>(r->period) <= opt.candidate_factor * e.ehrenfest;
        }
        out.push_back(e);
    }
    return out;
}

/// Picks the scan entry to use as the scar witness. Among candidates, the largest N
/// with T_N <= 2 T_E; if none reaches that, the candidate with the smallest T_N / T_E.
inline std::optional<PeriodScanEntry> best_scar_candidate(const std::vector<PeriodScanEntry>& scan) {
    std::optional<PeriodScanEntry> best, fallback;
    for (const PeriodScanEntry& e : scan) {
        if (!e.candidate || !e.period) continue;
        const double r = static_cast<double>(*e.period) / e.ehrenfest;
        if (r <= 2.0 && (!best || e.N > best->N)) best = e;
        if (!fallback || r < static_cast<double>(*fallback->period) / fallback->ehrenfest) fallback = e;
    }
    return best ? best : fallback;
}

struct ScarReport {
    int N = 0;
    long long period = 0;
    double ehrenfest = 0.0;
    double theta_star = 0.0;
    double disk_mass = 0.0;
    double baseline = 0.0;
    double disk_radius = 0.1;
    double residual = 0.0;        ///< ||U psi - e^{i theta} psi||
    double projection_norm = 0.0; ///< ||P phi_x0||
};

struct HalfScar {
    TorusState state;
    ScarReport report;
};

/// Projects phi_x0 on the eigenspace of U_N(S) carrying the largest share of it.
/// With U^T = e^{i Phi} I the eigenphases are (Phi + 2 pi m)/T and
/// P_m phi = (1/T) sum_{t=0}^{T-1} e^{-i theta_m t} U^t phi.
inline HalfScar half_scarred_state(const SymplecticMatrix& S, int N, PhasePoint x0,
                                   CatQuantization policy = CatQuantization::Strict, double radius = 0.1,
                                   int husimi_M = 128) {
    const PhasePoint image = cat_apply(S, x0);
    if (torus_distance(image, x0) > 1e-12) throw DomainError("half_scarred_state: anchor is not a fixed point of the map");
    const UnitaryPropagator U = quantize_cat(S, N, policy);
    const auto per = propagator_period(U, 3LL * N);
    if (!per) throw NumericalError("half_scarred_state: no period <= 3N found");
    const long long T = per->period;

    const CVector phi = coherent_state(N, x0.x, x0.p).amps();
    std::vector<CVector> orbit_states;
    orbit_states.reserve(T);
    CVector w = phi;
    for (long long t = 0; t < T; ++t) {
        orbit_states.push_back(w);
        w = U.matrix * w;
    }
    struct Cand {
        double norm;
        long long m;
    };
    std::vector<Cand> cands;
    std::vector<CVector> projections;
    for (long long m = 0; m < T; ++m) {
        const double th = (per->phase + kTwoPi * static_cast<double>(m)) / static_cast<double>(T);
        CVector P = CVector::Zero(N);
        for (long long t = 0; t < T; ++t) P += std::polar(1.0, -th * static_cast<double>(t)) * orbit_states[t];
        P /= static_cast<double>(T);
        cands.push_back({P.norm(), m});
        projections.push_back(std::move(P));
    }
    std::stable_sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) { return a.norm > b.norm; });
    for (const Cand& c : cands) {
        if (c.norm < 1e-8) continue;
        const double th = detail::wrap_phase((per->phase + kTwoPi * static_cast<double>(c.m)) / static_cast<double>(T));
        CVector v = projections[c.m] / c.norm;
        HalfScar out{TorusState(v, "half-scar N=" + std::to_string(N)), {}};
        ScarReport& r = out.report;
        r.N = N;
        r.period = T;
        r.ehrenfest = ehrenfest_time(N, lyapunov(S));
        r.theta_star = th;
        r.residual = (U.matrix * v - std::polar(1.0, th) * v).norm();
        r.projection_norm = c.norm;
        r.disk_radius = radius;
        r.baseline = kPi * radius * radius;
        r.disk_mass = husimi_disk_mass(husimi_grid(out.state, husimi_M), x0.x, x0.p, radius);
        return out;
    }
    throw NumericalError("half_scarred_state: every eigenspace projection vanishes");
}

}  // namespace qchaos
