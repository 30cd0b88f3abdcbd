#pragma once

// Classical maps on T^2: linear cat maps, the baker's map and kicked cat
// maps, with periodic orbits, Lyapunov exponents and correlation functions.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qchaos/rng.hpp"
#include "qchaos/symplectic.hpp"
#include "qchaos/torus.hpp"

namespace qchaos {

/// Point of T^2, coordinates always reduced to [0,1).
struct PhasePoint {
    double x = 0.0;
    double p = 0.0;

    PhasePoint() = default;
    PhasePoint(double x_, double p_) : x(mod1(x_)), p(mod1(p_)) {}
};

/// Distance on the torus (shortest representative).
inline double torus_distance(PhasePoint a, PhasePoint b) {
    double dx = std::abs(a.x - b.x);
    double dp = std::abs(a.p - b.p);
    dx = std::min(dx, 1.0 - dx);
    dp = std::min(dp, 1.0 - dp);
    return std::hypot(dx, dp);
}

inline PhasePoint cat_apply(const SymplecticMatrix& S, PhasePoint X) {
    // reduce integer multiples of the coordinates separately to keep the fractional part accurate
    auto lin = [](long long m, double v) {
        double q = static_cast<double>(m) * v;
        return q - std::floor(q);
    };
    return {lin(S.a, X.x) + lin(S.b, X.p), lin(S.c, X.x) + lin(S.d, X.p)};
}

/// (2x mod 1, (p + floor(2x))/2); x in [0,1/2) takes the first branch.
inline PhasePoint baker_apply(PhasePoint X) {
    if (X.x < 0.5) return {2.0 * X.x, 0.5 * X.p};
    return {2.0 * X.x - 1.0, 0.5 * (X.p + 1.0)};
}

inline PhasePoint baker_inverse(PhasePoint X) {
    if (X.p < 0.5) return {0.5 * X.x, 2.0 * X.p};
    return {0.5 * (X.x + 1.0), 2.0 * X.p - 1.0};
}

/// Time-t flow of a real trigonometric Hamiltonian, RK4 with step <= 1/400.
/// Hamilton's equations: dx/dt = dH/dp, dp/dt = -dH/dx.
inline PhasePoint hamiltonian_flow(const TorusObservable& H, double t, PhasePoint X) {
    if (t == 0.0) return X;
    auto grad = [&H](double x, double p) {
        double hx = 0.0, hp = 0.0;
        for (const auto& [k, c] : H.coeffs()) {
            const cplx e = c * std::polar(1.0, kTwoPi * (static_cast<double>(k.k1) * x + static_cast<double>(k.k2) * p));
            // d/dx of c e^{2 pi i k.X} = 2 pi i k1 c e^{...}; H real so take real part
            hx += std::real(kTwoPi * kI * static_cast<double>(k.k1) * e);
            hp += std::real(kTwoPi * kI * static_cast<double>(k.k2) * e);
        }
        return std::pair<double, double>{hp, -hx};
    };
    const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(t) * 400.0)));
    const double h = t / steps;
    double x = X.x, p = X.p;
    for (int s = 0; s < steps; ++s) {
        auto [k1x, k1p] = grad(x, p);
        auto [k2x, k2p] = grad(x + 0.5 * h * k1x, p + 0.5 * h * k1p);
        auto [k3x, k3p] = grad(x + 0.5 * h * k2x, p + 0.5 * h * k2p);
        auto [k4x, k4p] = grad(x + h * k3x, p + h * k3p);
        x += h / 6.0 * (k1x + 2 * k2x + 2 * k3x + k4x);
        p += h / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p);
    }
    return {x, p};
}

/// Handle for the classical maps the library knows how to iterate.
struct ClassicalMap {
    enum class Kind { Cat, Baker, PerturbedCat };

    Kind kind = Kind::Cat;
    SymplecticMatrix S;
    double eps = 0.0;
    TorusObservable kick;

    static ClassicalMap cat(SymplecticMatrix S) { return {Kind::Cat, S, 0.0, {}}; }
    static ClassicalMap baker() { return {Kind::Baker, {}, 0.0, {}}; }
    /// Phi^eps_H o kappa_S.
    static ClassicalMap perturbed_cat(SymplecticMatrix S, double eps, TorusObservable H) {
        if (!H.is_real()) throw DomainError("perturbed_cat: kick Hamiltonian must be real");
        return {Kind::PerturbedCat, S, eps, std::move(H)};
    }

    PhasePoint apply(PhasePoint X) const {
        switch (kind) {
            case Kind::Cat: return cat_apply(S, X);
            case Kind::Baker: return baker_apply(X);
            case Kind::PerturbedCat: return hamiltonian_flow(kick, eps, cat_apply(S, X));
        }
        return X;
    }

    PhasePoint apply_inverse(PhasePoint X) const {
        switch (kind) {
            case Kind::Cat: return cat_apply(S.inverse(), X);
            case Kind::Baker: return baker_inverse(X);
            case Kind::PerturbedCat: return cat_apply(S.inverse(), hamiltonian_flow(kick, -eps, X));
        }
        return X;
    }

    /// kappa^n, negative n through the inverse.
    PhasePoint iterate(PhasePoint X, long long n) const {
        for (long long i = 0; i < n; ++i) X = apply(X);
        for (long long i = 0; i < -n; ++i) X = apply_inverse(X);
        return X;
    }

    bool is_linear() const { return kind == Kind::Cat || (kind == Kind::PerturbedCat && eps == 0.0); }

    std::string name() const {
        switch (kind) {
            case Kind::Cat: return "cat " + S.str();
            case Kind::Baker: return "baker";
            case Kind::PerturbedCat: return "perturbed-cat " + S.str() + " eps=" + std::to_string(eps);
        }
        return "?";
    }
};

inline std::vector<PhasePoint> orbit(const ClassicalMap& map, PhasePoint x0, int steps) {
    std::vector<PhasePoint> out{x0};
    out.reserve(steps + 1);
    for (int t = 0; t < steps; ++t) out.push_back(map.apply(out.back()));
    return out;
}

// ---------------------------------------------------------------------------
// Periodic points of cat maps

struct FixedPointSet {
    std::vector<PhasePoint> points;
    long long count = 0;       ///< |det(S^n - I)|
    long long denominator = 0; ///< every coordinate is an integer over this
    std::vector<std::pair<long long, long long>> numerators;  ///< exact (x, p) numerators
};

/// All x in [0,1)^2 with S^n x = x mod 1.
inline FixedPointSet fixed_points(const SymplecticMatrix& S, long long n) {
    if (n < 1) throw DomainError("fixed_points: period must be >= 1");
    const SymplecticMatrix P = S.pow(n);
    // A = S^n - I
    const long long A00 = P.a - 1, A01 = P.b, A10 = P.c, A11 = P.d - 1;
    const long long D = A00 * A11 - A01 * A10;
    if (D == 0) throw DomainError("fixed_points: S^n - I is singular (S^n = I or parabolic)");
    const long long q = std::llabs(D);

    // Column-reduce A to the lower-triangular lattice basis (g, h), (0, e);
    // representatives of Z^2 / A Z^2 are then (i, j), 0 <= i < g, 0 <= j < e.
    long long u0 = A00, u1 = A10;  // column 0
    long long v0 = A01, v1 = A11;  // column 1
    while (v0 != 0) {
        const long long t = u0 / v0;
        u0 -= t * v0;
        u1 -= t * v1;
        std::swap(u0, v0);
        std::swap(u1, v1);
    }
    const long long g = std::llabs(u0);
    const long long e = std::llabs(v1);
    if (g * e != q) throw NumericalError("fixed_points: lattice reduction failed");

    // x = adj(A) m / D
    FixedPointSet out;
    out.count = q;
    out.denominator = q;
    for (long long i = 0; i < g; ++i) {
        for (long long j = 0; j < e; ++j) {
            long long nx = A11 * i - A01 * j;
            long long np = -A10 * i + A00 * j;
            if (D < 0) {
                nx = -nx;
                np = -np;
            }
            nx = mod_int(nx, q);
            np = mod_int(np, q);
            out.numerators.emplace_back(nx, np);
        }
    }
    std::sort(out.numerators.begin(), out.numerators.end());
    for (const auto& [nx, np] : out.numerators)
        out.points.emplace_back(static_cast<double>(nx) / q, static_cast<double>(np) / q);
    return out;
}

/// lambda = log of the expanding eigenvalue of S.
inline double lyapunov(const SymplecticMatrix& S) {
    if (!S.is_hyperbolic()) throw DomainError("lyapunov: matrix " + S.str() + " is not hyperbolic");
    const double t = std::abs(static_cast<double>(S.trace()));
    return std::log((t + std::sqrt(t * t - 4.0)) / 2.0);
}

// ---------------------------------------------------------------------------
// Correlations

struct CorrelationEstimate {
    double value = 0.0;
    double stderr_ = 0.0;  ///< zero for exact (Fourier) evaluations
    bool exact = false;
    bool flagged = false;  ///< Monte Carlo budget ran out before reaching the requested precision
};

struct MonteCarloOptions {
    std::uint64_t seed = 1;
    long long samples = 200000;
    double target_stderr = 0.0;  ///< 0 disables the flag
};

/// Image of a Fourier mode under composition with kappa_S^t: k -> (S^T)^t k.
inline Mode transport_mode(const SymplecticMatrix& S, Mode k, long long t) {
    const SymplecticMatrix A = S.transpose().pow(t);
    return {SymplecticMatrix::checked_add(SymplecticMatrix::checked_mul(A.a, k.k1), SymplecticMatrix::checked_mul(A.b, k.k2)),
            SymplecticMatrix::checked_add(SymplecticMatrix::checked_mul(A.c, k.k1), SymplecticMatrix::checked_mul(A.d, k.k2))};
}

/// f o kappa_S^t as exact Fourier data.
inline TorusObservable compose_cat(const TorusObservable& f, const SymplecticMatrix& S, long long t) {
    TorusObservable::Coeffs out;
    for (const auto& [k, c] : f.coeffs()) out[transport_mode(S, k, t)] += c;
    return TorusObservable(std::move(out), f.is_real(), 1e-9);
}

/// C_{f,g}(t) = int g (f o kappa^t) - <f><g>.
inline CorrelationEstimate correlation(const ClassicalMap& map, const TorusObservable& f, const TorusObservable& g,
                                       long long t, const MonteCarloOptions& mc = {}) {
    CorrelationEstimate est;
    if (map.kind == ClassicalMap::Kind::Cat) {
        const TorusObservable ft = compose_cat(f, map.S, t);
        cplx acc = 0.0;
        for (const auto& [k, c] : ft.coeffs())
            if (!(k == Mode{0, 0})) acc += c * g.coeff(-k);
        est.value = acc.real();
        est.exact = true;
        return est;
    }
    if (f.variance() == 0.0 || g.variance() == 0.0) {
        est.exact = true;
        return est;
    }
    // Monte Carlo: independent uniform starting points, one substream per call.
    Rng rng(mc.seed, "correlation", static_cast<std::uint64_t>(t + (1LL << 32)));
    const double fm = f.mean().real(), gm = g.mean().real();
    double sum = 0.0, sum2 = 0.0;
    for (long long s = 0; s < mc.samples; ++s) {
        const PhasePoint X(rng.uniform(), rng.uniform());
        const PhasePoint Y = map.iterate(X, t);
        const double v = (f.evaluate(Y.x, Y.p).real() - fm) * (g.evaluate(X.x, X.p).real() - gm);
        sum += v;
        sum2 += v * v;
    }
    const double n = static_cast<double>(mc.samples);
    est.value = sum / n;
    est.stderr_ = std::sqrt(std::max(0.0, sum2 / n - est.value * est.value) / (n - 1.0));
    est.flagged = mc.target_stderr > 0.0 && est.stderr_ > mc.target_stderr;
    return est;
}

struct ClassicalVariance {
    double value = 0.0;
    double remainder_bound = 0.0;  ///< bound on the neglected tail |t| > T_max
    double stderr_ = 0.0;
    std::vector<CorrelationEstimate> series;  ///< C(0..T_max)
};

/// Monte Carlo estimates of C_{f,f}(0..T) along one orbit per starting point.
/// Returns the series and the standard error of sum_{t=-T}^{T} C(t) from per-orbit totals.
inline std::pair<std::vector<CorrelationEstimate>, double> orbit_correlations(const ClassicalMap& map, const TorusObservable& f,
                                                                              long long T, const MonteCarloOptions& mc) {
    Rng rng(mc.seed, "orbit-correlation", static_cast<std::uint64_t>(T));
    const double fm = f.mean().real();
    std::vector<double> sum(T + 1, 0.0), sum2(T + 1, 0.0);
    double tot = 0.0, tot2 = 0.0;
    for (long long s = 0; s < mc.samples; ++s) {
        PhasePoint X(rng.uniform(), rng.uniform());
        const double f0 = f.evaluate(X.x, X.p).real() - fm;
        double acc = 0.0;
        for (long long t = 0; t <= T; ++t) {
            if (t > 0) X = map.apply(X);
            const double v = (f.evaluate(X.x, X.p).real() - fm) * f0;
            sum[t] += v;
            sum2[t] += v * v;
            acc += (t == 0 ? 1.0 : 2.0) * v;
        }
        tot += acc;
        tot2 += acc * acc;
    }
    const double n = static_cast<double>(mc.samples);
    std::vector<CorrelationEstimate> series(T + 1);
    for (long long t = 0; t <= T; ++t) {
        series[t].value = sum[t] / n;
        series[t].stderr_ = std::sqrt(std::max(0.0, sum2[t] / n - series[t].value * series[t].value) / (n - 1.0));
        series[t].flagged = mc.target_stderr > 0.0 && series[t].stderr_ > mc.target_stderr;
    }
    const double m = tot / n;
    return {series, std::sqrt(std::max(0.0, tot2 / n - m * m) / (n - 1.0))};
}

/// sum_{t=-T}^{T} C_{f,f}(t) = C(0) + 2 sum_{t=1}^{T} C(t).
inline ClassicalVariance classical_variance(const ClassicalMap& map, const TorusObservable& f, long long T_max,
                                            const MonteCarloOptions& mc = {}) {
    if (T_max < 0) throw DomainError("classical_variance: T_max must be >= 0");
    ClassicalVariance out;
    if (map.kind != ClassicalMap::Kind::Cat) {
        auto [series, err] = orbit_correlations(map, f, T_max, mc);
        out.series = std::move(series);
        for (long long t = 0; t <= T_max; ++t) out.value += (t == 0 ? 1.0 : 2.0) * out.series[t].value;
        out.stderr_ = err;
        out.remainder_bound = 2.0 * std::abs(out.series.back().value) + 2.0 * out.series.back().stderr_;
        return out;
    }
    for (long long t = 0; t <= T_max; ++t) {
        out.series.push_back(correlation(map, f, f, t, mc));
        out.value += (t == 0 ? 1.0 : 2.0) * out.series.back().value;
    }
    // modes only grow under hyperbolic transport; scan a further window for late returns
    double tail = 0.0;
    for (long long t = T_max + 1; t <= T_max + 12; ++t) {
        try {
            tail += 2.0 * std::abs(correlation(map, f, f, t).value);
        } catch (const DomainError&) {
            break;  // integer overflow: modes are astronomically far from the support
        }
    }
    out.remainder_bound = tail;
    return out;
}

}  // namespace qchaos
