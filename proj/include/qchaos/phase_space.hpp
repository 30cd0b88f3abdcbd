#pragma once

// Phase-space pictures of torus states: Husimi densities, the Bargmann
// function and its zeros (the stellar representation), reconstruction of the
// Bargmann function from its zeros through a theta-function product, and
// Fourier coefficients of the zero measure.
//
// Conventions. For z = x - i p the Bargmann function is
//   B(z) = sum_l psi_l sum_nu exp(-pi N y^2 + 2 pi N y z - pi N z^2 / 2),  y = l/N - nu,
// which is entire and satisfies
//   <phi_{x,p}, psi> = B(z) exp(-pi N (x^2 + p^2) / 2) exp(-i pi N x p)
// for the unnormalized periodized Gaussian phi_{x,p} of coherent_amplitudes().
// Quasi-periodicity: B(z + 1) = exp(pi N (z + 1/2)) B(z), B(z + i) = exp(-i pi N z + pi N / 2) B(z).

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <tuple>
#include <vector>

#include "qchaos/torus.hpp"

namespace qchaos {

namespace detail {

/// Gaussian terms below exp(-40) relative are dropped.
inline constexpr double kGaussCut = 40.0;

/// <phi_{x,p}, psi> and ||phi_{x,p}||^2 for the unnormalized coherent vector, any real (x, p).
struct OverlapResult {
    cplx overlap;
    double norm2;
};

inline OverlapResult coherent_overlap(const CVector& psi, double x, double p) {
    const int N = static_cast<int>(psi.size());
    const double dN = static_cast<double>(N);
    const long long nu_c = -static_cast<long long>(std::llround(x));
    const double pr = mod1(p);
    const double np0 = mod1(dN * pr);
    cplx nu_phase[7];
    for (int t = 0; t < 7; ++t) nu_phase[t] = std::polar(1.0, kTwoPi * np0 * static_cast<double>(nu_c - 3 + t));
    cplx acc = 0.0;
    double n2 = 0.0;
    const cplx step = std::polar(1.0, -kTwoPi * pr);
    cplx rot = 1.0;  // exp(-2 pi i pr l)
    for (int l = 0; l < N; ++l) {
        if ((l & 63) == 0) rot = std::polar(1.0, -kTwoPi * pr * l);
        const double y = l / dN;
        cplx s = 0.0;
        for (int t = 0; t < 7; ++t) {
            const double d = y - x - static_cast<double>(nu_c - 3 + t);
            const double e = kPi * dN * d * d;
            if (e > kGaussCut) continue;
            s += std::exp(-e) * nu_phase[t];
        }
        // conj(phi(l)) = exp(-2 pi i pr l) * s
        const cplx cphi = rot * s;
        acc += cphi * psi[l];
        n2 += std::norm(s);
        rot *= step;
    }
    return {acc, n2};
}

/// B(z) exp(-pi N |z|^2 / 2) = <phi_{x,p}, psi> exp(i pi N x p): bounded, same zeros as B.
inline cplx weighted_bargmann(const CVector& psi, double x, double p) {
    const double N = static_cast<double>(psi.size());
    return coherent_overlap(psi, x, p).overlap * std::polar(1.0, kPi * N * x * p);
}

/// B(z) exp(-s) and B'(z) exp(-s) with s = pi N |z_ref|^2 / 2.
inline std::pair<cplx, cplx> bargmann_scaled(const CVector& psi, cplx z, cplx z_ref) {
    const int N = static_cast<int>(psi.size());
    const double dN = static_cast<double>(N);
    const double s = kPi * dN * std::norm(z_ref) / 2.0;
    const long long nu_c = -static_cast<long long>(std::llround(z.real()));
    cplx f = 0.0, df = 0.0;
    for (int l = 0; l < N; ++l) {
        for (long long nu = nu_c - 3; nu <= nu_c + 3; ++nu) {
            const double y = l / dN - static_cast<double>(nu);
            const cplx E = -kPi * dN * y * y + kTwoPi * dN * y * z - kPi * dN * z * z / 2.0;
            const double re = E.real() - s;
            if (re < -kGaussCut - 60.0) continue;
            const cplx term = psi[l] * std::polar(std::exp(re), E.imag());
            f += term;
            df += (kTwoPi * dN * y - kPi * dN * z) * term;
        }
    }
    return {f, df};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Husimi

/// values(i, j) is the density at (x, p) = (i/M, j/M), normalized to unit grid mean.
struct HusimiGrid {
    int N = 0;
    int M = 0;
    RMatrix values;
    std::string description;

    double mean() const { return values.mean(); }
    double max() const { return values.maxCoeff(); }
};

/// N |<phi_{x,p}, psi>|^2 with phi normalized; the un-renormalized Husimi value.
inline double husimi_value(const TorusState& psi, double x, double p) {
    const auto r = detail::coherent_overlap(psi.amps(), x, p);
    return psi.dim() * std::norm(r.overlap) / r.norm2;
}

inline HusimiGrid husimi_grid(const TorusState& psi, int M) {
    if (M < 8) throw DomainError("husimi_grid: M must be >= 8");
    HusimiGrid h{psi.dim(), M, RMatrix(M, M), psi.description()};
    for (int i = 0; i < M; ++i)
        for (int j = 0; j < M; ++j) h.values(i, j) = husimi_value(psi, static_cast<double>(i) / M, static_cast<double>(j) / M);
    const double mean = h.values.mean();
    if (!(mean > 0.0)) throw DomainError("husimi_grid: zero state");
    h.values /= mean;
    return h;
}

/// Fraction of Husimi grid mass within torus distance r of (x0, p0).
inline double husimi_disk_mass(const HusimiGrid& h, double x0, double p0, double r) {
    double in = 0.0, total = 0.0;
    for (int i = 0; i < h.M; ++i) {
        for (int j = 0; j < h.M; ++j) {
            double dx = std::abs(static_cast<double>(i) / h.M - x0);
            double dp = std::abs(static_cast<double>(j) / h.M - p0);
            dx = std::min(dx, 1.0 - dx);
            dp = std::min(dp, 1.0 - dp);
            total += h.values(i, j);
            if (dx * dx + dp * dp <= r * r) in += h.values(i, j);
        }
    }
    return in / total;
}

// ---------------------------------------------------------------------------
// Bargmann function

/// B(z) as defined at the top of this file. Magnitude grows like exp(pi N |z|^2 / 2).
inline cplx bargmann_eval(const TorusState& psi, cplx z) {
    return detail::bargmann_scaled(psi.amps(), z, cplx(0.0)).first;
}

/// Husimi value reconstructed from B: N |B(z)|^2 exp(-pi N |z|^2) / ||phi_{x,p}||^2, z = x - i p.
inline double husimi_from_bargmann(const TorusState& psi, double x, double p) {
    const cplx z(x, -p);
    const double N = static_cast<double>(psi.dim());
    const cplx b = detail::bargmann_scaled(psi.amps(), z, z).first;  // B e^{-pi N |z|^2 / 2}
    const double n2 = detail::coherent_overlap(psi.amps(), x, p).norm2;
    return N * std::norm(b) / n2;
}

// ---------------------------------------------------------------------------
// Stellar representation

struct StellarZero {
    double x = 0.0;
    double p = 0.0;
    int multiplicity = 1;
};

struct StellarSet {
    int N = 0;
    std::vector<StellarZero> zeros;  ///< sorted by (x, p), coordinates in [0,1)
    int total_winding = 0;           ///< certified count over the fundamental cell boundary
    int attempts = 1;

    int multiplicity_sum() const {
        int s = 0;
        for (const auto& z : zeros) s += z.multiplicity;
        return s;
    }
};

struct ZeroFinderOptions {
    int grid = 0;               ///< cells per side; 0 picks ceil(2 sqrt(N)) + 1
    double newton_tol = 1e-10;  ///< step size at which Newton polish stops
    double boundary_tol = 1e-9;
    int max_retries = 3;
};

namespace detail {

struct ZeroNearBoundary {};

class StellarSolver {
public:
    StellarSolver(const CVector& psi, const ZeroFinderOptions& opt) : psi_(psi), opt_(opt), N_(static_cast<int>(psi.size())) {}

    StellarSet run(double ox, double op) {
        const int G = opt_.grid > 0 ? opt_.grid : static_cast<int>(std::ceil(2.0 * std::sqrt(static_cast<double>(N_)))) + 1;
        const double h = 1.0 / G;
        ox_ = ox;
        op_ = op;
        G_ = G;
        std::vector<cplx> V((G + 1) * (G + 1));
        auto vid = [G](int i, int j) { return i * (G + 1) + j; };
        for (int i = 0; i <= G; ++i)
            for (int j = 0; j <= G; ++j) V[vid(i, j)] = eval(ox + i * h, op + j * h);
        // Hx(i,j): (i,j)->(i+1,j); Hp(i,j): (i,j)->(i,j+1)
        std::vector<double> Hx(G * (G + 1)), Hp((G + 1) * G);
        for (int i = 0; i < G; ++i)
            for (int j = 0; j <= G; ++j)
                Hx[i * (G + 1) + j] = edge({ox + i * h, op + j * h}, V[vid(i, j)], {ox + (i + 1) * h, op + j * h}, V[vid(i + 1, j)]);
        for (int i = 0; i <= G; ++i)
            for (int j = 0; j < G; ++j)
                Hp[i * G + j] = edge({ox + i * h, op + j * h}, V[vid(i, j)], {ox + i * h, op + (j + 1) * h}, V[vid(i, j + 1)]);

        StellarSet out;
        out.N = N_;
        double boundary = 0.0;
        for (int i = 0; i < G; ++i) boundary += Hx[i * (G + 1) + 0] - Hx[i * (G + 1) + G];
        for (int j = 0; j < G; ++j) boundary += Hp[G * G + j] - Hp[0 * G + j];
        out.total_winding = -static_cast<int>(std::lround(boundary / kTwoPi));

        int cell_sum = 0;
        for (int i = 0; i < G; ++i) {
            for (int j = 0; j < G; ++j) {
                const double w = Hx[i * (G + 1) + j] + Hp[(i + 1) * G + j] - Hx[i * (G + 1) + j + 1] - Hp[i * G + j];
                const int m = count_from(w);
                cell_sum += m;
                if (m > 0) locate({ox + i * h, op + j * h}, h, m, 0, out.zeros);
                if (m < 0) throw NumericalError("stellar_zeros: negative winding (poles are impossible)");
            }
        }
        if (cell_sum != out.total_winding) throw NumericalError("stellar_zeros: cell windings do not sum to total");
        for (auto& z : out.zeros) {
            z.x = mod1(z.x);
            z.p = mod1(z.p);
        }
        std::sort(out.zeros.begin(), out.zeros.end(),
                  [](const StellarZero& a, const StellarZero& b) { return a.x != b.x ? a.x < b.x : a.p < b.p; });
        return out;
    }

private:
    struct Pt {
        double x, p;
    };

    cplx eval(double x, double p) const { return weighted_bargmann(psi_, x, p); }

    /// Net change of arg W along the segment, sampled until every step is below pi/4.
    double edge(Pt a, cplx fa, Pt b, cplx fb) const {
        const double len = std::hypot(b.x - a.x, b.p - a.p);
        const int n0 = std::max(2, static_cast<int>(std::ceil(3.0 * N_ * len)));
        double total = 0.0;
        Pt prev = a;
        cplx fprev = fa;
        for (int s = 1; s <= n0; ++s) {
            const double t = static_cast<double>(s) / n0;
            const Pt q{a.x + t * (b.x - a.x), a.p + t * (b.p - a.p)};
            const cplx fq = s == n0 ? fb : eval(q.x, q.p);
            total += refine(prev, fprev, q, fq, 0);
            prev = q;
            fprev = fq;
        }
        return total;
    }

    double refine(Pt a, cplx fa, Pt b, cplx fb, int depth) const {
        if (std::abs(fa) < 1e-250 || std::abs(fb) < 1e-250) throw ZeroNearBoundary{};
        const double d = std::arg(fb / fa);
        if (std::abs(d) < kPi / 4.0) return d;
        if (depth > 45) throw ZeroNearBoundary{};
        const Pt m{0.5 * (a.x + b.x), 0.5 * (a.p + b.p)};
        const cplx fm = eval(m.x, m.p);
        return refine(a, fa, m, fm, depth + 1) + refine(m, fm, b, fb, depth + 1);
    }

    /// Zeros enclosed, from the phase change around a cell traversed counterclockwise in (x, p).
    /// z = x - i p reverses orientation, hence the sign.
    static int count_from(double w) {
        const double r = -w / kTwoPi;
        const double m = std::round(r);
        if (std::abs(r - m) > 0.05) throw NumericalError("stellar_zeros: non-integer winding " + std::to_string(r));
        return static_cast<int>(m);
    }

    int cell_winding(Pt o, double h) const {
        const Pt c[4] = {{o.x, o.p}, {o.x + h, o.p}, {o.x + h, o.p + h}, {o.x, o.p + h}};
        cplx f[4];
        for (int k = 0; k < 4; ++k) f[k] = eval(c[k].x, c[k].p);
        double w = 0.0;
        for (int k = 0; k < 4; ++k) w += edge(c[k], f[k], c[(k + 1) % 4], f[(k + 1) % 4]);
        return count_from(w);
    }

    bool inside(cplx z, Pt o, double h) const {
        const double x = z.real(), p = -z.imag();
        return x >= o.x && x <= o.x + h && p >= o.p && p <= o.p + h;
    }

    bool newton(Pt o, double h, cplx& z) const {
        const cplx z_ref(o.x + 0.5 * h, -(o.p + 0.5 * h));
        z = z_ref;
        for (int it = 0; it < 60; ++it) {
            const auto [f, df] = bargmann_scaled(psi_, z, z_ref);
            if (f == cplx(0.0)) return inside(z, o, h);
            if (df == cplx(0.0)) return false;
            const cplx step = f / df;
            z -= step;
            if (std::abs(z - z_ref) > 2.0 * h) return false;
            if (std::abs(step) < opt_.newton_tol) return inside(z, o, h);
        }
        return false;
    }

    void locate(Pt o, double h, int m, int depth, std::vector<StellarZero>& out) const {
        if (m == 1) {
            cplx z;
            if (newton(o, h, z)) {
                out.push_back({z.real(), -z.imag(), 1});
                return;
            }
        }
        if (h < 1e-9 || depth > 40) {
            cplx z;
            if (!newton(o, h, z)) z = cplx(o.x + 0.5 * h, -(o.p + 0.5 * h));
            out.push_back({z.real(), -z.imag(), m});
            return;
        }
        const double hh = 0.5 * h;
        int total = 0;
        for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 2; ++b) {
                const Pt c{o.x + a * hh, o.p + b * hh};
                const int mc = cell_winding(c, hh);
                total += mc;
                if (mc > 0) locate(c, hh, mc, depth + 1, out);
            }
        }
        if (total != m) throw NumericalError("stellar_zeros: subdivision lost zeros");
    }

public:
    /// Distance of a zero to the nearest line of the global cell grid.
    double grid_distance(const StellarZero& z) const {
        const double h = 1.0 / G_;
        auto d = [h](double v, double o) {
            const double r = std::fmod(std::fmod(v - o, h) + h, h);
            return std::min(r, h - r);
        };
        return std::min(d(z.x, ox_), d(z.p, op_));
    }

private:
    const CVector& psi_;
    ZeroFinderOptions opt_;
    int N_;
    double ox_ = 0.0, op_ = 0.0;
    int G_ = 1;
};

}  // namespace detail

/// All zeros of B in a fundamental cell, certified by the argument principle.
/// Throws NumericalError if the count cannot be certified after the allowed retries.
inline StellarSet stellar_zeros(const TorusState& psi, const ZeroFinderOptions& opt = {}) {
    if (!(psi.norm() > 0.0)) throw DomainError("stellar_zeros: zero state");
    const TorusState u = psi.normalized();
    detail::StellarSolver solver(u.amps(), opt);
    std::string last_error = "zero near cell boundary";
    for (int attempt = 0; attempt <= opt.max_retries; ++attempt) {
        // irrational offsets keep symmetric zero lines off the cell grid
        const double ox = -0.0123456789 * std::sqrt(2.0) - 0.0731 * attempt * std::sqrt(3.0);
        const double op = -0.0098765432 * std::sqrt(5.0) - 0.0519 * attempt * std::sqrt(7.0);
        try {
            StellarSet s = solver.run(ox, op);
            bool near = false;
            for (const auto& z : s.zeros)
                if (solver.grid_distance(z) < opt.boundary_tol) near = true;
            if (near) continue;
            if (s.total_winding != u.dim() || s.multiplicity_sum() != u.dim()) {
                last_error = "winding total " + std::to_string(s.total_winding) + " != N";
                continue;
            }
            s.attempts = attempt + 1;
            return s;
        } catch (const detail::ZeroNearBoundary&) {
            last_error = "zero near cell boundary";
        } catch (const NumericalError& e) {
            last_error = e.what();
        }
    }
    throw NumericalError("stellar_zeros: certification failed (" + last_error + ")");
}

// ---------------------------------------------------------------------------
// Theta-function reconstruction

/// Jacobi theta_1(pi z | tau = i): vanishes exactly on Z + iZ.
/// theta_1(v) = 2 sum_{n>=0} (-1)^n q^{(n+1/2)^2} sin((2n+1) v), q = e^{-pi}.
inline cplx theta1_lattice(cplx z) {
    const cplx v = kPi * z;
    cplx sum = 0.0;
    for (int n = 0; n < 60; ++n) {
        const double e = -kPi * (n + 0.5) * (n + 0.5);
        const cplx term = (n % 2 == 0 ? 2.0 : -2.0) * std::exp(e) * std::sin(static_cast<double>(2 * n + 1) * v);
        sum += term;
        if (n > 2 && std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return sum;
}

/// log B(z), branch arbitrary (only differences of exponentials matter).
inline cplx log_bargmann(const TorusState& psi, cplx z) {
    const double N = static_cast<double>(psi.dim());
    const cplx w = detail::bargmann_scaled(psi.amps(), z, z).first;
    return std::log(w) + kPi * N * std::norm(z) / 2.0;
}

struct ReconstructionReport {
    double max_relative_deviation = 0.0;
    cplx gamma;  ///< fitted log-constant
    cplx beta;   ///< linear coefficient implied by the zero sum
};

/// Fit B(z) = exp(gamma + pi N z^2 / 2 + beta z) prod_i theta1(pi (z - z_i)) on the probes and
/// report the largest relative deviation. z_i = x_i - i p_i.
inline ReconstructionReport reconstruct_check(const TorusState& psi, const StellarSet& zeros, const std::vector<cplx>& probes,
                                              double min_distance = 1e-3) {
    if (probes.empty()) throw DomainError("reconstruct_check: no probes");
    const double N = static_cast<double>(psi.dim());
    std::vector<cplx> zs;
    for (const auto& z : zeros.zeros)
        for (int m = 0; m < z.multiplicity; ++m) zs.emplace_back(z.x, -z.p);
    cplx S = 0.0;
    for (const cplx& z : zs) S += z;
    // quasi-periodicity forces sum z_i = N (i - 1)/2 mod Z + iZ; beta is then purely imaginary
    const double mprime = std::round(N / 2.0 + S.real());
    const cplx beta = -kPi * N - kTwoPi * S + kTwoPi * mprime;

    std::vector<cplx> q;  // P_j / B_j
    q.reserve(probes.size());
    for (const cplx& z : probes) {
        cplx logP = kPi * N * z * z / 2.0 + beta * z;
        for (const cplx& zi : zs) {
            const cplx d = z - zi;
            const double dx = d.real() - std::round(d.real());
            const double dy = d.imag() - std::round(d.imag());
            if (std::hypot(dx, dy) < min_distance) throw DomainError("reconstruct_check: probe too close to a zero");
            logP += std::log(theta1_lattice(d));
        }
        q.push_back(std::exp(logP - log_bargmann(psi, z)));
    }
    cplx num = 0.0;
    double den = 0.0;
    for (const cplx& v : q) {
        num += std::conj(v);
        den += std::norm(v);
    }
    const cplx c = num / den;  // e^gamma
    ReconstructionReport rep;
    rep.beta = beta;
    rep.gamma = std::log(c);
    for (const cplx& v : q) rep.max_relative_deviation = std::max(rep.max_relative_deviation, std::abs(1.0 - c * v));
    return rep;
}

/// mu^Z(exp(2 pi i k . x)) = (1/N) sum_i m_i exp(2 pi i (k1 x_i + k2 p_i)).
inline cplx stellar_fourier(const StellarSet& zeros, Mode k) {
    if (k.k1 == 0 && k.k2 == 0) throw DomainError("stellar_fourier: k = 0 is trivially 1");
    // summed in sorted order so the result does not depend on how the zeros are listed
    std::vector<StellarZero> zs = zeros.zeros;
    std::sort(zs.begin(), zs.end(), [](const StellarZero& a, const StellarZero& b) {
        return std::tie(a.x, a.p, a.multiplicity) < std::tie(b.x, b.p, b.multiplicity);
    });
    cplx s = 0.0;
    int total = 0;
    for (const auto& z : zs) {
        s += static_cast<double>(z.multiplicity) *
             std::polar(1.0, kTwoPi * (static_cast<double>(k.k1) * z.x + static_cast<double>(k.k2) * z.p));
        total += z.multiplicity;
    }
    return s / static_cast<double>(total);
}

}  // namespace qchaos
