#pragma once

// Quantized torus maps: cat maps (Hannay-Berry kernel, or a product of
// quantized SL(2,Z) generators), the Balazs-Voros baker, kicked cat maps,
// Egorov defects, eigendecomposition and period detection.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "qchaos/classical.hpp"
#include "qchaos/symplectic.hpp"
#include "qchaos/torus.hpp"

namespace qchaos {

struct UnitaryPropagator {
    int N = 0;
    CMatrix matrix;
    std::string label;

    /// ||U^dagger U - I||_max
    double unitarity_defect() const {
        return max_abs(CMatrix(matrix.adjoint() * matrix - CMatrix::Identity(N, N)));
    }
};

inline CMatrix matrix_power(const CMatrix& U, long long n) {
    CMatrix base = n < 0 ? CMatrix(U.adjoint()) : U;
    CMatrix out = CMatrix::Identity(U.rows(), U.cols());
    for (long long e = std::llabs(n); e > 0; e >>= 1) {
        if (e & 1) out = out * base;
        if (e > 1) base = base * base;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Cat maps

enum class CatQuantization {
    Strict,          ///< checkerboard matrices only
    AllowGenerators  ///< non-checkerboard matrices through the generator product
};

namespace detail {

/// Hannay-Berry kernel for a checkerboard matrix with b != 0:
/// U(l', l) ~ sum_{m=0}^{|b|-1} exp{ i pi / (N b) [a l^2 - 2 l (l' + N m) + d (l' + N m)^2] }.
inline CMatrix hannay_berry_kernel(const SymplecticMatrix& S, int N) {
    const long long b = S.b;
    const long long nb = static_cast<long long>(N) * std::llabs(b);
    const long long modulus = 2 * nb;  // exponent is pi * E / (N b), periodic in E mod 2 N |b|
    const long long sgn = b > 0 ? 1 : -1;
    std::vector<cplx> roots(modulus);
    for (long long r = 0; r < modulus; ++r)
        roots[r] = std::polar(1.0, kPi * static_cast<double>(r) / static_cast<double>(nb));
    CMatrix K(N, N);
    for (long long lp = 0; lp < N; ++lp) {
        for (long long l = 0; l < N; ++l) {
            cplx acc = 0.0;
            for (long long m = 0; m < std::llabs(b); ++m) {
                const long long q = lp + N * m;
                long long E = mod_int(S.a * mod_int(l * l, modulus), modulus);
                E = mod_int(E - 2 * mod_int(l * q, modulus), modulus);
                E = mod_int(E + S.d * mod_int(q * q, modulus), modulus);
                acc += roots[mod_int(sgn * E, modulus)];
            }
            K(lp, l) = acc;
        }
    }
    // fixed Fresnel phase, then unit column norm
    K *= std::polar(1.0, -kPi / 4.0 * static_cast<double>(sgn));
    const double s = K.col(0).norm();
    if (!(s > 0.0)) throw NumericalError("quantize_cat: degenerate Hannay-Berry kernel");
    return K / s;
}

/// Quantization of R^q, R = [[1,1],[0,1]]: F^* diag(v_m^q) F with v_m = exp(-i pi m^2 / N)
/// (m(m+N) in place of m^2 for odd N so the phase is N-periodic).
inline CMatrix shear_unitary(int N, long long q) {
    const CMatrix F = dft_matrix(N);
    const long long twoN = 2LL * N;
    CVector v(N);
    for (long long m = 0; m < N; ++m) {
        long long e = (N % 2 == 0) ? mod_int(m * m, twoN) : mod_int(m * (m + N), twoN);
        e = mod_int(-mod_int(q, twoN) * e, twoN);
        v[m] = std::polar(1.0, kPi * static_cast<double>(e) / static_cast<double>(N));
    }
    return F.adjoint() * v.asDiagonal() * F;
}

inline CMatrix parity_unitary(int N) {
    CMatrix P = CMatrix::Zero(N, N);
    for (int l = 0; l < N; ++l) P(static_cast<int>(mod_int(-l, N)), l) = 1.0;
    return P;
}

/// Quantization of S as a product of the generators J = [[0,-1],[1,0]] (U = F^*),
/// R = [[1,1],[0,1]] and -I. Covariant up to unimodular phases.
inline CMatrix generator_product(const SymplecticMatrix& S, int N) {
    // Left-reduce: M <- J R^{-q} M until M is upper triangular; then S = (ops)^{-1} M.
    struct Op {
        bool is_j;
        long long q;
    };
    std::vector<Op> ops;
    long long a = S.a, b = S.b, c = S.c, d = S.d;
    while (c != 0) {
        const long long q = static_cast<long long>(std::floor(static_cast<double>(a) / static_cast<double>(c)));
        a -= q * c;
        b -= q * d;
        ops.push_back({false, -q});  // applied R^{-q}
        // J M = [[-c, -d], [a, b]]
        const long long na = -c, nb = -d, nc = a, nd = b;
        a = na;
        b = nb;
        c = nc;
        d = nd;
        ops.push_back({true, 0});
    }
    const CMatrix F = dft_matrix(N);
    // remaining M = R^b (a = 1) or -R^{-b} (a = -1)
    CMatrix UM = (a == 1) ? shear_unitary(N, b) : CMatrix(parity_unitary(N) * shear_unitary(N, -b));
    // S = G_1^{-1} ... G_k^{-1} M with G the recorded ops in order
    CMatrix U = CMatrix::Identity(N, N);
    for (const Op& op : ops) {
        if (op.is_j) U = U * F;  // U(J)^{-1} = F
        else U = U * shear_unitary(N, -op.q);
    }
    return U * UM;
}

}  // namespace detail

/// U_N(S). Checkerboard matrices use the Hannay-Berry kernel and satisfy exact
/// Egorov; other matrices are rejected unless `policy` allows the generator product.
inline UnitaryPropagator quantize_cat(const SymplecticMatrix& S, int N,
                                      CatQuantization policy = CatQuantization::Strict) {
    if (N < 1) throw DomainError("quantize_cat: N must be >= 1");
    UnitaryPropagator U{N, {}, "cat " + S.str()};
    if (S.satisfies_parity() && S.b != 0) {
        U.matrix = detail::hannay_berry_kernel(S, N);
    } else if (S.satisfies_parity() || policy == CatQuantization::AllowGenerators) {
        U.matrix = detail::generator_product(S, N);
        U.label += " (generators)";
    } else {
        throw DomainError("quantize_cat: " + S.str() + " violates the checkerboard condition (a*b, c*d even)");
    }
    return U;
}

/// Balazs-Voros baker: F_N^* blockdiag(F_{N/2}, F_{N/2}).
inline UnitaryPropagator quantize_baker(int N) {
    if (N < 2 || N % 2 != 0) throw DomainError("quantize_baker: N must be an even integer, got " + std::to_string(N));
    const int h = N / 2;
    const CMatrix Fh = dft_matrix(h);
    CMatrix B = CMatrix::Zero(N, N);
    B.topLeftCorner(h, h) = Fh;
    B.bottomRightCorner(h, h) = Fh;
    return {N, dft_matrix(N).adjoint() * B, "baker"};
}

/// exp(-2 pi i N eps H_N) through the Hermitian eigendecomposition of H_N.
inline CMatrix kick_unitary(const TorusObservable& H, int N, double eps) {
    if (!H.is_real()) throw DomainError("kick_unitary: Hamiltonian must be real");
    const CMatrix Hn = quantize_observable(H, N);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(Hn);
    if (es.info() != Eigen::Success) throw NumericalError("kick_unitary: Hermitian eigensolver failed");
    CVector ph(N);
    for (int j = 0; j < N; ++j) ph[j] = std::polar(1.0, -kTwoPi * N * eps * es.eigenvalues()[j]);
    return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

/// Quantization of Phi^eps_H o kappa_S: exp(-2 pi i N eps H_N) U_N(S).
inline UnitaryPropagator perturbed_cat(const SymplecticMatrix& S, int N, double eps, const TorusObservable& H,
                                       CatQuantization policy = CatQuantization::Strict) {
    UnitaryPropagator U = quantize_cat(S, N, policy);
    if (eps != 0.0) U.matrix = kick_unitary(H, N, eps) * U.matrix;
    U.label = "perturbed-cat " + S.str() + " eps=" + std::to_string(eps);
    return U;
}

// ---------------------------------------------------------------------------
// Egorov

struct EgorovOptions {
    int grid = 0;     ///< push-forward grid for non-linear maps; 0 selects max(128, 4 (K + 1))
    int cutoff = 0;   ///< Fourier re-projection cutoff K; 0 selects N/2 - 1
};

/// Fourier coefficients |k_i| <= K of a real function sampled on an M x M grid.
template <typename Fn>
TorusObservable fourier_project(Fn&& fn, int M, int K) {
    if (2 * K >= M) throw DomainError("fourier_project: grid too coarse for cutoff");
    RMatrix samples(M, M);
    for (int i = 0; i < M; ++i)
        for (int j = 0; j < M; ++j) samples(i, j) = fn(static_cast<double>(i) / M, static_cast<double>(j) / M);
    // separable DFT restricted to |k| <= K
    const int W = 2 * K + 1;
    CMatrix Ex(W, M);
    for (int a = 0; a < W; ++a)
        for (int i = 0; i < M; ++i) Ex(a, i) = unit_root(-static_cast<long long>(a - K) * i, M) / static_cast<double>(M);
    const CMatrix C = Ex * samples.cast<cplx>() * Ex.transpose();
    TorusObservable::Coeffs coeffs;
    for (int a = 0; a < W; ++a)
        for (int b = 0; b < W; ++b) coeffs[Mode{a - K, b - K}] = C(a, b);
    // symmetrize away rounding so the reality check is exact
    TorusObservable::Coeffs sym;
    for (const auto& [k, c] : coeffs) sym[k] = 0.5 * (c + std::conj(coeffs[-k]));
    return TorusObservable(std::move(sym), true);
}

/// f o kappa^n as Fourier data: exact for cat maps, grid push-forward otherwise.
inline TorusObservable evolve_observable(const ClassicalMap& map, const TorusObservable& f, long long n, int N,
                                         const EgorovOptions& opt = {}) {
    if (n == 0) return f;
    if (map.kind == ClassicalMap::Kind::Cat) return compose_cat(f, map.S, n);
    if (!f.is_real()) throw DomainError("egorov_defect: non-linear maps need a real observable");
    const int K = opt.cutoff > 0 ? opt.cutoff : N / 2 - 1;
    if (K < 1 || 2 * K >= N) throw DomainError("egorov_defect: cutoff overflow, increase N");
    const int M = opt.grid > 0 ? opt.grid : std::max(128, 4 * (K + 1));
    return fourier_project(
        [&](double x, double p) {
            const PhasePoint Y = map.iterate(PhasePoint(x, p), n);
            return f.evaluate(Y.x, Y.p).real();
        },
        M, K);
}

/// ||U^{-n} f_N U^n - (f o kappa^n)_N||_max.
/// For cat maps every integer mode is admissible: Weyl operators are defined
/// for all of Z^2 and the identity is exact, so no aliasing cutoff applies.
inline double egorov_defect(const UnitaryPropagator& U, const ClassicalMap& map, const TorusObservable& f, long long n,
                            const EgorovOptions& opt = {}) {
    if (n == 0) return 0.0;
    const int N = U.N;
    const bool exact = map.kind == ClassicalMap::Kind::Cat;
    const CMatrix fN = exact ? weyl_sum(f, N) : quantize_observable(f, N);
    const TorusObservable g = evolve_observable(map, f, n, N, opt);
    const CMatrix gN = exact ? weyl_sum(g, N) : quantize_observable(g, N);
    const CMatrix Un = matrix_power(U.matrix, n);
    return max_abs(CMatrix(Un.adjoint() * fN * Un - gN));
}

// ---------------------------------------------------------------------------
// Spectra

struct SpectralData {
    int N = 0;
    std::vector<double> phases;  ///< eigenphases in [0, 2 pi), ascending
    CMatrix vectors;             ///< column j is the eigenvector for phases[j]
    std::vector<double> residuals;

    TorusState state(int j) const { return TorusState(vectors.col(j), "eigenstate " + std::to_string(j)); }

    double max_residual() const {
        return residuals.empty() ? 0.0 : *std::max_element(residuals.begin(), residuals.end());
    }
    double gram_defect() const {
        return max_abs(CMatrix(vectors.adjoint() * vectors - CMatrix::Identity(N, N)));
    }
};

namespace detail {

/// Rotate v so its first maximal-modulus entry is real positive.
inline void fix_phase(Eigen::Ref<CVector> v) {
    double m = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) m = std::max(m, std::abs(v[i]));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v[i]) >= m * (1.0 - 1e-9)) {
            v *= std::conj(v[i]) / std::abs(v[i]);
            return;
        }
    }
}

inline double wrap_phase(double th) {
    th = std::fmod(th, kTwoPi);
    if (th < 0.0) th += kTwoPi;
    if (th >= kTwoPi) th = 0.0;
    return th;
}

}  // namespace detail

/// Full eigendecomposition of a unitary matrix.
///
/// The complex Schur form of a normal matrix is diagonal, so the Schur vectors
/// are an orthonormal eigenbasis. Eigenphases closer than `cluster_tol` form a
/// cluster whose basis is replaced by the orthonormalized projections of the
/// position basis vectors chosen by column-pivoted QR, which makes degenerate
/// eigenspaces independent of the solver's internal choices.
inline SpectralData eigensystem(const UnitaryPropagator& U, double cluster_tol = 1e-8) {
    const int N = U.N;
    Eigen::ComplexSchur<CMatrix> schur(U.matrix, true);
    if (schur.info() != Eigen::Success) throw NumericalError("eigensystem: Schur decomposition did not converge");
    const CMatrix& T = schur.matrixT();
    const CMatrix& Q = schur.matrixU();

    std::vector<double> raw(N);
    for (int j = 0; j < N; ++j) raw[j] = detail::wrap_phase(std::arg(T(j, j)));
    std::vector<int> order(N);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return raw[i] < raw[j]; });

    SpectralData out;
    out.N = N;
    out.phases.resize(N);
    out.vectors.resize(N, N);
    for (int j = 0; j < N; ++j) {
        out.phases[j] = raw[order[j]];
        out.vectors.col(j) = Q.col(order[j]);
    }

    // clusters of consecutive phases on the circle; start after the largest gap
    int start = 0;
    double best_gap = -1.0;
    for (int j = 0; j < N; ++j) {
        const double next = j + 1 < N ? out.phases[j + 1] : out.phases[0] + kTwoPi;
        if (next - out.phases[j] > best_gap) {
            best_gap = next - out.phases[j];
            start = (j + 1) % N;
        }
    }
    std::vector<std::vector<int>> clusters;
    for (int s = 0; s < N; ++s) {
        const int j = (start + s) % N;
        if (s > 0) {
            const int prev = (start + s - 1) % N;
            double gap = out.phases[j] - out.phases[prev];
            if (gap < 0.0) gap += kTwoPi;
            if (gap < cluster_tol) {
                clusters.back().push_back(j);
                continue;
            }
        }
        clusters.push_back({j});
    }

    for (const auto& cl : clusters) {
        const int m = static_cast<int>(cl.size());
        if (m == 1) {
            detail::fix_phase(out.vectors.col(cl[0]));
            continue;
        }
        CMatrix V(N, m);
        for (int i = 0; i < m; ++i) V.col(i) = out.vectors.col(cl[i]);
        const CMatrix C = V.adjoint();  // m x N; column l is the coordinate vector of P e_l
        Eigen::ColPivHouseholderQR<CMatrix> piv(C);
        CMatrix B(N, m);
        for (int i = 0; i < m; ++i) B.col(i) = V * C.col(piv.colsPermutation().indices()[i]);
        Eigen::HouseholderQR<CMatrix> qr(B);
        const CMatrix Qc = qr.householderQ() * CMatrix::Identity(N, m);
        std::vector<int> sorted = cl;
        std::sort(sorted.begin(), sorted.end());
        for (int i = 0; i < m; ++i) {
            CVector v = Qc.col(i);
            detail::fix_phase(v);
            out.vectors.col(sorted[i]) = v;
            // Rayleigh quotient phase keeps the residual contract inside the cluster
            out.phases[sorted[i]] = detail::wrap_phase(std::arg(v.dot(U.matrix * v)));
        }
    }

    // clusters that straddle 0 may have reordered; restore ascending order
    std::vector<int> ord2(N);
    std::iota(ord2.begin(), ord2.end(), 0);
    std::stable_sort(ord2.begin(), ord2.end(), [&](int i, int j) { return out.phases[i] < out.phases[j]; });
    SpectralData sorted;
    sorted.N = N;
    sorted.phases.resize(N);
    sorted.vectors.resize(N, N);
    for (int j = 0; j < N; ++j) {
        sorted.phases[j] = out.phases[ord2[j]];
        sorted.vectors.col(j) = out.vectors.col(ord2[j]);
    }
    const CMatrix UV = U.matrix * sorted.vectors;
    sorted.residuals.resize(N);
    for (int j = 0; j < N; ++j)
        sorted.residuals[j] = (UV.col(j) - std::polar(1.0, sorted.phases[j]) * sorted.vectors.col(j)).norm();
    if (sorted.max_residual() > 1e-9)
        throw NumericalError("eigensystem: residual " + std::to_string(sorted.max_residual()) + " exceeds 1e-9");
    return sorted;
}

// ---------------------------------------------------------------------------
// Periods

struct PeriodResult {
    long long period = 0;
    double phase = 0.0;   ///< U^T ~ exp(i phase) I
    double defect = 0.0;  ///< ||U^T - exp(i phase) I||_max
};

/// Best global phase and defect of U^T against a multiple of the identity.
inline PeriodResult identity_defect(const CMatrix& UT, long long T) {
    const cplx mean = UT.diagonal().mean();
    PeriodResult r;
    r.period = T;
    r.phase = std::arg(mean);
    r.defect = max_abs(CMatrix(UT - std::polar(1.0, r.phase) * CMatrix::Identity(UT.rows(), UT.cols())));
    return r;
}

/// Smallest T <= T_max with ||U^T - e^{i phi} I||_max < tol.
///
/// A fixed probe vector is propagated by matrix-vector products; times at
/// which it returns to its own ray are confirmed with a binary matrix power.
inline std::optional<PeriodResult> propagator_period(const UnitaryPropagator& U, long long T_max, double tol = 1e-8) {
    if (T_max < 1) throw DomainError("propagator_period: T_max must be >= 1");
    const int N = U.N;
    Rng rng(0x5eed, "period-probe", static_cast<std::uint64_t>(N));
    CVector v(N);
    for (int i = 0; i < N; ++i) v[i] = rng.complex_normal();
    v.normalize();
    CVector w = v;
    for (long long T = 1; T <= T_max; ++T) {
        w = U.matrix * w;
        const cplx ov = v.dot(w);
        if (std::abs(ov) < 0.5) continue;
        if ((w - ov / std::abs(ov) * v).norm() < 1e-6) {
            PeriodResult r = identity_defect(matrix_power(U.matrix, T), T);
            if (r.defect < tol) return r;
        }
    }
    return std::nullopt;
}

}  // namespace qchaos
