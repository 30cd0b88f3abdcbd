#pragma once

// Quantum kinematics on the 2-torus: the N-dimensional spaces H_N spanned by
// Dirac combs, the discrete Fourier transform, Weyl translations and the
// quantization of trigonometric observables.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qchaos/types.hpp"

namespace qchaos {

/// State in H_N written in the position basis, amps[l] = <e_l, psi>.
/// Planck's constant is hbar = 1/(2 pi N).
class TorusState {
public:
    TorusState() = default;
    explicit TorusState(CVector amps, std::string description = {})
        : amps_(std::move(amps)), description_(std::move(description)) {
        if (amps_.size() < 1) throw DomainError("TorusState: dimension must be >= 1");
    }

    int dim() const { return static_cast<int>(amps_.size()); }
    const CVector& amps() const { return amps_; }
    cplx operator[](int l) const { return amps_[l]; }
    double norm() const { return amps_.norm(); }
    double hbar() const { return 1.0 / (kTwoPi * dim()); }
    const std::string& description() const { return description_; }

    /// Unit-norm copy. Throws on the zero vector.
    TorusState normalized() const {
        double n = norm();
        if (!(n > 0.0)) throw DomainError("TorusState: cannot normalize zero vector");
        return TorusState(amps_ / n, description_);
    }

    bool is_normalized(double tol = 1e-12) const { return std::abs(norm() - 1.0) < tol; }

private:
    CVector amps_;
    std::string description_;
};

inline cplx inner(const TorusState& a, const TorusState& b) { return a.amps().dot(b.amps()); }

// ---------------------------------------------------------------------------
// Basis states and the DFT

inline TorusState position_state(int N, int l) {
    if (N < 1) throw DomainError("position_state: N must be >= 1");
    if (l < 0 || l >= N) throw DomainError("position_state: index out of range");
    CVector v = CVector::Zero(N);
    v[l] = 1.0;
    return TorusState(std::move(v), "position " + std::to_string(l));
}

/// exp(2 pi i num / N) with num reduced mod N first, so large integer phases stay exact.
inline cplx unit_root(long long num, long long N) {
    return std::polar(1.0, kTwoPi * static_cast<double>(mod_int(num, N)) / static_cast<double>(N));
}

/// F_N[l', l] = N^{-1/2} exp(-2 pi i l l' / N).
inline CMatrix dft_matrix(int N) {
    if (N < 1) throw DomainError("dft_matrix: N must be >= 1");
    std::vector<cplx> roots(N);
    for (int r = 0; r < N; ++r) roots[r] = unit_root(-r, N);
    const double s = 1.0 / std::sqrt(static_cast<double>(N));
    CMatrix F(N, N);
    for (int lp = 0; lp < N; ++lp)
        for (int l = 0; l < N; ++l)
            F(lp, l) = s * roots[(static_cast<long long>(lp) * l) % N];
    return F;
}

inline TorusState dft(const TorusState& psi) {
    const int N = psi.dim();
    std::vector<cplx> roots(N);
    for (int r = 0; r < N; ++r) roots[r] = unit_root(-r, N);
    const double s = 1.0 / std::sqrt(static_cast<double>(N));
    CVector out(N);
    for (int lp = 0; lp < N; ++lp) {
        cplx acc = 0.0;
        for (int l = 0; l < N; ++l) acc += roots[(static_cast<long long>(lp) * l) % N] * psi[l];
        out[lp] = s * acc;
    }
    return TorusState(std::move(out), psi.description());
}

/// F_N^* e_m: plane wave with amps[l] = N^{-1/2} exp(2 pi i m l / N).
inline TorusState momentum_state(int N, int m) {
    if (N < 1) throw DomainError("momentum_state: N must be >= 1");
    if (m < 0 || m >= N) throw DomainError("momentum_state: index out of range");
    CVector v(N);
    const double s = 1.0 / std::sqrt(static_cast<double>(N));
    for (int l = 0; l < N; ++l) v[l] = s * unit_root(static_cast<long long>(m) * l, N);
    return TorusState(std::move(v), "momentum " + std::to_string(m));
}

// ---------------------------------------------------------------------------
// Weyl translations
//
// (T(n1,0) psi)(l) = psi(l - n1), (T(0,n2) psi)(l) = exp(2 pi i n2 l / N) psi(l),
// T(n) = exp(i pi n1 n2 / N) T(n1,0) T(0,n2). T(n) translates phase space by n/N.

struct Mode {
    long long k1 = 0;
    long long k2 = 0;
    friend bool operator<(const Mode& a, const Mode& b) {
        return a.k1 != b.k1 ? a.k1 < b.k1 : a.k2 < b.k2;
    }
    friend bool operator==(const Mode& a, const Mode& b) { return a.k1 == b.k1 && a.k2 == b.k2; }
    Mode operator-() const { return {-k1, -k2}; }
};

/// Phase of T(n) at row l: exp(i pi (2 n2 l - n1 n2) / N), exponent reduced mod 2N.
inline cplx translation_phase(long long n1, long long n2, long long l, long long N) {
    const long long twoN = 2 * N;
    long long e = mod_int(mod_int(2 * mod_int(n2, twoN), twoN) * l, twoN);
    e = mod_int(e - mod_int(mod_int(n1, twoN) * mod_int(n2, twoN), twoN), twoN);
    return std::polar(1.0, kPi * static_cast<double>(e) / static_cast<double>(N));
}

inline TorusState translation(const TorusState& psi, Mode n) {
    const int N = psi.dim();
    CVector out(N);
    for (int l = 0; l < N; ++l)
        out[l] = translation_phase(n.k1, n.k2, l, N) * psi[static_cast<int>(mod_int(l - n.k1, N))];
    return TorusState(std::move(out), psi.description());
}

inline CMatrix translation_matrix(int N, Mode n) {
    CMatrix T = CMatrix::Zero(N, N);
    for (int l = 0; l < N; ++l)
        T(l, static_cast<int>(mod_int(l - n.k1, N))) = translation_phase(n.k1, n.k2, l, N);
    return T;
}

// ---------------------------------------------------------------------------
// Observables

/// Trigonometric polynomial f(x,p) = sum_k c_k exp(2 pi i (k1 x + k2 p)).
class TorusObservable {
public:
    using Coeffs = std::map<Mode, cplx>;

    TorusObservable() = default;

    /// When `real` is set the reality condition c_{-k} = conj(c_k) is enforced.
    explicit TorusObservable(Coeffs coeffs, bool real = false, double tol = 1e-12)
        : coeffs_(std::move(coeffs)), real_(real) {
        for (auto it = coeffs_.begin(); it != coeffs_.end();) {
            if (it->second == cplx(0.0)) it = coeffs_.erase(it);
            else ++it;
        }
        if (real_ && !satisfies_reality(tol))
            throw DomainError("TorusObservable: coefficients violate c_{-k} = conj(c_k)");
    }

    static TorusObservable constant(double c) { return TorusObservable({{Mode{0, 0}, cplx(c)}}, true); }

    /// amp * cos(2 pi (k1 x + k2 p))
    static TorusObservable cos_mode(long long k1, long long k2, double amp = 1.0) {
        if (k1 == 0 && k2 == 0) return constant(amp);
        return TorusObservable({{Mode{k1, k2}, amp / 2.0}, {Mode{-k1, -k2}, amp / 2.0}}, true);
    }

    /// amp * sin(2 pi (k1 x + k2 p))
    static TorusObservable sin_mode(long long k1, long long k2, double amp = 1.0) {
        if (k1 == 0 && k2 == 0) return TorusObservable({}, true);
        return TorusObservable({{Mode{k1, k2}, amp / (2.0 * kI)}, {Mode{-k1, -k2}, -amp / (2.0 * kI)}}, true);
    }

    const Coeffs& coeffs() const { return coeffs_; }
    bool is_real() const { return real_; }

    cplx coeff(Mode k) const {
        auto it = coeffs_.find(k);
        return it == coeffs_.end() ? cplx(0.0) : it->second;
    }
    cplx mean() const { return coeff({0, 0}); }

    long long cutoff() const {
        long long K = 0;
        for (const auto& [k, c] : coeffs_) K = std::max({K, std::llabs(k.k1), std::llabs(k.k2)});
        return K;
    }

    bool satisfies_reality(double tol = 1e-12) const {
        for (const auto& [k, c] : coeffs_)
            if (std::abs(coeff(-k) - std::conj(c)) > tol) return false;
        return true;
    }

    /// sum_{k != 0} |c_k|^2, the phase-space variance.
    double variance() const {
        double v = 0.0;
        for (const auto& [k, c] : coeffs_)
            if (!(k == Mode{0, 0})) v += std::norm(c);
        return v;
    }

    cplx evaluate(double x, double p) const {
        cplx s = 0.0;
        for (const auto& [k, c] : coeffs_)
            s += c * std::polar(1.0, kTwoPi * (static_cast<double>(k.k1) * x + static_cast<double>(k.k2) * p));
        return s;
    }

    TorusObservable conj() const {
        Coeffs out;
        for (const auto& [k, c] : coeffs_) out[-k] = std::conj(c);
        return TorusObservable(std::move(out), real_);
    }

    friend TorusObservable operator+(const TorusObservable& a, const TorusObservable& b) {
        Coeffs out = a.coeffs_;
        for (const auto& [k, c] : b.coeffs_) out[k] += c;
        return TorusObservable(std::move(out), a.real_ && b.real_, 1e-9);
    }

    friend TorusObservable operator*(double s, const TorusObservable& a) {
        Coeffs out;
        for (const auto& [k, c] : a.coeffs_) out[k] = s * c;
        return TorusObservable(std::move(out), a.real_, 1e-9);
    }

    friend TorusObservable operator*(cplx s, const TorusObservable& a) {
        Coeffs out;
        for (const auto& [k, c] : a.coeffs_) out[k] = s * c;
        return TorusObservable(std::move(out), a.real_ && s.imag() == 0.0, 1e-9);
    }

private:
    Coeffs coeffs_;
    bool real_ = false;
};

/// The Weyl operator quantizing exp(2 pi i (k1 x + k2 p)), namely T(-k2, k1).
inline Mode weyl_index(Mode k) { return {-k.k2, k.k1}; }

/// sum_k c_k T(-k2, k1) with no aliasing check. Exact identities (cat-map Egorov)
/// hold for every integer mode, so they use this form directly.
inline CMatrix weyl_sum(const TorusObservable& f, int N) {
    CMatrix A = CMatrix::Zero(N, N);
    for (const auto& [k, c] : f.coeffs()) {
        const Mode n = weyl_index(k);
        for (int l = 0; l < N; ++l)
            A(l, static_cast<int>(mod_int(l - n.k1, N))) += c * translation_phase(n.k1, n.k2, l, N);
    }
    return A;
}

/// Quantized observable f_N. Requires the cutoff to be below N/2.
inline CMatrix quantize_observable(const TorusObservable& f, int N) {
    if (N < 1) throw DomainError("quantize_observable: N must be >= 1");
    if (2 * f.cutoff() >= N)
        throw DomainError("quantize_observable: cutoff " + std::to_string(f.cutoff()) +
                          " too large for N=" + std::to_string(N) + " (need 2*K_max < N)");
    return weyl_sum(f, N);
}

// ---------------------------------------------------------------------------
// Coherent states

/// Unnormalized periodized Gaussian centered at (x0, p0), any real (x0, p0):
/// sum_nu exp(-pi N (l/N - x0 - nu)^2) exp(2 pi i N p0 (l/N - nu)), |nu - nu_c| <= 3.
inline CVector coherent_amplitudes(int N, double x0, double p0) {
    CVector v = CVector::Zero(N);
    const long long nu_c = -static_cast<long long>(std::llround(x0));
    const double dN = static_cast<double>(N);
    // exp(2 pi i N p0 (l/N - nu)) = exp(2 pi i p0 l) exp(-2 pi i N p0 nu); reduce N p0 mod 1.
    const double np0 = mod1(dN * mod1(p0));
    const double p0r = mod1(p0);
    for (int l = 0; l < N; ++l) {
        const double y = l / dN;
        cplx acc = 0.0;
        for (long long nu = nu_c - 3; nu <= nu_c + 3; ++nu) {
            const double d = y - x0 - static_cast<double>(nu);
            const double g = std::exp(-kPi * dN * d * d);
            if (g == 0.0) continue;
            acc += g * std::polar(1.0, -kTwoPi * np0 * static_cast<double>(nu));
        }
        v[l] = acc * std::polar(1.0, kTwoPi * p0r * l);
    }
    return v;
}

inline TorusState coherent_state(int N, double x0, double p0) {
    if (N < 1) throw DomainError("coherent_state: N must be >= 1");
    CVector v = coherent_amplitudes(N, x0, p0);
    v /= v.norm();
    return TorusState(std::move(v), "coherent (" + std::to_string(x0) + "," + std::to_string(p0) + ")");
}

}  // namespace qchaos
