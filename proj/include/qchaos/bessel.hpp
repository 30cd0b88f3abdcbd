#pragma once

// Integer-order Bessel functions J_0 .. J_nmax at one argument by Miller's
// backward recurrence, normalized with J_0 + 2 sum J_2k = 1.

#include <algorithm>
#include <cmath>
#include <vector>

#include "qchaos/types.hpp"

namespace qchaos {

/// Writes J_0(x) .. J_nmax(x) into out (resized to nmax + 1). x >= 0.
inline void bessel_j_sequence(int nmax, double x, std::vector<double>& out) {
    if (nmax < 0) throw DomainError("bessel_j_sequence: nmax must be >= 0");
    if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError("bessel_j_sequence: argument must be finite and >= 0");
    out.assign(nmax + 1, 0.0);
    if (x == 0.0) {
        out[0] = 1.0;
        return;
    }
    const int top = std::max(nmax, static_cast<int>(x));
    int start = top + 20 + static_cast<int>(std::sqrt(60.0 * top));
    start += start & 1;
    constexpr double kBig = 1e250;
    double jp1 = 0.0, j = 1e-300, norm = 0.0;
    for (int n = start; n >= 1; --n) {
        const double jm1 = 2.0 * n / x * j - jp1;
        jp1 = j;
        j = jm1;
        // j now holds the unnormalized J_{n-1}
        if (n - 1 <= nmax) out[n - 1] = j;
        if ((n - 1) % 2 == 0 && n - 1 > 0) norm += 2.0 * j;
        if (std::abs(j) > kBig) {
            j /= kBig;
            jp1 /= kBig;
            norm /= kBig;
            for (int m = n - 1; m <= nmax; ++m) out[m] /= kBig;
        }
    }
    norm += j;
    if (!(std::abs(norm) > 0.0) || !std::isfinite(norm))
        throw NumericalError("bessel_j_sequence: recurrence normalization failed");
    for (double& v : out) v /= norm;
}

inline double bessel_j(int n, double x) {
    std::vector<double> v;
    const double ax = std::abs(x);
    bessel_j_sequence(std::abs(n), ax, v);
    double r = v[std::abs(n)];
    if ((n < 0 && (n & 1)) != (x < 0 && (n & 1))) r = -r;
    return r;
}

/// Ascending power series, used to validate small arguments.
inline double bessel_j_series(int n, double x) {
    double term = 1.0;
    for (int i = 1; i <= n; ++i) term *= x / (2.0 * i);
    double s = term;
    for (int k = 1; k < 200; ++k) {
        term *= -(x * x / 4.0) / (static_cast<double>(k) * (k + n));
        s += term;
        if (std::abs(term) < 1e-18 * std::max(1.0, std::abs(s))) break;
    }
    return s;
}

}  // namespace qchaos
