#pragma once

#include <cmath>
#include <cstdlib>
#include <string>

#include "qchaos/types.hpp"

namespace qchaos {

/// Integer matrix [[a, b], [c, d]] with unit determinant.
struct SymplecticMatrix {
    long long a = 1, b = 0, c = 0, d = 1;

    SymplecticMatrix() = default;
    SymplecticMatrix(long long a_, long long b_, long long c_, long long d_) : a(a_), b(b_), c(c_), d(d_) {
        if (a * d - b * c != 1)
            throw DomainError("SymplecticMatrix: determinant must be 1, got " + std::to_string(a * d - b * c));
    }

    static SymplecticMatrix identity() { return {}; }

    long long trace() const { return a + d; }
    bool is_hyperbolic() const { return std::llabs(trace()) > 2; }

    /// Checkerboard condition: a*b and c*d even.
    bool satisfies_parity() const { return (a * b) % 2 == 0 && (c * d) % 2 == 0; }

    SymplecticMatrix inverse() const { return SymplecticMatrix(d, -b, -c, a); }
    SymplecticMatrix transpose() const { return SymplecticMatrix(a, c, b, d); }

    friend SymplecticMatrix operator*(const SymplecticMatrix& m, const SymplecticMatrix& n) {
        SymplecticMatrix r;
        r.a = checked_add(checked_mul(m.a, n.a), checked_mul(m.b, n.c));
        r.b = checked_add(checked_mul(m.a, n.b), checked_mul(m.b, n.d));
        r.c = checked_add(checked_mul(m.c, n.a), checked_mul(m.d, n.c));
        r.d = checked_add(checked_mul(m.c, n.b), checked_mul(m.d, n.d));
        return r;
    }

    friend bool operator==(const SymplecticMatrix& m, const SymplecticMatrix& n) {
        return m.a == n.a && m.b == n.b && m.c == n.c && m.d == n.d;
    }

    /// S^n for any integer n (negative powers through the inverse).
    SymplecticMatrix pow(long long n) const {
        SymplecticMatrix base = n < 0 ? inverse() : *this;
        SymplecticMatrix out;
        for (long long e = std::llabs(n); e > 0; e >>= 1) {
            if (e & 1) out = out * base;
            if (e > 1) base = base * base;
        }
        return out;
    }

    std::string str() const {
        return "[[" + std::to_string(a) + "," + std::to_string(b) + "],[" + std::to_string(c) + "," +
               std::to_string(d) + "]]";
    }

    static long long checked_mul(long long x, long long y) {
        long long r;
        if (__builtin_mul_overflow(x, y, &r)) throw DomainError("SymplecticMatrix: integer overflow");
        return r;
    }
    static long long checked_add(long long x, long long y) {
        long long r;
        if (__builtin_add_overflow(x, y, &r)) throw DomainError("SymplecticMatrix: integer overflow");
        return r;
    }
};

/// Arnold's cat map [[1,1],[1,2]]. Violates the checkerboard condition.
inline SymplecticMatrix cat_matrix() { return {1, 1, 1, 2}; }
/// [[2,1],[3,2]], quantizable for every N.
inline SymplecticMatrix degi_matrix() { return {2, 1, 3, 2}; }

}  // namespace qchaos
