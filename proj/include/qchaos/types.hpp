#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qchaos {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr cplx kI{0.0, 1.0};

/// Input violates an operation's precondition (bad index, odd dimension, ...).
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A numerical procedure failed to meet its own accuracy contract.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// File could not be read, written, or had an unexpected layout.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Reduce to [0,1). Rounds toward -inf so negative inputs land in range.
inline double mod1(double v) {
    double r = v - std::floor(v);
    // floor can leave exactly 1.0 for tiny negative v
    return r >= 1.0 ? 0.0 : r;
}

inline long long mod_int(long long a, long long n) {
    long long r = a % n;
    return r < 0 ? r + n : r;
}

/// Entrywise max-norm.
template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace qchaos
