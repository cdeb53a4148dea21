#ifndef TPQR_COMMON_HPP
#define TPQR_COMMON_HPP

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace tpqr {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr char version_string[] = "0.1.0";

/// Iterative or basis-size convergence failure.
class ConvergenceError : public std::runtime_error {
public:
    explicit ConvergenceError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Root/bracket searches that found nothing in the supplied range.
class NotFoundError : public std::runtime_error {
public:
    explicit NotFoundError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Parameter regime the truncated-basis treatment cannot represent.
class RegimeError : public std::runtime_error {
public:
    explicit RegimeError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical diagnostics failure (near-defective eigensystem, degenerate
/// steady manifold, dark output channel).
class DiagnosticsError : public std::runtime_error {
public:
    explicit DiagnosticsError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace tpqr

#endif
