#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace boson {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

// Numerical tolerances shared by every module.
namespace tol {
inline constexpr double psd = 1e-10;    // most negative eigenvalue accepted (clipped to 0)
inline constexpr double herm = 1e-10;   // max |rho - rho^dagger| entry
inline constexpr double norm = 1e-8;    // pure-state normalization / trace excess
inline constexpr double eig = 1e-8;     // eigendecomposition reconstruction residual
inline constexpr double support = 1e-14;  // eigenvalues below this are outside the support
inline constexpr double max_trace_deficit = 1e-4;
}  // namespace tol

// Parameter outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Input object violates one of its invariants (Hermiticity, positivity, ...).
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Truncated Fock space lost more probability than allowed.
class TruncationError : public std::runtime_error {
public:
    TruncationError(const std::string& what, double deficit)
        : std::runtime_error(what), deficit_(deficit) {}
    double deficit() const noexcept { return deficit_; }

private:
    double deficit_;
};

}  // namespace boson
