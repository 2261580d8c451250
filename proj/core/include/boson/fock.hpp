#pragma once

// Truncated Fock-space states, standard constructors, and spectral quantities.
//
// All matrices live in the number basis |0>, ..., |D-1>. Truncation is explicit:
// the trace deficit 1 - Tr(rho) of a DensityMatrix measures the probability lost
// beyond the last retained level.

#include "boson/types.hpp"

#include <vector>

namespace boson {

class DensityMatrix;

// Normalized pure state over the truncated number basis.
class FockVector {
public:
    // Throws ValidationError when |amps| differs from 1 by more than tol::norm.
    explicit FockVector(Vector amps);

    // Rescales `raw` to unit norm; throws ValidationError on a zero vector.
    static FockVector normalized(Vector raw);

    Index dim() const noexcept { return amps_.size(); }
    const Vector& amps() const noexcept { return amps_; }
    Complex operator[](Index k) const { return amps_(k); }

    double mean_photons() const;
    // <psi| a |psi>
    Complex mean_amplitude() const;

    // Zero-pads to a larger dimension.
    FockVector padded(Index dim) const;
    DensityMatrix projector() const;

private:
    Vector amps_;
};

// Hermitian, positive semidefinite, trace <= 1 operator on the truncated space.
class DensityMatrix {
public:
    // Full validation: Hermiticity, positivity (eigenvalues >= -tol::psd), trace <= 1 + tol::norm.
    explicit DensityMatrix(Matrix entries);

    // Wraps the output of a CP map: symmetrizes away rounding noise, skips the eigen check.
    static DensityMatrix from_channel_output(Matrix entries);

    Index dim() const noexcept { return entries_.rows(); }
    const Matrix& entries() const noexcept { return entries_; }
    Complex operator()(Index i, Index j) const { return entries_(i, j); }

    double trace() const { return entries_.trace().real(); }
    double trace_deficit() const { return 1.0 - trace(); }
    double mean_photons() const;

    DensityMatrix padded(Index dim) const;
    // Leading dim x dim block.
    DensityMatrix truncated(Index dim) const;

    // Re-runs the constructor checks; throws ValidationError.
    void validate() const;

private:
    struct Unchecked {};
    DensityMatrix(Matrix entries, Unchecked);
    Matrix entries_;
};

// Eigenvalues in non-increasing order.
struct Spectrum {
    std::vector<double> eigenvalues;
    double residual = 0.0;  // max |rho - V diag V^dagger|

    std::size_t size() const noexcept { return eigenvalues.size(); }
    double operator[](std::size_t i) const { return eigenvalues[i]; }
};

struct CoherentTruncation {
    FockVector state;
    double norm_deficit;  // 1 - sum_{k<D} |<k|alpha>|^2 before renormalizing
};

// ---------------------------------------------------------------------------
// Constructors

FockVector fock_state(Index k, Index dim);
FockVector coherent_state(Complex alpha, Index dim);
CoherentTruncation coherent_state_with_deficit(Complex alpha, Index dim);

// Squeezed vacuum S(r e^{i phi})|0>, with <a^2> = -e^{i phi} sinh(2r)/2.
FockVector squeezed_vacuum(double r, double phi, Index dim);

// diag(M^k / (M+1)^{k+1}); throws DomainError for M < 0.
DensityMatrix thermal_state(double mean_photons, Index dim);

// Annihilation, creation and number operators on the truncated space.
Matrix annihilation(Index dim);
Matrix creation(Index dim);
Matrix number_operator(Index dim);

// <m| exp(phi i a^dagger a) |n>
Matrix phase_shift(double phi, Index dim);

// Matrix elements <m|D(mu)|n> of the untruncated displacement operator for m < rows, n < cols.
// The square block is unitary up to leakage beyond the truncation.
Matrix displacement_matrix(Complex mu, Index rows, Index cols);
Matrix displacement_operator(Complex mu, Index dim);

// ---------------------------------------------------------------------------
// Spectral quantities (natural logarithms throughout)

// Throws ValidationError when rho is not Hermitian within tol::herm.
Spectrum spectrum(const Matrix& rho);
inline Spectrum spectrum(const DensityMatrix& rho) { return spectrum(rho.entries()); }

double von_neumann_entropy(const Spectrum& s);
double von_neumann_entropy(const DensityMatrix& rho);
double renyi2_entropy(const DensityMatrix& rho);

// (1+x) ln(1+x) - x ln x, g(0) = 0; throws DomainError for x < 0.
double g_function(double x);

// Tr[rho1 (ln rho1 - ln rho2)]. Returns +infinity when rho1 has weight outside the support of rho2.
double relative_entropy(const DensityMatrix& rho1, const DensityMatrix& rho2);

// S(rho || thermal_state(M)) with the closed form -ln tau_M = ln(M+1) + a^dagger a ln((M+1)/M),
// so the far tail of tau_M is never compared against the support floor. Requires M > 0.
double relative_entropy_to_thermal(const DensityMatrix& rho, double mean_photons);

// f(A) for Hermitian A through its eigendecomposition.
template <typename F>
Matrix hermitian_function(const Matrix& a, F&& f);

// Sum of |eigenvalues| of the Hermitian part of a.
double trace_norm(const Matrix& a);
double max_abs(const Matrix& a);

}  // namespace boson

#include <Eigen/Eigenvalues>

template <typename F>
boson::Matrix boson::hermitian_function(const Matrix& a, F&& f) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(a);
    const auto& v = solver.eigenvectors();
    Eigen::VectorXd values = solver.eigenvalues();
    for (Index i = 0; i < values.size(); ++i) values(i) = f(values(i));
    return v * values.asDiagonal() * v.adjoint();
}
