#include "boson/fock.hpp"

#include "boson/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace boson {

namespace {

double hermiticity_defect(const Matrix& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

void require_square(const Matrix& m, const char* who) {
    if (m.rows() != m.cols() || m.rows() == 0)
        throw ValidationError(std::string(who) + ": expected a non-empty square matrix");
}

}  // namespace

// ---------------------------------------------------------------- FockVector

FockVector::FockVector(Vector amps) : amps_(std::move(amps)) {
    if (amps_.size() == 0) throw ValidationError("FockVector: empty amplitude list");
    const double n2 = amps_.squaredNorm();
    if (std::abs(n2 - 1.0) > tol::norm)
        throw ValidationError("FockVector: state is not normalized (|psi|^2 = " + std::to_string(n2) + ")");
}

FockVector FockVector::normalized(Vector raw) {
    const double n = raw.norm();
    if (n == 0.0 || !std::isfinite(n)) throw ValidationError("FockVector: cannot normalize a zero vector");
    return FockVector(raw / n);
}

double FockVector::mean_photons() const {
    double s = 0.0;
    for (Index k = 0; k < dim(); ++k) s += static_cast<double>(k) * std::norm(amps_(k));
    return s;
}

Complex FockVector::mean_amplitude() const {
    Complex s = 0.0;
    for (Index k = 1; k < dim(); ++k) s += std::conj(amps_(k - 1)) * std::sqrt(static_cast<double>(k)) * amps_(k);
    return s;
}

FockVector FockVector::padded(Index dim) const {
    if (dim < this->dim()) throw DomainError("FockVector::padded: cannot shrink");
    Vector v = Vector::Zero(dim);
    v.head(this->dim()) = amps_;
    return FockVector(std::move(v));
}

DensityMatrix FockVector::projector() const {
    return DensityMatrix::from_channel_output(amps_ * amps_.adjoint());
}

// ------------------------------------------------------------- DensityMatrix

DensityMatrix::DensityMatrix(Matrix entries) : entries_(std::move(entries)) {
    validate();
}

DensityMatrix::DensityMatrix(Matrix entries, Unchecked) : entries_(std::move(entries)) {}

DensityMatrix DensityMatrix::from_channel_output(Matrix entries) {
    require_square(entries, "DensityMatrix");
    Matrix h = 0.5 * (entries + entries.adjoint());
    return DensityMatrix(std::move(h), Unchecked{});
}

void DensityMatrix::validate() const {
    require_square(entries_, "DensityMatrix");
    const double defect = hermiticity_defect(entries_);
    if (defect > tol::herm)
        throw ValidationError("DensityMatrix: not Hermitian (defect " + std::to_string(defect) + ")");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(entries_, Eigen::EigenvaluesOnly);
    const double lo = solver.eigenvalues().minCoeff();
    if (lo < -tol::psd)
        throw ValidationError("DensityMatrix: negative eigenvalue " + std::to_string(lo));
    if (trace() > 1.0 + tol::norm)
        throw ValidationError("DensityMatrix: trace exceeds one (" + std::to_string(trace()) + ")");
}

double DensityMatrix::mean_photons() const {
    double s = 0.0;
    for (Index k = 0; k < dim(); ++k) s += static_cast<double>(k) * entries_(k, k).real();
    return s;
}

DensityMatrix DensityMatrix::padded(Index dim) const {
    if (dim < this->dim()) throw DomainError("DensityMatrix::padded: cannot shrink");
    Matrix m = Matrix::Zero(dim, dim);
    m.topLeftCorner(this->dim(), this->dim()) = entries_;
    return DensityMatrix(std::move(m), Unchecked{});
}

DensityMatrix DensityMatrix::truncated(Index dim) const {
    if (dim > this->dim() || dim <= 0) throw DomainError("DensityMatrix::truncated: bad dimension");
    return DensityMatrix(entries_.topLeftCorner(dim, dim), Unchecked{});
}

// -------------------------------------------------------------- constructors

FockVector fock_state(Index k, Index dim) {
    if (dim <= 0) throw DomainError("fock_state: dimension must be positive");
    if (k < 0 || k >= dim) throw std::out_of_range("fock_state: index " + std::to_string(k) + " outside dimension " + std::to_string(dim));
    Vector v = Vector::Zero(dim);
    v(k) = 1.0;
    return FockVector(std::move(v));
}

CoherentTruncation coherent_state_with_deficit(Complex alpha, Index dim) {
    if (dim <= 0) throw DomainError("coherent_state: dimension must be positive");
    Vector v(dim);
    const double r2 = std::norm(alpha);
    v(0) = std::exp(-0.5 * r2);
    for (Index k = 1; k < dim; ++k) v(k) = v(k - 1) * alpha / std::sqrt(static_cast<double>(k));
    const double kept = v.squaredNorm();
    return {FockVector::normalized(std::move(v)), 1.0 - kept};
}

FockVector coherent_state(Complex alpha, Index dim) {
    return coherent_state_with_deficit(alpha, dim).state;
}

FockVector squeezed_vacuum(double r, double phi, Index dim) {
    if (dim <= 0) throw DomainError("squeezed_vacuum: dimension must be positive");
    Vector v = Vector::Zero(dim);
    const Complex ratio = -std::polar(std::tanh(r), phi);
    v(0) = 1.0 / std::sqrt(std::cosh(r));
    for (Index k = 2; k < dim; k += 2) {
        const double kk = static_cast<double>(k);
        v(k) = v(k - 2) * ratio * std::sqrt((kk - 1.0) / kk);
    }
    return FockVector::normalized(std::move(v));
}

DensityMatrix thermal_state(double mean_photons, Index dim) {
    if (!(mean_photons >= 0.0)) throw DomainError("thermal_state: mean photon number must be nonnegative");
    if (dim <= 0) throw DomainError("thermal_state: dimension must be positive");
    Matrix m = Matrix::Zero(dim, dim);
    const double q = mean_photons / (mean_photons + 1.0);
    double p = 1.0 / (mean_photons + 1.0);
    for (Index k = 0; k < dim; ++k) {
        m(k, k) = p;
        p *= q;
    }
    return DensityMatrix::from_channel_output(std::move(m));
}

Matrix annihilation(Index dim) {
    Matrix a = Matrix::Zero(dim, dim);
    for (Index n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

Matrix creation(Index dim) { return annihilation(dim).adjoint(); }

Matrix number_operator(Index dim) {
    Matrix n = Matrix::Zero(dim, dim);
    for (Index k = 0; k < dim; ++k) n(k, k) = static_cast<double>(k);
    return n;
}

Matrix phase_shift(double phi, Index dim) {
    Matrix u = Matrix::Zero(dim, dim);
    for (Index k = 0; k < dim; ++k) u(k, k) = std::polar(1.0, phi * static_cast<double>(k));
    return u;
}

Matrix displacement_matrix(Complex mu, Index rows, Index cols) {
    // D a^dagger = a^dagger D - mu^* D gives
    //   <m|D|n> = (sqrt(m) <m-1|D|n-1> - mu^* <m|D|n-1>) / sqrt(n)
    // seeded by the coherent-state column <m|D|0>.
    if (rows <= 0 || cols <= 0) throw DomainError("displacement_matrix: dimensions must be positive");
    Matrix d(rows, cols);
    d(0, 0) = std::exp(-0.5 * std::norm(mu));
    for (Index m = 1; m < rows; ++m) d(m, 0) = d(m - 1, 0) * mu / std::sqrt(static_cast<double>(m));
    const Complex mu_c = std::conj(mu);
    for (Index n = 1; n < cols; ++n) {
        const double inv = 1.0 / std::sqrt(static_cast<double>(n));
        d(0, n) = -mu_c * d(0, n - 1) * inv;
        for (Index m = 1; m < rows; ++m)
            d(m, n) = (std::sqrt(static_cast<double>(m)) * d(m - 1, n - 1) - mu_c * d(m, n - 1)) * inv;
    }
    return d;
}

Matrix displacement_operator(Complex mu, Index dim) { return displacement_matrix(mu, dim, dim); }

// ------------------------------------------------------------------ spectra

Spectrum spectrum(const Matrix& rho) {
    require_square(rho, "spectrum");
    const double defect = hermiticity_defect(rho);
    if (defect > tol::herm)
        throw ValidationError("spectrum: input is not Hermitian (defect " + std::to_string(defect) + ")");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(rho);
    const auto& vals = solver.eigenvalues();
    const auto& vecs = solver.eigenvectors();
    Spectrum s;
    s.eigenvalues.assign(vals.data(), vals.data() + vals.size());
    std::sort(s.eigenvalues.begin(), s.eigenvalues.end(), std::greater<>());
    s.residual = (rho - vecs * vals.asDiagonal() * vecs.adjoint()).cwiseAbs().maxCoeff();
    return s;
}

double von_neumann_entropy(const Spectrum& s) {
    double h = 0.0;
    for (double l : s.eigenvalues) {
        if (l < -tol::psd) throw ValidationError("von_neumann_entropy: eigenvalue " + std::to_string(l) + " below tolerance");
        if (l > 0.0) h -= l * std::log(l);
    }
    return h;
}

double von_neumann_entropy(const DensityMatrix& rho) { return von_neumann_entropy(spectrum(rho)); }

double renyi2_entropy(const DensityMatrix& rho) {
    const double purity = rho.entries().cwiseAbs2().sum();
    return -std::log(purity);
}

double g_function(double x) {
    if (!(x >= 0.0)) throw DomainError("g_function: argument must be nonnegative");
    if (x == 0.0) return 0.0;
    return (1.0 + x) * std::log1p(x) - x * std::log(x);
}

double relative_entropy(const DensityMatrix& rho1, const DensityMatrix& rho2) {
    if (rho1.dim() != rho2.dim()) throw DomainError("relative_entropy: dimension mismatch");
    Eigen::SelfAdjointEigenSolver<Matrix> s2(rho2.entries());
    const auto& q = s2.eigenvalues();
    const auto& v = s2.eigenvectors();
    const Matrix rotated = v.adjoint() * rho1.entries() * v;

    double cross = 0.0;
    for (Index j = 0; j < q.size(); ++j) {
        const double w = rotated(j, j).real();
        if (q(j) <= tol::support) {
            if (w > tol::psd) return std::numeric_limits<double>::infinity();
            continue;
        }
        cross += w * std::log(q(j));
    }
    return -von_neumann_entropy(rho1) - cross;
}

double relative_entropy_to_thermal(const DensityMatrix& rho, double mean_photons) {
    if (!(mean_photons > 0.0) || !std::isfinite(mean_photons))
        throw DomainError("relative_entropy_to_thermal: mean photon number must be positive");
    const double a = std::log1p(mean_photons);
    const double b = std::log1p(1.0 / mean_photons);
    double cross = 0.0;
    for (Index k = 0; k < rho.dim(); ++k) cross += rho(k, k).real() * (a + static_cast<double>(k) * b);
    return cross - von_neumann_entropy(rho);
}

double trace_norm(const Matrix& a) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (a + a.adjoint()), Eigen::EigenvaluesOnly);
    return solver.eigenvalues().cwiseAbs().sum();
}

double max_abs(const Matrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

}  // namespace boson
