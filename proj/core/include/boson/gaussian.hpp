#pragma once

// Single-mode Gaussian states described by first moment <a> and the covariance matrix
//
//   Gamma = [ c    s ]      c = <{da, da^dagger}>/2,  s = <(da)^2>,  da = a - <a>
//           [ s^*  c ]
//
// The off-diagonal is kept Hermitian so that det Gamma = c^2 - |s|^2 is the symplectic
// invariant for any phase of s (for real s this coincides with writing s in both corners).

#include "boson/channels.hpp"
#include "boson/random.hpp"

namespace boson {

struct GaussianState {
    Complex mean = 0.0;  // <a>
    double c = 0.5;
    Complex s = 0.0;

    static GaussianState coherent(Complex alpha);
    static GaussianState thermal(double mean_photons);
    // S(r e^{i phi})|0> displaced by alpha: c = cosh(2r)/2, s = -e^{i phi} sinh(2r)/2.
    static GaussianState squeezed(double r, double phi, Complex alpha = 0.0);

    double det() const { return c * c - std::norm(s); }
    Eigen::Matrix2cd gamma() const;
    // Throws ValidationError when det < 1/4 or c < 1/2 (beyond 1e-12).
    void validate() const;
};

// Gamma' = Gamma + n I, eta Gamma + (1-eta)(N+1/2) I, or kappa Gamma + (kappa-1)/2 I;
// <a> scales by 1, sqrt(eta), sqrt(kappa).
GaussianState evolve_gaussian(const GaussianState& state, const ChannelSpec& spec);

// g(sqrt(det Gamma) - 1/2); throws ValidationError on an uncertainty violation.
double gaussian_entropy(const GaussianState& state);

struct GaussianConjectureCheck {
    double output_entropy = 0.0;  // from det Gamma' written through the input moments
    double bound = 0.0;           // g(n) or g((1-eta)N)
    double margin = 0.0;          // output_entropy - bound
    double det_identity = 0.0;    // det Gamma' from the moment expansion
    double det_direct = 0.0;      // det of the evolved covariance matrix
};

// ClassicalNoise, ThermalNoise or PureLoss; DomainError otherwise.
GaussianConjectureCheck gaussian_conjecture_check(const GaussianState& state, const ChannelSpec& spec);

// c uniform on [1/2, max_c], s uniform on the disk |s|^2 <= c^2 - 1/4, <a> uniform on a square of
// half-width max_mean.
GaussianState random_gaussian_state(Rng& rng, double max_c = 4.0, double max_mean = 2.0);

// Number-basis density matrix of a Gaussian state that is pure (det = 1/4) or has s = 0.
// Built at work_dim (>= dim) and truncated to dim. Throws DomainError for other states.
DensityMatrix gaussian_density_matrix(const GaussianState& state, Index dim, Index work_dim = 0);

}  // namespace boson
