#pragma once

// Single-mode Gaussian channels on the truncated number basis.
//
//   ClassicalNoise(n)    N_n(rho)   = int d^2mu P_n(mu) D(mu) rho D(mu)^dagger,  P_n = e^{-|mu|^2/n}/(pi n)
//   ThermalNoise(eta, N) E_eta^N(rho) = Tr_b[U (rho x tau_N) U^dagger], U a beam splitter of transmissivity eta
//   PureLoss(eta)        E_eta^0
//   Amplifier(kappa)     a -> sqrt(kappa) a + sqrt(kappa-1) c^dagger with vacuum idler
//
// Every map takes an input of dimension D_in and returns the leading D_out x D_out block of the
// exact (untruncated) output, so the only truncation error is probability leaking past D_out.

#include "boson/fock.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace boson {

struct ClassicalNoise {
    double n = 0.0;
};
struct ThermalNoise {
    double eta = 1.0;
    double N = 0.0;
};
struct PureLoss {
    double eta = 1.0;
};
struct Amplifier {
    double kappa = 1.0;
};

using ChannelSpec = std::variant<ClassicalNoise, ThermalNoise, PureLoss, Amplifier>;

// Throws DomainError when parameters fall outside their ranges.
void validate(const ChannelSpec& spec);
std::string describe(const ChannelSpec& spec);

// Mean photon number M of the image of the vacuum.
double vacuum_output_photons(const ChannelSpec& spec);

enum class ClassicalMethod { Quadrature, FockAnalytic };
enum class ThermalMethod { Dilation, Decomposition };

struct ChannelOptions {
    Index output_dim = 0;  // 0: same as the input dimension
    // Largest tolerated drop Tr(rho) - Tr(out); beyond it a TruncationError is thrown.
    double max_trace_deficit = tol::max_trace_deficit;
    bool allow_truncation = false;  // report the deficit instead of throwing
    ClassicalMethod classical = ClassicalMethod::FockAnalytic;
    ThermalMethod thermal = ThermalMethod::Dilation;
};

// ---------------------------------------------------------------- quadrature

// Discretization of the Gaussian displacement average: polar product of a Gauss-Laguerre rule in
// |mu|^2 (rescaled so that the Gaussian factor in <m|D(mu)|n> is absorbed into the weight) and a
// uniform angular rule. With radial >= (D_in + D_out - 1)/2 and angular >= D_in + D_out nodes
// the block D_out x D_out of N_n(rho) is reproduced exactly for inputs of dimension D_in.
struct KrausQuadrature {
    std::vector<Complex> nodes;
    std::vector<double> weights;

    static KrausQuadrature classical_noise(double n, std::size_t radial, std::size_t angular);
    // Node counts sufficient for exactness at the given dimensions (never below 24 x 48).
    static KrausQuadrature classical_noise_for(double n, Index in_dim, Index out_dim);
};

// ------------------------------------------------------ Fock-basis kernels

// Transfer coefficients of N_n in the number basis:
//   <k+l| N_n(X) |k> = sum_j X_{j+l, j} C_l(j, k)
// For n <= 1 C_l comes from the terminating hypergeometric series (all terms positive). For n > 1
// that series alternates, so C_l is assembled from the factorization N_n = A_{1+n} o E_{1/(1+n)}^0,
// whose number-basis coefficients are all positive. The map is linear, so it applies to any square
// X, and because C_l(j, k) = C_l(k, j) the kernel with swapped dimensions is the dual map.
class ClassicalNoiseKernel {
public:
    ClassicalNoiseKernel(double n, Index in_dim, Index out_dim);

    double n() const noexcept { return n_; }
    Index in_dim() const noexcept { return in_dim_; }
    Index out_dim() const noexcept { return out_dim_; }

    Matrix apply(const Matrix& x) const;
    // Output for a pure input, without forming |psi><psi|.
    Matrix apply(const Vector& psi) const;

    // C_l(j, k); zero outside the stored ranges.
    double coefficient(Index l, Index j, Index k) const;

private:
    double n_;
    Index in_dim_;
    Index out_dim_;
    // blocks_[l] is (in_dim - l) x (out_dim - l)
    std::vector<Eigen::MatrixXd> blocks_;
};

// Eigenvalues lambda_i (i < dim) of N_n(|k><k|), which is diagonal in the number basis.
std::vector<double> fock_output_eigenvalues(Index k, double n, Index dim);

// ---------------------------------------------------------------- channels

DensityMatrix apply_classical_noise(const DensityMatrix& rho, double n, ClassicalMethod method,
                                    const ChannelOptions& opts = {});
DensityMatrix pure_state_output_matrix(const FockVector& psi, double n, Index out_dim = 0,
                                       const ChannelOptions& opts = {});
DensityMatrix apply_thermal_noise(const DensityMatrix& rho, double eta, double N, ThermalMethod method,
                                  const ChannelOptions& opts = {});
DensityMatrix apply_pure_loss(const DensityMatrix& rho, double eta, const ChannelOptions& opts = {});
DensityMatrix apply_amplifier(const DensityMatrix& rho, double kappa, const ChannelOptions& opts = {});

// Dispatches on the spec with the methods chosen in opts.
DensityMatrix apply_channel(const ChannelSpec& spec, const DensityMatrix& rho, const ChannelOptions& opts = {});

// Output at the smallest dimension of the form start * 2^j (start = opts.output_dim, or the input
// dimension + 40 when zero) whose upper half of levels carries at most `tail` of the trace.
// Gives up doubling at max_dim. Lost trace is not checked.
DensityMatrix apply_channel_adaptive(const ChannelSpec& spec, const DensityMatrix& rho, const ChannelOptions& opts = {},
                                     double tail = 1e-12, Index max_dim = 2048);

// Linear action on an arbitrary square matrix, no trace bookkeeping. Output is out_dim x out_dim.
Matrix apply_linear(const ChannelSpec& spec, const Matrix& x, Index out_dim, const ChannelOptions& opts = {});

// Adjoint with respect to Tr[A M(B)] = Tr[M*(A) B]. `a` lives on the output space, the result
// on an input space of dimension in_dim (0: same as a).
Matrix dual_map(const ChannelSpec& spec, const Matrix& a, Index in_dim = 0, const ChannelOptions& opts = {});

// Environment truncation used by the beam-splitter dilation: smallest D with (N/(N+1))^D <= 1e-10.
Index environment_dim(double N);

// ------------------------------------------------------ composition rules

enum class CompositionRule {
    NN,           // N_{n2} o N_{n1} = N_{n1+n2}
    EE,           // E_{eta2}^{N2} o E_{eta1}^{N1} = E_{eta1 eta2}^{N'}
    NE_decomp,    // E_eta^N = N_{(1-eta)N} o E_eta^0
    EN_decomp,    // E_eta^N = E_eta^0 o N_{(1-eta)N/eta}
    amp_loss,     // N_n = A_{1/eta} o E_eta^0,  n = (1-eta)/eta
    loss_amp,     // N_n = E_{1-n'}^{(n-n')/n'} o A_{1/(1-n')},  n' in (0, min(1, n)]
    amp_thermal,  // E_eta^N = E_{eta'}^{N'} o A_{eta/eta'},  eta >= eta'
};

struct CompositionParams {
    double n1 = 0.5, n2 = 0.5;                        // NN
    double eta1 = 0.7, N1 = 0.6, eta2 = 0.7, N2 = 0.6;  // EE
    double eta = 0.7, N = 0.6;                        // *_decomp, amp_loss, amp_thermal
    double eta_prime = 0.6;                           // amp_thermal
    double n = 0.5, n_prime = 0.25;                   // loss_amp
};

struct CompositionOptions {
    Index work_dim = 64;     // dimension of every intermediate and final output
    Index compare_dim = 32;  // leading block on which both sides are compared
    ClassicalMethod classical = ClassicalMethod::FockAnalytic;
    ThermalMethod thermal = ThermalMethod::Dilation;
};

std::string to_string(CompositionRule rule);
std::optional<CompositionRule> composition_rule_from_string(const std::string& name);

// N' of the EE rule.
double composed_thermal_photons(double eta1, double N1, double eta2, double N2);

// Max over probes of the trace-norm distance between both sides on the compare block.
// Throws DomainError when the parameters fall outside the rule's domain.
double verify_composition(CompositionRule rule, const CompositionParams& params,
                          const std::vector<DensityMatrix>& probes, const CompositionOptions& opts = {});

// ------------------------------------------------- local-minimum machinery

// F(sigma0) = -M^*(ln M(sigma0)) on the input space of sigma0; the output M(sigma0) is formed at
// opts.output_dim. Returns nullopt when M(sigma0) has eigenvalues below tol::support; an exactly diagonal
// M(sigma0) is logged entrywise and only nonpositive entries count as outside the support.
std::optional<Matrix> local_minimum_operator(const ChannelSpec& spec, const DensityMatrix& sigma0,
                                             const ChannelOptions& opts = {});

struct EntropyDecomposition {
    double output_entropy = 0.0;    // S(M(rho)) from the spectrum
    double predicted_entropy = 0.0; // g(M) + zeta E ln((M+1)/M) - S(M(rho) || rho0')
    double residual = 0.0;          // |output - predicted|
    double gap = 0.0;               // zeta E ln((M+1)/M) - S(M(rho) || rho0'), >= 0 under the conjecture
    double mean_photons = 0.0;      // E
    double relative_entropy = 0.0;  // S(M(rho) || rho0')
};

// Only ClassicalNoise and ThermalNoise (with positive output noise) are accepted. The output is
// formed by apply_channel_adaptive.
EntropyDecomposition entropy_decomposition_check(const FockVector& psi, const ChannelSpec& spec,
                                                 const ChannelOptions& opts = {});

}  // namespace boson
