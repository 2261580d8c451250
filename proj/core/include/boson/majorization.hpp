#pragma once

// Ordered partial sums and majorization verdicts for single-mode outputs.

#include "boson/channels.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace boson {

// sums[q] = lambda_0 + ... + lambda_q over the eigenvalues sorted in decreasing order.
struct PartialSums {
    std::vector<double> sums;

    std::size_t size() const noexcept { return sums.size(); }
    double operator[](std::size_t q) const { return sums[q]; }
};

PartialSums partial_sums(const Spectrum& spec);
PartialSums partial_sums(std::vector<double> eigenvalues);

inline constexpr double kMajorizationTol = 1e-9;

struct MajorizationResult {
    bool majorized = false;
    std::optional<std::size_t> first_violation;  // smallest q with Sigma_q(rho) < Sigma_q(sigma) - tol
    bool tie = false;                            // some deficit was positive but within tol
    double min_margin = 0.0;                     // min_q Sigma_q(rho) - Sigma_q(sigma)
};

// rho majorizes sigma; the shorter list is padded with zeros.
MajorizationResult majorizes(const PartialSums& rho, const PartialSums& sigma, double tol = kMajorizationTol);
MajorizationResult majorizes(const Spectrum& rho, const Spectrum& sigma, double tol = kMajorizationTol);

// Closed-form Sigma_q of N_n(|1><1|). Only k = 1 has a closed form; other k throw DomainError.
double fock_partial_sums_analytic(int k, double n, std::size_t q);

// E_eta^N(|k><k|) = sum_m C(k,m) eta^m (1-eta)^{k-m} N_{(1-eta)N}(|m><m|), diagonal.
DensityMatrix thermal_fock_output(Index k, double eta, double N, Index dim);

struct FockSweepRow {
    Index k = 0;
    std::string channel;  // "classical" or "thermal"
    double n = 0.0;       // output noise of the vacuum, n or (1-eta)N
    double eta = 1.0, N = 0.0;
    MajorizationResult verdict;
    double entropy_vacuum = 0.0;
    double entropy_fock = 0.0;
    bool entropy_order_ok = true;  // majorized implies S(vacuum) <= S(fock) + 1e-8
};

struct ThermalParams {
    double eta = 0.7, N = 0.6;
};

// Verdict of "vacuum output majorizes |k> output" for every k and noise setting.
std::vector<FockSweepRow> fock_majorization_sweep(const std::vector<Index>& ks, const std::vector<double>& classical_ns,
                                                 const std::vector<ThermalParams>& thermal, Index dim = 41);

struct RandomTrialRow {
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    Complex mean_amplitude;
    double mean_photons = 0.0;
    MajorizationResult verdict;
    double entropy_output = 0.0;
    bool entropy_order_ok = true;
};

struct RandomSweep {
    std::vector<RandomTrialRow> rows;
    std::size_t majorized_count = 0;
    std::uint64_t seed = 0;
};

// Trial t draws a pure state on levels 0..max_photons from derive_seed(seed, t), pushes it
// through N_n at out_dim levels and tests majorization by thermal(n). Runs in parallel.
RandomSweep random_majorization_sweep(std::size_t trials, Index max_photons, double n, std::uint64_t seed,
                                     Index out_dim = 41);

// Single trial on a given state, same protocol.
RandomTrialRow majorization_trial(const FockVector& psi, double n, Index out_dim = 41);

}  // namespace boson
