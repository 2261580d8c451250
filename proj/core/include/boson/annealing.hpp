#pragma once

// Simulated annealing of the output entropy S(N_n(|psi><psi|)) over pure inputs on a truncated space.

#include "boson/majorization.hpp"
#include "boson/random.hpp"

#include <cstdint>
#include <vector>

namespace boson {

struct AnnealConfig {
    double n = 0.85;
    Index input_dim = 11;
    Index output_dim = 41;
    int iterations = 400;  // proposals, accepted or not
    double initial_temperature = 0.005;  // nats
    double cooling_rate = 0.985;         // T_i = T_0 c^i
    // Coefficient k moves by a complex Gaussian of std step_scale (T_i / T_0) (|psi_k| + step_floor).
    double step_scale = 1.5;
    double step_floor = 0.2;
    std::uint64_t seed = 1;
    std::vector<int> snapshots{0, 100, 200, 400};
    int crosscheck_every = 100;  // 0 disables the quadrature cross-check

    void validate() const;
};

struct AnnealRecord {
    int iteration = 0;
    double temperature = 0.0;
    double proposal_entropy = 0.0;
    double entropy = 0.0;       // current state after the accept/reject step
    double best_entropy = 0.0;  // best so far
    bool accepted = false;
};

struct CoherentFit {
    Complex alpha;  // <psi|a|psi>
    double overlap = 0.0;  // |<alpha|psi>|^2 against the truncated, renormalized coherent state
    double mean_photons = 0.0;
};

struct AnnealSnapshot {
    int iteration = 0;
    FockVector state = fock_state(0, 1);  // best state found up to this iteration
    double entropy = 0.0;
};

struct AnnealTrace {
    AnnealConfig config;
    double initial_entropy = 0.0;
    std::vector<AnnealRecord> records;  // iterations 1..config.iterations
    std::vector<AnnealSnapshot> snapshots;
    FockVector final_state = fock_state(0, 1);  // best-so-far state at the end
    double final_entropy = 0.0;
    CoherentFit fit;
    double crosscheck_max_diff = 0.0;  // |S_analytic - S_quadrature| over the cross-check points
};

// Metropolis rule: always accept when delta <= 0, otherwise when u < exp(-delta / T).
bool metropolis_accept(double delta, double temperature, double u);

// Output entropy of the pure input at the configured dimensions.
double anneal_entropy(const FockVector& psi, double n, Index output_dim);

AnnealTrace anneal_min_entropy(const AnnealConfig& config, const FockVector& initial);

struct AnnealRestarts {
    std::vector<AnnealTrace> runs;  // run r uses seed derive_seed(config.seed, r)
    std::size_t best = 0;
};

// Independent runs in parallel; best = lowest final entropy (ties to the lowest index).
AnnealRestarts anneal_restarts(const AnnealConfig& config, const FockVector& initial, std::size_t restarts = 5);

CoherentFit coherent_fit(const FockVector& psi);

struct MajorizationTrack {
    std::vector<int> checkpoints;
    std::vector<PartialSums> sums;  // per checkpoint
    PartialSums thermal;            // thermal(n) reference
    std::vector<double> max_dev_from_thermal;
    // Fraction of (later, earlier, q) comparisons with Sigma_q(later) >= Sigma_q(earlier) - tol.
    double forward_fraction = 1.0;
};

// Checkpoints must be snapshot iterations of the trace; throws std::out_of_range otherwise.
MajorizationTrack anneal_majorization_track(const AnnealTrace& trace, const std::vector<int>& checkpoints);

}  // namespace boson
