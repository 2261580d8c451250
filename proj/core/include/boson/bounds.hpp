#pragma once

// Closed-form bounds on the minimum output entropy S_min of the classical-noise channel N_n and
// the thermal-noise channel E_eta^N, plus the (eta, N) region classifier built from them.
// Bounds that do not apply at a parameter value return std::nullopt and never enter a maximum.

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace boson {

// ------------------------------------------------------------ classical

std::optional<double> bound_a(double n);  // g(n-1), n >= 1
double bound_b(double n);                 // ln(2n+1)
double bound_c(double n);                 // two-level floor at purity 1/(2n+1)
std::optional<double> bound_d(double n);  // 1 + ln n, n > 0

// k and lambda_k(n) used by bound c; k = ceil(2n) so that n lies in [(k-1)/2, k/2].
struct LambdaPair {
    int k = 1;
    double lambda0 = 0.0;
};
LambdaPair lambda_pair(double n);

// max of the applicable bounds a-d; 0 at n = 0.
double classical_lower_envelope(double n);
// Upper bound g(n).
double classical_upper(double n);

// ------------------------------------------------------------ thermal

// g((1-eta)N).
double thermal_upper(double eta, double N);

std::optional<double> bound_A(double eta, double N);

struct BoundsBCD {
    double b = 0.0;
    double c = 0.0;
    std::optional<double> d;
};
BoundsBCD bounds_BCD(double eta, double N);

std::optional<double> bound_E(double eta, double N, int k);

// Lower bound on S_min(N_n) plugged into bound F.
using ClassicalFloor = std::function<double(double)>;
std::optional<double> bound_F(double eta, double N, int k, const ClassicalFloor& floor = classical_lower_envelope);

struct KEnvelope {
    std::optional<double> value;
    int k = 0;  // maximizing k
};
// Max over 1 <= k <= k_max; stops after 5 consecutive decreases once a value has been seen.
KEnvelope envelope_E(double eta, double N, int k_max = 64);
KEnvelope envelope_F(double eta, double N, int k_max = 64, const ClassicalFloor& floor = classical_lower_envelope);

double thermal_lower_envelope(double eta, double N, int k_max = 64);

// ------------------------------------------------------------ purity floor

// Minimum von Neumann entropy among states with Tr(rho^2) = t, from the non-degenerate +
// k-fold-degenerate family with k = floor(1/t).
double purity_entropy_floor(double t);

// Same quantity by scanning every family (x, (1-x)/k, ..., (1-x)/k) compatible with the purity,
// both roots, all k up to 1/t; the minimum over families.
double min_entropy_with_purity(double t);

// ------------------------------------------------------------ curves

struct ClassicalBoundRow {
    double n = 0.0;
    std::optional<double> a, d;
    double b = 0.0, c = 0.0;
    double envelope = 0.0;
    double upper = 0.0;
};

struct ThermalBoundRow {
    double eta = 0.0, N = 0.0;
    std::optional<double> A, B, C, D, E, F;
    int k_E = 0, k_F = 0;
    double envelope = 0.0;
    double upper = 0.0;
};

std::vector<double> logspace(double lo, double hi, std::size_t count);
std::vector<double> linspace(double lo, double hi, std::size_t count);

std::vector<ClassicalBoundRow> classical_bound_curve(const std::vector<double>& n_grid);
std::vector<ThermalBoundRow> thermal_bound_curve(double N, const std::vector<double>& eta_grid, int k_max = 64);

// ------------------------------------------------------------ regions

// Relation of the reference S_min(E_{eta1}^{N1}) to S_min(E_eta^N).
enum class RegionLabel { Greater, Less, Unknown };

enum class Provenance { Rule1, Rule2, Rule3, Rule4, Rule5, Rule6, L, U, None };

struct RegionCell {
    RegionLabel label = RegionLabel::Unknown;
    Provenance provenance = Provenance::None;
    // True when rules of both directions fire; the two minimum entropies are then equal.
    bool both_directions = false;
    // Sub-conditions of the two-condition rules 3 and 6, evaluated for every cell:
    // eta <= eta1, then (1-eta) N >= (1-eta1) N1 when it holds and the reverse inequality otherwise.
    bool eta_condition = false;
    bool photon_condition = false;
};

RegionCell classify_region(double eta1, double N1, double eta, double N);

struct RegionGrid {
    double eta1 = 0.7, N1 = 0.6;
    std::vector<double> etas;
    std::vector<double> Ns;
    std::vector<RegionCell> cells;  // cells[i_N * etas.size() + i_eta]

    const RegionCell& at(std::size_t i_eta, std::size_t i_N) const { return cells[i_N * etas.size() + i_eta]; }
};

// Grid over eta in [0, 1] and N in [0, N_max] (N_max <= 0 means 2 N1 + 1).
RegionGrid region_grid(double eta1, double N1, std::size_t eta_points = 201, std::size_t N_points = 201,
                       double N_max = 0.0);

std::string to_string(RegionLabel label);
std::string to_string(Provenance p);

}  // namespace boson
