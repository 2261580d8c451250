#include "boson/bounds.hpp"

#include "boson/fock.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace boson {

namespace {

constexpr double kSlack = 1e-12;

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

// -l ln l - (1-l) ln((1-l)/k)
double two_level_entropy(double lambda0, int k) {
    const double rest = 1.0 - lambda0;
    double s = -xlogx(lambda0);
    if (rest > 0.0) s -= rest * std::log(rest / static_cast<double>(k));
    return s;
}

// Smaller root of (k+1) x^2 - 2x + 1 - k t = 0.
double lambda_from_purity(double t, int k) {
    const double kk = static_cast<double>(k);
    const double rad = std::max(0.0, 1.0 - (kk + 1.0) * (1.0 - kk * t));
    return (1.0 - std::sqrt(rad)) / (kk + 1.0);
}

void check_eta_N(double eta, double N) {
    if (!(eta >= 0.0 && eta <= 1.0)) throw DomainError("transmissivity eta must lie in [0, 1]");
    if (!(N >= 0.0) || !std::isfinite(N)) throw DomainError("thermal photon number N must be nonnegative");
}

void update_max(double& best, const std::optional<double>& v) {
    if (v) best = std::max(best, *v);
}

}  // namespace

// ------------------------------------------------------------ classical

std::optional<double> bound_a(double n) {
    if (!(n >= 1.0)) return std::nullopt;
    return g_function(n - 1.0);
}

double bound_b(double n) {
    if (!(n >= 0.0)) throw DomainError("bound_b: n must be nonnegative");
    return std::log1p(2.0 * n);
}

LambdaPair lambda_pair(double n) {
    if (!(n > 0.0)) throw DomainError("bound_c: n must be positive");
    LambdaPair p;
    p.k = std::max(1, static_cast<int>(std::ceil(2.0 * n)));
    p.lambda0 = lambda_from_purity(1.0 / (2.0 * n + 1.0), p.k);
    return p;
}

double bound_c(double n) {
    const LambdaPair p = lambda_pair(n);
    return two_level_entropy(p.lambda0, p.k);
}

std::optional<double> bound_d(double n) {
    if (!(n > 0.0)) return std::nullopt;
    return 1.0 + std::log(n);
}

double classical_lower_envelope(double n) {
    if (!(n >= 0.0)) throw DomainError("classical_lower_envelope: n must be nonnegative");
    if (n == 0.0) return 0.0;
    double best = std::max(bound_b(n), bound_c(n));
    update_max(best, bound_a(n));
    update_max(best, bound_d(n));
    return best;
}

double classical_upper(double n) { return g_function(n); }

// ------------------------------------------------------------ thermal

double thermal_upper(double eta, double N) {
    check_eta_N(eta, N);
    return g_function((1.0 - eta) * N);
}

std::optional<double> bound_A(double eta, double N) {
    check_eta_N(eta, N);
    const double x = (1.0 - eta) * N - eta;
    if (x < 0.0) return std::nullopt;
    return g_function(x);
}

BoundsBCD bounds_BCD(double eta, double N) {
    check_eta_N(eta, N);
    const double n = (1.0 - eta) * N;
    BoundsBCD r;
    r.b = bound_b(n);
    r.c = n > 0.0 ? bound_c(n) : 0.0;
    r.d = bound_d(n);
    return r;
}

std::optional<double> bound_E(double eta, double N, int k) {
    check_eta_N(eta, N);
    if (k < 1) throw DomainError("bound_E: k must be a positive integer");
    if (k == 1) return 0.0;
    const double kk = static_cast<double>(k);
    const double x = eta <= 1.0 / kk ? (1.0 - eta) * N : (1.0 - eta) * N - eta + 1.0 / kk;
    if (x < 0.0) return std::nullopt;
    return (kk - 1.0) / kk * g_function(kk / (kk - 1.0) * x);
}

std::optional<double> bound_F(double eta, double N, int k, const ClassicalFloor& floor) {
    check_eta_N(eta, N);
    if (k < 1) throw DomainError("bound_F: k must be a positive integer");
    const double kk = static_cast<double>(k);
    const double x = eta <= 1.0 / kk ? (1.0 - eta) * N : (1.0 - eta) * N - eta + 1.0 / kk;
    if (x < 0.0) return std::nullopt;
    return (kk - 1.0) / kk * g_function(x) + floor(x) / kk;
}

namespace {

template <typename Fn>
KEnvelope k_envelope(int k_max, Fn&& fn) {
    if (k_max < 1) throw DomainError("k_max must be positive");
    KEnvelope best;
    std::optional<double> prev;
    int decreasing = 0;
    for (int k = 1; k <= k_max; ++k) {
        const std::optional<double> v = fn(k);
        if (v && (!best.value || *v > *best.value)) {
            best.value = v;
            best.k = k;
        }
        if (best.value) {
            const bool down = !v || (prev && *v < *prev);
            decreasing = down ? decreasing + 1 : 0;
            if (decreasing >= 5) break;
        }
        prev = v;
    }
    return best;
}

}  // namespace

KEnvelope envelope_E(double eta, double N, int k_max) {
    return k_envelope(k_max, [&](int k) { return bound_E(eta, N, k); });
}

KEnvelope envelope_F(double eta, double N, int k_max, const ClassicalFloor& floor) {
    return k_envelope(k_max, [&](int k) { return bound_F(eta, N, k, floor); });
}

double thermal_lower_envelope(double eta, double N, int k_max) {
    check_eta_N(eta, N);
    const BoundsBCD bcd = bounds_BCD(eta, N);
    double best = std::max({0.0, bcd.b, bcd.c});
    update_max(best, bound_A(eta, N));
    update_max(best, bcd.d);
    update_max(best, envelope_E(eta, N, k_max).value);
    update_max(best, envelope_F(eta, N, k_max).value);
    return best;
}

// ------------------------------------------------------------ purity floor

double purity_entropy_floor(double t) {
    if (!(t > 0.0 && t <= 1.0)) throw DomainError("purity_entropy_floor: purity must lie in (0, 1]");
    const int k = std::max(1, static_cast<int>(std::floor(1.0 / t)));
    return two_level_entropy(lambda_from_purity(t, k), k);
}

double min_entropy_with_purity(double t) {
    if (!(t > 0.0 && t <= 1.0)) throw DomainError("min_entropy_with_purity: purity must lie in (0, 1]");
    double best = std::numeric_limits<double>::infinity();
    const int k_hi = static_cast<int>(std::floor(1.0 / t + 1e-12));
    for (int k = 1; k <= std::max(1, k_hi); ++k) {
        const double kk = static_cast<double>(k);
        const double disc = 1.0 - (kk + 1.0) * (1.0 - kk * t);
        if (disc < -1e-12) continue;
        const double root = std::sqrt(std::max(disc, 0.0));
        for (double x : {(1.0 - root) / (kk + 1.0), (1.0 + root) / (kk + 1.0)}) {
            if (x < -1e-15 || x > 1.0 + 1e-15) continue;
            x = std::clamp(x, 0.0, 1.0);
            best = std::min(best, two_level_entropy(x, k));
        }
    }
    return best;
}

// ------------------------------------------------------------ curves

std::vector<double> logspace(double lo, double hi, std::size_t count) {
    if (!(lo > 0.0 && hi > 0.0) || count == 0) throw DomainError("logspace: bounds must be positive");
    std::vector<double> v(count);
    const double a = std::log10(lo), b = std::log10(hi);
    for (std::size_t i = 0; i < count; ++i)
        v[i] = count == 1 ? lo : std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
    return v;
}

std::vector<double> linspace(double lo, double hi, std::size_t count) {
    if (count == 0) throw DomainError("linspace: count must be positive");
    std::vector<double> v(count);
    for (std::size_t i = 0; i < count; ++i)
        v[i] = count == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    v.back() = hi;
    return v;
}

std::vector<ClassicalBoundRow> classical_bound_curve(const std::vector<double>& n_grid) {
    std::vector<ClassicalBoundRow> rows;
    rows.reserve(n_grid.size());
    for (double n : n_grid) {
        if (!(n > 0.0)) throw DomainError("classical_bound_curve: grid values must be positive");
        ClassicalBoundRow r;
        r.n = n;
        r.a = bound_a(n);
        r.b = bound_b(n);
        r.c = bound_c(n);
        r.d = bound_d(n);
        r.envelope = classical_lower_envelope(n);
        r.upper = classical_upper(n);
        rows.push_back(r);
    }
    return rows;
}

std::vector<ThermalBoundRow> thermal_bound_curve(double N, const std::vector<double>& eta_grid, int k_max) {
    std::vector<ThermalBoundRow> rows;
    rows.reserve(eta_grid.size());
    for (double eta : eta_grid) {
        ThermalBoundRow r;
        r.eta = eta;
        r.N = N;
        r.A = bound_A(eta, N);
        const BoundsBCD bcd = bounds_BCD(eta, N);
        r.B = bcd.b;
        r.C = bcd.c;
        r.D = bcd.d;
        const KEnvelope e = envelope_E(eta, N, k_max);
        const KEnvelope f = envelope_F(eta, N, k_max);
        r.E = e.value;
        r.k_E = e.k;
        r.F = f.value;
        r.k_F = f.k;
        r.envelope = thermal_lower_envelope(eta, N, k_max);
        r.upper = thermal_upper(eta, N);
        rows.push_back(r);
    }
    return rows;
}

// ------------------------------------------------------------ regions

RegionCell classify_region(double eta1, double N1, double eta, double N) {
    check_eta_N(eta1, N1);
    check_eta_N(eta, N);
    const double s = kSlack;
    // Thresholds written without dividing by 1 - eta.
    const bool rule1 = eta <= eta1 + s && N >= N1 - s;
    const bool rule2 = eta >= eta1 - s && (1.0 - eta1) * N1 <= (1.0 - eta) * N + eta1 - eta + s;
    const bool rule3 = eta <= eta1 + s && (1.0 - eta) * N >= (1.0 - eta1) * N1 - s;
    const bool rule4 = eta >= eta1 - s && N <= N1 + s;
    const bool rule5 = eta <= eta1 + s && (1.0 - eta) * N <= (1.0 - eta1) * N1 + eta - eta1 + s;
    const bool rule6 = eta >= eta1 - s && (1.0 - eta1) * N1 >= (1.0 - eta) * N - s;

    RegionCell cell;
    const bool less = rule1 || rule2 || rule3;
    const bool greater = rule4 || rule5 || rule6;
    cell.both_directions = less && greater;
    // Two-condition rules 3 and 6: transmissivity ordering, then the output-noise threshold on the matching side.
    cell.eta_condition = eta <= eta1 + s;
    cell.photon_condition = cell.eta_condition ? rule3 : rule6;

    auto set = [&](RegionLabel label, Provenance p) {
        cell.label = label;
        cell.provenance = p;
    };
    if (rule1) set(RegionLabel::Less, Provenance::Rule1);
    else if (rule2) set(RegionLabel::Less, Provenance::Rule2);
    else if (rule3) set(RegionLabel::Less, Provenance::Rule3);
    else if (rule4) set(RegionLabel::Greater, Provenance::Rule4);
    else if (rule5) set(RegionLabel::Greater, Provenance::Rule5);
    else if (rule6) set(RegionLabel::Greater, Provenance::Rule6);
    else if (thermal_lower_envelope(eta1, N1) > thermal_upper(eta, N) + s) set(RegionLabel::Greater, Provenance::L);
    else if (thermal_upper(eta1, N1) < thermal_lower_envelope(eta, N) - s) set(RegionLabel::Less, Provenance::U);
    return cell;
}

RegionGrid region_grid(double eta1, double N1, std::size_t eta_points, std::size_t N_points, double N_max) {
    check_eta_N(eta1, N1);
    if (eta_points < 2 || N_points < 2) throw DomainError("region_grid: need at least 2 points per axis");
    RegionGrid grid;
    grid.eta1 = eta1;
    grid.N1 = N1;
    grid.etas = linspace(0.0, 1.0, eta_points);
    grid.Ns = linspace(0.0, N_max > 0.0 ? N_max : 2.0 * N1 + 1.0, N_points);
    grid.cells.resize(eta_points * N_points);
    // The reference envelope is shared by every cell; the per-cell work is cheap.
    for (std::size_t j = 0; j < N_points; ++j)
        for (std::size_t i = 0; i < eta_points; ++i)
            grid.cells[j * eta_points + i] = classify_region(eta1, N1, grid.etas[i], grid.Ns[j]);
    return grid;
}

std::string to_string(RegionLabel label) {
    switch (label) {
        case RegionLabel::Greater: return "GREATER";
        case RegionLabel::Less: return "LESS";
        case RegionLabel::Unknown: return "UNKNOWN";
    }
    return "UNKNOWN";
}

std::string to_string(Provenance p) {
    switch (p) {
        case Provenance::Rule1: return "rule-1";
        case Provenance::Rule2: return "rule-2";
        case Provenance::Rule3: return "rule-3";
        case Provenance::Rule4: return "rule-4";
        case Provenance::Rule5: return "rule-5";
        case Provenance::Rule6: return "rule-6";
        case Provenance::L: return "L";
        case Provenance::U: return "U";
        case Provenance::None: return "none";
    }
    return "none";
}

}  // namespace boson
