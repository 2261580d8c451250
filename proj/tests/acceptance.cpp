// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <boson/annealing.hpp>
#include <boson/bounds.hpp>
#include <boson/majorization.hpp>
#include <boson/verify.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

using namespace boson;

namespace {

constexpr double kLn2 = 0.69314718055994530942;

struct Outcome {
    bool passed;
    std::string detail;
};

struct Criterion {
    int id;
    std::string title;
    double time_limit;  // seconds
    std::function<Outcome()> body;
};

std::string num(double v, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

// Worst value over the named invariant checks (full sample sizes).
double worst_check(const std::vector<std::string>& names, std::string& detail) {
    VerifyOptions o;
    o.only = names;
    double worst = 0.0;
    bool all = true;
    for (const auto& r : run_verify(o)) {
        all = all && r.passed;
        worst = std::max(worst, r.value / r.threshold);
        detail += " " + r.name + "=" + num(r.value, 3);
    }
    return all ? worst : INFINITY;
}

Outcome vacuum_entropy() {
    const DensityMatrix out = pure_state_output_matrix(fock_state(0, 1), 0.85, 41);
    const double bits = von_neumann_entropy(out) / kLn2;
    return {std::abs(bits - 1.841) <= 1e-3, "S = " + num(bits, 7) + " bits, target 1.841 +- 0.001"};
}

Outcome fock_oracle() {
    double worst = 0.0;
    for (double n : {0.3, 0.85, 2.0})
        for (Index k = 0; k <= 6; ++k) {
            ChannelOptions o;
            o.output_dim = 41;
            o.allow_truncation = true;
            const DensityMatrix q = apply_classical_noise(fock_state(k, k + 1).projector(), n, ClassicalMethod::Quadrature, o);
            const auto lam = fock_output_eigenvalues(k, n, 41);
            for (Index i = 0; i < 41; ++i)
                for (Index j = 0; j < 41; ++j) {
                    const Complex expected = i == j ? Complex(lam[static_cast<std::size_t>(i)]) : Complex(0.0);
                    worst = std::max(worst, std::abs(q(i, j) - expected));
                }
        }
    return {worst <= 1e-8, "max elementwise deviation " + num(worst, 3) + " (tol 1e-8)"};
}

Outcome composition() {
    Rng rng(derive_seed(2024, stream_id("acceptance.composition")));
    std::vector<DensityMatrix> probes;
    for (int i = 0; i < 20; ++i) probes.push_back(random_pure_state(rng, 32).projector());
    CompositionOptions o;
    o.work_dim = 96;
    o.compare_dim = 32;
    double worst = 0.0;
    std::string detail;
    for (auto rule : {CompositionRule::NN, CompositionRule::EE, CompositionRule::NE_decomp, CompositionRule::EN_decomp,
                      CompositionRule::amp_loss, CompositionRule::loss_amp, CompositionRule::amp_thermal}) {
        const double d = verify_composition(rule, {}, probes, o);
        worst = std::max(worst, d);
        detail += " " + to_string(rule) + "=" + num(d, 2);
    }
    return {worst <= 1e-6, "max trace-norm deviation " + num(worst, 3) + " (tol 1e-6):" + detail};
}

Outcome analytic_partial_sums() {
    double worst = 0.0;
    for (double n : {0.5, 0.85, 1.0, 2.0}) {
        auto lam = fock_output_eigenvalues(1, n, 400);
        const PartialSums sums = partial_sums(lam);
        for (std::size_t q = 0; q < 40; ++q) worst = std::max(worst, std::abs(fock_partial_sums_analytic(1, n, q) - sums[q]));
    }
    return {worst <= 1e-10, "max deviation " + num(worst, 3) + " (tol 1e-10)"};
}

Outcome bound_curves() {
    double worst = -INFINITY;
    for (const auto& r : classical_bound_curve(logspace(1e-3, 1e3, 200))) {
        for (double v : {r.b, r.c, r.envelope}) worst = std::max(worst, v - r.upper);
        for (const auto& v : {r.a, r.d})
            if (v) worst = std::max(worst, *v - r.upper);
    }
    const double lo = classical_lower_envelope(1e-3) / g_function(1e-3);
    const double hi = classical_lower_envelope(1e3) / g_function(1e3);
    double worst_thermal = -INFINITY;
    for (double N : {0.1, 0.5, 10.0})
        for (const auto& r : thermal_bound_curve(N, linspace(0.0, 1.0, 201))) {
            for (const auto& v : {r.A, r.B, r.C, r.D, r.E, r.F})
                if (v) worst_thermal = std::max(worst_thermal, *v - r.upper);
            worst_thermal = std::max(worst_thermal, r.envelope - r.upper);
        }
    const bool ok = worst <= 1e-12 && worst_thermal <= 1e-12 && lo >= 0.98 && hi >= 0.98;
    return {ok, "max(bound - g) " + num(worst, 3) + ", thermal " + num(worst_thermal, 3) + ", envelope/g " + num(lo, 5) +
                    " at 1e-3 and " + num(hi, 5) + " at 1e3 (need >= 0.98)"};
}

Outcome split_witnesses() {
    std::string detail;
    const double w = worst_check({"witness.split_thermal", "witness.split_classical"}, detail);
    return {w <= 1.0, "negative slack (tol 1e-8):" + detail};
}

Outcome gaussian() {
    std::string detail;
    const double w = worst_check({"gaussian."}, detail);
    return {w <= 1.0, "10^4 states per channel:" + detail};
}

Outcome local_minimum() {
    std::string detail;
    const double w = worst_check({"local_min.vacuum_classical", "local_min.vacuum_thermal",
                                  "local_min.coherent_covariance", "decomposition.classical"},
                                 detail);
    return {w <= 1.0, "tol 1e-6:" + detail};
}

Outcome majorization() {
    const auto rows = fock_majorization_sweep({0, 1, 2, 3, 4, 5, 6}, {0.85}, {ThermalParams{0.7, 0.6}});
    std::size_t fock_ok = 0;
    for (const auto& r : rows) fock_ok += r.verdict.majorized && r.entropy_order_ok ? 1 : 0;
    const RandomSweep sweep = random_majorization_sweep(100, 10, 0.85, derive_seed(2024, stream_id("majorize.random")));
    const bool ok = fock_ok == rows.size() && sweep.majorized_count == 100;
    return {ok, "fock " + std::to_string(fock_ok) + "/" + std::to_string(rows.size()) + ", random " +
                    std::to_string(sweep.majorized_count) + "/100"};
}

Outcome annealing() {
    const AnnealConfig config;
    const AnnealRestarts runs = anneal_restarts(config, fock_state(6, config.input_dim), 5);
    const AnnealTrace& best = runs.runs[runs.best];
    const MajorizationTrack track = anneal_majorization_track(best, {0, 100, 200, 400});
    const double initial = best.initial_entropy / kLn2;
    const double final_bits = best.final_entropy / kLn2;
    const double dev = track.max_dev_from_thermal.back();
    const bool ok = std::abs(initial - 3.754) <= 2e-3 && final_bits <= 1.90 && best.fit.overlap >= 0.99 && dev <= 1e-3;
    return {ok, "initial " + num(initial, 6) + " bits, best-of-5 final " + num(final_bits, 6) + " bits, overlap " +
                    num(best.fit.overlap, 5) + ", checkpoint-400 staircase deviation " + num(dev, 3)};
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "vacuum output entropy", 1.0, vacuum_entropy},
        {2, "fock spectrum vs quadrature", 30.0, fock_oracle},
        {3, "composition identities", 120.0, composition},
        {4, "analytic partial sums", 60.0, analytic_partial_sums},
        {5, "bound validity and tightness", 60.0, bound_curves},
        {6, "inequality witnesses", 300.0, split_witnesses},
        {7, "gaussian restricted conjecture", 300.0, gaussian},
        {8, "local-minimum structure", 300.0, local_minimum},
        {9, "majorization sweeps", 300.0, majorization},
        {10, "annealing reproduction", 600.0, annealing},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o{false, ""};
        try {
            o = c.body();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool passed = o.passed && secs < c.time_limit;
        failures += passed ? 0 : 1;
        std::printf("%s criterion %2d  %-32s %s [%.2fs, limit %gs]\n", passed ? "PASS" : "FAIL", c.id, c.title.c_str(),
                    o.detail.c_str(), secs, c.time_limit);
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
