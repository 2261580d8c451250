#include "boson/verify.hpp"

#include "boson/bounds.hpp"
#include "boson/channels.hpp"
#include "boson/gaussian.hpp"
#include "boson/majorization.hpp"
#include "boson/random.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>

namespace boson {

namespace {

struct Outcome {
    double value = 0.0;
    std::string detail;
};

struct Check {
    std::string name;
    double threshold;
    std::function<Outcome(const VerifyOptions&, Rng&)> run;
};

Matrix random_hermitian(Rng& rng, Index dim) {
    Matrix m(dim, dim);
    for (Index i = 0; i < dim; ++i)
        for (Index j = 0; j < dim; ++j) m(i, j) = Complex(rng.normal(), rng.normal());
    return 0.5 * (m + m.adjoint());
}

std::vector<DensityMatrix> random_probes(Rng& rng, std::size_t count, Index dim) {
    std::vector<DensityMatrix> probes;
    for (std::size_t i = 0; i < count; ++i) probes.push_back(random_pure_state(rng, dim).projector());
    return probes;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(3);
    os << v;
    return os.str();
}

// Closed-form value of F(|0><0|) on level k: g(M) + zeta k ln((M+1)/M).
double vacuum_F(double M, double zeta, Index k) {
    return g_function(M) + zeta * static_cast<double>(k) * std::log((M + 1.0) / M);
}

Outcome composition_check(CompositionRule rule, const VerifyOptions& o, Rng& rng) {
    const auto probes = random_probes(rng, o.quick ? 3 : 20, 10);
    return {verify_composition(rule, CompositionParams{}, probes), ""};
}

Outcome duality_check(const ChannelSpec& spec, Rng& rng) {
    const Index in = 10, out = 24;
    double worst = 0.0;
    for (int t = 0; t < 5; ++t) {
        const Matrix a = random_hermitian(rng, out);
        const Matrix b = random_hermitian(rng, in);
        const Complex lhs = (a * apply_linear(spec, b, out)).trace();
        const Complex rhs = (dual_map(spec, a, in) * b).trace();
        worst = std::max(worst, std::abs(lhs - rhs) / (a.norm() * b.norm()));
    }
    return {worst, "relative |Tr[A M(B)] - Tr[M*(A) B]|"};
}

// M(D(alpha) rho D(alpha)^dagger) against D(s alpha) M(rho) D(s alpha)^dagger on a 20-level block.
Outcome covariance_check(const ChannelSpec& spec, double shrink, Rng& rng) {
    const Index in = 6, shifted = 40, work = 80, block = 20;
    double worst = 0.0;
    for (int t = 0; t < 3; ++t) {
        const Complex alpha = std::polar(rng.uniform(0.2, 1.0), rng.uniform(0.0, 6.283185307179586));
        const Vector psi = random_pure_state(rng, in).amps();
        const Vector moved = displacement_matrix(alpha, shifted, in) * psi;
        const Matrix lhs = apply_linear(spec, moved * moved.adjoint(), work).topLeftCorner(block, block);
        const Matrix out = apply_linear(spec, psi * psi.adjoint(), work);
        const Matrix d = displacement_matrix(shrink * alpha, block, work);
        worst = std::max(worst, trace_norm(lhs - d * out * d.adjoint()));
    }
    return {worst, "trace norm on the leading 20 levels"};
}

Outcome vacuum_F_check(const ChannelSpec& spec, double M, double zeta) {
    ChannelOptions opts;
    opts.output_dim = 160;
    opts.thermal = ThermalMethod::Decomposition;
    const Index levels = 30;
    const auto F = local_minimum_operator(spec, fock_state(0, levels).projector(), opts);
    if (!F) return {1.0, "output left the support"};
    double worst = 0.0;
    for (Index i = 0; i < levels; ++i)
        for (Index j = 0; j < levels; ++j) {
            const Complex expected = i == j ? Complex(vacuum_F(M, zeta, i)) : Complex(0.0);
            worst = std::max(worst, std::abs((*F)(i, j) - expected));
        }
    return {worst, "max entry deviation over 30 levels"};
}

Outcome coherent_F_check(double n) {
    // F(|alpha><alpha|) = D(alpha) F(|0><0|) D(alpha)^dagger = g(n) + ln((n+1)/n) (a^dagger - alpha*)(a - alpha)
    // The output is not diagonal, so the eigen route and its support floor limit the usable block.
    const Index block = 5, in = 35;
    ChannelOptions opts;
    opts.output_dim = 36;
    double worst = 0.0;
    for (Complex alpha : {Complex(0.3, 0.2), Complex(-0.25, 0.1)}) {
        const auto F = local_minimum_operator(ClassicalNoise{n}, coherent_state(alpha, in).projector(), opts);
        if (!F) return {1.0, "output left the support"};
        const Matrix a = annihilation(in + 1);
        const Matrix shifted = a - alpha * Matrix::Identity(in + 1, in + 1);
        const Matrix expected = g_function(n) * Matrix::Identity(in + 1, in + 1) +
                                std::log((n + 1.0) / n) * shifted.adjoint() * shifted;
        for (Index i = 0; i < block; ++i)
            for (Index j = 0; j < block; ++j) worst = std::max(worst, std::abs((*F)(i, j) - expected(i, j)));
    }
    return {worst, "max entry deviation on the leading 5 levels"};
}

Outcome fock_eigenvector_check(double n) {
    ChannelOptions opts;
    opts.output_dim = 160;
    double worst = 0.0;
    for (Index k = 0; k <= 6; ++k) {
        const auto F = local_minimum_operator(ClassicalNoise{n}, fock_state(k, 12).projector(), opts);
        if (!F) return {1.0, "output left the support"};
        for (Index i = 0; i < F->rows(); ++i)
            if (i != k) worst = std::max(worst, std::abs((*F)(i, k)));
    }
    return {worst, "largest component of F(|k><k|)|k> off |k>, k <= 6"};
}

Outcome gaussian_margin_check(const ChannelSpec& spec, const VerifyOptions& o, Rng& rng, bool det_only) {
    const std::size_t count = o.quick ? 500 : 10000;
    double worst_margin = 0.0, worst_det = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        const GaussianConjectureCheck c = gaussian_conjecture_check(random_gaussian_state(rng), spec);
        worst_margin = std::max(worst_margin, -c.margin);
        worst_det = std::max(worst_det, std::abs(c.det_identity - c.det_direct) / std::max(1.0, c.det_direct));
    }
    if (det_only) return {worst_det, "relative det Gamma' mismatch over " + std::to_string(count) + " states"};
    return {worst_margin, "largest negative margin over " + std::to_string(count) + " states"};
}

Outcome gaussian_fock_check(Rng& rng) {
    const std::vector<ChannelSpec> specs{ClassicalNoise{0.85}, ThermalNoise{0.7, 0.6}, PureLoss{0.6}};
    double worst = 0.0;
    for (int t = 0; t < 3; ++t) {
        const Complex alpha(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
        const std::vector<GaussianState> states{
            GaussianState::coherent(alpha), GaussianState::squeezed(rng.uniform(0.05, 0.4), rng.uniform(0.0, 3.0), alpha),
            GaussianState{alpha, rng.uniform(0.6, 1.2), 0.0}};
        for (const auto& st : states) {
            const DensityMatrix rho = gaussian_density_matrix(st, 40, 120);
            for (const auto& spec : specs) {
                if (std::holds_alternative<PureLoss>(spec) && std::abs(st.det() - 0.25) < 1e-12) continue;
                ChannelOptions opts;
                opts.output_dim = 80;
                const double s_fock = von_neumann_entropy(apply_channel_adaptive(spec, rho, opts));
                worst = std::max(worst, std::abs(s_fock - gaussian_entropy(evolve_gaussian(st, spec))));
            }
        }
    }
    return {worst, "|S_fock - S_gaussian|"};
}

// Splitting one input over k modes of a symmetric beam splitter gives
//   k S(E_{1/k}^N(rho)) >= (k-1) g(N)                       (thermal)
//   k S(E_{1/k}^{nk/(k-1)}(rho)) >= S(N_n(rho)) + (k-1) g(n)  (classical)
Outcome split_witness_check(bool classical, const VerifyOptions& o, Rng& rng) {
    const std::size_t count = o.quick ? 5 : 50;
    const double N = 0.6, n = 0.5;
    double worst = -std::numeric_limits<double>::infinity();
    ChannelOptions opts;
    opts.output_dim = 64;
    for (int k : {2, 3}) {
        const double kk = k;
        for (std::size_t i = 0; i < count; ++i) {
            const DensityMatrix rho = random_pure_state(rng, 24).projector();
            double slack;
            if (!classical) {
                const double s = von_neumann_entropy(apply_channel_adaptive(ThermalNoise{1.0 / kk, N}, rho, opts));
                slack = kk * s - (kk - 1.0) * g_function(N);
            } else {
                const double s = von_neumann_entropy(
                    apply_channel_adaptive(ThermalNoise{1.0 / kk, n * kk / (kk - 1.0)}, rho, opts));
                const double s_n = von_neumann_entropy(apply_channel_adaptive(ClassicalNoise{n}, rho, opts));
                slack = kk * s - s_n - (kk - 1.0) * g_function(n);
            }
            worst = std::max(worst, -slack);
        }
    }
    return {std::max(worst, 0.0), "largest negative slack, k in {2, 3}, D = 24"};
}

Outcome decomposition_check(const ChannelSpec& spec, const VerifyOptions& o, Rng& rng, std::size_t full) {
    const std::size_t count = o.quick ? 5 : full;
    double worst_residual = 0.0, worst_gap = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        const EntropyDecomposition d = entropy_decomposition_check(random_pure_state(rng, 11), spec);
        worst_residual = std::max(worst_residual, d.residual);
        worst_gap = std::max(worst_gap, -d.gap);
    }
    return {std::max(worst_residual, worst_gap),
            "residual " + fmt(worst_residual) + ", negative gap " + fmt(worst_gap) + " over " + std::to_string(count)};
}

Outcome bounds_validity_check(const VerifyOptions& o) {
    double worst = 0.0;
    for (const auto& row : classical_bound_curve(logspace(1e-3, 1e3, o.quick ? 61 : 601))) {
        for (double v : {row.b, row.c, row.envelope}) worst = std::max(worst, v - row.upper);
        for (auto v : {row.a, row.d})
            if (v) worst = std::max(worst, *v - row.upper);
    }
    for (double N : {0.1, 0.5, 10.0})
        for (const auto& row : thermal_bound_curve(N, linspace(0.0, 1.0, o.quick ? 41 : 401))) {
            for (auto v : {row.A, row.B, row.C, row.D, row.E, row.F})
                if (v) worst = std::max(worst, *v - row.upper);
            worst = std::max(worst, row.envelope - row.upper);
        }
    return {worst, "largest excess of a lower bound over g"};
}

Outcome purity_floor_check() {
    double worst = 0.0;
    for (int i = 1; i <= 400; ++i) {
        const double t = i / 400.0;
        worst = std::max(worst, std::abs(purity_entropy_floor(t) - min_entropy_with_purity(t)));
    }
    return {worst, "closed-form k vs scan over all families"};
}

Outcome fock_majorization_check() {
    const auto rows = fock_majorization_sweep({0, 1, 2, 3, 4, 5, 6}, {0.3, 0.85, 2.0}, {{0.7, 0.6}, {0.5, 1.0}});
    double failures = 0.0;
    for (const auto& r : rows)
        if (!r.verdict.majorized || !r.entropy_order_ok) failures += 1.0;
    return {failures, std::to_string(rows.size()) + " verdicts"};
}

Outcome region_consistency_check(const VerifyOptions& o) {
    // A rule label must never contradict strict bound evidence.
    const std::size_t pts = o.quick ? 41 : 101;
    double conflicts = 0.0;
    for (auto [eta1, N1] : {std::pair{0.7, 0.6}, std::pair{0.4, 2.0}}) {
        const RegionGrid grid = region_grid(eta1, N1, pts, pts);
        const double ref_low = thermal_lower_envelope(eta1, N1);
        const double ref_up = thermal_upper(eta1, N1);
        for (std::size_t j = 0; j < grid.Ns.size(); ++j)
            for (std::size_t i = 0; i < grid.etas.size(); ++i) {
                const RegionCell& c = grid.at(i, j);
                const double eta = grid.etas[i], N = grid.Ns[j];
                if (c.label == RegionLabel::Less && ref_low > thermal_upper(eta, N) + 1e-12) conflicts += 1.0;
                if (c.label == RegionLabel::Greater && ref_up < thermal_lower_envelope(eta, N) - 1e-12) conflicts += 1.0;
            }
    }
    return {conflicts, "cells whose label contradicts the bounds"};
}

Outcome phase_invariance_check(Rng& rng) {
    double worst = 0.0;
    for (int t = 0; t < 3; ++t) {
        const FockVector psi = random_pure_state(rng, 8);
        const Vector rotated = phase_shift(rng.uniform(0.0, 6.283185307179586), 8) * psi.amps();
        for (const ChannelSpec& spec : {ChannelSpec{ClassicalNoise{0.85}}, ChannelSpec{ThermalNoise{0.7, 0.6}}}) {
            ChannelOptions opts;
            opts.output_dim = 80;
            const double a = von_neumann_entropy(apply_channel(spec, psi.projector(), opts));
            const double b = von_neumann_entropy(apply_channel(spec, FockVector(rotated).projector(), opts));
            worst = std::max(worst, std::abs(a - b));
        }
    }
    return {worst, "|S(M(rho)) - S(M(R rho R^dagger))|"};
}

Outcome monotonicity_check(Rng& rng) {
    double worst = 0.0;
    ChannelOptions opts;
    opts.output_dim = 96;
    for (int t = 0; t < 3; ++t) {
        const DensityMatrix rho = random_pure_state(rng, 8).projector();
        double prev_c = 0.0, prev_t = 0.0;
        for (double x : {0.2, 0.5, 1.0, 1.5}) {
            const double sc = von_neumann_entropy(apply_channel(ClassicalNoise{x}, rho, opts));
            const double st = von_neumann_entropy(apply_channel(ThermalNoise{0.7, x}, rho, opts));
            if (x > 0.2) worst = std::max({worst, prev_c - sc, prev_t - st});
            prev_c = sc;
            prev_t = st;
        }
    }
    return {worst, "largest entropy drop when the noise grows"};
}

const std::vector<Check>& registry() {
    static const std::vector<Check> checks = [] {
        std::vector<Check> c;
        for (CompositionRule rule : {CompositionRule::NN, CompositionRule::EE, CompositionRule::NE_decomp,
                                     CompositionRule::EN_decomp, CompositionRule::amp_loss, CompositionRule::loss_amp,
                                     CompositionRule::amp_thermal})
            c.push_back({"composition." + to_string(rule), 1e-6,
                         [rule](const VerifyOptions& o, Rng& r) { return composition_check(rule, o, r); }});
        const std::vector<std::pair<std::string, ChannelSpec>> kinds{{"classical", ClassicalNoise{0.85}},
                                                                     {"thermal", ThermalNoise{0.7, 0.6}},
                                                                     {"loss", PureLoss{0.6}},
                                                                     {"amplifier", Amplifier{1.4}}};
        for (const auto& [name, spec] : kinds)
            c.push_back({"duality." + name, 1e-8, [spec](const VerifyOptions&, Rng& r) { return duality_check(spec, r); }});
        c.push_back({"covariance.classical", 1e-6,
                     [](const VerifyOptions&, Rng& r) { return covariance_check(ClassicalNoise{0.85}, 1.0, r); }});
        c.push_back({"covariance.thermal", 1e-6, [](const VerifyOptions&, Rng& r) {
                         return covariance_check(ThermalNoise{0.7, 0.6}, std::sqrt(0.7), r);
                     }});
        c.push_back({"phase_invariance", 1e-8, [](const VerifyOptions&, Rng& r) { return phase_invariance_check(r); }});
        c.push_back({"noise_monotonicity", 1e-10, [](const VerifyOptions&, Rng& r) { return monotonicity_check(r); }});
        c.push_back({"local_min.vacuum_classical", 1e-6,
                     [](const VerifyOptions&, Rng&) { return vacuum_F_check(ClassicalNoise{0.85}, 0.85, 1.0); }});
        c.push_back({"local_min.vacuum_thermal", 1e-6, [](const VerifyOptions&, Rng&) {
                         return vacuum_F_check(ThermalNoise{0.7, 0.6}, 0.3 * 0.6, 0.7);
                     }});
        c.push_back({"local_min.coherent_covariance", 1e-6,
                     [](const VerifyOptions&, Rng&) { return coherent_F_check(0.85); }});
        c.push_back({"local_min.fock_eigenvectors", 1e-6,
                     [](const VerifyOptions&, Rng&) { return fock_eigenvector_check(0.85); }});
        for (const auto& [name, spec] : kinds) {
            if (name == "amplifier") continue;
            c.push_back({"gaussian." + name + ".margin", 1e-12,
                         [spec](const VerifyOptions& o, Rng& r) { return gaussian_margin_check(spec, o, r, false); }});
            c.push_back({"gaussian." + name + ".det", 1e-10,
                         [spec](const VerifyOptions& o, Rng& r) { return gaussian_margin_check(spec, o, r, true); }});
        }
        c.push_back({"gaussian.fock_crosscheck", 1e-4, [](const VerifyOptions&, Rng& r) { return gaussian_fock_check(r); }});
        c.push_back({"witness.split_thermal", 1e-8, [](const VerifyOptions& o, Rng& r) { return split_witness_check(false, o, r); }});
        c.push_back({"witness.split_classical", 1e-8, [](const VerifyOptions& o, Rng& r) { return split_witness_check(true, o, r); }});
        c.push_back({"decomposition.classical", 1e-6, [](const VerifyOptions& o, Rng& r) {
                         return decomposition_check(ClassicalNoise{0.85}, o, r, 100);
                     }});
        c.push_back({"decomposition.thermal", 1e-6, [](const VerifyOptions& o, Rng& r) {
                         return decomposition_check(ThermalNoise{0.7, 0.6}, o, r, 20);
                     }});
        c.push_back({"bounds.validity", 1e-12, [](const VerifyOptions& o, Rng&) { return bounds_validity_check(o); }});
        c.push_back({"bounds.purity_floor", 1e-10, [](const VerifyOptions&, Rng&) { return purity_floor_check(); }});
        c.push_back({"majorization.fock", 0.0, [](const VerifyOptions&, Rng&) { return fock_majorization_check(); }});
        c.push_back({"regions.consistency", 0.0,
                     [](const VerifyOptions& o, Rng&) { return region_consistency_check(o); }});
        return c;
    }();
    return checks;
}

bool selected(const std::string& name, const std::vector<std::string>& only) {
    if (only.empty()) return true;
    return std::any_of(only.begin(), only.end(), [&](const std::string& p) { return name.rfind(p, 0) == 0; });
}

}  // namespace

std::vector<std::string> verify_check_names() {
    std::vector<std::string> names;
    for (const auto& c : registry()) names.push_back(c.name);
    return names;
}

std::vector<CheckResult> run_verify(const VerifyOptions& opts) {
    std::vector<CheckResult> results;
    for (const auto& check : registry()) {
        if (!selected(check.name, opts.only)) continue;
        CheckResult r;
        r.name = check.name;
        r.threshold = check.threshold;
        Rng rng(derive_seed(opts.seed, stream_id(check.name)));
        const auto t0 = std::chrono::steady_clock::now();
        try {
            const Outcome out = check.run(opts, rng);
            r.value = out.value;
            r.detail = out.detail;
        } catch (const std::exception& e) {
            r.value = std::numeric_limits<double>::infinity();
            r.detail = std::string("exception: ") + e.what();
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (check.name == opts.inject_fault) {
            r.value = r.threshold + 1.0;
            r.detail = "injected fault";
        }
        r.passed = r.value <= r.threshold;
        results.push_back(r);
    }
    return results;
}

}  // namespace boson
