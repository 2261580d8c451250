#include "boson/gaussian.hpp"

#include <cmath>
#include <numbers>

namespace boson {

namespace {

constexpr double kSlack = 1e-12;

}  // namespace

GaussianState GaussianState::coherent(Complex alpha) { return {alpha, 0.5, 0.0}; }

GaussianState GaussianState::thermal(double mean_photons) {
    if (!(mean_photons >= 0.0)) throw DomainError("GaussianState::thermal: mean photon number must be nonnegative");
    return {0.0, mean_photons + 0.5, 0.0};
}

GaussianState GaussianState::squeezed(double r, double phi, Complex alpha) {
    return {alpha, 0.5 * std::cosh(2.0 * r), -0.5 * std::polar(std::sinh(2.0 * r), phi)};
}

Eigen::Matrix2cd GaussianState::gamma() const {
    Eigen::Matrix2cd g;
    g << c, s, std::conj(s), c;
    return g;
}

void GaussianState::validate() const {
    if (!std::isfinite(c) || !std::isfinite(std::abs(s)) || !std::isfinite(std::abs(mean)))
        throw ValidationError("GaussianState: non-finite moments");
    if (c < 0.5 - kSlack) throw ValidationError("GaussianState: <{da, da^dagger}>/2 below 1/2");
    if (det() < 0.25 - kSlack) throw ValidationError("GaussianState: det Gamma below 1/4 violates the uncertainty relation");
}

GaussianState evolve_gaussian(const GaussianState& in, const ChannelSpec& spec) {
    in.validate();
    validate(spec);
    return std::visit(
        [&](const auto& ch) -> GaussianState {
            using T = std::decay_t<decltype(ch)>;
            if constexpr (std::is_same_v<T, ClassicalNoise>) {
                return {in.mean, in.c + ch.n, in.s};
            } else if constexpr (std::is_same_v<T, ThermalNoise> || std::is_same_v<T, PureLoss>) {
                double N = 0.0;
                if constexpr (std::is_same_v<T, ThermalNoise>) N = ch.N;
                const double eta = ch.eta;
                return {std::sqrt(eta) * in.mean, eta * in.c + (1.0 - eta) * (N + 0.5), eta * in.s};
            } else {
                const double k = ch.kappa;
                return {std::sqrt(k) * in.mean, k * in.c + 0.5 * (k - 1.0), k * in.s};
            }
        },
        spec);
}

double gaussian_entropy(const GaussianState& state) {
    state.validate();
    const double x = std::sqrt(std::max(state.det(), 0.25)) - 0.5;
    return g_function(std::max(x, 0.0));
}

GaussianConjectureCheck gaussian_conjecture_check(const GaussianState& state, const ChannelSpec& spec) {
    state.validate();
    validate(spec);
    GaussianConjectureCheck r;
    const double anti = 2.0 * state.c;  // <{da, da^dagger}>
    if (const auto* cl = std::get_if<ClassicalNoise>(&spec)) {
        const double n = cl->n;
        r.det_identity = state.det() + n * (n + anti);
        r.bound = g_function(n);
    } else {
        double eta = 0.0, N = 0.0;
        if (const auto* th = std::get_if<ThermalNoise>(&spec)) {
            eta = th->eta;
            N = th->N;
        } else if (const auto* pl = std::get_if<PureLoss>(&spec)) {
            eta = pl->eta;
        } else {
            throw DomainError("gaussian_conjecture_check: only classical, thermal and loss channels");
        }
        const double v = (1.0 - eta) * (N + 0.5);
        r.det_identity = eta * eta * state.det() + v * (v + eta * anti);
        r.bound = g_function((1.0 - eta) * N);
    }
    r.det_direct = evolve_gaussian(state, spec).det();
    r.output_entropy = g_function(std::max(std::sqrt(std::max(r.det_identity, 0.25)) - 0.5, 0.0));
    r.margin = r.output_entropy - r.bound;
    return r;
}

GaussianState random_gaussian_state(Rng& rng, double max_c, double max_mean) {
    if (!(max_c >= 0.5)) throw DomainError("random_gaussian_state: max_c must be at least 1/2");
    GaussianState g;
    g.c = rng.uniform(0.5, max_c);
    const double radius = std::sqrt(std::max(g.c * g.c - 0.25, 0.0));
    const double rho = radius * std::sqrt(rng.uniform());
    g.s = std::polar(rho, 2.0 * std::numbers::pi * rng.uniform());
    g.mean = Complex(rng.uniform(-max_mean, max_mean), rng.uniform(-max_mean, max_mean));
    return g;
}

DensityMatrix gaussian_density_matrix(const GaussianState& state, Index dim, Index work_dim) {
    state.validate();
    const Index w = std::max(work_dim, dim);
    Matrix centered;
    if (std::abs(state.det() - 0.25) <= 1e-12) {
        // c = cosh(2r)/2, s = -e^{i phi} sinh(2r)/2
        const double r = 0.5 * std::acosh(std::max(2.0 * state.c, 1.0));
        const double phi = std::abs(state.s) > 0.0 ? std::arg(-state.s) : 0.0;
        const Vector v = squeezed_vacuum(r, phi, w).amps();
        centered = v * v.adjoint();
    } else if (std::abs(state.s) <= 1e-15) {
        centered = thermal_state(state.c - 0.5, w).entries();
    } else {
        throw DomainError("gaussian_density_matrix: only pure or phase-insensitive states are supported");
    }
    if (state.mean != Complex(0.0)) {
        const Matrix d = displacement_matrix(state.mean, w, w);
        centered = d * centered * d.adjoint();
    }
    return DensityMatrix::from_channel_output(centered.topLeftCorner(dim, dim));
}

}  // namespace boson
