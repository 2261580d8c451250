#include <boson/channels.hpp>
#include <boson/random.hpp>

#include <doctest.h>

#include <cmath>

using namespace boson;

namespace {

ChannelOptions at(Index out_dim) {
    ChannelOptions o;
    o.output_dim = out_dim;
    return o;
}

// Eigenvalues of N_n(|1><1|), derived by hand from the displaced number-state overlaps.
double fock1_eigenvalue(double n, int i) {
    return std::pow(n, i - 1) * (n * n + i) / std::pow(n + 1.0, i + 2);
}

Matrix random_hermitian(Rng& rng, Index d) {
    Matrix m(d, d);
    for (Index i = 0; i < d; ++i)
        for (Index j = 0; j < d; ++j) m(i, j) = Complex(rng.normal(), rng.normal());
    return (m + m.adjoint()) / 2.0;
}

// Number-basis transfer coefficient from the plain alternating series, for small indices.
double series_coefficient(double n, int l, int j, int k) {
    const int c = j + k + l;
    double sum = 0.0;
    for (int m = 0; m <= std::min(j, k); ++m)
        sum += std::pow(1.0 - n * n, m) * std::pow(n, j + k - 2 * m) * std::tgamma(c - m + 1.0) /
               (std::tgamma(m + 1.0) * std::tgamma(j - m + 1.0) * std::tgamma(k - m + 1.0));
    return std::sqrt(std::tgamma(k + 1.0) / std::tgamma(k + l + 1.0) * std::tgamma(j + 1.0) / std::tgamma(j + l + 1.0)) *
           sum / std::pow(1.0 + n, c + 1);
}

}  // namespace

TEST_CASE("kernel coefficients match the direct series") {
    for (double n : {0.3, 1.0, 2.5}) {
        const ClassicalNoiseKernel kernel(n, 8, 8);
        for (int l = 0; l < 4; ++l)
            for (int j = 0; j + l < 8; ++j)
                for (int k = 0; k + l < 8; ++k) {
                    CAPTURE(n);
                    const double expected = series_coefficient(n, l, j, k);
                    CHECK(kernel.coefficient(l, j, k) == doctest::Approx(expected).epsilon(1e-10).scale(1e-12));
                }
    }
}

TEST_CASE("classical noise maps the vacuum to a thermal state") {
    for (double n : {0.3, 0.85, 2.0}) {
        const DensityMatrix out = apply_classical_noise(fock_state(0, 1).projector(), n, ClassicalMethod::FockAnalytic, at(120));
        for (Index k = 0; k < 30; ++k)
            CHECK(out(k, k).real() == doctest::Approx(std::pow(n, k) / std::pow(n + 1, k + 1)).epsilon(1e-12));
        CHECK(max_abs(out.entries() - thermal_state(n, 120).entries()) < 1e-12);
    }
}

TEST_CASE("vacuum output entropy at n = 0.85 in bits") {
    const DensityMatrix out = apply_classical_noise(fock_state(0, 1).projector(), 0.85, ClassicalMethod::FockAnalytic, at(41));
    CHECK(von_neumann_entropy(out) / std::log(2.0) == doctest::Approx(1.841).epsilon(1e-3));
}

TEST_CASE("single-photon output spectrum") {
    for (double n : {0.5, 0.85, 1.0, 2.0}) {
        const auto lam = fock_output_eigenvalues(1, n, 41);
        for (int i = 0; i < 41; ++i) CHECK(std::abs(lam[static_cast<std::size_t>(i)] - fock1_eigenvalue(n, i)) < 1e-14);
    }
}

TEST_CASE("fock eigenvalues agree with quadrature") {
    for (double n : {0.3, 0.85, 2.0})
        for (Index k : {0, 3, 6}) {
            const auto lam = fock_output_eigenvalues(k, n, 41);
            ChannelOptions o = at(41);
            o.allow_truncation = true;
            const DensityMatrix q = apply_classical_noise(fock_state(k, k + 1).projector(), n, ClassicalMethod::Quadrature, o);
            for (Index i = 0; i < 41; ++i) CHECK(std::abs(q(i, i).real() - lam[static_cast<std::size_t>(i)]) < 1e-8);
        }
}

TEST_CASE("classical noise adds n photons") {
    Rng rng(3);
    const FockVector psi = random_pure_state(rng, 8);
    const DensityMatrix out = pure_state_output_matrix(psi, 0.85, 100);
    CHECK(out.mean_photons() == doctest::Approx(psi.mean_photons() + 0.85).epsilon(1e-10));
    CHECK(out.trace() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("thermal noise channel special cases") {
    const DensityMatrix vac = fock_state(0, 1).projector();
    ChannelOptions o = at(60);
    const DensityMatrix out = apply_thermal_noise(vac, 0.5, 1.0, ThermalMethod::Dilation, o);
    CHECK(von_neumann_entropy(out) == doctest::Approx(g_function(0.5)).epsilon(1e-9));

    const DensityMatrix one = fock_state(1, 2).projector();
    const DensityMatrix lossy = apply_pure_loss(one, 0.3, at(2));
    CHECK(lossy(0, 0).real() == doctest::Approx(0.7));
    CHECK(lossy(1, 1).real() == doctest::Approx(0.3));

    const Complex alpha(0.8, -0.3);
    const DensityMatrix coh = apply_pure_loss(coherent_state(alpha, 30).projector(), 0.6, at(30));
    const FockVector expected = coherent_state(std::sqrt(0.6) * alpha, 30);
    CHECK(max_abs(coh.entries() - expected.projector().entries()) < 1e-9);

    // Both routes for the thermal channel.
    Rng rng(4);
    const DensityMatrix rho = random_pure_state(rng, 6).projector();
    const DensityMatrix dil = apply_thermal_noise(rho, 0.7, 0.6, ThermalMethod::Dilation, at(40));
    const DensityMatrix dec = apply_thermal_noise(rho, 0.7, 0.6, ThermalMethod::Decomposition, at(40));
    CHECK(max_abs(dil.entries() - dec.entries()) < 1e-8);
}

TEST_CASE("amplifier special cases") {
    const double kappa = 1.8;
    const DensityMatrix out = apply_amplifier(fock_state(0, 1).projector(), kappa, at(120));
    CHECK(max_abs(out.entries() - thermal_state(kappa - 1.0, 120).entries()) < 1e-12);
    const DensityMatrix one = apply_amplifier(fock_state(1, 2).projector(), kappa, at(150));
    CHECK(one.mean_photons() == doctest::Approx(2 * kappa - 1).epsilon(1e-10));
}

TEST_CASE("channel parameter validation") {
    CHECK_THROWS_AS(validate(ClassicalNoise{-0.1}), DomainError);
    CHECK_THROWS_AS(validate(ThermalNoise{1.2, 0.5}), DomainError);
    CHECK_THROWS_AS(validate(ThermalNoise{0.5, -1.0}), DomainError);
    CHECK_THROWS_AS(validate(Amplifier{0.9}), DomainError);
    CHECK_NOTHROW(validate(PureLoss{0.0}));
}

TEST_CASE("truncation is reported") {
    const DensityMatrix six = fock_state(6, 7).projector();
    CHECK_THROWS_AS(apply_classical_noise(six, 0.85, ClassicalMethod::FockAnalytic, at(8)), TruncationError);
    ChannelOptions o = at(8);
    o.allow_truncation = true;
    const DensityMatrix out = apply_classical_noise(six, 0.85, ClassicalMethod::FockAnalytic, o);
    CHECK(out.trace_deficit() > 0.1);
    const DensityMatrix wide = apply_channel_adaptive(ClassicalNoise{0.85}, six);
    CHECK(wide.trace_deficit() < 1e-10);
}

TEST_CASE("duality with respect to the trace pairing") {
    Rng rng(8);
    const Index din = 8, dout = 30;
    for (const ChannelSpec& spec : {ChannelSpec{ClassicalNoise{0.85}}, ChannelSpec{ThermalNoise{0.7, 0.6}},
                                    ChannelSpec{PureLoss{0.4}}, ChannelSpec{Amplifier{1.5}}}) {
        const Matrix A = random_hermitian(rng, dout);
        const Matrix B = random_hermitian(rng, din);
        const Complex lhs = (A * apply_linear(spec, B, dout)).trace();
        const Complex rhs = (dual_map(spec, A, din) * B).trace();
        CHECK(std::abs(lhs - rhs) < 1e-9 * (1.0 + std::abs(lhs)));
    }
}

TEST_CASE("phase covariance") {
    Rng rng(9);
    const DensityMatrix rho = random_pure_state(rng, 6).projector();
    const Matrix U = phase_shift(1.1, 6);
    const DensityMatrix rotated{U * rho.entries() * U.adjoint()};
    for (const ChannelSpec& spec : {ChannelSpec{ClassicalNoise{0.85}}, ChannelSpec{ThermalNoise{0.7, 0.6}}}) {
        const Matrix lhs = apply_channel(spec, rotated, at(30)).entries();
        const Matrix V = phase_shift(1.1, 30);
        const Matrix rhs = V * apply_channel(spec, rho, at(30)).entries() * V.adjoint();
        CHECK(max_abs(lhs - rhs) < 1e-10);
    }
}

TEST_CASE("composition rules") {
    Rng rng(10);
    std::vector<DensityMatrix> probes;
    for (int i = 0; i < 3; ++i) probes.push_back(random_pure_state(rng, 6).projector());
    CompositionOptions o;
    o.work_dim = 48;
    o.compare_dim = 24;
    for (auto rule : {CompositionRule::NN, CompositionRule::EE, CompositionRule::NE_decomp, CompositionRule::EN_decomp,
                      CompositionRule::amp_loss, CompositionRule::loss_amp, CompositionRule::amp_thermal}) {
        CAPTURE(to_string(rule));
        CHECK(verify_composition(rule, {}, probes, o) < 1e-6);
        CHECK(composition_rule_from_string(to_string(rule)) == rule);
    }
    CHECK(composed_thermal_photons(0.7, 0.6, 1.0, 5.0) == doctest::Approx(0.6));
    CompositionParams bad;
    bad.eta_prime = 0.9;
    CHECK_THROWS_AS(verify_composition(CompositionRule::amp_thermal, bad, probes, o), DomainError);
}

TEST_CASE("local-minimum operator of the vacuum") {
    const double n = 0.85;
    const auto F = local_minimum_operator(ClassicalNoise{n}, fock_state(0, 30).projector(), at(160));
    REQUIRE(F.has_value());
    for (Index k = 0; k < 30; ++k)
        CHECK(std::abs((*F)(k, k).real() - (g_function(n) + k * std::log((n + 1) / n))) < 1e-9);
    Matrix off = *F;
    off.diagonal().setZero();
    CHECK(max_abs(off) < 1e-12);
}

TEST_CASE("entropy decomposition identity") {
    Rng rng(12);
    for (int i = 0; i < 5; ++i) {
        const FockVector psi = random_pure_state(rng, 11);
        const auto r = entropy_decomposition_check(psi, ClassicalNoise{0.85});
        CHECK(r.residual < 1e-6);
        CHECK(r.gap >= 0.0);
        CHECK(r.mean_photons == doctest::Approx(psi.mean_photons()));
    }
    CHECK_THROWS_AS(entropy_decomposition_check(fock_state(0, 2), PureLoss{0.5}), DomainError);
}
