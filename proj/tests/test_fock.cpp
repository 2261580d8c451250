#include <boson/fock.hpp>
#include <boson/random.hpp>
#include <boson/special.hpp>

#include <doctest.h>

#include <cmath>

using namespace boson;

namespace {

// -sum p ln p of the geometric distribution, summed until the terms vanish.
double thermal_entropy_by_sum(double M) {
    double S = 0.0;
    for (int k = 0; k < 5000; ++k) {
        const double p = std::pow(M, k) / std::pow(M + 1.0, k + 1);
        if (p > 0.0) S -= p * std::log(p);
    }
    return S;
}

}  // namespace

TEST_CASE("g function matches the thermal entropy sum") {
    CHECK(g_function(0.0) == 0.0);
    for (double M : {0.1, 0.5, 0.85, 1.0, 3.0})
        CHECK(g_function(M) == doctest::Approx(thermal_entropy_by_sum(M)).epsilon(1e-12));
    CHECK(g_function(1.0) == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-15));
    CHECK_THROWS_AS(g_function(-0.1), DomainError);
}

TEST_CASE("thermal state entropy and partial sums") {
    const double M = 0.85;
    const DensityMatrix tau = thermal_state(M, 200);
    CHECK(von_neumann_entropy(tau) == doctest::Approx(g_function(M)).epsilon(1e-12));
    CHECK(tau.mean_photons() == doctest::Approx(M).epsilon(1e-12));
    const Spectrum s = spectrum(tau);
    double sum = 0.0;
    for (int q = 0; q < 40; ++q) {
        sum += s[static_cast<std::size_t>(q)];
        CHECK(sum == doctest::Approx(1.0 - std::pow(M / (M + 1.0), q + 1)).epsilon(1e-12));
    }
    CHECK(spectrum(thermal_state(1.0, 10))[0] == doctest::Approx(0.5));
    CHECK_THROWS_AS(thermal_state(-1.0, 4), DomainError);
}

TEST_CASE("fock and coherent states") {
    const FockVector six = fock_state(6, 11);
    CHECK(six.mean_photons() == doctest::Approx(6.0));
    CHECK(std::abs(six.mean_amplitude()) < 1e-15);
    CHECK(von_neumann_entropy(six.projector()) == doctest::Approx(0.0).epsilon(1e-12));

    const Complex alpha(1.0, 0.5);
    const auto ct = coherent_state_with_deficit(alpha, 40);
    CHECK(ct.norm_deficit < 1e-14);
    const double m = std::norm(alpha);
    for (int k = 0; k < 10; ++k) {
        const double poisson = std::exp(-m + k * std::log(m) - std::lgamma(k + 1.0));
        CHECK(std::norm(ct.state[k]) == doctest::Approx(poisson).epsilon(1e-12));
    }
    CHECK(std::abs(ct.state.mean_amplitude() - alpha) < 1e-10);
    CHECK(coherent_state_with_deficit(Complex(3.0, 0.0), 8).norm_deficit > 0.1);
}

TEST_CASE("ladder operators and displacement") {
    const Index d = 12;
    const Matrix a = annihilation(d);
    const Matrix n = number_operator(d);
    CHECK(max_abs(creation(d) * a - n) < 1e-14);
    for (Index k = 1; k < d; ++k) CHECK(std::abs(a(k - 1, k) - std::sqrt(double(k))) < 1e-14);

    const Complex mu(0.3, -0.4);
    const Matrix D = displacement_matrix(mu, 30, 1);
    const FockVector coh = coherent_state(mu, 30);
    for (Index k = 0; k < 30; ++k) CHECK(std::abs(D(k, 0) - coh[k]) < 1e-12);

    const Matrix U = displacement_operator(mu, 60);
    CHECK(max_abs((U.adjoint() * U).topLeftCorner(20, 20) - Matrix::Identity(20, 20)) < 1e-10);
    CHECK(max_abs(phase_shift(0.7, d) * phase_shift(-0.7, d) - Matrix::Identity(d, d)) < 1e-14);
}

TEST_CASE("squeezed vacuum second moment") {
    const double r = 0.4, phi = 0.9;
    const FockVector psi = squeezed_vacuum(r, phi, 80);
    const Matrix a = annihilation(80);
    const Complex a2 = psi.amps().dot(a * a * psi.amps());
    CHECK(std::abs(a2 + std::polar(1.0, phi) * std::sinh(2 * r) / 2.0) < 1e-10);
    CHECK(psi.mean_photons() == doctest::Approx(std::sinh(r) * std::sinh(r)).epsilon(1e-10));
}

TEST_CASE("validation of states") {
    Vector v = Vector::Zero(3);
    v(0) = 2.0;
    CHECK_THROWS_AS(FockVector{v}, ValidationError);
    CHECK_THROWS_AS(FockVector::normalized(Vector::Zero(3)), ValidationError);
    CHECK(FockVector::normalized(v)[0] == Complex(1.0));

    Matrix nonherm = Matrix::Zero(2, 2);
    nonherm(0, 0) = 0.5;
    nonherm(1, 1) = 0.5;
    nonherm(0, 1) = 0.3;
    CHECK_THROWS_AS(DensityMatrix{nonherm}, ValidationError);
    Matrix neg = Matrix::Zero(2, 2);
    neg(0, 0) = 1.2;
    neg(1, 1) = -0.2;
    CHECK_THROWS_AS(DensityMatrix{neg}, ValidationError);
}

TEST_CASE("spectrum of a known two-level matrix") {
    Matrix m(2, 2);
    m << 0.5, Complex(0.0, 0.25), Complex(0.0, -0.25), 0.5;
    const Spectrum s = spectrum(m);
    CHECK(s[0] == doctest::Approx(0.75));
    CHECK(s[1] == doctest::Approx(0.25));
    CHECK(s.residual < 1e-14);
    CHECK(von_neumann_entropy(s) == doctest::Approx(-0.75 * std::log(0.75) - 0.25 * std::log(0.25)));
}

TEST_CASE("relative entropy between thermal states") {
    const double M1 = 0.5, M2 = 1.3;
    // Direct sum over the two geometric distributions.
    double expected = 0.0;
    for (int k = 0; k < 400; ++k) {
        const double p = std::pow(M1, k) / std::pow(M1 + 1, k + 1);
        const double q = std::pow(M2, k) / std::pow(M2 + 1, k + 1);
        expected += p * (std::log(p) - std::log(q));
    }
    const DensityMatrix rho = thermal_state(M1, 120);
    CHECK(relative_entropy_to_thermal(rho, M2) == doctest::Approx(expected).epsilon(1e-10));
    CHECK(relative_entropy(rho, thermal_state(M2, 120)) == doctest::Approx(expected).epsilon(1e-8));
    CHECK(relative_entropy(rho, rho) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(std::isinf(relative_entropy(thermal_state(M1, 4), fock_state(0, 4).projector())));
}

TEST_CASE("renyi-2 of thermal") {
    const double M = 2.0;
    CHECK(renyi2_entropy(thermal_state(M, 300)) == doctest::Approx(std::log(2 * M + 1)).epsilon(1e-12));
}

TEST_CASE("special functions") {
    CHECK(special::log_factorial(0) == 0.0);
    CHECK(special::log_factorial(10) == doctest::Approx(std::log(3628800.0)).epsilon(1e-14));
    CHECK(std::exp(special::log_binomial(10, 3)) == doctest::Approx(120.0).epsilon(1e-13));
    // Gauss-Laguerre integrates x^k e^{-x} exactly up to degree 2*order-1.
    const auto& rule = special::gauss_laguerre(12);
    for (int k = 0; k < 24; ++k) {
        double s = 0.0;
        for (std::size_t j = 0; j < rule.nodes.size(); ++j)
            s += std::exp(rule.log_weights[j]) * std::pow(rule.nodes[j], k);
        CHECK(s == doctest::Approx(std::tgamma(k + 1.0)).epsilon(1e-10));
    }
}

TEST_CASE("seeded randomness is reproducible") {
    Rng a(99), b(99);
    for (int i = 0; i < 10; ++i) CHECK(a.next_u64() == b.next_u64());
    CHECK(derive_seed(1, 2) != derive_seed(1, 3));
    CHECK(stream_id("anneal") == stream_id("anneal"));
    CHECK(stream_id("anneal") != stream_id("majorize.random"));
    Rng r(5);
    double mean = 0.0, var = 0.0;
    const int count = 20000;
    for (int i = 0; i < count; ++i) {
        const double x = r.normal();
        mean += x;
        var += x * x;
    }
    CHECK(std::abs(mean / count) < 0.03);
    CHECK(std::abs(var / count - 1.0) < 0.05);
    Rng s(6);
    const FockVector psi = random_pure_state(s, 11);
    CHECK(psi.dim() == 11);
    CHECK(psi.amps().norm() == doctest::Approx(1.0));
}
