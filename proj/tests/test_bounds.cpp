#include <boson/bounds.hpp>
#include <boson/fock.hpp>

#include <doctest.h>

#include <cmath>

using namespace boson;

namespace {

double h2(double p) { return -p * std::log(p) - (1 - p) * std::log(1 - p); }

// Two-level state with purity t in [1/2, 1]: p^2 + (1-p)^2 = t.
double two_level_entropy_at_purity(double t) {
    const double p = 0.5 * (1.0 + std::sqrt(2.0 * t - 1.0));
    return p >= 1.0 ? 0.0 : h2(p);
}

}  // namespace

TEST_CASE("classical bounds closed forms") {
    CHECK(bound_b(1.0) == doctest::Approx(std::log(3.0)));
    CHECK(bound_b(0.0) == 0.0);
    CHECK(*bound_d(1.0) == doctest::Approx(1.0));
    CHECK(*bound_a(1.0) == doctest::Approx(0.0));
    CHECK(*bound_a(2.5) == doctest::Approx(g_function(1.5)));
    CHECK_FALSE(bound_a(0.5).has_value());
    CHECK(classical_upper(0.85) == doctest::Approx(g_function(0.85)));
    CHECK(classical_lower_envelope(0.0) == 0.0);
    const LambdaPair lp = lambda_pair(0.85);
    CHECK(lp.k == 2);
    // Bound c at n <= 1/2 is a two-level floor.
    CHECK(bound_c(0.25) == doctest::Approx(two_level_entropy_at_purity(1.0 / 1.5)).epsilon(1e-12));
}

TEST_CASE("purity floor") {
    for (double t : {0.9, 0.6, 0.5, 0.4, 0.3, 0.21, 0.1, 0.03}) {
        CAPTURE(t);
        CHECK(purity_entropy_floor(t) == doctest::Approx(min_entropy_with_purity(t)).epsilon(1e-10));
        // The Renyi-2 entropy -ln t never exceeds the von Neumann entropy.
        CHECK(purity_entropy_floor(t) >= -std::log(t) - 1e-12);
    }
    for (double t : {0.95, 0.7, 0.55}) CHECK(purity_entropy_floor(t) == doctest::Approx(two_level_entropy_at_purity(t)));
    CHECK(purity_entropy_floor(1.0) == doctest::Approx(0.0));
    CHECK(purity_entropy_floor(0.25) == doctest::Approx(std::log(4.0)));
}

TEST_CASE("classical bounds sit below g and close in at both ends") {
    for (const auto& r : classical_bound_curve(logspace(1e-3, 1e3, 200))) {
        CAPTURE(r.n);
        if (r.a) CHECK(*r.a <= r.upper + 1e-12);
        CHECK(r.b <= r.upper + 1e-12);
        CHECK(r.c <= r.upper + 1e-12);
        if (r.d) CHECK(*r.d <= r.upper + 1e-12);
        CHECK(r.envelope <= r.upper + 1e-12);
    }
    CHECK(classical_lower_envelope(1e-3) / g_function(1e-3) >= 0.98);
    CHECK(classical_lower_envelope(1e3) / g_function(1e3) >= 0.98);
    const auto grid = logspace(1e-3, 1e3, 7);
    CHECK(grid.front() == doctest::Approx(1e-3));
    CHECK(grid[3] == doctest::Approx(1.0));
    CHECK(linspace(0, 1, 5)[1] == doctest::Approx(0.25));
}

TEST_CASE("thermal bounds sit below g((1-eta)N)") {
    for (double N : {0.1, 0.5, 10.0}) {
        for (const auto& r : thermal_bound_curve(N, linspace(0.0, 1.0, 101))) {
            CAPTURE(N);
            CAPTURE(r.eta);
            CHECK(r.upper == doctest::Approx(g_function((1 - r.eta) * N)));
            for (const auto& v : {r.A, r.B, r.C, r.D, r.E, r.F})
                if (v) CHECK(*v <= r.upper + 1e-12);
            CHECK(r.envelope <= r.upper + 1e-12);
            CHECK(r.envelope >= 0.0);
        }
    }
    CHECK(thermal_lower_envelope(1.0, 0.5) == doctest::Approx(0.0));
    CHECK(thermal_upper(0.5, 1.0) == doctest::Approx(g_function(0.5)));
    CHECK_FALSE(bound_E(0.9, 0.01, 3).has_value());
    const KEnvelope e = envelope_E(0.25, 0.5);
    REQUIRE(e.value.has_value());
    CHECK(e.k >= 1);
    CHECK(*e.value == doctest::Approx(*bound_E(0.25, 0.5, e.k)));
}

TEST_CASE("region classification") {
    CHECK(classify_region(0.7, 0.6, 0.7, 1.0).label == RegionLabel::Less);
    CHECK(classify_region(0.7, 0.6, 0.9, 0.6).label == RegionLabel::Greater);
    const RegionCell noisy = classify_region(0.7, 0.6, 0.5, 1.0);
    CHECK(noisy.eta_condition);
    CHECK(noisy.photon_condition);
    CHECK(noisy.label == RegionLabel::Less);
    const RegionCell quiet = classify_region(0.7, 0.6, 0.5, 0.1);
    CHECK(quiet.eta_condition);
    CHECK_FALSE(quiet.photon_condition);
    const RegionCell self = classify_region(0.7, 0.6, 0.7, 0.6);
    CHECK(self.both_directions);

    const RegionGrid grid = region_grid(0.7, 0.6, 51, 51);
    CHECK(grid.cells.size() == 51 * 51);
    CHECK(grid.Ns.back() == doctest::Approx(2.2));
    bool seen[9] = {};
    for (std::size_t j = 0; j < grid.Ns.size(); ++j)
        for (std::size_t i = 0; i < grid.etas.size(); ++i) {
            const RegionCell& c = grid.at(i, j);
            seen[static_cast<int>(c.provenance)] = true;
            const double eta = grid.etas[i], N = grid.Ns[j];
            // A label can never contradict the bounds on either side.
            if (c.label == RegionLabel::Less)
                CHECK(thermal_lower_envelope(0.7, 0.6) <= thermal_upper(eta, N) + 1e-9);
            if (c.label == RegionLabel::Greater)
                CHECK(thermal_lower_envelope(eta, N) <= thermal_upper(0.7, 0.6) + 1e-9);
        }
    for (bool s : seen) CHECK(s);
    CHECK(to_string(RegionLabel::Greater) == "GREATER");
    CHECK(to_string(Provenance::Rule3) == "rule-3");
}

TEST_CASE("noiseless reference is never strictly greater") {
    const RegionGrid grid = region_grid(1.0, 0.6, 21, 21);
    for (std::size_t j = 0; j < grid.Ns.size(); ++j)
        for (std::size_t i = 0; i < grid.etas.size(); ++i) {
            const RegionCell& c = grid.at(i, j);
            CHECK(c.label == RegionLabel::Less);
            // On the identity line a rule of the other direction fires too. The N = 0 edge also has
            // zero entropy, but no composition rule reaches it from a noiseless reference.
            CHECK(c.both_directions == (grid.etas[i] == 1.0));
        }
}
