#include "boson/majorization.hpp"

#include "boson/parallel.hpp"
#include "boson/random.hpp"
#include "boson/special.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace boson {

namespace {

double entropy_of(const std::vector<double>& p) {
    double s = 0.0;
    for (double x : p)
        if (x > 0.0) s -= x * std::log(x);
    return s;
}

}  // namespace

PartialSums partial_sums(std::vector<double> eigenvalues) {
    std::sort(eigenvalues.begin(), eigenvalues.end(), std::greater<>());
    PartialSums ps;
    ps.sums.resize(eigenvalues.size());
    double acc = 0.0;
    for (std::size_t q = 0; q < eigenvalues.size(); ++q) {
        acc += std::max(eigenvalues[q], 0.0);
        ps.sums[q] = acc;
    }
    return ps;
}

PartialSums partial_sums(const Spectrum& spec) { return partial_sums(spec.eigenvalues); }

MajorizationResult majorizes(const PartialSums& rho, const PartialSums& sigma, double tol) {
    MajorizationResult r;
    r.majorized = true;
    r.min_margin = std::numeric_limits<double>::infinity();
    const std::size_t len = std::max(rho.size(), sigma.size());
    for (std::size_t q = 0; q < len; ++q) {
        const double a = rho.size() ? rho.sums[std::min(q, rho.size() - 1)] : 0.0;
        const double b = sigma.size() ? sigma.sums[std::min(q, sigma.size() - 1)] : 0.0;
        const double margin = a - b;
        r.min_margin = std::min(r.min_margin, margin);
        if (margin < -tol) {
            if (r.majorized) r.first_violation = q;
            r.majorized = false;
        } else if (margin < 0.0) {
            r.tie = true;
        }
    }
    if (len == 0) r.min_margin = 0.0;
    return r;
}

MajorizationResult majorizes(const Spectrum& rho, const Spectrum& sigma, double tol) {
    return majorizes(partial_sums(rho), partial_sums(sigma), tol);
}

double fock_partial_sums_analytic(int k, double n, std::size_t q) {
    if (k != 1) throw DomainError("fock_partial_sums_analytic: closed form only for k = 1");
    if (!(n > 0.0)) throw DomainError("fock_partial_sums_analytic: n must be positive");
    const double qq = static_cast<double>(q);
    const double r = n / (n + 1.0);
    const double nn = n * (n + 1.0);
    // Top q+1 eigenvalues are {0..q} or, for n < 1 while lambda_0 is still small, {1..q+1}.
    const double sum_low = 1.0 - (1.0 + (qq + 1.0) / nn) * std::pow(r, qq + 1.0);
    if (n >= 1.0) return sum_low;
    // lambda_i = n^{i-1} (n^2 + i) / (n+1)^{i+2}
    const double lambda0 = n / ((n + 1.0) * (n + 1.0));
    const double i = qq + 1.0;
    const double lambda_next = std::pow(r, i - 1.0) * (n * n + i) / std::pow(n + 1.0, 3.0);
    if (lambda_next <= lambda0) return sum_low;
    return 1.0 - (1.0 + (qq + 2.0) / nn) * std::pow(r, qq + 2.0) - lambda0;
}

DensityMatrix thermal_fock_output(Index k, double eta, double N, Index dim) {
    validate(ThermalNoise{eta, N});
    if (k < 0 || k >= dim) throw DomainError("thermal_fock_output: need 0 <= k < dim");
    const double n = (1.0 - eta) * N;
    std::vector<double> diag(static_cast<std::size_t>(dim), 0.0);
    for (Index m = 0; m <= k; ++m) {
        double p;
        if (eta == 1.0) p = m == k ? 1.0 : 0.0;
        else if (eta == 0.0) p = m == 0 ? 1.0 : 0.0;
        else
            p = std::exp(special::log_binomial(static_cast<std::size_t>(k), static_cast<std::size_t>(m)) +
                         static_cast<double>(m) * std::log(eta) + static_cast<double>(k - m) * std::log1p(-eta));
        if (p == 0.0) continue;
        const std::vector<double> lam = fock_output_eigenvalues(m, n, dim);
        for (std::size_t i = 0; i < diag.size(); ++i) diag[i] += p * lam[i];
    }
    Matrix out = Matrix::Zero(dim, dim);
    for (Index i = 0; i < dim; ++i) out(i, i) = diag[static_cast<std::size_t>(i)];
    return DensityMatrix::from_channel_output(std::move(out));
}

std::vector<FockSweepRow> fock_majorization_sweep(const std::vector<Index>& ks, const std::vector<double>& classical_ns,
                                                 const std::vector<ThermalParams>& thermal, Index dim) {
    std::vector<FockSweepRow> rows;
    auto finish = [&](FockSweepRow row, const std::vector<double>& vac, const std::vector<double>& fock) {
        row.verdict = majorizes(partial_sums(vac), partial_sums(fock));
        row.entropy_vacuum = entropy_of(vac);
        row.entropy_fock = entropy_of(fock);
        row.entropy_order_ok = !row.verdict.majorized || row.entropy_vacuum <= row.entropy_fock + 1e-8;
        rows.push_back(row);
    };
    for (double n : classical_ns) {
        const std::vector<double> vac = fock_output_eigenvalues(0, n, dim);
        for (Index k : ks) {
            FockSweepRow row;
            row.k = k;
            row.channel = "classical";
            row.n = n;
            finish(row, vac, fock_output_eigenvalues(k, n, dim));
        }
    }
    for (const ThermalParams& t : thermal) {
        auto diag = [&](Index k) {
            const DensityMatrix out = thermal_fock_output(k, t.eta, t.N, dim);
            std::vector<double> d(static_cast<std::size_t>(dim));
            for (Index i = 0; i < dim; ++i) d[static_cast<std::size_t>(i)] = out(i, i).real();
            return d;
        };
        const std::vector<double> vac = diag(0);
        for (Index k : ks) {
            FockSweepRow row;
            row.k = k;
            row.channel = "thermal";
            row.n = (1.0 - t.eta) * t.N;
            row.eta = t.eta;
            row.N = t.N;
            finish(row, vac, diag(k));
        }
    }
    return rows;
}

RandomTrialRow majorization_trial(const FockVector& psi, double n, Index out_dim) {
    RandomTrialRow row;
    row.mean_amplitude = psi.mean_amplitude();
    row.mean_photons = psi.mean_photons();
    const ClassicalNoiseKernel kernel(n, psi.dim(), out_dim);
    const Spectrum out = spectrum(kernel.apply(psi.amps()));
    const std::vector<double> vac = fock_output_eigenvalues(0, n, out_dim);
    row.verdict = majorizes(partial_sums(vac), partial_sums(out));
    row.entropy_output = von_neumann_entropy(out);
    row.entropy_order_ok = !row.verdict.majorized || entropy_of(vac) <= row.entropy_output + 1e-8;
    return row;
}

RandomSweep random_majorization_sweep(std::size_t trials, Index max_photons, double n, std::uint64_t seed,
                                     Index out_dim) {
    if (trials < 1) throw DomainError("random_majorization_sweep: need at least one trial");
    if (max_photons < 0 || max_photons + 1 > out_dim)
        throw DomainError("random_majorization_sweep: need 0 <= max_photons < out_dim");
    RandomSweep sweep;
    sweep.seed = seed;
    sweep.rows.resize(trials);
    parallel_for(trials, [&](std::size_t t) {
        const std::uint64_t s = derive_seed(seed, t);
        Rng rng(s);
        RandomTrialRow row = majorization_trial(random_pure_state(rng, max_photons + 1), n, out_dim);
        row.trial = t;
        row.seed = s;
        sweep.rows[t] = row;
    });
    for (const auto& r : sweep.rows) sweep.majorized_count += r.verdict.majorized ? 1 : 0;
    return sweep;
}

}  // namespace boson
