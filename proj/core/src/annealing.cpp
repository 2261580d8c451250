#include "boson/annealing.hpp"

#include "boson/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace boson {

void AnnealConfig::validate() const {
    if (!(n >= 0.0)) throw DomainError("anneal: n must be nonnegative");
    if (input_dim < 1 || input_dim > output_dim) throw DomainError("anneal: need 1 <= input_dim <= output_dim");
    if (iterations < 1) throw DomainError("anneal: iterations must be positive");
    if (!(initial_temperature > 0.0)) throw DomainError("anneal: initial temperature must be positive");
    if (!(cooling_rate > 0.0 && cooling_rate < 1.0)) throw DomainError("anneal: cooling rate must lie in (0, 1)");
    if (!(step_scale > 0.0)) throw DomainError("anneal: step scale must be positive");
    if (!(step_floor >= 0.0)) throw DomainError("anneal: step floor must be nonnegative");
    if (crosscheck_every < 0) throw DomainError("anneal: crosscheck interval must be nonnegative");
}

bool metropolis_accept(double delta, double temperature, double u) {
    if (delta <= 0.0) return true;
    return u < std::exp(-delta / temperature);
}

double anneal_entropy(const FockVector& psi, double n, Index output_dim) {
    return von_neumann_entropy(spectrum(ClassicalNoiseKernel(n, psi.dim(), output_dim).apply(psi.amps())));
}

namespace {

double quadrature_entropy(const FockVector& psi, double n, Index output_dim) {
    ChannelOptions opts;
    opts.output_dim = output_dim;
    opts.allow_truncation = true;
    return von_neumann_entropy(apply_classical_noise(psi.projector(), n, ClassicalMethod::Quadrature, opts));
}

}  // namespace

AnnealTrace anneal_min_entropy(const AnnealConfig& config, const FockVector& initial) {
    config.validate();
    if (initial.dim() != config.input_dim) throw DomainError("anneal: initial state must have dimension input_dim");

    const ClassicalNoiseKernel kernel(config.n, config.input_dim, config.output_dim);
    auto entropy = [&](const FockVector& psi) { return von_neumann_entropy(spectrum(kernel.apply(psi.amps()))); };

    AnnealTrace trace;
    trace.config = config;
    Rng rng(config.seed);

    FockVector current = initial;
    double s_current = entropy(current);
    FockVector best = current;
    double s_best = s_current;
    trace.initial_entropy = s_current;

    auto snapshot = [&](int it) {
        if (std::find(config.snapshots.begin(), config.snapshots.end(), it) != config.snapshots.end())
            trace.snapshots.push_back({it, best, s_best});
    };
    auto crosscheck = [&](int it) {
        if (config.crosscheck_every > 0 && it % config.crosscheck_every == 0) {
            const double diff = std::abs(entropy(best) - quadrature_entropy(best, config.n, config.output_dim));
            trace.crosscheck_max_diff = std::max(trace.crosscheck_max_diff, diff);
        }
    };
    snapshot(0);
    crosscheck(0);

    trace.records.reserve(static_cast<std::size_t>(config.iterations));
    for (int it = 1; it <= config.iterations; ++it) {
        const double temperature = config.initial_temperature * std::pow(config.cooling_rate, it);
        const double step = config.step_scale * temperature / config.initial_temperature;
        const Vector& base = current.amps();
        Vector proposal = base;
        for (Index k = 0; k < proposal.size(); ++k) {
            const double re = rng.normal();
            const double im = rng.normal();
            proposal(k) += step * (std::abs(base(k)) + config.step_floor) * Complex(re, im) / std::sqrt(2.0);
        }
        FockVector candidate = FockVector::normalized(std::move(proposal));
        const double s_candidate = entropy(candidate);

        AnnealRecord rec;
        rec.iteration = it;
        rec.temperature = temperature;
        rec.proposal_entropy = s_candidate;
        // Draw u every step so the random stream does not depend on the outcome.
        const double u = rng.uniform();
        rec.accepted = metropolis_accept(s_candidate - s_current, temperature, u);
        if (rec.accepted) {
            current = std::move(candidate);
            s_current = s_candidate;
            if (s_current < s_best) {
                best = current;
                s_best = s_current;
            }
        }
        rec.entropy = s_current;
        rec.best_entropy = s_best;
        trace.records.push_back(rec);
        snapshot(it);
        crosscheck(it);
    }

    trace.final_state = best;
    trace.final_entropy = s_best;
    trace.fit = coherent_fit(best);
    return trace;
}

AnnealRestarts anneal_restarts(const AnnealConfig& config, const FockVector& initial, std::size_t restarts) {
    if (restarts < 1) throw DomainError("anneal: need at least one restart");
    AnnealRestarts out;
    out.runs.resize(restarts);
    parallel_for(restarts, [&](std::size_t r) {
        AnnealConfig c = config;
        c.seed = derive_seed(config.seed, r);
        out.runs[r] = anneal_min_entropy(c, initial);
    });
    for (std::size_t r = 1; r < restarts; ++r)
        if (out.runs[r].final_entropy < out.runs[out.best].final_entropy) out.best = r;
    return out;
}

CoherentFit coherent_fit(const FockVector& psi) {
    CoherentFit fit;
    fit.alpha = psi.mean_amplitude();
    fit.mean_photons = psi.mean_photons();
    const FockVector ref = coherent_state(fit.alpha, psi.dim());
    fit.overlap = std::min(1.0, std::norm(ref.amps().dot(psi.amps())));
    return fit;
}

MajorizationTrack anneal_majorization_track(const AnnealTrace& trace, const std::vector<int>& checkpoints) {
    MajorizationTrack track;
    track.checkpoints = checkpoints;
    const Index dim = trace.config.output_dim;
    track.thermal = partial_sums(fock_output_eigenvalues(0, trace.config.n, dim));
    for (int it : checkpoints) {
        auto snap = std::find_if(trace.snapshots.begin(), trace.snapshots.end(),
                                 [&](const AnnealSnapshot& s) { return s.iteration == it; });
        if (snap == trace.snapshots.end())
            throw std::out_of_range("anneal_majorization_track: no snapshot at iteration " + std::to_string(it));
        const ClassicalNoiseKernel kernel(trace.config.n, snap->state.dim(), dim);
        track.sums.push_back(partial_sums(spectrum(kernel.apply(snap->state.amps()))));
        double dev = 0.0;
        for (std::size_t q = 0; q < track.sums.back().size(); ++q)
            dev = std::max(dev, std::abs(track.sums.back()[q] - track.thermal[q]));
        track.max_dev_from_thermal.push_back(dev);
    }
    std::size_t total = 0, forward = 0;
    for (std::size_t later = 1; later < track.sums.size(); ++later)
        for (std::size_t earlier = 0; earlier < later; ++earlier)
            for (std::size_t q = 0; q < track.sums[later].size(); ++q) {
                ++total;
                if (track.sums[later][q] >= track.sums[earlier][q] - kMajorizationTol) ++forward;
            }
    track.forward_fraction = total ? static_cast<double>(forward) / static_cast<double>(total) : 1.0;
    return track;
}

}  // namespace boson
