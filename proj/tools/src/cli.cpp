#include "boson_cli/cli.hpp"

#include "boson_cli/io.hpp"

#include <boson/annealing.hpp>
#include <boson/bounds.hpp>
#include <boson/majorization.hpp>
#include <boson/verify.hpp>

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <cmath>
#include <iostream>
#include <map>

namespace boson::cli {

namespace fs = std::filesystem;
using nlohmann::json;

#ifndef BOSON_ENTROPY_VERSION
#define BOSON_ENTROPY_VERSION "0.0.0"
#endif

std::string version() { return BOSON_ENTROPY_VERSION; }

namespace {

constexpr double kLn2 = 0.69314718055994530942;

// Written next to every output set so a run can be repeated from it.
struct RunManifest {
    std::string subcommand;
    json parameters = json::object();
    json seeds = json::object();
    json truncation = json::object();
    std::vector<std::string> outputs;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    json to_json() const {
        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return {{"subcommand", subcommand}, {"parameters", parameters}, {"seeds", seeds},
                {"tool_version", version()}, {"truncation", truncation}, {"outputs", outputs},
                {"wall_seconds", wall}};
    }
};

struct Context {
    fs::path out_dir = ".";
    std::ostream& out;
    RunManifest manifest;

    fs::path file(const std::string& name) {
        manifest.outputs.push_back(name);
        return out_dir / name;
    }
    void finish() { write_json(out_dir / "manifest.json", manifest.to_json()); }
};

std::string tag(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    std::string s = buf;
    for (char& c : s)
        if (c == '.') c = 'p';
    return s;
}

// ---------------------------------------------------------------- channel-apply

struct ChannelArgs {
    std::string state;
    Index dim = 0;
    std::string channel;
    std::optional<double> n, eta, N, kappa;
    Index out_dim = 0;
    std::string method;
    double max_deficit = tol::max_trace_deficit;
    bool allow_truncation = false;
};

ChannelSpec channel_from_args(const std::string& kind, const std::optional<double>& n, const std::optional<double>& eta,
                              const std::optional<double>& N, const std::optional<double>& kappa) {
    auto need = [&](const std::optional<double>& v, const char* flag) {
        if (!v) throw UsageError(std::string("--channel ") + kind + " needs " + flag);
        return *v;
    };
    ChannelSpec spec;
    if (kind == "classical") spec = ClassicalNoise{need(n, "--n")};
    else if (kind == "thermal") spec = ThermalNoise{need(eta, "--eta"), need(N, "--N")};
    else if (kind == "loss") spec = PureLoss{need(eta, "--eta")};
    else if (kind == "amplifier") spec = Amplifier{need(kappa, "--kappa")};
    else throw UsageError("unknown channel '" + kind + "'");
    try {
        validate(spec);
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
    return spec;
}

int cmd_channel_apply(const ChannelArgs& a, Context& ctx) {
    const ChannelSpec spec = channel_from_args(a.channel, a.n, a.eta, a.N, a.kappa);
    const State state = parse_state(a.state, a.dim);
    const DensityMatrix rho = as_density(state);

    ChannelOptions opts;
    opts.output_dim = a.out_dim;
    opts.max_trace_deficit = a.max_deficit;
    opts.allow_truncation = a.allow_truncation;
    if (a.method == "quadrature") opts.classical = ClassicalMethod::Quadrature;
    else if (a.method == "decomposition") opts.thermal = ThermalMethod::Decomposition;
    else if (!a.method.empty() && a.method != "analytic" && a.method != "dilation")
        throw UsageError("unknown --method '" + a.method + "'");

    const DensityMatrix out = a.out_dim > 0 ? apply_channel(spec, rho, opts) : apply_channel_adaptive(spec, rho, opts);
    const Spectrum spec_out = spectrum(out);
    const double S = von_neumann_entropy(spec_out);
    const double deficit = rho.trace() - out.trace();

    auto& m = ctx.manifest;
    m.parameters = {{"state", a.state}, {"channel", describe(spec)}, {"method", a.method},
                    {"allow_truncation", a.allow_truncation}, {"max_deficit", a.max_deficit}};
    m.truncation = {{"input_dim", rho.dim()}, {"output_dim", out.dim()}, {"adaptive", a.out_dim == 0}};

    write_json(ctx.file("output_state.json"), to_json(out));
    {
        CsvWriter csv(ctx.file("spectrum.csv"), {"index", "eigenvalue"});
        for (std::size_t i = 0; i < spec_out.size(); ++i) csv.field(i).field(spec_out[i]).end_row();
    }
    const json result = {{"channel", describe(spec)},     {"entropy_nats", S},
                         {"entropy_bits", S / kLn2},      {"trace", out.trace()},
                         {"trace_deficit", deficit},      {"mean_photons", out.mean_photons()},
                         {"input_dim", rho.dim()},        {"output_dim", out.dim()}};
    write_json(ctx.file("result.json"), result);
    ctx.finish();

    ctx.out << "channel        " << describe(spec) << "\n"
            << "entropy_nats   " << format_double(S) << "\n"
            << "entropy_bits   " << format_double(S / kLn2) << "\n"
            << "trace_deficit  " << format_double(deficit) << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------- bounds-table

struct BoundsArgs {
    std::string kind;
    std::vector<double> Ns{0.1, 0.5, 10.0};
    std::size_t points = 0;
    double n_min = 1e-3, n_max = 1e3;
    int k_max = 64;
};

int cmd_bounds_table(const BoundsArgs& a, Context& ctx) {
    ctx.manifest.parameters = {{"kind", a.kind}, {"k_max", a.k_max}};
    if (a.kind == "classical") {
        const std::size_t pts = a.points ? a.points : 200;
        if (!(a.n_min > 0.0 && a.n_max > a.n_min)) throw UsageError("need 0 < --n-min < --n-max");
        ctx.manifest.parameters.update({{"points", pts}, {"n_min", a.n_min}, {"n_max", a.n_max}});
        CsvWriter csv(ctx.file("bounds_classical.csv"), {"n", "a", "b", "c", "d", "envelope", "u"});
        for (const auto& r : classical_bound_curve(logspace(a.n_min, a.n_max, pts)))
            csv.field(r.n).field(r.a).field(r.b).field(r.c).field(r.d).field(r.envelope).field(r.upper).end_row();
    } else if (a.kind == "thermal") {
        const std::size_t pts = a.points ? a.points : 201;
        ctx.manifest.parameters.update({{"points", pts}, {"N", a.Ns}});
        for (double N : a.Ns) {
            if (!(N >= 0.0)) throw UsageError("--N must be nonnegative");
            CsvWriter csv(ctx.file("bounds_thermal_N" + tag(N) + ".csv"),
                          {"eta", "N", "A", "B", "C", "D", "E", "k_E", "F", "k_F", "envelope", "u"});
            for (const auto& r : thermal_bound_curve(N, linspace(0.0, 1.0, pts), a.k_max))
                csv.field(r.eta).field(r.N).field(r.A).field(r.B).field(r.C).field(r.D).field(r.E).field(r.k_E)
                    .field(r.F).field(r.k_F).field(r.envelope).field(r.upper).end_row();
        }
    } else {
        throw UsageError("--kind must be classical or thermal");
    }
    ctx.finish();
    for (const auto& f : ctx.manifest.outputs) ctx.out << "wrote " << (ctx.out_dir / f).string() << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------- region-map

struct RegionArgs {
    double eta1 = 0.7, N1 = 0.6;
    std::size_t eta_points = 201, N_points = 201;
    double N_max = 0.0;
};

int cmd_region_map(const RegionArgs& a, Context& ctx) {
    if (!(a.eta1 >= 0.0 && a.eta1 <= 1.0) || !(a.N1 >= 0.0)) throw UsageError("need 0 <= --eta1 <= 1 and --N1 >= 0");
    const RegionGrid grid = region_grid(a.eta1, a.N1, a.eta_points, a.N_points, a.N_max);
    ctx.manifest.parameters = {{"eta1", a.eta1}, {"N1", a.N1}, {"eta_points", a.eta_points},
                               {"N_points", a.N_points}, {"N_max", grid.Ns.back()}};

    std::map<std::pair<std::string, std::string>, std::size_t> counts;
    {
        CsvWriter csv(ctx.file("regions.csv"), {"eta", "N", "label", "provenance", "both_directions", "eta_condition",
                                                "photon_condition"});
        for (std::size_t j = 0; j < grid.Ns.size(); ++j)
            for (std::size_t i = 0; i < grid.etas.size(); ++i) {
                const RegionCell& c = grid.at(i, j);
                csv.field(grid.etas[i]).field(grid.Ns[j]).field(to_string(c.label)).field(to_string(c.provenance))
                    .field(c.both_directions).field(c.eta_condition).field(c.photon_condition).end_row();
                ++counts[{to_string(c.provenance), to_string(c.label)}];
            }
    }
    {
        CsvWriter csv(ctx.file("region_counts.csv"), {"provenance", "label", "count"});
        for (const auto& [key, n] : counts) csv.field(key.first).field(key.second).field(n).end_row();
    }
    ctx.finish();
    for (const auto& [key, n] : counts) ctx.out << key.first << " " << key.second << " " << n << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------- majorize

struct MajorizeArgs {
    std::string mode;
    std::vector<Index> ks;
    std::optional<double> n, eta, N;
    Index dim = 41;
    std::size_t trials = 100;
    Index max_photons = 10;
    std::uint64_t seed = 2024;
};

int cmd_majorize(const MajorizeArgs& a, Context& ctx) {
    auto& m = ctx.manifest;
    m.truncation = {{"output_dim", a.dim}};
    if (a.dim < 2) throw UsageError("--dim must be at least 2");
    if (a.mode == "fock") {
        std::vector<Index> ks = a.ks.empty() ? std::vector<Index>{0, 1, 2, 3, 4, 5, 6} : a.ks;
        for (Index k : ks)
            if (k < 0 || k >= a.dim) throw UsageError("--k must lie in [0, dim)");
        std::vector<double> ns;
        std::vector<ThermalParams> thermal;
        if (a.eta || a.N) {
            if (!a.eta || !a.N) throw UsageError("thermal mode needs both --eta and --N");
            thermal.push_back({*a.eta, *a.N});
            try {
                validate(ThermalNoise{*a.eta, *a.N});
            } catch (const DomainError& e) {
                throw UsageError(e.what());
            }
        }
        if (a.n || thermal.empty()) ns.push_back(a.n.value_or(0.85));
        for (double n : ns)
            if (!(n >= 0.0)) throw UsageError("--n must be nonnegative");
        m.parameters = {{"mode", "fock"}, {"k", ks}, {"n", ns}};
        if (!thermal.empty()) m.parameters.update({{"eta", thermal[0].eta}, {"N", thermal[0].N}});

        const auto rows = fock_majorization_sweep(ks, ns, thermal, a.dim);
        auto staircase = [&](const std::string& name, auto&& diag_of) {
            std::vector<std::string> header{"q", "vacuum"};
            std::vector<PartialSums> sums{partial_sums(diag_of(0))};
            for (Index k : ks) {
                header.push_back("fock_" + std::to_string(k));
                sums.push_back(partial_sums(diag_of(k)));
            }
            CsvWriter csv(ctx.file(name), header);
            for (std::size_t q = 0; q < static_cast<std::size_t>(a.dim); ++q) {
                csv.field(q);
                for (const auto& s : sums) csv.field(s[q]);
                csv.end_row();
            }
        };
        for (double n : ns)
            staircase("staircase_classical_n" + tag(n) + ".csv",
                      [&](Index k) { return fock_output_eigenvalues(k, n, a.dim); });
        for (const auto& t : thermal)
            staircase("staircase_thermal_eta" + tag(t.eta) + "_N" + tag(t.N) + ".csv", [&](Index k) {
                const DensityMatrix out = thermal_fock_output(k, t.eta, t.N, a.dim);
                std::vector<double> d(static_cast<std::size_t>(a.dim));
                for (Index i = 0; i < a.dim; ++i) d[static_cast<std::size_t>(i)] = out(i, i).real();
                return d;
            });
        std::size_t majorized = 0;
        {
            CsvWriter csv(ctx.file("verdicts.csv"), {"k", "channel", "n", "eta", "N", "majorized", "first_violation_q",
                                                     "tie", "min_margin", "entropy_vacuum", "entropy_fock"});
            for (const auto& r : rows) {
                majorized += r.verdict.majorized ? 1 : 0;
                csv.field(static_cast<long long>(r.k)).field(r.channel).field(r.n).field(r.eta).field(r.N)
                    .field(r.verdict.majorized)
                    .field(r.verdict.first_violation ? std::to_string(*r.verdict.first_violation) : std::string())
                    .field(r.verdict.tie).field(r.verdict.min_margin).field(r.entropy_vacuum).field(r.entropy_fock)
                    .end_row();
            }
        }
        ctx.finish();
        ctx.out << "majorized " << majorized << "/" << rows.size() << "\n";
        return kExitOk;
    }
    if (a.mode == "random") {
        const double n = a.n.value_or(0.85);
        if (!(n > 0.0)) throw UsageError("--n must be positive");
        if (a.trials < 1) throw UsageError("--trials must be positive");
        if (a.max_photons < 0 || a.max_photons >= a.dim) throw UsageError("--max-photons must lie in [0, dim)");
        const std::uint64_t master = derive_seed(a.seed, stream_id("majorize.random"));
        m.parameters = {{"mode", "random"}, {"trials", a.trials}, {"max_photons", a.max_photons}, {"n", n}};
        m.seeds = {{"seed", a.seed}, {"stream", "majorize.random"}, {"master", master}};

        const RandomSweep sweep = random_majorization_sweep(a.trials, a.max_photons, n, master, a.dim);
        {
            CsvWriter csv(ctx.file("trials.csv"), {"trial", "seed", "mean_amp_re", "mean_amp_im", "mean_photons",
                                                   "majorized", "first_violation_q"});
            for (const auto& r : sweep.rows)
                csv.field(r.trial).field(std::to_string(r.seed)).field(r.mean_amplitude.real())
                    .field(r.mean_amplitude.imag()).field(r.mean_photons).field(r.verdict.majorized)
                    .field(r.verdict.first_violation ? std::to_string(*r.verdict.first_violation) : std::string())
                    .end_row();
        }
        {
            // Staircases of the first few trials next to the thermal reference.
            const std::size_t shown = std::min<std::size_t>(sweep.rows.size(), 5);
            std::vector<std::string> header{"q", "thermal"};
            std::vector<PartialSums> sums{partial_sums(fock_output_eigenvalues(0, n, a.dim))};
            for (std::size_t t = 0; t < shown; ++t) {
                header.push_back("trial_" + std::to_string(t));
                Rng rng(sweep.rows[t].seed);
                const FockVector psi = random_pure_state(rng, a.max_photons + 1);
                sums.push_back(partial_sums(spectrum(ClassicalNoiseKernel(n, psi.dim(), a.dim).apply(psi.amps()))));
            }
            CsvWriter csv(ctx.file("staircase_random.csv"), header);
            for (std::size_t q = 0; q < static_cast<std::size_t>(a.dim); ++q) {
                csv.field(q);
                for (const auto& s : sums) csv.field(s[q]);
                csv.end_row();
            }
        }
        write_json(ctx.file("summary.json"),
                   {{"trials", a.trials}, {"majorized", sweep.majorized_count}, {"n", n}, {"master_seed", master}});
        ctx.finish();
        ctx.out << "majorized " << sweep.majorized_count << "/" << a.trials << "\n";
        return kExitOk;
    }
    throw UsageError("--mode must be fock or random");
}

// ---------------------------------------------------------------- anneal

struct AnnealArgs {
    std::string init = "fock:6";
    AnnealConfig config;
    std::size_t restarts = 1;
    std::uint64_t seed = 2024;
    std::vector<int> checkpoints{0, 100, 200, 400};
};

int cmd_anneal(const AnnealArgs& a, Context& ctx) {
    AnnealConfig config = a.config;
    config.seed = derive_seed(a.seed, stream_id("anneal"));
    std::vector<int> cps;
    for (int c : a.checkpoints)
        if (c >= 0 && c <= config.iterations) cps.push_back(c);
    if (cps.empty()) cps.push_back(config.iterations);
    config.snapshots = cps;
    try {
        config.validate();
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
    if (a.restarts < 1) throw UsageError("--restarts must be positive");

    const State init = parse_state(a.init, config.input_dim);
    const auto* psi = std::get_if<FockVector>(&init);
    if (!psi) throw UsageError("--init must be a pure state");

    const AnnealRestarts runs = anneal_restarts(config, *psi, a.restarts);
    const AnnealTrace& best = runs.runs[runs.best];
    const MajorizationTrack track = anneal_majorization_track(best, cps);

    auto& m = ctx.manifest;
    m.parameters = {{"init", a.init}, {"n", config.n}, {"iterations", config.iterations},
                    {"initial_temperature", config.initial_temperature}, {"cooling_rate", config.cooling_rate},
                    {"step_scale", config.step_scale}, {"step_floor", config.step_floor}, {"restarts", a.restarts},
                    {"checkpoints", cps}};
    json run_seeds = json::array();
    for (const auto& r : runs.runs) run_seeds.push_back(r.config.seed);
    m.seeds = {{"seed", a.seed}, {"stream", "anneal"}, {"master", config.seed}, {"runs", run_seeds}};
    m.truncation = {{"input_dim", config.input_dim}, {"output_dim", config.output_dim}};

    auto write_trace = [](CsvWriter& csv, const AnnealTrace& t, std::optional<std::size_t> restart) {
        if (restart) csv.field(*restart);
        csv.field(0).field(t.initial_entropy).field(t.config.initial_temperature).field(true).field(t.initial_entropy)
            .field(t.initial_entropy).end_row();
        for (const auto& r : t.records) {
            if (restart) csv.field(*restart);
            csv.field(r.iteration).field(r.entropy).field(r.temperature).field(r.accepted).field(r.best_entropy)
                .field(r.proposal_entropy).end_row();
        }
    };
    {
        CsvWriter csv(ctx.file("trace.csv"),
                      {"iteration", "entropy", "temperature", "accepted", "best_entropy", "proposal_entropy"});
        write_trace(csv, best, std::nullopt);
    }
    if (runs.runs.size() > 1) {
        CsvWriter csv(ctx.file("trace_all.csv"), {"restart", "iteration", "entropy", "temperature", "accepted",
                                                  "best_entropy", "proposal_entropy"});
        for (std::size_t r = 0; r < runs.runs.size(); ++r) write_trace(csv, runs.runs[r], r);
    }
    {
        std::vector<std::string> header{"q", "thermal"};
        for (int c : cps) header.push_back("iter_" + std::to_string(c));
        CsvWriter csv(ctx.file("staircase.csv"), header);
        for (std::size_t q = 0; q < track.thermal.size(); ++q) {
            csv.field(q).field(track.thermal[q]);
            for (const auto& s : track.sums) csv.field(s[q]);
            csv.end_row();
        }
    }
    json finals = json::array();
    for (const auto& r : runs.runs) finals.push_back({{"seed", r.config.seed}, {"final_entropy_nats", r.final_entropy}});
    const json report = {
        {"final_state", to_json(best.final_state)},
        {"initial_entropy_nats", best.initial_entropy},
        {"initial_entropy_bits", best.initial_entropy / kLn2},
        {"final_entropy_nats", best.final_entropy},
        {"final_entropy_bits", best.final_entropy / kLn2},
        {"g_n_nats", g_function(config.n)},
        {"fit", {{"alpha", {best.fit.alpha.real(), best.fit.alpha.imag()}},
                 {"overlap", best.fit.overlap},
                 {"mean_photons", best.fit.mean_photons}}},
        {"checkpoint_max_dev_from_thermal", track.max_dev_from_thermal},
        {"checkpoint_forward_fraction", track.forward_fraction},
        {"quadrature_crosscheck_max_diff", best.crosscheck_max_diff},
        {"best_restart", runs.best},
        {"restarts", finals}};
    write_json(ctx.file("final.json"), report);
    ctx.finish();
    ctx.out << "initial_entropy_bits " << format_double(best.initial_entropy / kLn2) << "\n"
            << "final_entropy_bits   " << format_double(best.final_entropy / kLn2) << "\n"
            << "coherent_overlap     " << format_double(best.fit.overlap) << "\n"
            << "alpha                " << format_double(best.fit.alpha.real()) << " "
            << format_double(best.fit.alpha.imag()) << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
    bool quick = false;
    std::vector<std::string> only;
    std::string inject_fault;
    std::uint64_t seed = 2024;
};

int cmd_verify(const VerifyArgs& a, Context& ctx) {
    VerifyOptions opts;
    opts.quick = a.quick;
    opts.only = a.only;
    opts.inject_fault = a.inject_fault;
    opts.seed = a.seed;
    const auto names = verify_check_names();
    for (const auto& o : a.only)
        if (std::none_of(names.begin(), names.end(), [&](const std::string& n) { return n.rfind(o, 0) == 0; }))
            throw UsageError("no check matches --only " + o);

    const auto results = run_verify(opts);
    ctx.manifest.parameters = {{"quick", a.quick}, {"only", a.only}};
    ctx.manifest.seeds = {{"seed", a.seed}};

    json report = json::array();
    std::size_t failed = 0;
    for (const auto& r : results) {
        failed += r.passed ? 0 : 1;
        report.push_back({{"name", r.name}, {"passed", r.passed}, {"value", r.value}, {"threshold", r.threshold},
                          {"detail", r.detail}, {"seconds", r.seconds}});
        ctx.out << (r.passed ? "PASS " : "FAIL ") << r.name << "  value=" << format_double(r.value)
                << " threshold=" << format_double(r.threshold) << "  " << r.detail << "\n";
    }
    write_json(ctx.file("verify.json"), {{"checks", report}, {"failed", failed}, {"total", results.size()}});
    ctx.finish();
    ctx.out << (failed ? "FAILED " : "OK ") << results.size() - failed << "/" << results.size() << " checks passed\n";
    return failed ? kExitCheckFailed : kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Minimum output entropy toolkit for single-mode bosonic Gaussian channels", "boson-entropy"};
    app.set_version_flag("--version", version());
    app.require_subcommand(1);
    app.fallthrough();
    std::string out_dir = ".";
    app.add_option("--out", out_dir, "Directory for every output file")->capture_default_str();

    ChannelArgs ch;
    auto* c_apply = app.add_subcommand("channel-apply", "Apply a channel to a state; write the output, spectrum and entropy");
    c_apply->add_option("--state", ch.state, "vacuum, fock:K, coherent:A, thermal:M, squeezed:R[,PHI] or a .json state")->required();
    c_apply->add_option("--dim", ch.dim, "Input truncation (0: automatic)");
    c_apply->add_option("--channel", ch.channel, "classical, thermal, loss or amplifier")->required();
    c_apply->add_option("--n", ch.n, "Classical noise photons");
    c_apply->add_option("--eta", ch.eta, "Transmissivity");
    c_apply->add_option("--N", ch.N, "Thermal environment photons");
    c_apply->add_option("--kappa", ch.kappa, "Amplifier gain");
    c_apply->add_option("--out-dim", ch.out_dim, "Output truncation (0: grow until the tail is negligible)");
    c_apply->add_option("--method", ch.method, "analytic | quadrature (classical), dilation | decomposition (thermal)");
    c_apply->add_option("--max-deficit", ch.max_deficit, "Largest tolerated trace loss")->capture_default_str();
    c_apply->add_flag("--allow-truncation", ch.allow_truncation, "Report instead of failing on trace loss");

    BoundsArgs bd;
    auto* c_bounds = app.add_subcommand("bounds-table", "Tabulate the lower and upper bounds on the minimum output entropy");
    c_bounds->add_option("--kind", bd.kind, "classical or thermal")->required();
    c_bounds->add_option("--N", bd.Ns, "Thermal photon numbers, one table each")->capture_default_str();
    c_bounds->add_option("--points", bd.points, "Grid points (classical 200, thermal 201)");
    c_bounds->add_option("--n-min", bd.n_min)->capture_default_str();
    c_bounds->add_option("--n-max", bd.n_max)->capture_default_str();
    c_bounds->add_option("--k-max", bd.k_max, "Largest k in the E and F envelopes")->capture_default_str();

    RegionArgs rg;
    auto* c_region = app.add_subcommand("region-map", "Classify (eta, N) against a reference thermal channel");
    c_region->add_option("--eta1", rg.eta1)->capture_default_str();
    c_region->add_option("--N1", rg.N1)->capture_default_str();
    c_region->add_option("--eta-points", rg.eta_points)->capture_default_str();
    c_region->add_option("--N-points", rg.N_points)->capture_default_str();
    c_region->add_option("--N-max", rg.N_max, "Upper end of the N axis (0: 2 N1 + 1)");

    MajorizeArgs mj;
    auto* c_maj = app.add_subcommand("majorize", "Majorization of channel outputs by the vacuum output");
    c_maj->add_option("--mode", mj.mode, "fock or random")->required();
    c_maj->add_option("--k", mj.ks, "Fock inputs (fock mode; default 0..6)");
    c_maj->add_option("--n", mj.n, "Classical noise photons (default 0.85)");
    c_maj->add_option("--eta", mj.eta, "Thermal channel transmissivity (fock mode)");
    c_maj->add_option("--N", mj.N, "Thermal channel photons (fock mode)");
    c_maj->add_option("--dim", mj.dim, "Output truncation")->capture_default_str();
    c_maj->add_option("--trials", mj.trials)->capture_default_str();
    c_maj->add_option("--max-photons", mj.max_photons)->capture_default_str();
    c_maj->add_option("--seed", mj.seed)->capture_default_str();

    AnnealArgs an;
    auto* c_anneal = app.add_subcommand("anneal", "Simulated annealing of the classical-noise output entropy");
    c_anneal->add_option("--init", an.init, "Initial pure state")->capture_default_str();
    c_anneal->add_option("--n", an.config.n)->capture_default_str();
    c_anneal->add_option("--iters", an.config.iterations, "Proposals")->capture_default_str();
    c_anneal->add_option("--input-dim", an.config.input_dim)->capture_default_str();
    c_anneal->add_option("--output-dim", an.config.output_dim)->capture_default_str();
    c_anneal->add_option("--t0", an.config.initial_temperature, "Initial temperature (nats)")->capture_default_str();
    c_anneal->add_option("--cooling", an.config.cooling_rate)->capture_default_str();
    c_anneal->add_option("--step-scale", an.config.step_scale)->capture_default_str();
    c_anneal->add_option("--step-floor", an.config.step_floor)->capture_default_str();
    c_anneal->add_option("--restarts", an.restarts)->capture_default_str();
    c_anneal->add_option("--checkpoints", an.checkpoints)->capture_default_str();
    c_anneal->add_option("--seed", an.seed)->capture_default_str();

    VerifyArgs vf;
    auto* c_verify = app.add_subcommand("verify", "Run the invariant suite; exit 1 on any failure");
    c_verify->add_flag("--quick", vf.quick, "Smaller samples");
    c_verify->add_option("--only", vf.only, "Run checks whose names start with these prefixes");
    c_verify->add_option("--seed", vf.seed)->capture_default_str();
    c_verify->add_option("--inject-fault", vf.inject_fault)->group("");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << version() << "\n";
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        if (const auto subs = app.get_subcommands(); !subs.empty()) err << subs.front()->help();
        return kExitUsage;
    }

    try {
        Context ctx{out_dir, out, {}};
        std::error_code ec;
        fs::create_directories(ctx.out_dir, ec);
        if (ec) throw UsageError("cannot create --out directory " + out_dir + ": " + ec.message());
        if (c_apply->parsed()) {
            ctx.manifest.subcommand = "channel-apply";
            return cmd_channel_apply(ch, ctx);
        }
        if (c_bounds->parsed()) {
            ctx.manifest.subcommand = "bounds-table";
            return cmd_bounds_table(bd, ctx);
        }
        if (c_region->parsed()) {
            ctx.manifest.subcommand = "region-map";
            return cmd_region_map(rg, ctx);
        }
        if (c_maj->parsed()) {
            ctx.manifest.subcommand = "majorize";
            return cmd_majorize(mj, ctx);
        }
        if (c_anneal->parsed()) {
            ctx.manifest.subcommand = "anneal";
            return cmd_anneal(an, ctx);
        }
        ctx.manifest.subcommand = "verify";
        return cmd_verify(vf, ctx);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const TruncationError& e) {
        err << "truncation: " << e.what() << "\n";
        return kExitTruncation;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "failure: " << e.what() << "\n";
        return kExitCheckFailed;
    }
}

}  // namespace boson::cli
