#include "boson_cli/cli.hpp"
#include "boson_cli/io.hpp"

#include <boson/fock.hpp>

#include <doctest.h>

#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

using namespace boson;
using namespace boson::cli;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run invoke(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("boson_cli_test_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

double entropy_bits(const fs::path& dir) { return read_json(dir / "result.json")["entropy_bits"].get<double>(); }

}  // namespace

TEST_CASE("channel-apply examples") {
    const double ln2 = std::log(2.0);
    auto d = scratch("vac");
    REQUIRE(invoke({"channel-apply", "--state", "fock:0", "--channel", "classical", "--n", "0.85", "--out", d.string()}).code == 0);
    CHECK(entropy_bits(d) == doctest::Approx(1.841).epsilon(1e-3));
    for (const char* f : {"manifest.json", "output_state.json", "spectrum.csv", "result.json"}) CHECK(fs::exists(d / f));
    const auto manifest = read_json(d / "manifest.json");
    CHECK(manifest["subcommand"] == "channel-apply");
    CHECK(manifest["outputs"].size() == 3);
    CHECK(manifest.contains("wall_seconds"));
    CHECK(manifest["truncation"]["input_dim"] == 1);

    d = scratch("thermal");
    REQUIRE(invoke({"channel-apply", "--state", "fock:0", "--channel", "thermal", "--eta", "0.5", "--N", "1.0", "--out",
                    d.string()}).code == 0);
    CHECK(entropy_bits(d) == doctest::Approx(g_function(0.5) / ln2).epsilon(1e-9));

    d = scratch("identity");
    REQUIRE(invoke({"channel-apply", "--state", "thermal:1", "--channel", "classical", "--n", "0", "--out", d.string()}).code == 0);
    CHECK(entropy_bits(d) == doctest::Approx(g_function(1.0) / ln2).epsilon(1e-9));

    // The written state reads back.
    const State out = state_from_json(read_json(d / "output_state.json"));
    CHECK(std::holds_alternative<DensityMatrix>(out));
}

TEST_CASE("exit codes") {
    const auto d = scratch("codes").string();
    CHECK(invoke({"--help"}).code == kExitOk);
    CHECK(invoke({"--version"}).out == version() + "\n");
    CHECK(invoke({}).code == kExitUsage);
    CHECK(invoke({"frobnicate"}).code == kExitUsage);
    CHECK(invoke({"channel-apply", "--state", "fock:x", "--channel", "classical", "--n", "1", "--out", d}).code == kExitUsage);
    CHECK(invoke({"channel-apply", "--state", "fock:1", "--channel", "classical", "--out", d}).code == kExitUsage);
    CHECK(invoke({"channel-apply", "--state", "fock:1", "--channel", "classical", "--n", "-1", "--out", d}).code == kExitUsage);
    CHECK(invoke({"bounds-table", "--kind", "quantum", "--out", d}).code == kExitUsage);
    const Run trunc = invoke({"channel-apply", "--state", "fock:6", "--channel", "classical", "--n", "0.85", "--out-dim", "8",
                              "--out", d});
    CHECK(trunc.code == kExitTruncation);
    CHECK(trunc.err.find("trace") != std::string::npos);
    CHECK(invoke({"channel-apply", "--state", "fock:6", "--channel", "classical", "--n", "0.85", "--out-dim", "8",
                  "--allow-truncation", "--out", d}).code == kExitOk);
    const Run fault = invoke({"verify", "--quick", "--only", "duality.classical", "--inject-fault", "duality.classical", "--out", d});
    CHECK(fault.code == kExitCheckFailed);
    CHECK(fault.out.find("FAIL duality.classical") != std::string::npos);
    CHECK(invoke({"verify", "--quick", "--only", "duality", "--out", d}).code == kExitOk);
    CHECK(invoke({"verify", "--only", "no-such-check", "--out", d}).code == kExitUsage);
}

TEST_CASE("csv format") {
    const auto d = scratch("csv");
    REQUIRE(invoke({"bounds-table", "--kind", "classical", "--points", "9", "--out", d.string()}).code == 0);
    const std::string raw = slurp(d / "bounds_classical.csv");
    CHECK(raw.rfind("n,a,b,c,d,envelope,u\r\n", 0) == 0);
    const auto rows = read_csv(d / "bounds_classical.csv");
    REQUIRE(rows.size() == 10);
    for (const auto& r : rows) CHECK(r.size() == 7);
    CHECK(rows[1][1].empty());  // bound a does not apply below n = 1
    CHECK(std::stod(rows[5][0]) == 1.0);
    CHECK(std::stod(rows[5][6]) == g_function(1.0));  // 17 digits round-trip exactly

    CHECK(CsvWriter::escape("plain") == "plain");
    CHECK(CsvWriter::escape("a,b") == "\"a,b\"");
    CHECK(CsvWriter::escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
    const fs::path tricky = d / "tricky.csv";
    {
        CsvWriter w(tricky, {"x", "y"});
        w.field(std::string("a,b\r\nc")).field(0.1).end_row();
    }
    {
        CsvWriter short_row(d / "short.csv", {"x", "y"});
        CHECK_THROWS(short_row.field(1.0).end_row());
    }
    const auto back = read_csv(tricky);
    REQUIRE(back.size() == 2);
    CHECK(back[1][0] == "a,b\r\nc");
    CHECK(std::stod(back[1][1]) == 0.1);
    CHECK(format_double(0.85) == "0.84999999999999998");
}

TEST_CASE("thermal bounds table per N") {
    const auto d = scratch("thermal_bounds");
    REQUIRE(invoke({"bounds-table", "--kind", "thermal", "--N", "0.1", "10", "--points", "11", "--out", d.string()}).code == 0);
    CHECK(fs::exists(d / "bounds_thermal_N0p1.csv"));
    const auto rows = read_csv(d / "bounds_thermal_N10.csv");
    REQUIRE(rows.size() == 12);
    CHECK(rows[0].front() == "eta");
    CHECK(rows[0].back() == "u");
}

TEST_CASE("region-map is deterministic") {
    const auto a = scratch("region_a"), b = scratch("region_b");
    REQUIRE(invoke({"region-map", "--eta-points", "31", "--N-points", "31", "--out", a.string()}).code == 0);
    REQUIRE(invoke({"region-map", "--eta-points", "31", "--N-points", "31", "--out", b.string()}).code == 0);
    CHECK(slurp(a / "regions.csv") == slurp(b / "regions.csv"));
    CHECK(slurp(a / "region_counts.csv") == slurp(b / "region_counts.csv"));
    const auto counts = read_csv(a / "region_counts.csv");
    std::size_t total = 0;
    for (std::size_t i = 1; i < counts.size(); ++i) total += std::stoul(counts[i][2]);
    CHECK(total == 31 * 31);
}

TEST_CASE("majorize fock and random") {
    auto d = scratch("maj_k0");
    REQUIRE(invoke({"majorize", "--mode", "fock", "--k", "0", "--out", d.string()}).code == 0);
    const auto stair = read_csv(d / "staircase_classical_n0p85.csv");
    REQUIRE(stair.size() == 42);
    for (std::size_t q = 1; q < stair.size(); ++q) CHECK(stair[q][1] == stair[q][2]);

    d = scratch("maj_fock");
    const Run fock = invoke({"majorize", "--mode", "fock", "--k", "1", "6", "--eta", "0.7", "--N", "0.6", "--out", d.string()});
    CHECK(fock.code == 0);
    CHECK(fock.out == "majorized 2/2\n");
    CHECK(fs::exists(d / "staircase_thermal_eta0p7_N0p6.csv"));

    const auto a = scratch("maj_rand_a"), b = scratch("maj_rand_b");
    const std::vector<std::string> args{"majorize", "--mode", "random", "--trials", "25", "--seed", "9"};
    auto with_out = [&](const fs::path& p) {
        auto v = args;
        v.insert(v.end(), {"--out", p.string()});
        return v;
    };
    const Run ra = invoke(with_out(a));
    CHECK(ra.code == 0);
    CHECK(ra.out == "majorized 25/25\n");
    REQUIRE(invoke(with_out(b)).code == 0);
    CHECK(slurp(a / "trials.csv") == slurp(b / "trials.csv"));
    const auto trials = read_csv(a / "trials.csv");
    CHECK(trials[0] == std::vector<std::string>{"trial", "seed", "mean_amp_re", "mean_amp_im", "mean_photons", "majorized",
                                                "first_violation_q"});
    CHECK(read_json(a / "manifest.json")["seeds"]["seed"] == 9);
    CHECK(invoke({"majorize", "--mode", "sideways", "--out", a.string()}).code == kExitUsage);
}

TEST_CASE("anneal output") {
    const auto a = scratch("anneal_a"), b = scratch("anneal_b");
    const std::vector<std::string> base{"anneal", "--iters", "40", "--checkpoints", "0", "20", "40", "--restarts", "2"};
    auto v = base;
    v.insert(v.end(), {"--out", a.string()});
    REQUIRE(invoke(v).code == 0);
    v = base;
    v.insert(v.end(), {"--out", b.string()});
    REQUIRE(invoke(v).code == 0);
    CHECK(slurp(a / "trace.csv") == slurp(b / "trace.csv"));
    const auto trace = read_csv(a / "trace.csv");
    CHECK(trace.size() == 42);
    CHECK(trace[0][0] == "iteration");
    CHECK(trace[0][3] == "accepted");
    CHECK(read_csv(a / "staircase.csv")[0] == std::vector<std::string>{"q", "thermal", "iter_0", "iter_20", "iter_40"});
    CHECK(fs::exists(a / "trace_all.csv"));
    const auto fin = read_json(a / "final.json");
    CHECK(fin["initial_entropy_bits"].get<double>() == doctest::Approx(3.754).epsilon(0.002 / 3.754));
    CHECK(fin["final_entropy_nats"].get<double>() <= fin["initial_entropy_nats"].get<double>());
    CHECK(fin["restarts"].size() == 2);
    CHECK(invoke({"anneal", "--init", "thermal:1", "--out", a.string()}).code == kExitUsage);
}

TEST_CASE("state specs") {
    CHECK(std::get<FockVector>(parse_state("vacuum")).dim() == 1);
    CHECK(std::get<FockVector>(parse_state("fock:3", 8)).dim() == 8);
    const auto coh = std::get<FockVector>(parse_state("coherent:1.0+0.5i"));
    CHECK(std::abs(coh.mean_amplitude() - Complex(1.0, 0.5)) < 1e-10);
    CHECK(std::abs(std::get<FockVector>(parse_state("coherent:-0.5i")).mean_amplitude() - Complex(0.0, -0.5)) < 1e-10);
    const auto th = std::get<DensityMatrix>(parse_state("thermal:0.85"));
    CHECK(th.trace_deficit() < 1e-13);
    CHECK(std::get<FockVector>(parse_state("squeezed:0.3,0.1")).dim() > 1);
    CHECK_THROWS_AS(parse_state("fock:"), UsageError);
    CHECK_THROWS_AS(parse_state("thermal:-1"), UsageError);
    CHECK_THROWS_AS(parse_state("fock:5", 3), UsageError);
    CHECK_THROWS_AS(parse_state("nonsense"), UsageError);

    const auto d = scratch("state_json");
    fs::create_directories(d);
    const FockVector psi = coherent_state(Complex(0.3, 0.2), 6);
    write_json(d / "psi.json", to_json(psi));
    const auto back = std::get<FockVector>(parse_state((d / "psi.json").string()));
    CHECK(max_abs(back.amps() - psi.amps()) == 0.0);
    const auto j = to_json(thermal_state(0.5, 3));
    CHECK(j["dim"] == 3);
    CHECK(j["rows"].size() == 3);
}
