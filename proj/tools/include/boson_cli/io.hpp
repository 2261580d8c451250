#pragma once

// File formats of the command-line tool: RFC 4180 CSV, JSON states and inline state specs.

#include <boson/fock.hpp>

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace boson::cli {

// Bad user input; maps to exit code 2.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Shortest round-trip rendering with 17 significant digits.
std::string format_double(double v);

// Writes a header row and data rows with CRLF record separators; fields holding a comma, quote or
// line break are quoted and embedded quotes doubled.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);

    CsvWriter& field(const std::string& s);
    CsvWriter& field(double v);
    CsvWriter& field(const std::optional<double>& v);  // empty when absent
    CsvWriter& field(long long v);
    CsvWriter& field(int v) { return field(static_cast<long long>(v)); }
    CsvWriter& field(std::size_t v) { return field(static_cast<long long>(v)); }
    CsvWriter& field(bool v) { return field(std::string(v ? "true" : "false")); }
    void end_row();

    static std::string escape(const std::string& s);

private:
    std::ofstream out_;
    std::size_t columns_;
    std::size_t in_row_ = 0;
};

// Minimal RFC 4180 reader used by the tests.
std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path);

using State = std::variant<FockVector, DensityMatrix>;

// {"dim": d, "amps": [[re, im], ...]} or {"dim": d, "rows": [[[re, im], ...], ...]}.
nlohmann::json to_json(const FockVector& psi);
nlohmann::json to_json(const DensityMatrix& rho);
State state_from_json(const nlohmann::json& j);

// "vacuum", "fock:K", "coherent:RE+IMi", "thermal:M", "squeezed:R[,PHI]" or a path to a JSON
// state file. dim = 0 picks a dimension that keeps the truncation loss below 1e-14.
State parse_state(const std::string& spec, Index dim = 0);

DensityMatrix as_density(const State& s);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json(const std::filesystem::path& path);

}  // namespace boson::cli
