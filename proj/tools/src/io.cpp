#include "boson_cli/io.hpp"

#include <cmath>
#include <cstdio>
#include <cctype>
#include <sstream>

namespace boson::cli {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : out_(path, std::ios::binary), columns_(header.size()) {
    if (!out_) throw std::runtime_error("cannot open " + path.string() + " for writing");
    for (const auto& h : header) field(h);
    end_row();
}

std::string CsvWriter::escape(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}

CsvWriter& CsvWriter::field(const std::string& s) {
    if (in_row_++ > 0) out_ << ',';
    out_ << escape(s);
    return *this;
}

CsvWriter& CsvWriter::field(double v) { return field(format_double(v)); }

CsvWriter& CsvWriter::field(const std::optional<double>& v) { return field(v ? format_double(*v) : std::string()); }

CsvWriter& CsvWriter::field(long long v) { return field(std::to_string(v)); }

void CsvWriter::end_row() {
    if (in_row_ != columns_)
        throw std::logic_error("CsvWriter: row has " + std::to_string(in_row_) + " fields, header has " +
                               std::to_string(columns_));
    out_ << "\r\n";
    in_row_ = 0;
}

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();

    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string cell;
    bool quoted = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
                cell += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cell += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            row.push_back(std::move(cell));
            cell.clear();
        } else if (c == '\r' || c == '\n') {
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
            row.push_back(std::move(cell));
            cell.clear();
            rows.push_back(std::move(row));
            row.clear();
        } else {
            cell += c;
        }
    }
    if (!cell.empty() || !row.empty()) {
        row.push_back(std::move(cell));
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace {

nlohmann::json complex_json(Complex z) { return nlohmann::json::array({z.real(), z.imag()}); }

Complex complex_from(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 2) throw UsageError("state JSON: complex entries must be [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

double parse_number(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw UsageError("malformed " + what + ": '" + s + "'");
    }
}

// "a", "a+bi", "a-bi", "bi"
Complex parse_complex(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw UsageError("malformed complex amplitude: empty");
    if (s.back() != 'i') return {parse_number(s, "complex amplitude"), 0.0};
    s.pop_back();
    std::size_t split = std::string::npos;
    for (std::size_t i = s.size(); i-- > 1;)
        if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
            split = i;
            break;
        }
    const std::string re_part = split == std::string::npos ? std::string() : s.substr(0, split);
    std::string im_part = split == std::string::npos ? s : s.substr(split);
    if (im_part.empty() || im_part == "+") im_part = "1";
    if (im_part == "-") im_part = "-1";
    return {re_part.empty() ? 0.0 : parse_number(re_part, "complex amplitude"),
            parse_number(im_part, "complex amplitude")};
}

Index thermal_dim(double M) {
    if (M == 0.0) return 1;
    const double d = std::ceil(std::log(1e-14) / std::log(M / (M + 1.0)));
    if (d > 4000) throw UsageError("thermal state too hot to truncate; pass --dim");
    return static_cast<Index>(d);
}

Index coherent_dim(Complex alpha) {
    for (Index d = 1; d <= 4000; ++d)
        if (coherent_state_with_deficit(alpha, d).norm_deficit < 1e-14) return d;
    throw UsageError("coherent amplitude too large to truncate; pass --dim");
}

}  // namespace

nlohmann::json to_json(const FockVector& psi) {
    nlohmann::json amps = nlohmann::json::array();
    for (Index k = 0; k < psi.dim(); ++k) amps.push_back(complex_json(psi[k]));
    return {{"dim", psi.dim()}, {"amps", amps}};
}

nlohmann::json to_json(const DensityMatrix& rho) {
    nlohmann::json rows = nlohmann::json::array();
    for (Index i = 0; i < rho.dim(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Index j = 0; j < rho.dim(); ++j) row.push_back(complex_json(rho(i, j)));
        rows.push_back(row);
    }
    return {{"dim", rho.dim()}, {"rows", rows}};
}

State state_from_json(const nlohmann::json& j) {
    try {
        const Index dim = j.at("dim").get<Index>();
        if (dim <= 0) throw UsageError("state JSON: dim must be positive");
        if (j.contains("amps")) {
            const auto& a = j.at("amps");
            if (static_cast<Index>(a.size()) != dim) throw UsageError("state JSON: amps length differs from dim");
            Vector v(dim);
            for (Index k = 0; k < dim; ++k) v(k) = complex_from(a[static_cast<std::size_t>(k)]);
            return FockVector(std::move(v));
        }
        const auto& rows = j.at("rows");
        if (static_cast<Index>(rows.size()) != dim) throw UsageError("state JSON: row count differs from dim");
        Matrix m(dim, dim);
        for (Index i = 0; i < dim; ++i) {
            const auto& r = rows[static_cast<std::size_t>(i)];
            if (static_cast<Index>(r.size()) != dim) throw UsageError("state JSON: ragged rows");
            for (Index c = 0; c < dim; ++c) m(i, c) = complex_from(r[static_cast<std::size_t>(c)]);
        }
        return DensityMatrix(std::move(m));
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("state JSON: ") + e.what());
    } catch (const ValidationError& e) {
        throw UsageError(std::string("state JSON: ") + e.what());
    }
}

State parse_state(const std::string& spec, Index dim) {
    if (spec.size() > 5 && spec.substr(spec.size() - 5) == ".json") {
        State s = state_from_json(read_json(spec));
        if (dim > 0) {
            const Index have = std::visit([](const auto& x) { return x.dim(); }, s);
            if (dim < have) throw UsageError("--dim smaller than the dimension of the state file");
            if (auto* p = std::get_if<FockVector>(&s)) return p->padded(dim);
            return std::get<DensityMatrix>(s).padded(dim);
        }
        return s;
    }
    const auto colon = spec.find(':');
    const std::string kind = spec.substr(0, colon);
    const std::string arg = colon == std::string::npos ? std::string() : spec.substr(colon + 1);
    try {
        if (kind == "vacuum" && colon == std::string::npos) return fock_state(0, dim > 0 ? dim : 1);
        if (kind == "fock") {
            const double k = parse_number(arg, "Fock index");
            if (k < 0 || k != std::floor(k) || k > 100000) throw UsageError("Fock index must be a nonnegative integer");
            const Index ki = static_cast<Index>(k);
            if (dim > 0 && ki >= dim) throw UsageError("Fock index must be below --dim");
            return fock_state(ki, dim > 0 ? dim : ki + 1);
        }
        if (kind == "coherent") {
            const Complex alpha = parse_complex(arg);
            return coherent_state(alpha, dim > 0 ? dim : coherent_dim(alpha));
        }
        if (kind == "thermal") {
            const double M = parse_number(arg, "thermal photon number");
            if (!(M >= 0.0)) throw UsageError("thermal photon number must be nonnegative");
            return thermal_state(M, dim > 0 ? dim : thermal_dim(M));
        }
        if (kind == "squeezed") {
            const auto comma = arg.find(',');
            const double r = parse_number(arg.substr(0, comma), "squeezing parameter");
            const double phi = comma == std::string::npos ? 0.0 : parse_number(arg.substr(comma + 1), "squeezing phase");
            if (!(r >= 0.0) || r > 3.0) throw UsageError("squeezing parameter must lie in [0, 3]");
            Index d = dim;
            if (d == 0) {
                d = 2;
                while (d < 4000 && std::norm(squeezed_vacuum(r, phi, d + 40).amps().tail(40).norm()) > 1e-14) d += 2;
                d += 40;
            }
            return squeezed_vacuum(r, phi, d);
        }
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
    throw UsageError("malformed state spec '" + spec +
                     "' (expected vacuum, fock:K, coherent:A, thermal:M, squeezed:R[,PHI] or a .json file)");
}

DensityMatrix as_density(const State& s) {
    if (const auto* p = std::get_if<FockVector>(&s)) return p->projector();
    return std::get<DensityMatrix>(s);
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << j.dump(2) << '\n';
}

nlohmann::json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open " + path.string());
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw UsageError("invalid JSON in " + path.string() + ": " + e.what());
    }
}

}  // namespace boson::cli
