#include "qstatfn/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <tuple>

namespace qstatfn {

using nlohmann::json;

namespace {

RealMatrix grid_from_json(const json& rows, Index dim, const char* field) {
    if (!rows.is_array() || static_cast<Index>(rows.size()) != dim) {
        throw ValidationError(std::string("matrix field '") + field + "' must have " +
                              std::to_string(dim) + " rows");
    }
    RealMatrix out(dim, dim);
    for (Index i = 0; i < dim; ++i) {
        const json& row = rows[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Index>(row.size()) != dim) {
            throw ValidationError(std::string("matrix field '") + field +
                                  "' rows must have " + std::to_string(dim) + " entries");
        }
        for (Index j = 0; j < dim; ++j) {
            const json& cell = row[static_cast<std::size_t>(j)];
            if (!cell.is_number()) {
                throw ValidationError(std::string("matrix field '") + field +
                                      "' has a non-numeric entry");
            }
            out(i, j) = cell.get<double>();
        }
    }
    return out;
}

json grid_to_json(const RealMatrix& m) {
    json rows = json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace

Matrix matrix_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("dim") || !doc.contains("re")) {
        throw ValidationError("matrix JSON needs 'dim' and 're' fields");
    }
    if (!doc["dim"].is_number_integer() || doc["dim"].get<long>() < 1) {
        throw ValidationError("matrix 'dim' must be a positive integer");
    }
    const Index dim = doc["dim"].get<Index>();
    const RealMatrix re = grid_from_json(doc["re"], dim, "re");
    RealMatrix im = RealMatrix::Zero(dim, dim);
    if (doc.contains("im")) im = grid_from_json(doc["im"], dim, "im");
    return re.cast<Complex>() + Complex(0.0, 1.0) * im.cast<Complex>();
}

Matrix load_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return matrix_from_json(buf.str());
}

std::string matrix_to_json(const Matrix& m) {
    json doc;
    doc["dim"] = m.rows();
    doc["re"] = grid_to_json(m.real());
    if (m.imag().cwiseAbs().maxCoeff() > 0.0) doc["im"] = grid_to_json(m.imag());
    return doc.dump();
}

std::string format_number(double x) {
    // Snap round-off residue below every documented tolerance to a clean 0.
    if (std::abs(x) < 1e-12) return "0";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", x);
    return buf;
}

void write_quasiprob_csv(std::ostream& os, const QuasiProbTable& table) {
    const std::size_t n = table.n_axes();
    for (std::size_t k = 0; k < n; ++k) os << "outcome_" << (k + 1) << ",";
    os << "re,im\n";

    std::vector<Index> idx(n, 0);
    const auto& axes = table.axes();
    while (true) {
        const Complex v = table.at(idx);
        for (std::size_t k = 0; k < n; ++k) {
            os << format_number(axes[k].outcomes[idx[k]]) << ",";
        }
        os << format_number(v.real()) << "," << format_number(v.imag()) << "\n";
        std::size_t k = n;
        while (k-- > 0) {
            if (++idx[k] < axes[k].outcomes.size()) break;
            idx[k] = 0;
            if (k == 0) return;
        }
    }
}

void write_wigner_csv(std::ostream& os, const WignerTable& table) {
    os << "q,p,w\n";
    for (int q = 0; q < table.d; ++q) {
        for (int p = 0; p < table.d; ++p) {
            os << q << "," << p << "," << format_number(table.values(q, p)) << "\n";
        }
    }
}

WignerTable read_wigner_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("q,p,w", 0) != 0) {
        throw ValidationError("Wigner CSV must start with the header q,p,w");
    }
    std::vector<std::tuple<int, int, double>> rows;
    int max_coord = -1;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        int q = 0, p = 0;
        double w = 0.0;
        if (std::sscanf(line.c_str(), "%d,%d,%lf", &q, &p, &w) != 3) {
            throw ValidationError("malformed Wigner CSV row: " + line);
        }
        rows.emplace_back(q, p, w);
        max_coord = std::max({max_coord, q, p});
    }
    const int d = max_coord + 1;
    if (d < 3 || rows.size() != static_cast<std::size_t>(d) * d) {
        throw ValidationError("Wigner CSV does not cover a full odd-dimension grid");
    }
    WignerTable table;
    table.d = d;
    table.values = RealMatrix::Zero(d, d);
    for (const auto& [q, p, w] : rows) {
        if (q < 0 || q >= d || p < 0 || p >= d) {
            throw ValidationError("Wigner CSV coordinate out of range");
        }
        table.values(q, p) = w;
    }
    return table;
}

EstimationConfig estimation_config_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("invalid JSON: ") + e.what());
    }
    EstimationConfig config;
    try {
        config.model = doc.value("model", std::string("tfim"));
        config.n_spins = doc.at("n_spins").get<int>();
        config.beta = doc.at("beta").get<double>();
        config.true_J = doc.at("true_params").at("J").get<double>();
        config.true_h = doc.at("true_params").at("h").get<double>();
        config.observables = doc.at("observables").get<std::vector<std::string>>();
        config.shots = doc.value("shots", 0L);
        config.seed = doc.value("seed", std::uint64_t{0});
        config.method = doc.at("method").get<std::string>();
        config.moment_variant = doc.value("moment_variant", std::string("exact"));
        config.periodic = doc.value("periodic", true);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("estimation config: ") + e.what());
    }
    return config;
}

std::string estimation_result_to_json(const EstimationRunResult& run) {
    // Round through the shared 10-significant-digit formatter so JSON output
    // obeys the same golden-file contract as the CSV writers.
    auto round10 = [](double x) { return std::stod(format_number(x)); };
    json phi = json::object();
    json err = json::object();
    for (std::size_t k = 0; k < run.param_names.size(); ++k) {
        const Index i = static_cast<Index>(k);
        phi[run.param_names[k]] = round10(run.result.phi_hat[i]);
        err[run.param_names[k]] = round10(run.result.std_errors[i]);
    }
    json doc;
    doc["phi_hat"] = phi;
    doc["std_errors"] = err;
    doc["objective"] = round10(run.result.objective_value);
    doc["iterations"] = run.result.iterations;
    return doc.dump();
}

} // namespace qstatfn
