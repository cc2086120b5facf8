#include "qstatfn/estimation.hpp"
#include "qstatfn/geo.hpp"
#include "qstatfn/io.hpp"
#include "qstatfn/ordering.hpp"
#include "qstatfn/parallel.hpp"
#include "qstatfn/quasiprob.hpp"
#include "qstatfn/statfuncs.hpp"
#include "qstatfn/wigner.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

namespace {

using namespace qstatfn;

struct GridSpec {
    double lo = 0.0;
    double hi = 0.0;
    int points = 1;
};

GridSpec parse_grid(const std::string& text) {
    GridSpec g;
    char c1 = 0, c2 = 0;
    std::istringstream is(text);
    if (!(is >> g.lo >> c1 >> g.hi >> c2 >> g.points) || c1 != ':' || c2 != ':' ||
        g.points < 1 || !(is >> std::ws).eof()) {
        throw ValidationError("grid must be of the form a:b:n with n >= 1, got '" + text +
                              "'");
    }
    return g;
}

std::vector<double> expand_grid(const GridSpec& g) {
    std::vector<double> pts(static_cast<std::size_t>(g.points));
    for (int i = 0; i < g.points; ++i) {
        pts[static_cast<std::size_t>(i)] =
            g.points == 1 ? g.lo : g.lo + (g.hi - g.lo) * static_cast<double>(i) /
                                              (g.points - 1);
    }
    return pts;
}

// Cartesian product, first axis slowest.
std::vector<RealVector> product_grid(const std::vector<std::vector<double>>& axes) {
    std::vector<RealVector> out;
    std::vector<std::size_t> idx(axes.size(), 0);
    std::size_t total = 1;
    for (const auto& a : axes) total *= a.size();
    out.reserve(total);
    while (true) {
        RealVector p(static_cast<Index>(axes.size()));
        for (std::size_t k = 0; k < axes.size(); ++k) {
            p[static_cast<Index>(k)] = axes[k][idx[k]];
        }
        out.push_back(std::move(p));
        std::size_t k = axes.size();
        while (k-- > 0) {
            if (++idx[k] < axes[k].size()) break;
            idx[k] = 0;
            if (k == 0) return out;
        }
    }
}

struct OutputSink {
    std::string path; // empty = stdout

    void write(const std::string& content) const {
        if (path.empty()) {
            std::cout << content;
            return;
        }
        std::ofstream out(path, std::ios::binary);
        if (!out) throw ValidationError("cannot open output file: " + path);
        out << content;
    }
};

Tolerances tolerances_from_flag(double tol) {
    Tolerances t;
    if (tol > 0.0) {
        t.hermitian = t.trace = t.recon = tol;
        t.psd = tol;
    }
    return t;
}

int run_statefn(const std::string& state_path, const std::vector<std::string>& obs_paths,
                const std::string& fn, const std::string& ordering,
                const std::vector<std::string>& grid_flags, double tol,
                const OutputSink& sink) {
    const Tolerances tols = tolerances_from_flag(tol);
    const DensityOperator rho = make_density(load_matrix(state_path), tols);
    std::vector<HermitianOperator> obs;
    obs.reserve(obs_paths.size());
    for (const auto& p : obs_paths) obs.emplace_back(load_matrix(p), tols.hermitian);

    std::vector<std::vector<double>> axes;
    if (grid_flags.empty()) {
        axes.push_back(expand_grid(parse_grid("-1:1:5")));
    } else {
        for (const auto& g : grid_flags) axes.push_back(expand_grid(parse_grid(g)));
    }

    std::ostringstream os;
    const bool multivariable = fn == "mqmgf" || fn == "mqcf";
    if (!multivariable) {
        if (obs.size() != 1) {
            throw ValidationError(fn + " takes exactly one observable");
        }
        const std::vector<double>& grid = axes.front();
        if (fn == "qscf") {
            // Branch tracking needs the whole path at once.
            const std::vector<Complex> values = qscf(rho, obs[0], ThetaPath(grid));
            for (std::size_t i = 0; i < grid.size(); ++i) {
                os << format_number(grid[i]) << "," << format_number(values[i].real())
                   << "," << format_number(values[i].imag()) << "\n";
            }
        } else {
            std::vector<Complex> values(grid.size());
            parallel_for(grid.size(), [&](std::size_t i) {
                if (fn == "qmgf") values[i] = qmgf(rho, obs[0], grid[i]);
                else if (fn == "qcf") values[i] = qcf(rho, obs[0], grid[i]);
                else if (fn == "qcgf") values[i] = qcgf(rho, obs[0], grid[i]);
                else throw ValidationError("unknown function: " + fn);
            });
            for (std::size_t i = 0; i < grid.size(); ++i) {
                os << format_number(grid[i]) << "," << format_number(values[i].real())
                   << "," << format_number(values[i].imag()) << "\n";
            }
        }
    } else {
        while (axes.size() < obs.size()) axes.push_back(axes.back());
        if (axes.size() != obs.size()) {
            throw ValidationError("got more grids than observables");
        }
        const OrderingSpec spec =
            preset(parse_ordering_kind(ordering), static_cast<int>(obs.size()));
        const std::vector<RealVector> points = product_grid(axes);
        std::vector<Complex> values(points.size());
        parallel_for(points.size(), [&](std::size_t i) {
            values[i] = fn == "mqmgf" ? multivariable_qmgf(rho, obs, points[i], spec)
                                      : multivariable_qcf(rho, obs, points[i], spec);
        });
        for (std::size_t i = 0; i < points.size(); ++i) {
            for (Index k = 0; k < points[i].size(); ++k) {
                os << format_number(points[i][k]) << ",";
            }
            os << format_number(values[i].real()) << "," << format_number(values[i].imag())
               << "\n";
        }
    }
    sink.write(os.str());
    return 0;
}

int run_quasiprob(const std::string& state_path, const std::vector<std::string>& obs_paths,
                  const std::string& kind, bool bochner, int bochner_points, double tol,
                  const OutputSink& sink) {
    const Tolerances tols = tolerances_from_flag(tol);
    const DensityOperator rho = make_density(load_matrix(state_path), tols);
    std::vector<HermitianOperator> obs;
    for (const auto& p : obs_paths) obs.emplace_back(load_matrix(p), tols.hermitian);

    if (kind != "kd" && kind != "mh") throw ValidationError("kind must be kd or mh");
    const QuasiProbTable table =
        kind == "mh" ? mh_distribution(rho, obs) : kd_distribution(rho, obs);
    std::ostringstream os;
    write_quasiprob_csv(os, table);
    sink.write(os.str());

    if (bochner) {
        const OrderingSpec spec =
            preset(parse_ordering_kind(kind == "mh" ? "mh" : "kd"),
                   static_cast<int>(obs.size()));
        const QcfSampler sampler = [&](const RealVector& theta) {
            return multivariable_qcf(rho, obs, theta, spec);
        };
        const BochnerReport report = bochner_check(
            sampler,
            uniform_grid(static_cast<int>(obs.size()), -2.0, 2.0, bochner_points));
        nlohmann::json doc;
        doc["verdict"] = to_string(report.verdict);
        doc["hermitian_symmetry_violation"] =
            std::stod(format_number(report.hermitian_symmetry_violation));
        doc["min_gram_eigenvalue"] = std::stod(format_number(report.min_gram_eigenvalue));
        std::cout << doc.dump() << "\n";
    }
    return 0;
}

int run_wigner(const std::string& state_path, const std::string& reconstruct_path,
               double tol, const OutputSink& sink) {
    if (!reconstruct_path.empty()) {
        std::ifstream in(reconstruct_path);
        if (!in) throw ValidationError("cannot open file: " + reconstruct_path);
        const WignerTable table = read_wigner_csv(in);
        const DensityOperator rho = reconstruct_state(table, tolerances_from_flag(tol));
        sink.write(matrix_to_json(rho.matrix()) + "\n");
        return 0;
    }
    const DensityOperator rho =
        make_density(load_matrix(state_path), tolerances_from_flag(tol));
    std::ostringstream os;
    write_wigner_csv(os, wigner_function(rho));
    sink.write(os.str());
    return 0;
}

int run_geo(const std::string& subop, const std::string& a_path, const std::string& b_path,
            const std::string& grid_flag, double tol, const OutputSink& sink) {
    const Tolerances tols = tolerances_from_flag(tol);
    std::ostringstream os;
    if (subop == "gt") {
        const HermitianOperator a(load_matrix(a_path), tols.hermitian);
        const HermitianOperator b(load_matrix(b_path), tols.hermitian);
        const GoldenThompson gt = golden_thompson_gap(a, b);
        os << "lhs,rhs\n" << format_number(gt.lhs) << "," << format_number(gt.rhs) << "\n";
    } else if (subop == "mean") {
        const PositiveOperator a(load_matrix(a_path), kPdFloor, tols);
        const PositiveOperator b(load_matrix(b_path), kPdFloor, tols);
        os << matrix_to_json(geometric_mean(a, b)) << "\n";
    } else {
        const DensityOperator rho = make_density(load_matrix(a_path), tols);
        const DensityOperator sigma = make_density(load_matrix(b_path), tols);
        if (subop == "fidelity") {
            os << "fid\n" << format_number(fidelity(rho, sigma)) << "\n";
        } else if (subop == "bound") {
            const GeoTraceBound bound = geo_mean_trace_bound(rho, sigma);
            os << "tr_geo,fid\n"
               << format_number(bound.tr_geo) << "," << format_number(bound.fid) << "\n";
        } else if (subop == "relent") {
            os << "d,var\n"
               << format_number(relative_entropy(rho, sigma)) << ","
               << format_number(relative_entropy_variance(rho, sigma)) << "\n";
        } else if (subop == "chernoff") {
            const std::vector<double> grid =
                expand_grid(parse_grid(grid_flag.empty() ? "0:1:11" : grid_flag));
            std::vector<double> psi(grid.size());
            parallel_for(grid.size(), [&](std::size_t i) {
                psi[i] = chernoff(rho, sigma, grid[i]);
            });
            os << "theta,psi\n";
            for (std::size_t i = 0; i < grid.size(); ++i) {
                os << format_number(grid[i]) << "," << format_number(psi[i]) << "\n";
            }
        } else {
            throw ValidationError("unknown geo subop: " + subop);
        }
    }
    sink.write(os.str());
    return 0;
}

int run_estimate(const std::string& config_path, std::uint64_t seed_override,
                 bool has_seed_override, const OutputSink& sink) {
    std::ifstream in(config_path);
    if (!in) throw ValidationError("cannot open file: " + config_path);
    std::ostringstream buf;
    buf << in.rdbuf();
    EstimationConfig config = estimation_config_from_json(buf.str());
    if (has_seed_override) config.seed = seed_override;
    const EstimationRunResult run = run_estimation(config);
    sink.write(estimation_result_to_json(run) + "\n");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum statistical functions workbench"};
    app.require_subcommand(1);

    double tol = 0.0;
    app.add_option("--tol", tol, "override validation tolerances");
    OutputSink sink;
    app.add_option("-o,--output", sink.path, "output file (default stdout)");

    // statefn
    auto* statefn = app.add_subcommand("statefn", "evaluate statistical functions on a grid");
    std::string state_path;
    std::vector<std::string> obs_paths;
    std::string fn = "qmgf";
    std::string ordering = "kd";
    std::vector<std::string> grid_flags;
    statefn->add_option("state", state_path, "state matrix JSON")->required();
    statefn->add_option("observables", obs_paths, "observable matrix JSON(s)")->required();
    statefn->add_option("--fn", fn, "qmgf|qcf|qcgf|qscf|mqmgf|mqcf");
    statefn->add_option("--ordering", ordering, "kd|mh|wigner");
    statefn->add_option("--grid", grid_flags, "theta grid a:b:n (repeat per variable)");

    // quasiprob
    auto* quasi = app.add_subcommand("quasiprob", "joint quasiprobability tables");
    std::string q_state;
    std::vector<std::string> q_obs;
    std::string kind = "kd";
    bool bochner = false;
    int bochner_points = 7;
    quasi->add_option("state", q_state, "state matrix JSON")->required();
    quasi->add_option("observables", q_obs, "observable matrix JSON(s)")
        ->required()
        ->expected(2, -1);
    quasi->add_option("--kind", kind, "kd|mh");
    quasi->add_flag("--bochner", bochner, "also run the positive-definiteness witness");
    quasi->add_option("--bochner-points", bochner_points, "grid points per axis on [-2,2]");

    // wigner
    auto* wig = app.add_subcommand("wigner", "discrete Wigner function (odd dimension)");
    std::string w_state;
    std::string w_reconstruct;
    wig->add_option("state", w_state, "state matrix JSON");
    wig->add_option("--reconstruct", w_reconstruct, "Wigner CSV to invert into a state");

    // geo
    auto* geo = app.add_subcommand("geo", "geometric-mean and information functionals");
    std::string subop;
    std::string a_path, b_path, geo_grid;
    geo->add_option("subop", subop, "mean|fidelity|bound|gt|chernoff|relent")->required();
    geo->add_option("a", a_path, "first matrix JSON")->required();
    geo->add_option("b", b_path, "second matrix JSON")->required();
    geo->add_option("--grid", geo_grid, "theta grid a:b:n for chernoff");

    // estimate
    auto* est = app.add_subcommand("estimate", "method-of-moments parameter estimation");
    std::string config_path;
    std::uint64_t seed_override = 0;
    est->add_option("config", config_path, "estimation run config JSON")->required();
    CLI::Option* seed_opt = est->add_option("--seed", seed_override, "override config seed");

    try {
        app.parse(argc, argv);
        if (statefn->parsed()) {
            return run_statefn(state_path, obs_paths, fn, ordering, grid_flags, tol, sink);
        }
        if (quasi->parsed()) {
            return run_quasiprob(q_state, q_obs, kind, bochner, bochner_points, tol, sink);
        }
        if (wig->parsed()) {
            if (w_state.empty() && w_reconstruct.empty()) {
                throw ValidationError("wigner needs a state or --reconstruct table");
            }
            return run_wigner(w_state, w_reconstruct, tol, sink);
        }
        if (geo->parsed()) {
            return run_geo(subop, a_path, b_path, geo_grid, tol, sink);
        }
        if (est->parsed()) {
            return run_estimate(config_path, seed_override, seed_opt->count() > 0, sink);
        }
        throw ValidationError("no subcommand given");
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
