#include "qstatfn/estimation.hpp"
#include "qstatfn/geo.hpp"
#include "qstatfn/io.hpp"
#include "qstatfn/ordering.hpp"
#include "qstatfn/quasiprob.hpp"
#include "qstatfn/statfuncs.hpp"
#include "qstatfn/wigner.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace qstatfn;

namespace {

DensityOperator state(const Matrix& m) { return make_density(m); }

HermitianOperator herm(const Matrix& m) { return HermitianOperator(m); }

std::vector<HermitianOperator> herms(const std::vector<Matrix>& ms) {
    std::vector<HermitianOperator> out;
    out.reserve(ms.size());
    for (const auto& m : ms) out.emplace_back(m);
    return out;
}

OrderingSpec spec_for(const std::string& ordering, int n_vars) {
    return preset(parse_ordering_kind(ordering), n_vars);
}

std::pair<std::vector<RealVector>, Vector> table_payload(const QuasiProbTable& table) {
    std::vector<RealVector> outcomes;
    for (const auto& axis : table.axes()) outcomes.push_back(axis.outcomes);
    Vector flat(static_cast<Index>(table.values().size()));
    for (std::size_t i = 0; i < table.values().size(); ++i) {
        flat[static_cast<Index>(i)] = table.values()[i];
    }
    return {std::move(outcomes), std::move(flat)};
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "quantum statistical functions: generating functions, quasiprobability "
              "distributions, weak values, discrete Wigner transforms, and "
              "moment-based estimation on dense complex operators";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);

    // ------------------------------ operator core ---------------------------
    m.def(
        "spectral_decompose",
        [](const Matrix& h) {
            const SpectralDecomposition sd = spectral_decompose(herm(h));
            return std::make_pair(sd.eigenvalues, sd.eigenvectors);
        },
        py::arg("h"), "ascending eigenvalues and unitary eigenvector columns");
    m.def(
        "matrix_function",
        [](const Matrix& h, const std::string& fn, double exponent) {
            MatrixFn tag;
            if (fn == "exp") tag = MatrixFn::Exp;
            else if (fn == "log") tag = MatrixFn::Log;
            else if (fn == "sqrt") tag = MatrixFn::Sqrt;
            else if (fn == "power") tag = MatrixFn::Power;
            else throw ValidationError("matrix function must be exp, log, sqrt or power");
            return matrix_function(herm(h), tag, exponent);
        },
        py::arg("h"), py::arg("fn"), py::arg("exponent") = 0.0);
    m.def(
        "spectral_projectors",
        [](const Matrix& h, double cluster_tol) {
            std::vector<std::pair<double, Matrix>> out;
            for (const auto& e : spectral_projectors(herm(h), cluster_tol).entries) {
                out.emplace_back(e.value, e.projector);
            }
            return out;
        },
        py::arg("h"), py::arg("cluster_tol") = 1e-8);
    m.def(
        "make_density", [](const Matrix& rho) { return state(rho).matrix(); },
        py::arg("rho"), "validate and normalize a density operator");
    m.def(
        "canonical_amplitude",
        [](const Matrix& rho) { return canonical_amplitude(state(rho)); }, py::arg("rho"));

    // ------------------------------ statistical functions -------------------
    m.def(
        "qmgf", [](const Matrix& rho, const Matrix& a, double theta) {
            return qmgf(state(rho), herm(a), theta);
        },
        py::arg("rho"), py::arg("a"), py::arg("theta"));
    m.def(
        "qcf", [](const Matrix& rho, const Matrix& a, double theta) {
            return qcf(state(rho), herm(a), theta);
        },
        py::arg("rho"), py::arg("a"), py::arg("theta"));
    m.def(
        "qcgf", [](const Matrix& rho, const Matrix& a, double theta) {
            return qcgf(state(rho), herm(a), theta);
        },
        py::arg("rho"), py::arg("a"), py::arg("theta"));
    m.def(
        "qscf",
        [](const Matrix& rho, const Matrix& a, const std::vector<double>& path) {
            return qscf(state(rho), herm(a), ThetaPath(path));
        },
        py::arg("rho"), py::arg("a"), py::arg("path"),
        "log characteristic function along a strictly increasing path through 0");
    m.def(
        "multivariable_qmgf",
        [](const Matrix& rho, const std::vector<Matrix>& obs, const RealVector& theta,
           const std::string& ordering) {
            const auto observables = herms(obs);
            return multivariable_qmgf(state(rho), observables, theta,
                                      spec_for(ordering, static_cast<int>(obs.size())));
        },
        py::arg("rho"), py::arg("observables"), py::arg("theta"),
        py::arg("ordering") = "kd");
    m.def(
        "multivariable_qcf",
        [](const Matrix& rho, const std::vector<Matrix>& obs, const RealVector& theta,
           const std::string& ordering) {
            const auto observables = herms(obs);
            return multivariable_qcf(state(rho), observables, theta,
                                     spec_for(ordering, static_cast<int>(obs.size())));
        },
        py::arg("rho"), py::arg("observables"), py::arg("theta"),
        py::arg("ordering") = "kd");
    m.def(
        "conditional_qmgf",
        [](const Matrix& rho, const Matrix& pi, const Matrix& a, double theta) {
            return conditional_qmgf(state(rho), POVMElement(pi), herm(a), theta);
        },
        py::arg("rho"), py::arg("pi"), py::arg("a"), py::arg("theta"));
    m.def(
        "modular_value",
        [](const Matrix& psi, const Matrix& phi, const Matrix& a, double theta) {
            return modular_value(state(psi), state(phi), herm(a), theta);
        },
        py::arg("psi"), py::arg("phi"), py::arg("a"), py::arg("theta"));
    m.def(
        "moments",
        [](const Matrix& rho, const Matrix& a) {
            const MomentReport r = moments(state(rho), herm(a));
            return std::make_pair(r.expectation, r.variance);
        },
        py::arg("rho"), py::arg("a"), "expectation and variance");
    m.def(
        "covariance",
        [](const Matrix& rho, const Matrix& a, const Matrix& b) {
            return covariance(state(rho), herm(a), herm(b));
        },
        py::arg("rho"), py::arg("a"), py::arg("b"));

    // ------------------------------ quasiprobability ------------------------
    m.def(
        "kd_distribution",
        [](const Matrix& rho, const std::vector<Matrix>& obs, double cluster_tol) {
            return table_payload(kd_distribution(state(rho), herms(obs), cluster_tol));
        },
        py::arg("rho"), py::arg("observables"), py::arg("cluster_tol") = 1e-8,
        "outcome axes and the flat row-major quasiprobability tensor");
    m.def(
        "mh_distribution",
        [](const Matrix& rho, const std::vector<Matrix>& obs, double cluster_tol) {
            return table_payload(mh_distribution(state(rho), herms(obs), cluster_tol));
        },
        py::arg("rho"), py::arg("observables"), py::arg("cluster_tol") = 1e-8);
    m.def(
        "conditional_kd",
        [](const Matrix& psi, const Matrix& a, const Matrix& b, double b_outcome) {
            return conditional_kd(state(psi), herm(a), herm(b), b_outcome);
        },
        py::arg("psi"), py::arg("a"), py::arg("b"), py::arg("b_outcome"));
    m.def(
        "weak_value",
        [](const Matrix& rho, const Matrix& pi, const Matrix& a) {
            return weak_value(state(rho), POVMElement(pi), herm(a));
        },
        py::arg("rho"), py::arg("pi"), py::arg("a"));
    m.def(
        "weak_variance",
        [](const Matrix& rho, const Matrix& pi, const Matrix& a) {
            return weak_variance(state(rho), POVMElement(pi), herm(a));
        },
        py::arg("rho"), py::arg("pi"), py::arg("a"));
    m.def(
        "npoint_correlation",
        [](const Matrix& rho, const std::vector<Matrix>& obs) {
            const NPointResult r = npoint_correlation(state(rho), herms(obs));
            return std::make_tuple(r.direct, r.chain, r.skipped_branches);
        },
        py::arg("rho"), py::arg("observables"),
        "direct trace, chain decomposition, skipped branch count");
    m.def(
        "bochner_check",
        [](const std::function<Complex(const RealVector&)>& sampler,
           const std::vector<RealVector>& grid) {
            const BochnerReport r = bochner_check(sampler, grid);
            return std::make_tuple(r.hermitian_symmetry_violation, r.min_gram_eigenvalue,
                                   to_string(r.verdict));
        },
        py::arg("sampler"), py::arg("grid"),
        "symmetry violation, minimum Gram eigenvalue, verdict");
    m.def("uniform_grid", &uniform_grid, py::arg("n_axes"), py::arg("lo"), py::arg("hi"),
          py::arg("points_per_axis"));

    // ------------------------------ discrete Wigner -------------------------
    m.def("clock_shift", &clock_shift, py::arg("d"));
    m.def(
        "displacement", [](int d, int q, int p) { return displacement(d, {q, p}); },
        py::arg("d"), py::arg("q"), py::arg("p"));
    m.def(
        "discrete_qcf",
        [](const Matrix& rho, int q, int p) { return discrete_qcf(state(rho), {q, p}); },
        py::arg("rho"), py::arg("q"), py::arg("p"));
    m.def("phase_point_operators", &phase_point_operators, py::arg("d"));
    m.def(
        "wigner_function",
        [](const Matrix& rho) { return wigner_function(state(rho)).values; },
        py::arg("rho"), "d x d grid indexed by (q, p), summing to one");
    m.def(
        "reconstruct_state",
        [](const RealMatrix& values) {
            WignerTable table{static_cast<int>(values.rows()), values};
            return reconstruct_state(table).matrix();
        },
        py::arg("values"));

    // ------------------------------ geometry and information ----------------
    m.def(
        "geometric_mean",
        [](const Matrix& a, const Matrix& b, double u) {
            return geometric_mean(PositiveOperator(a), PositiveOperator(b), u);
        },
        py::arg("a"), py::arg("b"), py::arg("u") = 0.5);
    m.def(
        "fidelity",
        [](const Matrix& rho, const Matrix& sigma) {
            return fidelity(state(rho), state(sigma));
        },
        py::arg("rho"), py::arg("sigma"));
    m.def(
        "geo_mean_trace_bound",
        [](const Matrix& rho, const Matrix& sigma) {
            const GeoTraceBound b = geo_mean_trace_bound(state(rho), state(sigma));
            return std::make_pair(b.tr_geo, b.fid);
        },
        py::arg("rho"), py::arg("sigma"));
    m.def(
        "geo_mgf",
        [](const Matrix& rho, const Matrix& v, double theta) {
            return geo_mgf(state(rho), herm(v), theta);
        },
        py::arg("rho"), py::arg("v"), py::arg("theta"));
    m.def(
        "geo_mgf_derivatives",
        [](const Matrix& rho, const Matrix& v) {
            const GeoDerivatives d = geo_mgf_derivatives(state(rho), herm(v));
            return std::make_pair(d.first, d.second);
        },
        py::arg("rho"), py::arg("v"));
    m.def(
        "golden_thompson_gap",
        [](const Matrix& a, const Matrix& b) {
            const GoldenThompson gt = golden_thompson_gap(herm(a), herm(b));
            return std::make_pair(gt.lhs, gt.rhs);
        },
        py::arg("a"), py::arg("b"));
    m.def(
        "chernoff",
        [](const Matrix& rho, const Matrix& sigma, double theta) {
            return chernoff(state(rho), state(sigma), theta);
        },
        py::arg("rho"), py::arg("sigma"), py::arg("theta"));
    m.def(
        "relative_entropy",
        [](const Matrix& rho, const Matrix& sigma) {
            return relative_entropy(state(rho), state(sigma));
        },
        py::arg("rho"), py::arg("sigma"));
    m.def(
        "relative_entropy_variance",
        [](const Matrix& rho, const Matrix& sigma) {
            return relative_entropy_variance(state(rho), state(sigma));
        },
        py::arg("rho"), py::arg("sigma"));

    // ------------------------------ estimation ------------------------------
    m.def(
        "tfim_hamiltonian",
        [](int n_spins, double J, double h, bool periodic) {
            return tfim_hamiltonian(n_spins, J, h, periodic).matrix();
        },
        py::arg("n_spins"), py::arg("J"), py::arg("h"), py::arg("periodic") = true);
    m.def(
        "tfim_observables",
        [](int n_spins, bool periodic) {
            std::vector<Matrix> out;
            for (const auto& o : tfim_observables(n_spins, periodic)) {
                out.push_back(o.matrix());
            }
            return out;
        },
        py::arg("n_spins"), py::arg("periodic") = true);
    m.def(
        "thermal_state",
        [](const Matrix& h, double beta) { return thermal_state(herm(h), beta).matrix(); },
        py::arg("h"), py::arg("beta"));
    m.def("high_temp_moments", &high_temp_moments, py::arg("J"), py::arg("h"),
          py::arg("beta"));
    m.def(
        "simulate_measurements",
        [](const Matrix& rho, const Matrix& o, long shots, std::uint64_t seed) {
            const MeasurementStats s = simulate_measurements(state(rho), herm(o), shots, seed);
            return std::make_pair(s.mean, s.std_error);
        },
        py::arg("rho"), py::arg("o"), py::arg("shots"), py::arg("seed"));
    m.def(
        "quantum_covariance_matrix",
        [](const Matrix& rho, const std::vector<Matrix>& obs) {
            return quantum_covariance_matrix(state(rho), herms(obs));
        },
        py::arg("rho"), py::arg("observables"));
    m.def(
        "run_estimation",
        [](const std::string& config_json) {
            return estimation_result_to_json(
                run_estimation(estimation_config_from_json(config_json)));
        },
        py::arg("config_json"),
        "run a QMM/QGMM estimation from the JSON run config, returning JSON");
}
