#pragma once

#include "qstatfn/operators.hpp"
#include "qstatfn/types.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace qstatfn {

// Moment-condition model: parameterized state, chosen observables, and the
// theoretical moment map mu(phi). moment_fn may be exact (diagonalization)
// or a tagged approximation; jacobian_fn is optional (central differences
// otherwise). covariance_fn supplies the Sigma(phi) used for optimal
// weighting and standard errors.
struct ParameterizedModel {
    std::vector<std::string> param_names;
    std::function<DensityOperator(const RealVector&)> state_builder;
    std::vector<HermitianOperator> observables;
    std::function<RealVector(const RealVector&)> moment_fn;
    std::function<RealMatrix(const RealVector&)> jacobian_fn;   // optional
    std::function<RealMatrix(const RealVector&)> covariance_fn; // optional

    int n_params() const { return static_cast<int>(param_names.size()); }
    int n_moments() const { return static_cast<int>(observables.size()); }
};

struct SolverOptions {
    int max_iterations = 100;
    double newton_tol = 1e-10; // max |mu(phi) - empirical|
    double grad_tol = 1e-8;    // objective gradient norm at the optimum
    int max_backtracks = 30;
    double fd_step = 1e-6;     // relative Jacobian step
    long shots = 1;            // scales the reported standard errors
};

struct EstimationResult {
    RealVector phi_hat;
    double objective_value = 0.0;
    RealMatrix weighting;
    int iterations = 0;
    RealVector std_errors;
};

// --------------------------- TFIM building blocks ---------------------------

// H = -J sum_i sz_i sz_{i+1} - h sum_i sx_i on 2 <= n_spins <= 10 sites.
HermitianOperator tfim_hamiltonian(int n_spins, double J, double h, bool periodic = true);

// O1 = nearest-neighbor zz correlation, O2 = transverse magnetization,
// O3 = next-nearest-neighbor zz correlation, each normalized by 1/n_spins.
std::vector<HermitianOperator> tfim_observables(int n_spins, bool periodic = true);

// exp(-beta H)/Z via the spectral route.
DensityOperator thermal_state(const HermitianOperator& h, double beta);

// Leading-order high-temperature moments {beta J, beta h, (beta J)^2 / 2}.
std::array<double, 3> high_temp_moments(double J, double h, double beta);

enum class MomentVariant { Exact, HighTemp };

// TFIM model with params (J, h). The exact variant evaluates moments and
// covariances by diagonalization at phi; the high-temperature variant uses
// the closed-form moments with the analytic Jacobian and the infinite-
// temperature covariance.
ParameterizedModel tfim_model(int n_spins, double beta,
                              const std::vector<std::string>& observable_names,
                              MomentVariant variant, bool periodic = true);

// --------------------------- measurement sampling ---------------------------

struct MeasurementStats {
    double mean = 0.0;
    double std_error = 0.0;
};

// Projective sampling from the spectral distribution of O in rho;
// bit-reproducible for a fixed seed.
MeasurementStats simulate_measurements(const DensityOperator& rho,
                                       const HermitianOperator& o, long shots,
                                       std::uint64_t seed);

// --------------------------- estimators -------------------------------------

// Sigma_jk = (1/2) Tr({O_j, O_k} rho) - Tr(O_j rho) Tr(O_k rho).
RealMatrix quantum_covariance_matrix(const DensityOperator& rho,
                                     const std::vector<HermitianOperator>& observables);

// Per-shot asymptotic parameter covariance (D^T Sigma^-1 D)^-1 at phi.
RealMatrix asymptotic_parameter_covariance(const ParameterizedModel& model,
                                           const RealVector& phi,
                                           const SolverOptions& opts = {});

// Exactly identified case L = K: Newton root-finding on mu(phi) = empirical.
EstimationResult qmm_solve(const ParameterizedModel& model, const RealVector& empirical,
                           const RealVector& init, const SolverOptions& opts = {});

// Over-identified case L > K: two-step estimator. Step one minimizes the
// quadratic objective with identity weighting; step two re-minimizes with
// the inverse covariance at the first-step point.
EstimationResult qgmm_estimate(const ParameterizedModel& model, const RealVector& empirical,
                               const RealVector& init, const SolverOptions& opts = {});

// One-step linearized update
//   phi_bar + (D^T S^-1 D)^-1 D^T S^-1 (empirical - mu(phi_bar)).
RealVector qgmm_onestep_update(const ParameterizedModel& model, const RealVector& phi_bar,
                               const RealVector& empirical,
                               const SolverOptions& opts = {});

// --------------------------- batch runs -------------------------------------

struct EstimationConfig {
    std::string model = "tfim";
    int n_spins = 2;
    double beta = 0.1;
    double true_J = 1.0;
    double true_h = 0.5;
    std::vector<std::string> observables = {"O1", "O2"};
    long shots = 0; // 0 = noiseless (exact moments as empirical input)
    std::uint64_t seed = 0;
    std::string method = "qmm";          // "qmm" | "qgmm"
    std::string moment_variant = "exact"; // "exact" | "high_temp"
    bool periodic = true;
};

struct EstimationRunResult {
    std::vector<std::string> param_names;
    EstimationResult result;
    RealVector empirical;
};

EstimationRunResult run_estimation(const EstimationConfig& config,
                                   const SolverOptions& opts = {});

} // namespace qstatfn
