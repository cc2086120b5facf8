#include "qstatfn/estimation.hpp"

#include "qstatfn/statfuncs.hpp"
#include "test_support.hpp"

#include <Eigen/Eigenvalues>
#include <doctest.h>

#include <cmath>

using namespace qstatfn;
using namespace qtest;

namespace {

RealVector phi(double j, double h) {
    RealVector p(2);
    p << j, h;
    return p;
}

} // namespace

TEST_CASE("tfim hamiltonian spectra") {
    const SpectralDecomposition ising =
        spectral_decompose(tfim_hamiltonian(2, 1.0, 0.0, false));
    CHECK(ising.eigenvalues[0] == doctest::Approx(-1.0));
    CHECK(ising.eigenvalues[1] == doctest::Approx(-1.0));
    CHECK(ising.eigenvalues[2] == doctest::Approx(1.0));
    CHECK(ising.eigenvalues[3] == doctest::Approx(1.0));

    const SpectralDecomposition free =
        spectral_decompose(tfim_hamiltonian(2, 0.0, 1.0, false));
    CHECK(free.eigenvalues[0] == doctest::Approx(-2.0));
    CHECK(free.eigenvalues[1] == doctest::Approx(0.0));
    CHECK(free.eigenvalues[2] == doctest::Approx(0.0));
    CHECK(free.eigenvalues[3] == doctest::Approx(2.0));

    CHECK_THROWS_AS(tfim_hamiltonian(11, 1.0, 0.5), TooLarge);
    CHECK_THROWS_AS(tfim_hamiltonian(1, 1.0, 0.5), ValidationError);
}

TEST_CASE("tfim observables") {
    const auto obs = tfim_observables(3, true);
    REQUIRE(obs.size() == 3);
    // O1 for three periodic sites, built by hand from Kronecker blocks.
    const Matrix z = sigma_z();
    const Matrix i2 = identity(2);
    auto kron3 = [&](const Matrix& a, const Matrix& b, const Matrix& c) {
        Matrix ab(4, 4);
        for (int r = 0; r < 2; ++r)
            for (int s = 0; s < 2; ++s) ab.block(2 * r, 2 * s, 2, 2) = a(r, s) * b;
        Matrix abc(8, 8);
        for (int r = 0; r < 4; ++r)
            for (int s = 0; s < 4; ++s) abc.block(2 * r, 2 * s, 2, 2) = ab(r, s) * c;
        return abc;
    };
    const Matrix expected =
        (kron3(z, z, i2) + kron3(i2, z, z) + kron3(z, i2, z)) / 3.0;
    CHECK(max_abs(obs[0].matrix() - expected) < 1e-12);
    CHECK(std::abs(obs[0].matrix().trace()) < 1e-12);
}

TEST_CASE("thermal states") {
    const DensityOperator infinite_temp = thermal_state(tfim_hamiltonian(3, 1.0, 0.5), 0.0);
    CHECK(max_abs(infinite_temp.matrix() - identity(8) / 8.0) < 1e-12);
    CHECK_THROWS_AS(thermal_state(tfim_hamiltonian(3, 1.0, 0.5), -0.1), ValidationError);
}

TEST_CASE("high-temperature moment formulas") {
    const auto m = high_temp_moments(1.0, 0.5, 0.1);
    CHECK(m[0] == doctest::Approx(0.1));
    CHECK(m[1] == doctest::Approx(0.05));
    CHECK(m[2] == doctest::Approx(0.005));

    // Exact diagonalization approaches the closed forms at small beta.
    const double beta = 0.05;
    const ParameterizedModel exact =
        tfim_model(6, beta, {"O1", "O2", "O3"}, MomentVariant::Exact);
    const RealVector mu = exact.moment_fn(phi(1.0, 0.5));
    const auto approx = high_temp_moments(1.0, 0.5, beta);
    CHECK(std::abs(mu[0] - approx[0]) < 5.0 * beta * beta);
    CHECK(std::abs(mu[1] - approx[1]) < 5.0 * beta * beta);
    CHECK(std::abs(mu[2] - approx[2]) < 5.0 * beta * beta);
}

TEST_CASE("measurement simulation") {
    Matrix zero3 = Matrix::Zero(3, 3);
    zero3(1, 1) = 1.0;
    Matrix diag = Matrix::Zero(3, 3);
    diag(0, 0) = -2.0;
    diag(1, 1) = 0.5;
    diag(2, 2) = 3.0;
    const MeasurementStats eig =
        simulate_measurements(make_density(zero3), HermitianOperator(diag), 500, 42);
    CHECK(eig.mean == doctest::Approx(0.5));
    CHECK(eig.std_error == doctest::Approx(0.0));

    const MeasurementStats coin = simulate_measurements(
        make_density(identity(2) / 2.0), HermitianOperator(sigma_z()), 100000, 7);
    CHECK(std::abs(coin.mean) <= 3.0 * coin.std_error + 1e-12);
    CHECK(coin.std_error == doctest::Approx(1.0 / std::sqrt(100000.0)).epsilon(0.1));

    const MeasurementStats again = simulate_measurements(
        make_density(identity(2) / 2.0), HermitianOperator(sigma_z()), 100000, 7);
    CHECK(coin.mean == again.mean); // bit-identical for a fixed seed
}

TEST_CASE("qmm inverts the high-temperature system exactly") {
    const ParameterizedModel model =
        tfim_model(4, 0.1, {"O1", "O2"}, MomentVariant::HighTemp);
    RealVector empirical(2);
    empirical << 0.1, 0.05;
    const EstimationResult res = qmm_solve(model, empirical, phi(0.8, 0.3));
    CHECK(res.phi_hat[0] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(res.phi_hat[1] == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(res.objective_value >= -1e-12);
}

TEST_CASE("qmm noiseless self-consistency on the exact model") {
    const ParameterizedModel model = tfim_model(6, 0.05, {"O1", "O2"}, MomentVariant::Exact);
    const RealVector truth = phi(1.0, 0.5);
    const RealVector empirical = model.moment_fn(truth);
    const EstimationResult res = qmm_solve(model, empirical, phi(0.9, 0.4));
    CHECK(std::abs(res.phi_hat[0] - 1.0) < 1e-8);
    CHECK(std::abs(res.phi_hat[1] - 0.5) < 1e-8);
}

TEST_CASE("qmm under shot noise lands within the error bars") {
    const double beta = 0.05;
    const ParameterizedModel model = tfim_model(6, beta, {"O1", "O2"}, MomentVariant::Exact);
    const RealVector truth = phi(1.0, 0.5);
    const DensityOperator rho = model.state_builder(truth);
    const long shots = 100000;
    RealVector empirical(2);
    for (int k = 0; k < 2; ++k) {
        empirical[k] = simulate_measurements(rho, model.observables[static_cast<std::size_t>(k)],
                                             shots, 1000 + static_cast<std::uint64_t>(k))
                           .mean;
    }
    SolverOptions opts;
    opts.shots = shots;
    const EstimationResult res = qmm_solve(model, empirical, phi(0.9, 0.4));
    for (int k = 0; k < 2; ++k) {
        CHECK(std::abs(res.phi_hat[k] - truth[k]) < 5.0 * res.std_errors[k]);
    }
}

TEST_CASE("quantum covariance matrix") {
    std::mt19937_64 rng(167);
    const DensityOperator rho = make_density(random_density(3, rng));
    const HermitianOperator a(random_hermitian(3, rng));
    const RealMatrix single = quantum_covariance_matrix(rho, {a});
    CHECK(single(0, 0) == doctest::Approx(moments(rho, a).variance).epsilon(1e-10));

    const DensityOperator zero = make_density(projector(ket0()));
    const RealMatrix xy = quantum_covariance_matrix(
        zero, {HermitianOperator(sigma_x()), HermitianOperator(sigma_y())});
    CHECK(std::abs(xy(0, 1)) < 1e-12);

    // Infinite-temperature TFIM covariance is exactly identity / n.
    const auto obs = tfim_observables(6, true);
    const DensityOperator mixed = make_density(identity(64) / 64.0);
    const RealMatrix sigma = quantum_covariance_matrix(mixed, obs);
    CHECK((sigma - RealMatrix::Identity(3, 3) / 6.0).cwiseAbs().maxCoeff() < 1e-12);

    // Agreement with the statistical-function covariance path, pairwise.
    const DensityOperator thermal =
        thermal_state(tfim_hamiltonian(4, 1.0, 0.5), 0.3);
    const auto obs4 = tfim_observables(4, true);
    const RealMatrix sig4 = quantum_covariance_matrix(thermal, obs4);
    for (std::size_t j = 0; j < obs4.size(); ++j) {
        for (std::size_t k = 0; k < obs4.size(); ++k) {
            CHECK(std::abs(sig4(static_cast<Index>(j), static_cast<Index>(k)) -
                           covariance(thermal, obs4[j], obs4[k])) < 1e-10);
        }
    }
}

TEST_CASE("qgmm on a consistent over-identified system") {
    const ParameterizedModel model =
        tfim_model(6, 0.1, {"O1", "O2", "O3"}, MomentVariant::HighTemp);
    RealVector empirical(3);
    empirical << 0.1, 0.05, 0.005;
    const EstimationResult res = qgmm_estimate(model, empirical, phi(0.8, 0.3));
    CHECK(res.phi_hat[0] == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(res.phi_hat[1] == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(res.objective_value < 1e-12);
}

TEST_CASE("qgmm one-step update reproduces the closed form") {
    const double beta = 0.1;
    const ParameterizedModel model =
        tfim_model(6, beta, {"O1", "O2", "O3"}, MomentVariant::HighTemp);
    RealVector empirical(3);
    empirical << 0.12, 0.05, 0.005;
    const RealVector bar = phi(empirical[0] / beta, empirical[1] / beta);
    const RealVector updated = qgmm_onestep_update(model, bar, empirical);

    const double mu1 = empirical[0];
    const double closed = mu1 / beta +
                          mu1 / (beta * (1.0 + mu1 * mu1)) *
                              (empirical[2] - 0.5 * mu1 * mu1);
    CHECK(std::abs(updated[0] - closed) < 1e-12);
    CHECK(updated[1] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(closed == doctest::Approx(1.1973975).epsilon(1e-6));
}

TEST_CASE("one-step update tracks the full two-step minimizer") {
    const double beta = 0.1;
    const ParameterizedModel model =
        tfim_model(6, beta, {"O1", "O2", "O3"}, MomentVariant::HighTemp);
    RealVector empirical(3);
    empirical << 0.12, 0.05, 0.0068;
    const RealVector bar = phi(empirical[0] / beta, empirical[1] / beta);
    const RealVector onestep = qgmm_onestep_update(model, bar, empirical);
    const EstimationResult full = qgmm_estimate(model, empirical, bar);
    CHECK(std::abs(onestep[0] - full.phi_hat[0]) < 2e-3);
    CHECK(std::abs(onestep[1] - full.phi_hat[1]) < 2e-3);
}

TEST_CASE("variance reduction from the over-identifying condition") {
    const double beta = 0.1;
    RealVector empirical2(2);
    empirical2 << 0.12, 0.05;
    RealVector empirical3(3);
    empirical3 << 0.12, 0.05, 0.0072;

    const ParameterizedModel qmm_model =
        tfim_model(6, beta, {"O1", "O2"}, MomentVariant::HighTemp);
    const ParameterizedModel qgmm_model =
        tfim_model(6, beta, {"O1", "O2", "O3"}, MomentVariant::HighTemp);

    const EstimationResult qmm = qmm_solve(qmm_model, empirical2, phi(1.1, 0.4));
    const EstimationResult qgmm = qgmm_estimate(qgmm_model, empirical3, phi(1.1, 0.4));

    const double ratio = (qgmm.std_errors[0] * qgmm.std_errors[0]) /
                         (qmm.std_errors[0] * qmm.std_errors[0]);
    const double mu1 = empirical3[0];
    CHECK(std::abs(ratio - 1.0 / (1.0 + mu1 * mu1)) < 1e-6);
}

TEST_CASE("qgmm objective is no worse than the first-step point") {
    const double beta = 0.05;
    const ParameterizedModel model =
        tfim_model(4, beta, {"O1", "O2", "O3"}, MomentVariant::Exact);
    const RealVector truth = phi(1.0, 0.5);
    const DensityOperator rho = model.state_builder(truth);
    RealVector empirical(3);
    for (int k = 0; k < 3; ++k) {
        empirical[k] = simulate_measurements(rho, model.observables[static_cast<std::size_t>(k)],
                                             2000, 555 + static_cast<std::uint64_t>(k))
                           .mean;
    }
    const EstimationResult res = qgmm_estimate(model, empirical, phi(0.9, 0.4));

    // The optimally weighted objective at the optimum can only improve on
    // the exactly identified QMM point under the same weighting.
    const EstimationResult qmm_point =
        qmm_solve(tfim_model(4, beta, {"O1", "O2"}, MomentVariant::Exact),
                  empirical.head(2), phi(0.9, 0.4));
    const RealVector g_opt = model.moment_fn(res.phi_hat) - empirical;
    const RealVector g_qmm = model.moment_fn(qmm_point.phi_hat) - empirical;
    CHECK(g_opt.dot(res.weighting * g_opt) <= g_qmm.dot(res.weighting * g_qmm) + 1e-12);

    RealVector two(2);
    two << 0.05, 0.02;
    CHECK_THROWS_AS(qgmm_estimate(tfim_model(4, beta, {"O1", "O2"}, MomentVariant::Exact),
                                  two, phi(1.0, 0.5)),
                    ArityMismatch);
}

TEST_CASE("estimation run config round trip") {
    EstimationConfig config;
    config.n_spins = 4;
    config.beta = 0.05;
    config.observables = {"O1", "O2"};
    config.method = "qmm";
    config.moment_variant = "exact";
    const EstimationRunResult run = run_estimation(config);
    CHECK(std::abs(run.result.phi_hat[0] - config.true_J) < 1e-8);
    CHECK(std::abs(run.result.phi_hat[1] - config.true_h) < 1e-8);

    config.method = "qgmm";
    config.observables = {"O1", "O2", "O3"};
    const EstimationRunResult over = run_estimation(config);
    CHECK(std::abs(over.result.phi_hat[0] - config.true_J) < 1e-8);
    CHECK(std::abs(over.result.phi_hat[1] - config.true_h) < 1e-8);
}
