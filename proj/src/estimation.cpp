#include "qstatfn/estimation.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace qstatfn {

namespace {

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i) {
        for (Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

Matrix pauli_x() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

Matrix pauli_z() {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

// Single-site operator embedded at `site` on an n-spin chain.
Matrix site_op(int n, int site, const Matrix& op) {
    Matrix out = Matrix::Identity(1, 1);
    for (int i = 0; i < n; ++i) {
        out = kron(out, i == site ? op : Matrix::Identity(2, 2));
    }
    return out;
}

Matrix zz_pair(int n, int i, int j) {
    const Matrix z = pauli_z();
    return site_op(n, i, z) * site_op(n, j, z);
}

void check_spin_count(int n_spins) {
    if (n_spins > 10) {
        std::ostringstream os;
        os << "dense TFIM supports at most 10 spins, got " << n_spins;
        throw TooLarge(os.str());
    }
    if (n_spins < 2) {
        throw ValidationError("TFIM needs at least 2 spins");
    }
}

RealMatrix numerical_jacobian(const ParameterizedModel& model, const RealVector& phi,
                              double fd_rel) {
    const int k = model.n_params();
    const int l = model.n_moments();
    RealMatrix jac(l, k);
    for (int c = 0; c < k; ++c) {
        const double step = fd_rel * std::max(1.0, std::abs(phi[c]));
        RealVector plus = phi, minus = phi;
        plus[c] += step;
        minus[c] -= step;
        jac.col(c) = (model.moment_fn(plus) - model.moment_fn(minus)) / (2.0 * step);
    }
    return jac;
}

RealMatrix model_jacobian(const ParameterizedModel& model, const RealVector& phi,
                          const SolverOptions& opts) {
    if (model.jacobian_fn) return model.jacobian_fn(phi);
    return numerical_jacobian(model, phi, opts.fd_step);
}

RealMatrix model_covariance(const ParameterizedModel& model, const RealVector& phi) {
    if (model.covariance_fn) return model.covariance_fn(phi);
    return quantum_covariance_matrix(model.state_builder(phi), model.observables);
}

RealMatrix invert_weighting(const RealMatrix& sigma) {
    Eigen::FullPivLU<RealMatrix> lu(sigma);
    if (!lu.isInvertible()) {
        throw SingularWeighting("moment covariance matrix is singular");
    }
    return lu.inverse();
}

RealVector sandwich_std_errors(const ParameterizedModel& model, const RealVector& phi,
                               const SolverOptions& opts) {
    const RealMatrix cov = asymptotic_parameter_covariance(model, phi, opts);
    RealVector out(cov.rows());
    const double shots = static_cast<double>(std::max<long>(opts.shots, 1));
    for (Index i = 0; i < out.size(); ++i) {
        out[i] = std::sqrt(std::max(cov(i, i), 0.0) / shots);
    }
    return out;
}

// Gauss-Newton minimization of (mu(phi) - empirical)^T W (mu(phi) - empirical).
RealVector gauss_newton(const ParameterizedModel& model, const RealVector& empirical,
                        const RealMatrix& weighting, RealVector phi,
                        const SolverOptions& opts, int& iterations) {
    auto objective = [&](const RealVector& p) {
        const RealVector g = model.moment_fn(p) - empirical;
        return g.dot(weighting * g);
    };
    auto newton_step = [&](const RealVector& p) {
        const RealVector resid = model.moment_fn(p) - empirical;
        const RealMatrix jac = model_jacobian(model, p, opts);
        const RealMatrix normal = jac.transpose() * weighting * jac;
        Eigen::FullPivLU<RealMatrix> lu(normal);
        if (!lu.isInvertible()) {
            throw SingularJacobian("Gauss-Newton normal equations are singular");
        }
        return RealVector(lu.solve(-jac.transpose() * (weighting * resid)));
    };
    auto grad_norm = [&](const RealVector& p) {
        const RealVector resid = model.moment_fn(p) - empirical;
        const RealMatrix jac = model_jacobian(model, p, opts);
        return (2.0 * jac.transpose() * (weighting * resid)).norm();
    };

    for (int it = 0; it < opts.max_iterations; ++it) {
        if (grad_norm(phi) <= opts.grad_tol) {
            // One full polish step: quadratic convergence drives consistent
            // systems to machine precision once the gradient test fires.
            const RealVector polished = phi + newton_step(phi);
            if (grad_norm(polished) < grad_norm(phi)) phi = polished;
            iterations += it;
            return phi;
        }
        const RealVector step = newton_step(phi);

        const double f0 = objective(phi);
        double alpha = 1.0;
        RealVector best = phi + step;
        double best_f = objective(best);
        for (int bt = 0; bt < opts.max_backtracks && best_f > f0; ++bt) {
            alpha *= 0.5;
            const RealVector cand = phi + alpha * step;
            const double f = objective(cand);
            if (f < best_f) {
                best = cand;
                best_f = f;
            }
        }
        if (best_f >= f0) {
            // Numerical floor of the objective.
            iterations += it;
            return phi;
        }
        phi = best;
    }
    throw MaxIterations("Gauss-Newton did not converge within the iteration limit");
}

} // namespace

HermitianOperator tfim_hamiltonian(int n_spins, double J, double h, bool periodic) {
    check_spin_count(n_spins);
    const Index dim = Index(1) << n_spins;
    Matrix ham = Matrix::Zero(dim, dim);
    const int bonds = periodic ? n_spins : n_spins - 1;
    for (int i = 0; i < bonds; ++i) {
        ham -= J * zz_pair(n_spins, i, (i + 1) % n_spins);
    }
    for (int i = 0; i < n_spins; ++i) {
        ham -= h * site_op(n_spins, i, pauli_x());
    }
    return HermitianOperator(std::move(ham));
}

std::vector<HermitianOperator> tfim_observables(int n_spins, bool periodic) {
    check_spin_count(n_spins);
    const Index dim = Index(1) << n_spins;
    const double norm = 1.0 / n_spins;

    Matrix o1 = Matrix::Zero(dim, dim);
    const int bonds = periodic ? n_spins : n_spins - 1;
    for (int i = 0; i < bonds; ++i) o1 += zz_pair(n_spins, i, (i + 1) % n_spins);

    Matrix o2 = Matrix::Zero(dim, dim);
    for (int i = 0; i < n_spins; ++i) o2 += site_op(n_spins, i, pauli_x());

    Matrix o3 = Matrix::Zero(dim, dim);
    const int skips = periodic ? n_spins : n_spins - 2;
    for (int i = 0; i < skips; ++i) o3 += zz_pair(n_spins, i, (i + 2) % n_spins);

    std::vector<HermitianOperator> out;
    out.emplace_back(norm * o1);
    out.emplace_back(norm * o2);
    out.emplace_back(norm * o3);
    return out;
}

DensityOperator thermal_state(const HermitianOperator& h, double beta) {
    if (beta < 0.0) throw ValidationError("inverse temperature must be non-negative");
    const SpectralDecomposition sd = spectral_decompose(h);
    // exp(-beta (lambda - lambda_min)) avoids overflow before normalization.
    const double ground = sd.eigenvalues.minCoeff();
    RealVector weights(sd.eigenvalues.size());
    for (Index i = 0; i < weights.size(); ++i) {
        weights[i] = std::exp(-beta * (sd.eigenvalues[i] - ground));
    }
    weights /= weights.sum();
    const Matrix rho = sd.eigenvectors * weights.asDiagonal() * sd.eigenvectors.adjoint();
    return DensityOperator(rho);
}

std::array<double, 3> high_temp_moments(double J, double h, double beta) {
    return {beta * J, beta * h, 0.5 * (beta * J) * (beta * J)};
}

ParameterizedModel tfim_model(int n_spins, double beta,
                              const std::vector<std::string>& observable_names,
                              MomentVariant variant, bool periodic) {
    check_spin_count(n_spins);
    const std::vector<HermitianOperator> all = tfim_observables(n_spins, periodic);

    std::vector<int> picks;
    for (const auto& name : observable_names) {
        if (name == "O1") picks.push_back(0);
        else if (name == "O2") picks.push_back(1);
        else if (name == "O3") picks.push_back(2);
        else throw ValidationError("unknown TFIM observable: " + name);
    }
    if (picks.size() < 2) throw ValidationError("TFIM estimation needs O1 and O2 at least");

    ParameterizedModel model;
    model.param_names = {"J", "h"};
    for (int p : picks) model.observables.push_back(all[static_cast<std::size_t>(p)]);

    auto build_state = [n_spins, beta, periodic](const RealVector& phi) {
        return thermal_state(tfim_hamiltonian(n_spins, phi[0], phi[1], periodic), beta);
    };
    model.state_builder = build_state;

    if (variant == MomentVariant::Exact) {
        auto observables = model.observables;
        model.moment_fn = [build_state, observables](const RealVector& phi) {
            const DensityOperator rho = build_state(phi);
            RealVector mu(static_cast<Index>(observables.size()));
            for (std::size_t k = 0; k < observables.size(); ++k) {
                mu[static_cast<Index>(k)] =
                    (observables[k].matrix() * rho.matrix()).trace().real();
            }
            return mu;
        };
    } else {
        model.moment_fn = [beta, picks](const RealVector& phi) {
            const auto m = high_temp_moments(phi[0], phi[1], beta);
            RealVector mu(static_cast<Index>(picks.size()));
            for (std::size_t k = 0; k < picks.size(); ++k) {
                mu[static_cast<Index>(k)] = m[static_cast<std::size_t>(picks[k])];
            }
            return mu;
        };
        model.jacobian_fn = [beta, picks](const RealVector& phi) {
            RealMatrix jac = RealMatrix::Zero(static_cast<Index>(picks.size()), 2);
            for (std::size_t k = 0; k < picks.size(); ++k) {
                const Index row = static_cast<Index>(k);
                switch (picks[k]) {
                case 0: jac(row, 0) = beta; break;
                case 1: jac(row, 1) = beta; break;
                case 2: jac(row, 0) = beta * beta * phi[0]; break;
                }
            }
            return jac;
        };
        // Leading-order weighting: covariance of the infinite-temperature state.
        auto observables = model.observables;
        const int n = n_spins;
        model.covariance_fn = [observables, n](const RealVector&) {
            const Index dim = Index(1) << n;
            const DensityOperator maximally_mixed(
                Matrix::Identity(dim, dim) / static_cast<double>(dim));
            return quantum_covariance_matrix(maximally_mixed, observables);
        };
    }
    return model;
}

MeasurementStats simulate_measurements(const DensityOperator& rho,
                                       const HermitianOperator& o, long shots,
                                       std::uint64_t seed) {
    if (shots < 1) throw ValidationError("measurement simulation needs at least one shot");
    if (rho.dim() != o.dim()) {
        throw DimensionMismatch("observable dimension does not match state");
    }
    const SpectralDecomposition sd = spectral_decompose(o);
    const Index dim = rho.dim();

    RealVector probs(dim);
    for (Index i = 0; i < dim; ++i) {
        const Vector v = sd.eigenvectors.col(i);
        probs[i] = std::max(v.dot(rho.matrix() * v).real(), 0.0);
    }
    probs /= probs.sum();

    RealVector cum(dim);
    double acc = 0.0;
    for (Index i = 0; i < dim; ++i) {
        acc += probs[i];
        cum[i] = acc;
    }
    cum[dim - 1] = 1.0;

    // Top 53 bits of the generator output give a uniform double in [0, 1);
    // this keeps sampling identical across standard libraries.
    std::mt19937_64 rng(seed);
    auto uniform = [&rng]() {
        return static_cast<double>(rng() >> 11) * 0x1.0p-53;
    };

    double sum = 0.0;
    double sum_sq = 0.0;
    for (long s = 0; s < shots; ++s) {
        const double u = uniform();
        Index lo = 0;
        Index hi = dim - 1;
        while (lo < hi) {
            const Index mid = (lo + hi) / 2;
            if (cum[mid] > u) hi = mid;
            else lo = mid + 1;
        }
        const double outcome = sd.eigenvalues[lo];
        sum += outcome;
        sum_sq += outcome * outcome;
    }
    MeasurementStats stats;
    stats.mean = sum / static_cast<double>(shots);
    if (shots > 1) {
        const double var =
            std::max(sum_sq - static_cast<double>(shots) * stats.mean * stats.mean, 0.0) /
            static_cast<double>(shots - 1);
        stats.std_error = std::sqrt(var / static_cast<double>(shots));
    }
    return stats;
}

RealMatrix asymptotic_parameter_covariance(const ParameterizedModel& model,
                                           const RealVector& phi,
                                           const SolverOptions& opts) {
    const RealMatrix d = model_jacobian(model, phi, opts);
    const RealMatrix w = invert_weighting(model_covariance(model, phi));
    const RealMatrix info = d.transpose() * w * d;
    Eigen::FullPivLU<RealMatrix> lu(info);
    if (!lu.isInvertible()) {
        throw SingularWeighting("asymptotic information matrix is singular");
    }
    return lu.inverse();
}

RealMatrix quantum_covariance_matrix(const DensityOperator& rho,
                                     const std::vector<HermitianOperator>& observables) {
    const Index l = static_cast<Index>(observables.size());
    RealVector means(l);
    for (Index j = 0; j < l; ++j) {
        if (observables[static_cast<std::size_t>(j)].dim() != rho.dim()) {
            throw DimensionMismatch("observable dimension does not match state");
        }
        means[j] = (observables[static_cast<std::size_t>(j)].matrix() * rho.matrix())
                       .trace()
                       .real();
    }
    RealMatrix sigma(l, l);
    for (Index j = 0; j < l; ++j) {
        for (Index k = j; k < l; ++k) {
            const Matrix& oj = observables[static_cast<std::size_t>(j)].matrix();
            const Matrix& ok = observables[static_cast<std::size_t>(k)].matrix();
            const double sym =
                0.5 * ((oj * ok + ok * oj) * rho.matrix()).trace().real();
            sigma(j, k) = sym - means[j] * means[k];
            sigma(k, j) = sigma(j, k);
        }
    }
    return sigma;
}

EstimationResult qmm_solve(const ParameterizedModel& model, const RealVector& empirical,
                           const RealVector& init, const SolverOptions& opts) {
    if (model.n_moments() != model.n_params()) {
        throw ArityMismatch("method of moments needs as many moment conditions as parameters");
    }
    if (empirical.size() != model.n_moments() || init.size() != model.n_params()) {
        throw ArityMismatch("empirical moment or initialization size mismatch");
    }

    EstimationResult result;
    result.weighting = RealMatrix::Identity(model.n_moments(), model.n_moments());

    RealVector phi = init;
    for (int it = 0; it < opts.max_iterations; ++it) {
        const RealVector resid = model.moment_fn(phi) - empirical;
        if (resid.cwiseAbs().maxCoeff() <= opts.newton_tol) {
            result.phi_hat = phi;
            result.objective_value = resid.squaredNorm();
            result.iterations = it;
            result.std_errors = sandwich_std_errors(model, phi, opts);
            return result;
        }
        const RealMatrix jac = model_jacobian(model, phi, opts);
        Eigen::FullPivLU<RealMatrix> lu(jac);
        if (!lu.isInvertible()) {
            throw SingularJacobian("moment Jacobian is singular");
        }
        const RealVector step = lu.solve(-resid);

        const double f0 = resid.norm();
        double alpha = 1.0;
        RealVector best = phi + step;
        double best_f = (model.moment_fn(best) - empirical).norm();
        for (int bt = 0; bt < opts.max_backtracks && best_f > f0; ++bt) {
            alpha *= 0.5;
            const RealVector cand = phi + alpha * step;
            const double f = (model.moment_fn(cand) - empirical).norm();
            if (f < best_f) {
                best = cand;
                best_f = f;
            }
        }
        phi = best;
    }
    throw MaxIterations("Newton did not reach the moment-matching tolerance");
}

EstimationResult qgmm_estimate(const ParameterizedModel& model, const RealVector& empirical,
                               const RealVector& init, const SolverOptions& opts) {
    if (model.n_moments() <= model.n_params()) {
        throw ArityMismatch("generalized method of moments expects an over-identified system");
    }
    if (empirical.size() != model.n_moments() || init.size() != model.n_params()) {
        throw ArityMismatch("empirical moment or initialization size mismatch");
    }

    int iterations = 0;
    const RealMatrix identity = RealMatrix::Identity(model.n_moments(), model.n_moments());
    const RealVector phi_bar = gauss_newton(model, empirical, identity, init, opts, iterations);

    const RealMatrix w_opt = invert_weighting(model_covariance(model, phi_bar));
    const RealVector phi_hat =
        gauss_newton(model, empirical, w_opt, phi_bar, opts, iterations);

    EstimationResult result;
    result.phi_hat = phi_hat;
    const RealVector g = model.moment_fn(phi_hat) - empirical;
    result.objective_value = g.dot(w_opt * g);
    result.weighting = w_opt;
    result.iterations = iterations;
    result.std_errors = sandwich_std_errors(model, phi_hat, opts);
    return result;
}

RealVector qgmm_onestep_update(const ParameterizedModel& model, const RealVector& phi_bar,
                               const RealVector& empirical, const SolverOptions& opts) {
    if (empirical.size() != model.n_moments()) {
        throw ArityMismatch("empirical moment size mismatch");
    }
    const RealMatrix d = model_jacobian(model, phi_bar, opts);
    const RealMatrix w = invert_weighting(model_covariance(model, phi_bar));
    const RealMatrix info = d.transpose() * w * d;
    Eigen::FullPivLU<RealMatrix> lu(info);
    if (!lu.isInvertible()) {
        throw SingularJacobian("linearized update matrix is singular");
    }
    return phi_bar + lu.solve(d.transpose() * w * (empirical - model.moment_fn(phi_bar)));
}

EstimationRunResult run_estimation(const EstimationConfig& config,
                                   const SolverOptions& opts) {
    if (config.model != "tfim") {
        throw ValidationError("only the tfim model ships with this build");
    }
    const MomentVariant variant = config.moment_variant == "high_temp"
                                      ? MomentVariant::HighTemp
                                      : MomentVariant::Exact;
    if (config.moment_variant != "exact" && config.moment_variant != "high_temp") {
        throw ValidationError("moment_variant must be exact or high_temp");
    }
    const ParameterizedModel model = tfim_model(config.n_spins, config.beta,
                                                config.observables, variant,
                                                config.periodic);

    RealVector truth(2);
    truth << config.true_J, config.true_h;

    RealVector empirical(model.n_moments());
    if (config.shots > 0) {
        const DensityOperator rho = model.state_builder(truth);
        for (int k = 0; k < model.n_moments(); ++k) {
            empirical[k] = simulate_measurements(
                               rho, model.observables[static_cast<std::size_t>(k)],
                               config.shots, config.seed + static_cast<std::uint64_t>(k))
                               .mean;
        }
    } else {
        empirical = model.moment_fn(truth);
    }

    // High-temperature inversion seeds the solver.
    RealVector init(2);
    init << empirical[0] / config.beta, empirical[1] / config.beta;

    SolverOptions run_opts = opts;
    run_opts.shots = std::max<long>(config.shots, 1);

    EstimationRunResult out;
    out.param_names = model.param_names;
    out.empirical = empirical;
    if (config.method == "qmm") {
        out.result = qmm_solve(model, empirical, init, run_opts);
    } else if (config.method == "qgmm") {
        out.result = qgmm_estimate(model, empirical, init, run_opts);
    } else {
        throw ValidationError("method must be qmm or qgmm");
    }
    return out;
}

} // namespace qstatfn
