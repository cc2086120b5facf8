#include "qstatfn/quasiprob.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

namespace qstatfn {

namespace {

void check_same_dim(const DensityOperator& rho,
                    const std::vector<HermitianOperator>& observables) {
    for (const auto& a : observables) {
        if (a.dim() != rho.dim()) {
            throw DimensionMismatch("observable dimension does not match state");
        }
    }
}

std::size_t flat_size(const std::vector<QuasiProbTable::Axis>& axes) {
    std::size_t n = 1;
    for (const auto& ax : axes) n *= static_cast<std::size_t>(ax.outcomes.size());
    return n;
}

} // namespace

QuasiProbTable::QuasiProbTable(std::vector<Axis> axes, std::vector<Complex> values)
    : axes_(std::move(axes)), values_(std::move(values)) {
    if (axes_.empty()) throw ValidationError("quasiprobability table needs axes");
    if (values_.size() != flat_size(axes_)) {
        throw ValidationError("table value count does not match axis outcome counts");
    }
}

Complex QuasiProbTable::at(const std::vector<Index>& idx) const {
    if (idx.size() != axes_.size()) {
        throw ValidationError("index tuple arity does not match table");
    }
    std::size_t flat = 0;
    for (std::size_t k = 0; k < axes_.size(); ++k) {
        const Index n = axes_[k].outcomes.size();
        if (idx[k] < 0 || idx[k] >= n) throw ValidationError("outcome index out of range");
        flat = flat * static_cast<std::size_t>(n) + static_cast<std::size_t>(idx[k]);
    }
    return values_[flat];
}

Complex QuasiProbTable::total() const {
    Complex sum = 0.0;
    for (const Complex& v : values_) sum += v;
    return sum;
}

std::vector<Complex> QuasiProbTable::marginal(std::size_t axis) const {
    if (axis >= axes_.size()) throw ValidationError("marginal axis out of range");
    std::vector<Complex> out(static_cast<std::size_t>(axes_[axis].outcomes.size()), 0.0);
    // Strides of the row-major layout.
    std::size_t stride = 1;
    for (std::size_t k = axes_.size(); k-- > axis + 1;) {
        stride *= static_cast<std::size_t>(axes_[k].outcomes.size());
    }
    const std::size_t n_axis = out.size();
    for (std::size_t flat = 0; flat < values_.size(); ++flat) {
        out[(flat / stride) % n_axis] += values_[flat];
    }
    return out;
}

std::string to_string(BochnerVerdict v) {
    switch (v) {
    case BochnerVerdict::ClassicalCandidate: return "ClassicalCandidate";
    case BochnerVerdict::ComplexValued: return "ComplexValued";
    case BochnerVerdict::NegativeOrNonPD: return "NegativeOrNonPD";
    }
    return "?";
}

QuasiProbTable kd_distribution(const DensityOperator& rho,
                               const std::vector<HermitianOperator>& observables,
                               double cluster_tol) {
    if (observables.size() < 2) {
        throw UnsupportedArity("joint quasiprobability needs at least two observables");
    }
    check_same_dim(rho, observables);

    std::vector<ProjectorFamily> families;
    std::vector<QuasiProbTable::Axis> axes;
    families.reserve(observables.size());
    for (std::size_t k = 0; k < observables.size(); ++k) {
        families.push_back(spectral_projectors(observables[k], cluster_tol));
        RealVector outcomes(families.back().size());
        for (std::size_t j = 0; j < families.back().size(); ++j) {
            outcomes[static_cast<Index>(j)] = families.back().entries[j].value;
        }
        axes.push_back({"A" + std::to_string(k + 1), std::move(outcomes)});
    }

    std::vector<Complex> values(flat_size(axes));
    // Accumulate P_{Ak}(ak) ... P_{A1}(a1) rho left to right; the entry is the
    // trace after the final projector.
    std::function<void(std::size_t, std::size_t, const Matrix&)> recurse =
        [&](std::size_t k, std::size_t flat, const Matrix& acc) {
            if (k == families.size()) {
                values[flat] = acc.trace();
                return;
            }
            for (std::size_t j = 0; j < families[k].size(); ++j) {
                recurse(k + 1, flat * families[k].size() + j,
                        families[k].entries[j].projector * acc);
            }
        };
    recurse(0, 0, rho.matrix());

    return QuasiProbTable(std::move(axes), std::move(values));
}

QuasiProbTable mh_distribution(const DensityOperator& rho,
                               const std::vector<HermitianOperator>& observables,
                               double cluster_tol) {
    QuasiProbTable kd = kd_distribution(rho, observables, cluster_tol);
    std::vector<Complex> re(kd.values().size());
    for (std::size_t i = 0; i < re.size(); ++i) re[i] = Complex(kd.values()[i].real(), 0.0);
    return QuasiProbTable(kd.axes(), std::move(re));
}

std::vector<std::pair<double, Complex>> conditional_kd(
    const DensityOperator& psi, const HermitianOperator& a, const HermitianOperator& b,
    double b_outcome, double cluster_tol, double postselect_tol) {
    if (a.dim() != psi.dim() || b.dim() != psi.dim()) {
        throw DimensionMismatch("observable dimension does not match state");
    }
    // Purity gate: reuse the rank-1 check of the modular-value path.
    const SpectralDecomposition& sd = psi.spectral();
    const Index n = sd.eigenvalues.size();
    if (n > 1 && sd.eigenvalues[n - 2] > Tolerances{}.psd) {
        throw NotPure("conditional KD distribution is defined for pure states");
    }

    const ProjectorFamily fam_a = spectral_projectors(a, cluster_tol);
    const ProjectorFamily fam_b = spectral_projectors(b, cluster_tol);

    std::size_t best = 0;
    double best_gap = std::abs(fam_b.entries[0].value - b_outcome);
    for (std::size_t j = 1; j < fam_b.size(); ++j) {
        const double gap = std::abs(fam_b.entries[j].value - b_outcome);
        if (gap < best_gap) {
            best = j;
            best_gap = gap;
        }
    }
    const Matrix& pb = fam_b.entries[best].projector;

    const double prob_b = (pb * psi.matrix()).trace().real();
    if (prob_b <= postselect_tol) {
        std::ostringstream os;
        os << "post-selection probability " << prob_b << " for outcome " << b_outcome
           << " is below " << postselect_tol;
        throw ZeroPostSelection(os.str());
    }

    std::vector<std::pair<double, Complex>> out;
    out.reserve(fam_a.size());
    for (const auto& entry : fam_a.entries) {
        const Complex joint = (pb * entry.projector * psi.matrix()).trace();
        out.emplace_back(entry.value, joint / prob_b);
    }
    return out;
}

Complex weak_value(const DensityOperator& rho, const POVMElement& pi,
                   const HermitianOperator& a, double postselect_tol) {
    if (a.dim() != rho.dim() || pi.dim() != rho.dim()) {
        throw DimensionMismatch("weak value operands have mixed dimensions");
    }
    const double prob = (pi.matrix() * rho.matrix()).trace().real();
    if (prob <= postselect_tol) {
        std::ostringstream os;
        os << "post-selection probability " << prob << " is below " << postselect_tol;
        throw ZeroPostSelection(os.str());
    }
    return (pi.matrix() * a.matrix() * rho.matrix()).trace() / prob;
}

Complex weak_variance(const DensityOperator& rho, const POVMElement& pi,
                      const HermitianOperator& a, double postselect_tol) {
    const Complex first = weak_value(rho, pi, a, postselect_tol);
    const HermitianOperator a2(a.matrix() * a.matrix());
    const Complex second = weak_value(rho, pi, a2, postselect_tol);
    return second - first * first;
}

NPointResult npoint_correlation(const DensityOperator& rho,
                                const std::vector<HermitianOperator>& observables,
                                double amplitude_tol) {
    if (observables.size() < 2) {
        throw UnsupportedArity("n-point correlation needs at least two observables");
    }
    check_same_dim(rho, observables);
    const std::size_t n = observables.size();
    const Index dim = rho.dim();

    NPointResult result;

    Matrix prod = observables[0].matrix();
    for (std::size_t k = 1; k < n; ++k) prod = prod * observables[k].matrix();
    result.direct = (prod * rho.matrix()).trace();

    // Chain route: eigenvectors of each observable as rank-1 outcomes, state
    // eigenbasis outermost. Branch value accumulates
    //   lambda_i * |<a1|alpha_i>|^2 * prod_k <a_{k-1}|a_k><a_k|alpha_i> / <a_{k-1}|alpha_i>.
    std::vector<SpectralDecomposition> eig;
    eig.reserve(n);
    for (const auto& a : observables) eig.push_back(spectral_decompose(a));

    const SpectralDecomposition& rho_sd = rho.spectral();
    for (Index i = 0; i < dim; ++i) {
        const double lambda = rho_sd.eigenvalues[i];
        if (lambda <= 0.0) continue;
        const Vector alpha = rho_sd.eigenvectors.col(i);

        std::function<void(std::size_t, Complex, const Vector&)> walk =
            [&](std::size_t k, Complex acc, const Vector& prev) {
                if (k == n) {
                    result.chain += lambda * acc;
                    return;
                }
                Complex prev_amp = 1.0;
                if (k > 0) {
                    prev_amp = prev.dot(alpha);
                    if (std::abs(prev_amp) < amplitude_tol) {
                        ++result.skipped_branches;
                        return;
                    }
                }
                for (Index j = 0; j < dim; ++j) {
                    const Vector cur = eig[k].eigenvectors.col(j);
                    const double outcome = eig[k].eigenvalues[j];
                    Complex factor;
                    if (k == 0) {
                        factor = std::norm(cur.dot(alpha)); // Born probability
                    } else {
                        factor = prev.dot(cur) * cur.dot(alpha) / prev_amp;
                    }
                    walk(k + 1, acc * outcome * factor, cur);
                }
            };
        walk(0, Complex(1.0), Vector());
    }
    return result;
}

std::vector<RealVector> uniform_grid(int n_axes, double lo, double hi,
                                     int points_per_axis) {
    if (n_axes < 1 || points_per_axis < 1) {
        throw ValidationError("grid needs at least one axis and one point");
    }
    RealVector axis(points_per_axis);
    for (int i = 0; i < points_per_axis; ++i) {
        axis[i] = points_per_axis == 1
                      ? lo
                      : lo + (hi - lo) * static_cast<double>(i) / (points_per_axis - 1);
    }
    std::vector<RealVector> grid;
    grid.reserve(static_cast<std::size_t>(std::pow(points_per_axis, n_axes)));
    RealVector point = RealVector::Constant(n_axes, axis[0]);
    std::vector<int> idx(static_cast<std::size_t>(n_axes), 0);
    while (true) {
        for (int k = 0; k < n_axes; ++k) point[k] = axis[idx[static_cast<std::size_t>(k)]];
        grid.push_back(point);
        int k = n_axes - 1;
        while (k >= 0 && ++idx[static_cast<std::size_t>(k)] == points_per_axis) {
            idx[static_cast<std::size_t>(k)] = 0;
            --k;
        }
        if (k < 0) break;
    }
    return grid;
}

BochnerReport bochner_check(const QcfSampler& sampler, std::vector<RealVector> grid,
                            BochnerThresholds thresholds) {
    if (grid.empty()) throw ValidationError("Bochner check needs a non-empty grid");
    const Index m = static_cast<Index>(grid.size());

    auto sample = [&](const RealVector& t) -> Complex {
        try {
            return sampler(t);
        } catch (const Error&) {
            throw;
        } catch (const std::exception& e) {
            throw SamplerFailure(std::string("characteristic-function sampler failed: ") +
                                 e.what());
        }
    };

    BochnerReport report;
    for (const RealVector& t : grid) {
        const Complex plus = sample(t);
        const Complex minus = sample(-t);
        report.hermitian_symmetry_violation =
            std::max(report.hermitian_symmetry_violation,
                     std::abs(minus - std::conj(plus)));
    }

    Matrix gram(m, m);
    for (Index j = 0; j < m; ++j) {
        for (Index k = 0; k < m; ++k) {
            gram(j, k) = sample(grid[static_cast<std::size_t>(j)] -
                                grid[static_cast<std::size_t>(k)]);
        }
    }
    const Matrix herm = 0.5 * (gram + gram.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(herm);
    if (solver.info() != Eigen::Success) {
        throw EigensolverFailure("Gram matrix eigensolver did not converge");
    }
    report.min_gram_eigenvalue = solver.eigenvalues().minCoeff();
    report.grid = std::move(grid);

    if (report.hermitian_symmetry_violation > thresholds.sym_tol) {
        report.verdict = BochnerVerdict::ComplexValued;
    } else if (report.min_gram_eigenvalue < -thresholds.pd_tol) {
        report.verdict = BochnerVerdict::NegativeOrNonPD;
    } else {
        report.verdict = BochnerVerdict::ClassicalCandidate;
    }
    return report;
}

} // namespace qstatfn
