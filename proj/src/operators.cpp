#include "qstatfn/operators.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

namespace qstatfn {

namespace {

void check_square_finite(const Matrix& m) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        std::ostringstream os;
        os << "matrix must be square and non-empty, got " << m.rows() << "x" << m.cols();
        throw DimensionMismatch(os.str());
    }
    if (!m.allFinite()) {
        throw ValidationError("matrix has non-finite entries");
    }
}

double hermiticity_defect(const Matrix& m) {
    return max_abs(m - m.adjoint());
}

} // namespace

HermitianOperator::HermitianOperator(Matrix m, double hermitian_tol) : m_(std::move(m)) {
    check_square_finite(m_);
    const double defect = hermiticity_defect(m_);
    if (defect > hermitian_tol) {
        std::ostringstream os;
        os << "matrix is not Hermitian: max |M - M^dag| = " << defect
           << " exceeds tolerance " << hermitian_tol;
        throw NotHermitian(os.str());
    }
}

Matrix SpectralDecomposition::reconstruct() const {
    return eigenvectors * eigenvalues.asDiagonal() * eigenvectors.adjoint();
}

SpectralDecomposition spectral_decompose(const HermitianOperator& h, Tolerances tol) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h.matrix());
    if (solver.info() != Eigen::Success) {
        throw EigensolverFailure("self-adjoint eigensolver did not converge");
    }
    SpectralDecomposition sd{solver.eigenvalues(), solver.eigenvectors()};
    const double recon_err = max_abs(sd.reconstruct() - h.matrix());
    if (recon_err > tol.recon) {
        std::ostringstream os;
        os << "spectral reconstruction residual " << recon_err << " exceeds " << tol.recon;
        throw EigensolverFailure(os.str());
    }
    return sd;
}

namespace {

RealVector apply_scalar_fn(const RealVector& eigs, MatrixFn fn, double exponent,
                           double psd_tol) {
    RealVector out(eigs.size());
    for (Index i = 0; i < eigs.size(); ++i) {
        double x = eigs[i];
        switch (fn) {
        case MatrixFn::Exp:
            out[i] = std::exp(x);
            break;
        case MatrixFn::Log:
            if (x <= 0.0) {
                std::ostringstream os;
                os << "log requires a strictly positive spectrum, found eigenvalue " << x;
                throw NonPositiveSpectrum(os.str());
            }
            out[i] = std::log(x);
            break;
        case MatrixFn::Sqrt:
            if (x < -psd_tol) {
                std::ostringstream os;
                os << "sqrt requires a positive semi-definite spectrum, found eigenvalue " << x;
                throw NonPositiveSpectrum(os.str());
            }
            out[i] = std::sqrt(std::max(x, 0.0));
            break;
        case MatrixFn::Power: {
            const bool integral = exponent == std::floor(exponent);
            if (integral && exponent >= 0.0) {
                out[i] = std::pow(x, exponent);
            } else if (exponent > 0.0) {
                if (x < -psd_tol) {
                    std::ostringstream os;
                    os << "fractional power requires a positive semi-definite spectrum, "
                          "found eigenvalue " << x;
                    throw NonPositiveSpectrum(os.str());
                }
                out[i] = std::pow(std::max(x, 0.0), exponent);
            } else {
                if (x <= 0.0) {
                    std::ostringstream os;
                    os << "negative power requires a strictly positive spectrum, "
                          "found eigenvalue " << x;
                    throw NonPositiveSpectrum(os.str());
                }
                out[i] = std::pow(x, exponent);
            }
            break;
        }
        }
    }
    return out;
}

} // namespace

Matrix matrix_function(const HermitianOperator& h, MatrixFn fn, double exponent,
                       Tolerances tol) {
    const SpectralDecomposition sd = spectral_decompose(h, tol);
    const RealVector fe = apply_scalar_fn(sd.eigenvalues, fn, exponent, tol.psd);
    return sd.eigenvectors * fe.asDiagonal() * sd.eigenvectors.adjoint();
}

Matrix matrix_exp(const HermitianOperator& h) { return matrix_function(h, MatrixFn::Exp); }
Matrix matrix_log(const HermitianOperator& h) { return matrix_function(h, MatrixFn::Log); }
Matrix matrix_sqrt(const HermitianOperator& h) { return matrix_function(h, MatrixFn::Sqrt); }
Matrix matrix_power(const HermitianOperator& h, double exponent) {
    return matrix_function(h, MatrixFn::Power, exponent);
}

Matrix matrix_exp_scaled(const SpectralDecomposition& sd, Complex scale) {
    Vector fe(sd.eigenvalues.size());
    for (Index i = 0; i < fe.size(); ++i) {
        fe[i] = std::exp(scale * sd.eigenvalues[i]);
    }
    return sd.eigenvectors * fe.asDiagonal() * sd.eigenvectors.adjoint();
}

Matrix matrix_exp_scaled(const HermitianOperator& h, Complex scale) {
    return matrix_exp_scaled(spectral_decompose(h), scale);
}

ProjectorFamily spectral_projectors(const HermitianOperator& h, double cluster_tol,
                                    Tolerances tol) {
    const SpectralDecomposition sd = spectral_decompose(h, tol);
    const Index n = sd.eigenvalues.size();

    ProjectorFamily family;
    Index start = 0;
    while (start < n) {
        Index stop = start + 1;
        while (stop < n && sd.eigenvalues[stop] - sd.eigenvalues[stop - 1] <= cluster_tol) {
            ++stop;
        }
        const Matrix block = sd.eigenvectors.middleCols(start, stop - start);
        const double center = sd.eigenvalues.segment(start, stop - start).mean();
        family.entries.push_back({center, block * block.adjoint()});
        start = stop;
    }
    return family;
}

DensityOperator::DensityOperator(const Matrix& m, Tolerances tol)
    : herm_(m, tol.hermitian), spec_(spectral_decompose(herm_, tol)) {
    const double trace = m.trace().real();
    if (std::abs(trace - 1.0) > tol.trace || std::abs(m.trace().imag()) > tol.trace) {
        std::ostringstream os;
        os << "density operator trace " << m.trace() << " is not 1";
        throw TraceNotOne(os.str());
    }
    const double min_eig = spec_.eigenvalues.minCoeff();
    if (min_eig < -tol.psd) {
        std::ostringstream os;
        os << "density operator has negative eigenvalue " << min_eig;
        throw NotPositive(os.str());
    }
    // Clamp round-off negatives and renormalize.
    if (min_eig < 0.0) {
        spec_.eigenvalues = spec_.eigenvalues.cwiseMax(0.0);
        spec_.eigenvalues /= spec_.eigenvalues.sum();
        m_ = spec_.reconstruct();
        herm_ = HermitianOperator(m_, tol.hermitian);
    } else {
        m_ = herm_.matrix();
    }
}

POVMElement::POVMElement(const Matrix& m, Tolerances tol) : herm_(m, tol.hermitian) {
    const SpectralDecomposition sd = spectral_decompose(herm_, tol);
    const double min_eig = sd.eigenvalues.minCoeff();
    const double max_eig = sd.eigenvalues.maxCoeff();
    if (min_eig < -tol.psd) {
        std::ostringstream os;
        os << "POVM element has negative eigenvalue " << min_eig;
        throw NotPositive(os.str());
    }
    if (max_eig > 1.0 + tol.psd) {
        std::ostringstream os;
        os << "POVM element has eigenvalue " << max_eig << " above 1";
        throw NotPositive(os.str());
    }
}

DensityOperator make_density(const Matrix& m, Tolerances tol) {
    return DensityOperator(m, tol);
}

Matrix canonical_amplitude(const DensityOperator& rho) {
    const SpectralDecomposition& sd = rho.spectral();
    const RealVector roots = sd.eigenvalues.cwiseMax(0.0).cwiseSqrt();
    return sd.eigenvectors * roots.asDiagonal() * sd.eigenvectors.adjoint();
}

} // namespace qstatfn
