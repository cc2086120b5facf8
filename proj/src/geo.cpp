#include "qstatfn/geo.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <sstream>

namespace qstatfn {

namespace {

void check_positive(const SpectralDecomposition& sd, double pd_floor,
                    const char* what) {
    const double min_eig = sd.eigenvalues.minCoeff();
    if (min_eig < pd_floor) {
        std::ostringstream os;
        os << what << " must be strictly positive definite; smallest eigenvalue "
           << min_eig << " is below the floor " << pd_floor;
        throw NotPositiveDefinite(os.str());
    }
}

Matrix spectral_apply(const SpectralDecomposition& sd, double (*fn)(double)) {
    RealVector fe(sd.eigenvalues.size());
    for (Index i = 0; i < fe.size(); ++i) fe[i] = fn(sd.eigenvalues[i]);
    return sd.eigenvectors * fe.asDiagonal() * sd.eigenvectors.adjoint();
}

Matrix spectral_power(const SpectralDecomposition& sd, double u) {
    RealVector fe(sd.eigenvalues.size());
    for (Index i = 0; i < fe.size(); ++i) fe[i] = std::pow(sd.eigenvalues[i], u);
    return sd.eigenvectors * fe.asDiagonal() * sd.eigenvectors.adjoint();
}

double inv_sqrt(double x) { return 1.0 / std::sqrt(x); }

} // namespace

PositiveOperator::PositiveOperator(const Matrix& m, double pd_floor, Tolerances tol)
    : herm_(m, tol.hermitian), spec_(spectral_decompose(herm_, tol)) {
    check_positive(spec_, pd_floor, "operator");
}

PositiveOperator::PositiveOperator(const DensityOperator& rho, double pd_floor)
    : herm_(rho.matrix()), spec_(rho.spectral()) {
    check_positive(spec_, pd_floor, "state");
}

Matrix geometric_mean(const PositiveOperator& a, const PositiveOperator& b, double u) {
    if (a.dim() != b.dim()) {
        throw DimensionMismatch("geometric mean operands have mixed dimensions");
    }
    if (u < 0.0 || u > 1.0) {
        throw ValidationError("geodesic parameter must lie in [0, 1]");
    }
    const Matrix root = spectral_apply(a.spectral(), +[](double x) { return std::sqrt(x); });
    const Matrix inv_root = spectral_apply(a.spectral(), inv_sqrt);
    const Matrix mid = inv_root * b.matrix() * inv_root;
    const Matrix mid_pow = spectral_power(spectral_decompose(HermitianOperator(mid)), u);
    return root * mid_pow * root;
}

double fidelity(const DensityOperator& rho, const DensityOperator& sigma) {
    if (rho.dim() != sigma.dim()) {
        throw DimensionMismatch("fidelity operands have mixed dimensions");
    }
    const Matrix product = canonical_amplitude(rho) * canonical_amplitude(sigma);
    Eigen::JacobiSVD<Matrix> svd(product);
    return svd.singularValues().sum();
}

GeoTraceBound geo_mean_trace_bound(const DensityOperator& rho,
                                   const DensityOperator& sigma, double pd_floor) {
    const PositiveOperator a(rho, pd_floor);
    const PositiveOperator b(sigma, pd_floor);
    GeoTraceBound out;
    out.tr_geo = geometric_mean(a, b).trace().real();
    out.fid = fidelity(rho, sigma);
    return out;
}

double geo_mgf(const DensityOperator& rho, const HermitianOperator& v, double theta,
               double pd_floor) {
    if (rho.dim() != v.dim()) {
        throw DimensionMismatch("generator dimension does not match state");
    }
    const PositiveOperator a(rho, pd_floor);
    const PositiveOperator b(matrix_exp_scaled(v, Complex(theta, 0.0)), pd_floor);
    return geometric_mean(a, b).trace().real();
}

GeoDerivatives geo_mgf_derivatives(const DensityOperator& rho, const HermitianOperator& v,
                                   double pd_floor) {
    if (rho.dim() != v.dim()) {
        throw DimensionMismatch("generator dimension does not match state");
    }
    const PositiveOperator a(rho, pd_floor);
    const SpectralDecomposition& sd = a.spectral();
    const Index dim = rho.dim();

    // Work in the eigenbasis of rho, where the Lyapunov solution is explicit.
    const Matrix v_eig = sd.eigenvectors.adjoint() * v.matrix() * sd.eigenvectors;
    const Matrix v2_eig = v_eig * v_eig;

    GeoDerivatives out;
    double correction = 0.0;
    for (Index k = 0; k < dim; ++k) {
        const double pk = sd.eigenvalues[k];
        out.first += 0.5 * std::sqrt(pk) * v_eig(k, k).real();
        out.second += 0.5 * std::sqrt(pk) * v2_eig(k, k).real();
        for (Index j = 0; j < dim; ++j) {
            const double denom = std::sqrt(pk) + std::sqrt(sd.eigenvalues[j]);
            correction += std::pow(pk, 1.5) * std::norm(v_eig(k, j)) / (denom * denom);
        }
    }
    out.second -= correction;
    return out;
}

GoldenThompson golden_thompson_gap(const HermitianOperator& a, const HermitianOperator& b) {
    if (a.dim() != b.dim()) {
        throw DimensionMismatch("Golden-Thompson operands have mixed dimensions");
    }
    GoldenThompson out;
    const HermitianOperator sum(a.matrix() + b.matrix());
    out.lhs = matrix_exp(sum).trace().real();
    out.rhs = (matrix_exp(a) * matrix_exp(b)).trace().real();
    return out;
}

double chernoff(const DensityOperator& rho, const DensityOperator& sigma, double theta,
                double pd_floor) {
    if (rho.dim() != sigma.dim()) {
        throw DimensionMismatch("Chernoff operands have mixed dimensions");
    }
    const PositiveOperator a(rho, pd_floor);
    const PositiveOperator b(sigma, pd_floor);
    // Exact endpoint limits sidestep 0^0 on the support.
    if (theta == 0.0) return std::log(rho.matrix().trace().real());
    if (theta == 1.0) return std::log(sigma.matrix().trace().real());
    const Matrix rho_pow = spectral_power(a.spectral(), 1.0 - theta);
    const Matrix sigma_pow = spectral_power(b.spectral(), theta);
    return std::log((rho_pow * sigma_pow).trace().real());
}

double relative_entropy(const DensityOperator& rho, const DensityOperator& sigma,
                        double pd_floor) {
    if (rho.dim() != sigma.dim()) {
        throw DimensionMismatch("relative entropy operands have mixed dimensions");
    }
    const PositiveOperator a(rho, pd_floor);
    const PositiveOperator b(sigma, pd_floor);
    const Matrix log_rho = spectral_apply(a.spectral(), +[](double x) { return std::log(x); });
    const Matrix log_sigma = spectral_apply(b.spectral(), +[](double x) { return std::log(x); });
    return (rho.matrix() * (log_rho - log_sigma)).trace().real();
}

double relative_entropy_variance(const DensityOperator& rho, const DensityOperator& sigma,
                                 double pd_floor) {
    if (rho.dim() != sigma.dim()) {
        throw DimensionMismatch("relative entropy operands have mixed dimensions");
    }
    const PositiveOperator a(rho, pd_floor);
    const PositiveOperator b(sigma, pd_floor);
    const Matrix log_rho = spectral_apply(a.spectral(), +[](double x) { return std::log(x); });
    const Matrix log_sigma = spectral_apply(b.spectral(), +[](double x) { return std::log(x); });
    const Matrix diff = log_sigma - log_rho;
    const double second = (rho.matrix() * diff * diff).trace().real();
    const double first = (rho.matrix() * diff).trace().real();
    return second - first * first;
}

} // namespace qstatfn
