#include "qstatfn/statfuncs.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qstatfn {

namespace {

void check_dims(const DensityOperator& rho, const HermitianOperator& a) {
    if (rho.dim() != a.dim()) {
        std::ostringstream os;
        os << "state dimension " << rho.dim() << " does not match observable dimension "
           << a.dim();
        throw DimensionMismatch(os.str());
    }
}

// Unit eigenvector of a rank-1 density operator.
Vector pure_state_vector(const DensityOperator& rho, double psd_tol) {
    const SpectralDecomposition& sd = rho.spectral();
    const Index n = sd.eigenvalues.size();
    if (n > 1 && sd.eigenvalues[n - 2] > psd_tol) {
        std::ostringstream os;
        os << "state is not pure: second eigenvalue " << sd.eigenvalues[n - 2];
        throw NotPure(os.str());
    }
    return sd.eigenvectors.col(n - 1);
}

} // namespace

ThetaPath::ThetaPath(std::vector<double> points) : points_(std::move(points)) {
    if (points_.empty()) throw ValidationError("theta path is empty");
    for (double p : points_) {
        if (!std::isfinite(p)) throw ValidationError("theta path has non-finite entries");
    }
    for (std::size_t i = 1; i < points_.size(); ++i) {
        if (points_[i] <= points_[i - 1]) {
            throw ValidationError("theta path must be strictly increasing");
        }
    }
    auto zero = std::find(points_.begin(), points_.end(), 0.0);
    if (zero == points_.end()) throw ValidationError("theta path must contain 0");
    zero_index_ = static_cast<std::size_t>(zero - points_.begin());
}

Complex qmgf_complex(const DensityOperator& rho, const HermitianOperator& a, Complex z) {
    check_dims(rho, a);
    return (matrix_exp_scaled(a, z) * rho.matrix()).trace();
}

double qmgf(const DensityOperator& rho, const HermitianOperator& a, double theta) {
    return qmgf_complex(rho, a, Complex(theta, 0.0)).real();
}

Complex qcf(const DensityOperator& rho, const HermitianOperator& a, double theta) {
    return qmgf_complex(rho, a, Complex(0.0, theta));
}

double qcgf(const DensityOperator& rho, const HermitianOperator& a, double theta) {
    return std::log(qmgf(rho, a, theta));
}

std::vector<Complex> qscf(const DensityOperator& rho, const HermitianOperator& a,
                          const ThetaPath& path, double zero_tol) {
    const auto& pts = path.points();
    std::vector<Complex> cf(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        cf[i] = qcf(rho, a, pts[i]);
        if (std::abs(cf[i]) < zero_tol) {
            std::ostringstream os;
            os << "characteristic function vanishes at theta = " << pts[i]
               << "; phase is undefined";
            throw BranchAmbiguity(os.str());
        }
    }

    // Principal branch at theta = 0 (value 1, phase 0), nearest-branch
    // continuation outward in both directions.
    std::vector<double> phase(pts.size());
    const std::size_t zi = path.zero_index();
    phase[zi] = std::arg(cf[zi]);
    constexpr double two_pi = 6.283185307179586476925286766559;
    auto continue_phase = [&](std::size_t from, std::size_t to) {
        double raw = std::arg(cf[to]);
        double delta = raw - phase[from];
        delta -= two_pi * std::round(delta / two_pi);
        phase[to] = phase[from] + delta;
    };
    for (std::size_t i = zi + 1; i < pts.size(); ++i) continue_phase(i - 1, i);
    for (std::size_t i = zi; i-- > 0;) continue_phase(i + 1, i);

    std::vector<Complex> out(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        out[i] = Complex(std::log(std::abs(cf[i])), phase[i]);
    }
    return out;
}

Complex multivariable_qmgf(const DensityOperator& rho,
                           const std::vector<HermitianOperator>& observables,
                           const RealVector& theta, const OrderingSpec& spec) {
    for (const auto& a : observables) check_dims(rho, a);
    return (ordering_function(spec, observables, theta) * rho.matrix()).trace();
}

Complex multivariable_qcf(const DensityOperator& rho,
                          const std::vector<HermitianOperator>& observables,
                          const RealVector& theta, const OrderingSpec& spec) {
    for (const auto& a : observables) check_dims(rho, a);
    return (unitary_ordering_function(spec, observables, theta) * rho.matrix()).trace();
}

Complex conditional_qmgf(const DensityOperator& rho, const POVMElement& pi,
                         const HermitianOperator& a, double theta,
                         double postselect_tol) {
    check_dims(rho, a);
    if (rho.dim() != pi.dim()) {
        throw DimensionMismatch("POVM element dimension does not match state");
    }
    const double prob = (pi.matrix() * rho.matrix()).trace().real();
    if (prob <= postselect_tol) {
        std::ostringstream os;
        os << "post-selection probability " << prob << " is below " << postselect_tol;
        throw ZeroPostSelection(os.str());
    }
    const Complex numer =
        (pi.matrix() * matrix_exp_scaled(a, Complex(theta, 0.0)) * rho.matrix()).trace();
    return numer / prob;
}

Complex modular_value(const DensityOperator& psi, const DensityOperator& phi,
                      const HermitianOperator& a, double theta, Tolerances tol) {
    check_dims(psi, a);
    check_dims(phi, a);
    const Vector ket_psi = pure_state_vector(psi, tol.psd);
    const Vector ket_phi = pure_state_vector(phi, tol.psd);
    const Complex overlap = ket_phi.dot(ket_psi);
    if (std::norm(overlap) <= kPostselectTol) {
        throw OrthogonalSelection("pre- and post-selected states are orthogonal");
    }
    const Matrix u = matrix_exp_scaled(a, Complex(0.0, -theta));
    return ket_phi.dot(u * ket_psi) / overlap;
}

MomentReport moments(const DensityOperator& rho, const HermitianOperator& a) {
    check_dims(rho, a);
    const double ex = (a.matrix() * rho.matrix()).trace().real();
    const Matrix centered = a.matrix() - ex * Matrix::Identity(a.dim(), a.dim());
    const double var = (centered * centered * rho.matrix()).trace().real();
    return {ex, var};
}

double covariance(const DensityOperator& rho, const HermitianOperator& a,
                  const HermitianOperator& b) {
    check_dims(rho, a);
    check_dims(rho, b);
    const Matrix anticomm = a.matrix() * b.matrix() + b.matrix() * a.matrix();
    const double sym = 0.5 * (anticomm * rho.matrix()).trace().real();
    const double ea = (a.matrix() * rho.matrix()).trace().real();
    const double eb = (b.matrix() * rho.matrix()).trace().real();
    return sym - ea * eb;
}

} // namespace qstatfn
