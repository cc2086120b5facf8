#pragma once

#include "qstatfn/operators.hpp"
#include "qstatfn/ordering.hpp"
#include "qstatfn/types.hpp"

#include <functional>
#include <vector>

namespace qstatfn {

// Strictly increasing parameter path through 0, used for branch tracking of
// the logarithmic statistical functions.
class ThetaPath {
public:
    explicit ThetaPath(std::vector<double> points);

    const std::vector<double>& points() const { return points_; }
    std::size_t zero_index() const { return zero_index_; }

private:
    std::vector<double> points_;
    std::size_t zero_index_;
};

struct MomentReport {
    double expectation = 0.0;
    double variance = 0.0;
};

// Tr(exp(z A) rho) on the complex-capable path shared by the generating and
// characteristic functions.
Complex qmgf_complex(const DensityOperator& rho, const HermitianOperator& a, Complex z);

// Tr(exp(theta A) rho); real and strictly positive for real theta.
double qmgf(const DensityOperator& rho, const HermitianOperator& a, double theta);

// Tr(exp(i theta A) rho); modulus bounded by 1.
Complex qcf(const DensityOperator& rho, const HermitianOperator& a, double theta);

// log of the generating function (real log of a positive number).
double qcgf(const DensityOperator& rho, const HermitianOperator& a, double theta);

// log of the characteristic function along a path, principal branch at
// theta=0 and nearest-branch phase continuation outward. Throws
// BranchAmbiguity where |qcf| < zero_tol.
std::vector<Complex> qscf(const DensityOperator& rho, const HermitianOperator& a,
                          const ThetaPath& path, double zero_tol = kPostselectTol);

// Tr(f^{(N,w)}(theta) rho) and Tr(f~^{(N,w)}(theta) rho).
Complex multivariable_qmgf(const DensityOperator& rho,
                           const std::vector<HermitianOperator>& observables,
                           const RealVector& theta, const OrderingSpec& spec);
Complex multivariable_qcf(const DensityOperator& rho,
                          const std::vector<HermitianOperator>& observables,
                          const RealVector& theta, const OrderingSpec& spec);

// Tr(Pi exp(theta A) rho) / Tr(Pi rho); complex in general.
Complex conditional_qmgf(const DensityOperator& rho, const POVMElement& pi,
                         const HermitianOperator& a, double theta,
                         double postselect_tol = kPostselectTol);

// <phi| exp(-i theta A) |psi> / <phi|psi> for pure psi, phi.
Complex modular_value(const DensityOperator& psi, const DensityOperator& phi,
                      const HermitianOperator& a, double theta,
                      Tolerances tol = {});

MomentReport moments(const DensityOperator& rho, const HermitianOperator& a);

// (1/2) Tr({A,B} rho) - Tr(A rho) Tr(B rho).
double covariance(const DensityOperator& rho, const HermitianOperator& a,
                  const HermitianOperator& b);

// Central finite differences, orders 1 and 2.
template <typename Value>
Value finite_difference(const std::function<Value(double)>& fn, int order, double at,
                        double step) {
    if (step <= 0.0) throw ValidationError("finite-difference step must be positive");
    if (order == 1) {
        return (fn(at + step) - fn(at - step)) / (2.0 * step);
    }
    if (order == 2) {
        return (fn(at + step) - 2.0 * fn(at) + fn(at - step)) / (step * step);
    }
    throw ValidationError("finite differences support orders 1 and 2 only");
}

inline constexpr double kFdStepOrder1 = 1e-5;
inline constexpr double kFdStepOrder2 = 1e-4;

} // namespace qstatfn
