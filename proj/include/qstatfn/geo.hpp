#pragma once

#include "qstatfn/operators.hpp"
#include "qstatfn/types.hpp"

namespace qstatfn {

// Strictly positive definite operator (eigenvalues >= pd_floor).
class PositiveOperator {
public:
    explicit PositiveOperator(const Matrix& m, double pd_floor = kPdFloor,
                              Tolerances tol = {});
    explicit PositiveOperator(const DensityOperator& rho, double pd_floor = kPdFloor);

    Index dim() const { return herm_.dim(); }
    const Matrix& matrix() const { return herm_.matrix(); }
    const SpectralDecomposition& spectral() const { return spec_; }

private:
    HermitianOperator herm_;
    SpectralDecomposition spec_;
};

// Weighted geometric mean A #_u B = A^{1/2} (A^{-1/2} B A^{-1/2})^u A^{1/2};
// the midpoint u = 1/2 is the Pusz-Woronowicz mean A # B.
Matrix geometric_mean(const PositiveOperator& a, const PositiveOperator& b,
                      double u = 0.5);

// Tr|sqrt(rho) sqrt(sigma)| (sum of singular values).
double fidelity(const DensityOperator& rho, const DensityOperator& sigma);

struct GeoTraceBound {
    double tr_geo = 0.0; // Tr(rho # sigma)
    double fid = 0.0;    // F(rho, sigma); tr_geo <= fid, equality iff commuting
};

GeoTraceBound geo_mean_trace_bound(const DensityOperator& rho,
                                   const DensityOperator& sigma,
                                   double pd_floor = kPdFloor);

// Tr(rho # exp(theta V)); rho must be full rank.
double geo_mgf(const DensityOperator& rho, const HermitianOperator& v, double theta,
               double pd_floor = kPdFloor);

struct GeoDerivatives {
    double first = 0.0;  // (1/2) Tr(sqrt(rho) V)
    double second = 0.0; // (1/2) Tr(sqrt(rho) V^2) - sum_{kj} p_k^{3/2} |V_kj|^2 / (sqrt(p_k)+sqrt(p_j))^2
};

GeoDerivatives geo_mgf_derivatives(const DensityOperator& rho, const HermitianOperator& v,
                                   double pd_floor = kPdFloor);

struct GoldenThompson {
    double lhs = 0.0; // Tr exp(A + B)
    double rhs = 0.0; // Tr(exp(A) exp(B)); lhs <= rhs, equality iff commuting
};

GoldenThompson golden_thompson_gap(const HermitianOperator& a, const HermitianOperator& b);

// psi(theta) = log Tr(rho^{1-theta} sigma^theta). The hypothesis-testing
// window is theta in [0, 1]; the spectral-power form extends to any real
// theta on positive-definite inputs.
double chernoff(const DensityOperator& rho, const DensityOperator& sigma, double theta,
                double pd_floor = kPdFloor);

// D(rho || sigma) = Tr[rho (log rho - log sigma)].
double relative_entropy(const DensityOperator& rho, const DensityOperator& sigma,
                        double pd_floor = kPdFloor);

// Tr[rho (log sigma - log rho)^2] - D(rho || sigma)^2.
double relative_entropy_variance(const DensityOperator& rho, const DensityOperator& sigma,
                                 double pd_floor = kPdFloor);

} // namespace qstatfn
