#pragma once

#include <Eigen/Dense>
#include <complex>

namespace qstatfn {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

// Default numeric tolerances, chosen for double-precision eigensolvers on
// dimensions up to ~256. Every entry can be overridden per call site.
struct Tolerances {
    double hermitian = 1e-9;   // max |M - M†| entry for Hermitian inputs
    double trace = 1e-9;       // |Tr(rho) - 1|
    double psd = 1e-10;        // eigenvalue floor for positive semi-definite checks
    double recon = 1e-9;       // spectral reconstruction / unitarity residual
};

inline constexpr double kPostselectTol = 1e-12; // Tr(Pi rho) below this is meaningless
inline constexpr double kAmplitudeTol = 1e-12;  // chain branches below this are skipped
inline constexpr double kPdFloor = 1e-12;       // strict positivity floor

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

} // namespace qstatfn
