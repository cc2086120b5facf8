#pragma once

#include "qstatfn/errors.hpp"
#include "qstatfn/types.hpp"

#include <functional>
#include <vector>

namespace qstatfn {

// Self-adjoint operator on C^dim. Validates ||M - M†||_max on construction.
class HermitianOperator {
public:
    explicit HermitianOperator(Matrix m, double hermitian_tol = Tolerances{}.hermitian);

    Index dim() const { return m_.rows(); }
    const Matrix& matrix() const { return m_; }

private:
    Matrix m_;
};

// Eigenvalues ascending, eigenvector columns unitary: H = U diag(lambda) U†.
struct SpectralDecomposition {
    RealVector eigenvalues;
    Matrix eigenvectors;

    Matrix reconstruct() const;
};

// Density operator: positive semi-definite, unit trace. Eigenvalues in
// [-psd_tol, 0) are clamped to zero and the state renormalized, so round-off
// from upstream thermal-state construction does not poison validation.
class DensityOperator {
public:
    explicit DensityOperator(const Matrix& m, Tolerances tol = {});

    Index dim() const { return m_.rows(); }
    const Matrix& matrix() const { return m_; }
    const HermitianOperator& hermitian() const { return herm_; }

    // Cached spectral decomposition (eigenvalues clamped to [0, inf)).
    const SpectralDecomposition& spectral() const { return spec_; }

private:
    HermitianOperator herm_;
    SpectralDecomposition spec_;
    Matrix m_;
};

// POVM element: 0 <= Pi <= 1 within psd_tol.
class POVMElement {
public:
    explicit POVMElement(const Matrix& m, Tolerances tol = {});

    Index dim() const { return herm_.dim(); }
    const Matrix& matrix() const { return herm_.matrix(); }

private:
    HermitianOperator herm_;
};

// Orthogonal spectral projectors onto eigenvalue clusters, completeness
// sum(P) = 1. Entries sorted by ascending cluster center.
struct ProjectorFamily {
    struct Entry {
        double value; // cluster center (mean of merged eigenvalues)
        Matrix projector;
    };
    std::vector<Entry> entries;

    std::size_t size() const { return entries.size(); }
};

enum class MatrixFn { Exp, Log, Sqrt, Power };

SpectralDecomposition spectral_decompose(const HermitianOperator& h,
                                         Tolerances tol = {});

// U f(Lambda) U† via the spectral route; Hermitian output for real f.
// Log and negative powers require a strictly positive spectrum; Sqrt and
// positive fractional powers tolerate eigenvalues in [-psd_tol, 0), which are
// clamped to zero.
Matrix matrix_function(const HermitianOperator& h, MatrixFn fn,
                       double exponent = 0.0, Tolerances tol = {});

Matrix matrix_exp(const HermitianOperator& h);
Matrix matrix_log(const HermitianOperator& h);
Matrix matrix_sqrt(const HermitianOperator& h);
Matrix matrix_power(const HermitianOperator& h, double exponent);

// exp(z * H) for complex z; unitary when z is purely imaginary.
Matrix matrix_exp_scaled(const HermitianOperator& h, Complex scale);
Matrix matrix_exp_scaled(const SpectralDecomposition& sd, Complex scale);

// Single-linkage clustering of the spectrum: eigenvalues whose consecutive
// gaps are <= cluster_tol share a projector.
ProjectorFamily spectral_projectors(const HermitianOperator& h,
                                    double cluster_tol, Tolerances tol = {});

DensityOperator make_density(const Matrix& m, Tolerances tol = {});

// W = rho^{1/2}, the parallel-gauge amplitude with W W† = rho.
Matrix canonical_amplitude(const DensityOperator& rho);

} // namespace qstatfn
