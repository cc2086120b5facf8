#pragma once

// Shared test fixtures and independent oracles. Everything here must stay
// independent of the library code paths it is used to check.

#include "qstatfn/types.hpp"

#include <cmath>
#include <complex>
#include <random>
#include <vector>

namespace qtest {

using qstatfn::Complex;
using qstatfn::Index;
using qstatfn::Matrix;
using qstatfn::RealVector;
using qstatfn::Vector;

// --------------------------- deterministic randomness -----------------------

// Uniform in [0, 1) from the top 53 bits; avoids distribution objects whose
// output is implementation-defined.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double gaussian(std::mt19937_64& rng) {
    // Box-Muller on raw uniforms.
    double u1 = uniform01(rng);
    while (u1 <= 0.0) u1 = uniform01(rng);
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

inline Complex cgaussian(std::mt19937_64& rng) {
    const double re = gaussian(rng);
    const double im = gaussian(rng);
    return {re, im};
}

inline Matrix random_matrix(Index dim, std::mt19937_64& rng) {
    Matrix g(dim, dim);
    for (Index i = 0; i < dim; ++i) {
        for (Index j = 0; j < dim; ++j) g(i, j) = cgaussian(rng);
    }
    return g;
}

inline Matrix random_hermitian(Index dim, std::mt19937_64& rng) {
    const Matrix g = random_matrix(dim, rng);
    return 0.5 * (g + g.adjoint());
}

// Full-rank Wishart state.
inline Matrix random_density(Index dim, std::mt19937_64& rng) {
    const Matrix g = random_matrix(dim, rng);
    Matrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return rho;
}

inline Vector random_ket(Index dim, std::mt19937_64& rng) {
    Vector v(dim);
    for (Index i = 0; i < dim; ++i) v[i] = cgaussian(rng);
    v.normalize();
    return v;
}

inline Matrix random_pure_density(Index dim, std::mt19937_64& rng) {
    const Vector v = random_ket(dim, rng);
    return v * v.adjoint();
}

// --------------------------- small fixed operators --------------------------

inline Matrix identity(Index dim) { return Matrix::Identity(dim, dim); }

inline Matrix sigma_x() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

inline Matrix sigma_y() {
    Matrix m(2, 2);
    m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
    return m;
}

inline Matrix sigma_z() {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

inline Vector ket0() {
    Vector v(2);
    v << 1, 0;
    return v;
}

inline Vector ket1() {
    Vector v(2);
    v << 0, 1;
    return v;
}

inline Vector ket_plus() {
    Vector v(2);
    v << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    return v;
}

inline Matrix projector(const Vector& v) { return v * v.adjoint(); }

// Closed-form qubit exponential: exp(t S) = cosh(t) I + sinh(t) S for any
// involution S^2 = I (Pauli matrices).
inline Matrix pauli_exp(double t, const Matrix& pauli) {
    return std::cosh(t) * identity(2) + std::sinh(t) * pauli;
}

// --------------------------- independent oracles ----------------------------

// Scaling-and-squaring matrix exponential with a truncated power series;
// deliberately does not touch any eigensolver.
inline Matrix taylor_expm(const Matrix& a) {
    const double norm = a.cwiseAbs().maxCoeff() * static_cast<double>(a.rows());
    int squarings = 0;
    double scale = 1.0;
    while (norm * scale > 0.5) {
        scale *= 0.5;
        ++squarings;
    }
    const Matrix b = a * scale;
    Matrix term = Matrix::Identity(a.rows(), a.cols());
    Matrix sum = term;
    for (int k = 1; k <= 24; ++k) {
        term = term * b / static_cast<double>(k);
        sum += term;
    }
    for (int s = 0; s < squarings; ++s) sum = sum * sum;
    return sum;
}

// Characteristic polynomial coefficients via Faddeev-LeVerrier:
// p(z) = z^n + c[0] z^{n-1} + ... + c[n-1].
inline std::vector<Complex> charpoly_coefficients(const Matrix& a) {
    const Index n = a.rows();
    std::vector<Complex> c(static_cast<std::size_t>(n));
    Matrix m = a;
    c[0] = -m.trace();
    for (Index k = 1; k < n; ++k) {
        m = a * (m + c[static_cast<std::size_t>(k - 1)] * Matrix::Identity(n, n));
        c[static_cast<std::size_t>(k)] = -m.trace() / static_cast<double>(k + 1);
    }
    return c;
}

// Durand-Kerner simultaneous root iteration for a monic polynomial.
inline std::vector<Complex> polynomial_roots(const std::vector<Complex>& coeffs) {
    const std::size_t n = coeffs.size();
    auto eval = [&](Complex z) {
        Complex p = 1.0;
        for (const Complex& c : coeffs) p = p * z + c;
        return p;
    };
    std::vector<Complex> roots(n);
    const Complex seed(0.4, 0.9);
    Complex power = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        power *= seed;
        roots[i] = power;
    }
    for (int iter = 0; iter < 200; ++iter) {
        double shift = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            Complex denom = 1.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j != i) denom *= roots[i] - roots[j];
            }
            const Complex delta = eval(roots[i]) / denom;
            roots[i] -= delta;
            shift = std::max(shift, std::abs(delta));
        }
        if (shift < 1e-15) break;
    }
    return roots;
}

// Sorted real eigenvalues of a Hermitian matrix by the characteristic
// polynomial route; an oracle independent of the library eigensolver.
inline RealVector charpoly_eigenvalues(const Matrix& a) {
    const std::vector<Complex> roots = polynomial_roots(charpoly_coefficients(a));
    std::vector<double> real_parts;
    real_parts.reserve(roots.size());
    for (const Complex& r : roots) real_parts.push_back(r.real());
    std::sort(real_parts.begin(), real_parts.end());
    RealVector out(static_cast<Index>(real_parts.size()));
    for (std::size_t i = 0; i < real_parts.size(); ++i) {
        out[static_cast<Index>(i)] = real_parts[i];
    }
    return out;
}

} // namespace qtest
