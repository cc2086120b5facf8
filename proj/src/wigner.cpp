#include "qstatfn/wigner.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace qstatfn {

namespace {

void check_odd_dim(int d) {
    if (d < 3 || d % 2 == 0) {
        std::ostringstream os;
        os << "discrete phase space requires odd dimension >= 3, got " << d;
        throw EvenDimension(os.str());
    }
}

int mod(int a, int m) {
    const int r = a % m;
    return r < 0 ? r + m : r;
}

// w^k with the angle reduced exactly: exp(2 pi i (k mod d) / d).
Complex omega_pow(int d, long k) {
    const int r = mod(static_cast<int>(k % d), d);
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(r) / d;
    return {std::cos(angle), std::sin(angle)};
}

// tau^k = exp(i pi (d+1) k / d), reduced mod 2d before exponentiation.
Complex tau_pow(int d, long k) {
    const long num = static_cast<long>(d + 1) * k;
    const int r = mod(static_cast<int>(num % (2 * d)), 2 * d);
    const double angle = std::numbers::pi * static_cast<double>(r) / d;
    return {std::cos(angle), std::sin(angle)};
}

void check_point(int d, PhasePoint u) {
    if (u.q < 0 || u.q >= d || u.p < 0 || u.p >= d) {
        std::ostringstream os;
        os << "phase point (" << u.q << ", " << u.p << ") outside the " << d << "x" << d
           << " grid";
        throw ValidationError(os.str());
    }
}

} // namespace

std::pair<Matrix, Matrix> clock_shift(int d) {
    check_odd_dim(d);
    Matrix x = Matrix::Zero(d, d);
    Matrix z = Matrix::Zero(d, d);
    for (int k = 0; k < d; ++k) {
        x(mod(k + 1, d), k) = 1.0;
        z(k, k) = omega_pow(d, k);
    }
    return {std::move(x), std::move(z)};
}

Matrix displacement(int d, PhasePoint u) {
    check_odd_dim(d);
    check_point(d, u);
    // Entrywise form of tau^{-qp} Z^q X^p: column k maps to row k+p with
    // phase w^{(k+p) q}.
    Matrix out = Matrix::Zero(d, d);
    const Complex phase = tau_pow(d, -static_cast<long>(u.q) * u.p);
    for (int k = 0; k < d; ++k) {
        const int row = mod(k + u.p, d);
        out(row, k) = phase * omega_pow(d, static_cast<long>(row) * u.q);
    }
    return out;
}

Complex discrete_qcf(const DensityOperator& rho, PhasePoint u) {
    const int d = static_cast<int>(rho.dim());
    check_odd_dim(d);
    return (rho.matrix() * displacement(d, u)).trace();
}

std::vector<Matrix> phase_point_operators(int d) {
    check_odd_dim(d);
    std::vector<Matrix> displacements;
    displacements.reserve(static_cast<std::size_t>(d) * d);
    for (int q = 0; q < d; ++q) {
        for (int p = 0; p < d; ++p) {
            displacements.push_back(displacement(d, {q, p}));
        }
    }
    std::vector<Matrix> points;
    points.reserve(displacements.size());
    for (int x1 = 0; x1 < d; ++x1) {
        for (int x2 = 0; x2 < d; ++x2) {
            Matrix a = Matrix::Zero(d, d);
            for (int u1 = 0; u1 < d; ++u1) {
                for (int u2 = 0; u2 < d; ++u2) {
                    const long sympl = static_cast<long>(x1) * u2 -
                                       static_cast<long>(x2) * u1;
                    a += omega_pow(d, sympl) *
                         displacements[static_cast<std::size_t>(u1) * d + u2];
                }
            }
            points.push_back(a / static_cast<double>(d));
        }
    }
    return points;
}

WignerTable wigner_function(const DensityOperator& rho) {
    const int d = static_cast<int>(rho.dim());
    check_odd_dim(d);

    Matrix chi(d, d);
    for (int u1 = 0; u1 < d; ++u1) {
        for (int u2 = 0; u2 < d; ++u2) {
            chi(u1, u2) = discrete_qcf(rho, {u1, u2});
        }
    }

    WignerTable table;
    table.d = d;
    table.values.resize(d, d);
    const double norm = 1.0 / (static_cast<double>(d) * d);
    for (int x1 = 0; x1 < d; ++x1) {
        for (int x2 = 0; x2 < d; ++x2) {
            Complex w = 0.0;
            for (int u1 = 0; u1 < d; ++u1) {
                for (int u2 = 0; u2 < d; ++u2) {
                    const long sympl = static_cast<long>(x1) * u2 -
                                       static_cast<long>(x2) * u1;
                    w += omega_pow(d, sympl) * chi(u1, u2);
                }
            }
            table.values(x1, x2) = norm * w.real();
        }
    }
    return table;
}

DensityOperator reconstruct_state(const WignerTable& table, Tolerances tol) {
    const int d = table.d;
    check_odd_dim(d);
    if (table.values.rows() != d || table.values.cols() != d) {
        throw ValidationError("Wigner table grid does not match its dimension");
    }
    const std::vector<Matrix> points = phase_point_operators(d);
    Matrix rho = Matrix::Zero(d, d);
    for (int q = 0; q < d; ++q) {
        for (int p = 0; p < d; ++p) {
            rho += table.values(q, p) * points[static_cast<std::size_t>(q) * d + p];
        }
    }
    try {
        return DensityOperator(rho, tol);
    } catch (const ValidationError& e) {
        throw NotAState(std::string("reconstructed operator is not a state: ") + e.what());
    }
}

} // namespace qstatfn
