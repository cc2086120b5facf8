#pragma once

#include "qstatfn/operators.hpp"
#include "qstatfn/types.hpp"

#include <utility>
#include <vector>

namespace qstatfn {

// Point (q, p) on the d x d discrete phase-space grid.
struct PhasePoint {
    int q = 0;
    int p = 0;
};

// Real d x d quasiprobability grid over phase points; entries sum to one.
struct WignerTable {
    int d = 0;
    RealMatrix values; // values(q, p)
};

// Shift X|k> = |k+1 mod d> and clock Z|k> = w^k |k>, w = exp(2 pi i / d).
// Odd d only; the even case needs an extended phase space and is unsupported.
std::pair<Matrix, Matrix> clock_shift(int d);

// D_u = tau^{-qp} Z^q X^p with tau = exp((d+1) pi i / d), tau^2 = w.
// Unitary; orthogonal basis with Tr(D_u† D_v) = d delta_{uv}.
Matrix displacement(int d, PhasePoint u);

// chi(u) = Tr(rho D_u).
Complex discrete_qcf(const DensityOperator& rho, PhasePoint u);

// Phase-point (Fano) operators A_x = (1/d) sum_u w^{{x,u}} D_u with the
// symplectic product {x,u} = x1 u2 - x2 u1; Hermitian with unit trace.
// Returned flat, index x = q*d + p.
std::vector<Matrix> phase_point_operators(int d);

// W(x) = (1/d) Tr(rho A_x), the symplectic Fourier transform of chi
// normalized so the table sums to one.
WignerTable wigner_function(const DensityOperator& rho);

// Inverse transform rho = sum_x W(x) A_x; the A_x basis is self-dual for odd
// d under this normalization, so wigner_function is a left inverse.
DensityOperator reconstruct_state(const WignerTable& table, Tolerances tol = {});

} // namespace qstatfn
