#pragma once

#include "qstatfn/operators.hpp"
#include "qstatfn/types.hpp"

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace qstatfn {

// Joint quasiprobability table over outcome tuples of an ordered observable
// sequence. Index order matches measurement order: the first-listed
// observable acts first on the state. Entries sum to one.
class QuasiProbTable {
public:
    struct Axis {
        std::string label;
        RealVector outcomes; // ascending cluster centers
    };

    QuasiProbTable(std::vector<Axis> axes, std::vector<Complex> values);

    const std::vector<Axis>& axes() const { return axes_; }
    std::size_t n_axes() const { return axes_.size(); }
    std::size_t size() const { return values_.size(); }

    // Row-major over outcome indices, first axis slowest.
    const std::vector<Complex>& values() const { return values_; }
    Complex at(const std::vector<Index>& idx) const;

    Complex total() const;

    // Sum the table over all axes except `axis`.
    std::vector<Complex> marginal(std::size_t axis) const;

private:
    std::vector<Axis> axes_;
    std::vector<Complex> values_;
};

struct BochnerThresholds {
    double sym_tol = 1e-8;
    double pd_tol = 1e-8;
};

enum class BochnerVerdict { ClassicalCandidate, ComplexValued, NegativeOrNonPD };

std::string to_string(BochnerVerdict v);

// Finite-grid witness of Theorem-style classicality conditions: Hermitian
// symmetry of the characteristic function and positive definiteness of its
// Gram matrix. Violations are conclusive; a pass is only a candidate.
struct BochnerReport {
    double hermitian_symmetry_violation = 0.0; // max |C(-t) - conj C(t)| over grid
    double min_gram_eigenvalue = 0.0;
    std::vector<RealVector> grid;
    BochnerVerdict verdict = BochnerVerdict::ClassicalCandidate;
};

// Pr{A1=a1, ..., An=an || rho} = Tr[P_{An}(an) ... P_{A1}(a1) rho];
// the last-listed observable sits leftmost in the trace.
QuasiProbTable kd_distribution(const DensityOperator& rho,
                               const std::vector<HermitianOperator>& observables,
                               double cluster_tol = 1e-8);

// Entrywise real part of the KD table.
QuasiProbTable mh_distribution(const DensityOperator& rho,
                               const std::vector<HermitianOperator>& observables,
                               double cluster_tol = 1e-8);

// Conditional KD distribution of A given the post-selected outcome B = b for
// a pure state; values sum to one. `b` selects the nearest outcome cluster.
std::vector<std::pair<double, Complex>> conditional_kd(
    const DensityOperator& psi, const HermitianOperator& a, const HermitianOperator& b,
    double b_outcome, double cluster_tol = 1e-8,
    double postselect_tol = kPostselectTol);

// Tr(Pi A rho) / Tr(Pi rho).
Complex weak_value(const DensityOperator& rho, const POVMElement& pi,
                   const HermitianOperator& a, double postselect_tol = kPostselectTol);

// Ex(A^2 | Pi) - Ex(A | Pi)^2.
Complex weak_variance(const DensityOperator& rho, const POVMElement& pi,
                      const HermitianOperator& a, double postselect_tol = kPostselectTol);

struct NPointResult {
    Complex direct = 0.0;       // Tr(A1 A2 ... An rho)
    Complex chain = 0.0;        // probability x weak-value chain over outcome tuples
    long skipped_branches = 0;  // branches dropped for vanishing amplitudes
};

// Two routes to the same n-point correlation: the direct operator product
// trace, and its regrouping into Born probabilities and successive
// conditional (weak-value-style) projector factors over the eigenbasis of
// rho. Generic full-rank inputs make the two agree.
NPointResult npoint_correlation(const DensityOperator& rho,
                                const std::vector<HermitianOperator>& observables,
                                double amplitude_tol = kAmplitudeTol);

using QcfSampler = std::function<Complex(const RealVector&)>;

BochnerReport bochner_check(const QcfSampler& sampler, std::vector<RealVector> grid,
                            BochnerThresholds thresholds = {});

// Uniform points-per-axis product grid on [lo, hi]^n.
std::vector<RealVector> uniform_grid(int n_axes, double lo, double hi, int points_per_axis);

} // namespace qstatfn
