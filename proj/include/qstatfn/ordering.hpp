#pragma once

#include "qstatfn/operators.hpp"
#include "qstatfn/types.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qstatfn {

// Permutation of {0, ..., n-1}; perm[j] is the index of the variable placed
// at slot j. Slot 0 acts first on the state (rightmost factor in products).
using Permutation = std::vector<int>;

// The (N, w) pair selecting an operator ordering: repetition count N (or the
// Wigner limit N -> infinity) and complex weights over permutations summing
// to one. Presets cover the KD, MH and Wigner orderings.
class OrderingSpec {
public:
    OrderingSpec(int n_vars, std::optional<int> repetitions,
                 std::map<Permutation, Complex> weights);

    static OrderingSpec wigner_limit(int n_vars);

    int n_vars() const { return n_vars_; }
    bool is_wigner_limit() const { return !repetitions_.has_value(); }
    int repetitions() const { return repetitions_.value(); }
    const std::map<Permutation, Complex>& weights() const { return weights_; }

private:
    int n_vars_;
    std::optional<int> repetitions_; // nullopt = Wigner limit
    std::map<Permutation, Complex> weights_;
};

enum class OrderingKind { KD, MH, Wigner };

OrderingKind parse_ordering_kind(const std::string& name);

// KD: N=1, all weight on the identity permutation.
// MH: N=1, weight 1/2 on identity and 1/2 on the full reversal (n >= 2).
// Wigner: the N -> infinity limit tag.
OrderingSpec preset(OrderingKind kind, int n_vars);

// [ sum_sigma w(sigma) prod_j exp(theta_{sigma(j)} A_{sigma(j)} / N) ]^N,
// with slot j=0 rightmost so the first-listed variable acts first on the
// state. The Wigner limit returns exp(sum_j theta_j A_j) directly.
Matrix ordering_function(const OrderingSpec& spec,
                         const std::vector<HermitianOperator>& observables,
                         const RealVector& theta);

// Same construction with exp(i theta A / N) factors; unitary for the KD
// preset and the Wigner limit, generally non-unitary for mixed weights.
Matrix unitary_ordering_function(const OrderingSpec& spec,
                                 const std::vector<HermitianOperator>& observables,
                                 const RealVector& theta);

} // namespace qstatfn
