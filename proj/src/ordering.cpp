#include "qstatfn/ordering.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace qstatfn {

namespace {

bool is_permutation_of_n(const Permutation& p, int n) {
    if (static_cast<int>(p.size()) != n) return false;
    std::vector<bool> seen(n, false);
    for (int v : p) {
        if (v < 0 || v >= n || seen[v]) return false;
        seen[v] = true;
    }
    return true;
}

Permutation identity_perm(int n) {
    Permutation p(n);
    std::iota(p.begin(), p.end(), 0);
    return p;
}

void check_arity(const OrderingSpec& spec,
                 const std::vector<HermitianOperator>& observables,
                 const RealVector& theta) {
    if (static_cast<int>(observables.size()) != spec.n_vars() ||
        theta.size() != spec.n_vars()) {
        std::ostringstream os;
        os << "ordering spec expects " << spec.n_vars() << " variables, got "
           << observables.size() << " observables and " << theta.size() << " parameters";
        throw ArityMismatch(os.str());
    }
    const Index dim = observables.front().dim();
    for (const auto& a : observables) {
        if (a.dim() != dim) {
            throw DimensionMismatch("observables have mixed dimensions");
        }
    }
}

// M^N by binary exponentiation; N >= 1.
Matrix matrix_pow_int(Matrix base, int n) {
    Matrix result = Matrix::Identity(base.rows(), base.cols());
    while (n > 0) {
        if (n & 1) result = result * base;
        n >>= 1;
        if (n > 0) base = base * base;
    }
    return result;
}

Matrix build(const OrderingSpec& spec,
             const std::vector<HermitianOperator>& observables,
             const RealVector& theta, Complex exponent_scale) {
    check_arity(spec, observables, theta);
    const Index dim = observables.front().dim();
    const int n = spec.n_vars();

    if (spec.is_wigner_limit()) {
        Matrix sum = Matrix::Zero(dim, dim);
        for (int j = 0; j < n; ++j) sum += theta[j] * observables[j].matrix();
        return matrix_exp_scaled(HermitianOperator(sum), exponent_scale);
    }

    std::vector<SpectralDecomposition> decomps;
    decomps.reserve(observables.size());
    for (const auto& a : observables) decomps.push_back(spectral_decompose(a));

    const int reps = spec.repetitions();
    Matrix avg = Matrix::Zero(dim, dim);
    for (const auto& [perm, weight] : spec.weights()) {
        Matrix term = Matrix::Identity(dim, dim);
        // Slot 0 acts first: left-multiply in slot order.
        for (int j = 0; j < n; ++j) {
            const int k = perm[j];
            term = matrix_exp_scaled(decomps[k], exponent_scale * theta[k] /
                                                     static_cast<double>(reps)) *
                   term;
        }
        avg += weight * term;
    }
    return matrix_pow_int(std::move(avg), reps);
}

} // namespace

OrderingSpec::OrderingSpec(int n_vars, std::optional<int> repetitions,
                           std::map<Permutation, Complex> weights)
    : n_vars_(n_vars), repetitions_(repetitions), weights_(std::move(weights)) {
    if (n_vars_ < 1) throw UnsupportedArity("ordering spec needs at least one variable");
    if (repetitions_ && *repetitions_ < 1) {
        throw ValidationError("repetition count must be a positive integer");
    }
    Complex total = 0.0;
    for (const auto& [perm, weight] : weights_) {
        if (!is_permutation_of_n(perm, n_vars_)) {
            throw ValidationError("weight key is not a permutation of the variable indices");
        }
        total += weight;
    }
    if (!repetitions_) {
        // Wigner limit ignores weights entirely.
        return;
    }
    if (weights_.empty() || std::abs(total - 1.0) > 1e-12) {
        std::ostringstream os;
        os << "permutation weights must sum to 1, got " << total;
        throw ValidationError(os.str());
    }
}

OrderingSpec OrderingSpec::wigner_limit(int n_vars) {
    return OrderingSpec(n_vars, std::nullopt, {});
}

OrderingKind parse_ordering_kind(const std::string& name) {
    if (name == "kd") return OrderingKind::KD;
    if (name == "mh") return OrderingKind::MH;
    if (name == "wigner") return OrderingKind::Wigner;
    throw ValidationError("unknown ordering kind: " + name);
}

OrderingSpec preset(OrderingKind kind, int n_vars) {
    switch (kind) {
    case OrderingKind::KD:
        return OrderingSpec(n_vars, 1, {{identity_perm(n_vars), Complex(1.0)}});
    case OrderingKind::MH: {
        if (n_vars < 2) {
            throw UnsupportedArity("MH ordering needs at least two variables");
        }
        Permutation id = identity_perm(n_vars);
        Permutation rev = id;
        std::reverse(rev.begin(), rev.end());
        return OrderingSpec(n_vars, 1, {{id, Complex(0.5)}, {rev, Complex(0.5)}});
    }
    case OrderingKind::Wigner:
        return OrderingSpec::wigner_limit(n_vars);
    }
    throw ValidationError("unreachable ordering kind");
}

Matrix ordering_function(const OrderingSpec& spec,
                         const std::vector<HermitianOperator>& observables,
                         const RealVector& theta) {
    return build(spec, observables, theta, Complex(1.0, 0.0));
}

Matrix unitary_ordering_function(const OrderingSpec& spec,
                                 const std::vector<HermitianOperator>& observables,
                                 const RealVector& theta) {
    return build(spec, observables, theta, Complex(0.0, 1.0));
}

} // namespace qstatfn
