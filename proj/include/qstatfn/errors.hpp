#pragma once

#include <stdexcept>
#include <string>

namespace qstatfn {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Input violates a documented precondition or type invariant (CLI exit 2).
class ValidationError : public Error {
public:
    using Error::Error;
};

// Computation broke down at runtime on otherwise valid input (CLI exit 3).
class NumericalError : public Error {
public:
    using Error::Error;
};

// --------------------------- validation errors ------------------------------

struct NotHermitian final : ValidationError {
    using ValidationError::ValidationError;
};
struct NotPositive final : ValidationError {
    using ValidationError::ValidationError;
};
struct TraceNotOne final : ValidationError {
    using ValidationError::ValidationError;
};
struct DimensionMismatch final : ValidationError {
    using ValidationError::ValidationError;
};
struct ArityMismatch final : ValidationError {
    using ValidationError::ValidationError;
};
struct UnsupportedArity final : ValidationError {
    using ValidationError::ValidationError;
};
struct NonPositiveSpectrum final : ValidationError {
    using ValidationError::ValidationError;
};
struct NotPure final : ValidationError {
    using ValidationError::ValidationError;
};
struct EvenDimension final : ValidationError {
    using ValidationError::ValidationError;
};
struct TooLarge final : ValidationError {
    using ValidationError::ValidationError;
};
struct NotPositiveDefinite final : ValidationError {
    using ValidationError::ValidationError;
};

// --------------------------- numerical errors -------------------------------

struct EigensolverFailure final : NumericalError {
    using NumericalError::NumericalError;
};
struct BranchAmbiguity final : NumericalError {
    using NumericalError::NumericalError;
};
struct ZeroPostSelection final : NumericalError {
    using NumericalError::NumericalError;
};
struct OrthogonalSelection final : NumericalError {
    using NumericalError::NumericalError;
};
struct NotAState final : NumericalError {
    using NumericalError::NumericalError;
};
struct SingularJacobian final : NumericalError {
    using NumericalError::NumericalError;
};
struct MaxIterations final : NumericalError {
    using NumericalError::NumericalError;
};
struct SingularWeighting final : NumericalError {
    using NumericalError::NumericalError;
};
struct SamplerFailure final : NumericalError {
    using NumericalError::NumericalError;
};

} // namespace qstatfn
