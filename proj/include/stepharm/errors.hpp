#pragma once

#include <stdexcept>
#include <string>

namespace stepharm {

// Argument outside the mathematical domain of an operation.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// Gamma-family function evaluated at one of its poles.
struct PoleError : DomainError {
    using DomainError::DomainError;
};

// An iterative quadrature or ODE refinement failed to reach its tolerance.
struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A root bracket did not show the expected sign change.
struct BracketError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The reflected wave packet is too broad to localize.
struct DispersionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A denominator that should be nonzero vanished.
struct SingularError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace stepharm
