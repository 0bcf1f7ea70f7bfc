#pragma once

#include <stdexcept>
#include <string>

namespace brstkit {

/// Malformed input or configuration (CLI exit code 2).
struct InputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A mathematical precondition of an operation does not hold, e.g. criterion (*)
/// or [L, L] ⊆ ker γ. Reported as a structured refusal (CLI exit code 1).
struct PreconditionFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An identity that must hold by construction failed; always an implementation bug.
struct InvariantViolation : std::logic_error {
    using std::logic_error::logic_error;
};

}  // namespace brstkit
