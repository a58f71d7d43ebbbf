#pragma once

#include <stdexcept>
#include <string>

namespace colposet {

/// Malformed or inconsistent input (bad JSON, shape mismatch, non-functorial data).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An identity that must hold by construction failed (d^2 != 0, phi not a chain map, ...).
/// Raised by self-checks; it signals a bug or a violated theorem hypothesis.
class VerificationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace colposet
