#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace orbitlab {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input or a violated precondition (bad modulus, class >= p, cap exceeded).
class InputError : public Error {
public:
    using Error::Error;
};

/// A verification target did not hold. Carries a machine-readable witness.
class VerificationFailure : public Error {
public:
    using Witness = std::vector<std::pair<std::string, std::string>>;

    VerificationFailure(std::string check, std::string message, Witness witness = {})
        : Error(check + ": " + message), check_(std::move(check)), witness_(std::move(witness)) {}

    const std::string& check() const noexcept { return check_; }
    const Witness& witness() const noexcept { return witness_; }

private:
    std::string check_;
    Witness witness_;
};

/// An internal consistency check failed; the computation cannot be trusted.
class InternalError : public Error {
public:
    using Error::Error;
};

} // namespace orbitlab
