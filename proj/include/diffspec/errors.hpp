#pragma once

#include <stdexcept>
#include <string>

namespace diffspec {

/// Bad field parameters, malformed modulus text, unsupported case tags.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A sweep or scan would exceed a configured size cap.
class CapExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An identity that must hold by construction did not.
class VerificationFailure : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace diffspec
