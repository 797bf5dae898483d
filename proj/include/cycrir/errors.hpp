#pragma once

#include <stdexcept>
#include <string>

namespace cycrir {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or out-of-domain input (bad coefficients, even n, unstable h, ...).
/// CLI exit code 2.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Numerical failure: near pole-zero cancellation, root residual out of
/// contract, evaluation at a pole. CLI exit code 3.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Operation precondition unmet (e.g. rho_plus on a network that is not
/// strictly unstable, search bracket below the modal lower bound). CLI exit
/// code 4.
class PreconditionError : public Error {
public:
    using Error::Error;
};

}  // namespace cycrir
