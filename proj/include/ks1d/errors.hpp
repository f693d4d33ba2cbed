#pragma once

#include <stdexcept>

namespace ks1d {

// Base class of all library failures.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// A value violates a mathematical precondition (nonpositive mass, negative density, ...).
class DomainError : public Error {
  public:
    using Error::Error;
};

// A structurally impossible request (more eigenpairs than dofs, fewer elements than layers, ...).
class InvalidRequestError : public Error {
  public:
    using Error::Error;
};

// Configuration text failed validation; the message names the offending key.
class ConfigError : public Error {
  public:
    using Error::Error;
};

// A spectral tail tolerance that cannot be certified.
class TruncationError : public Error {
  public:
    using Error::Error;
};

// A solver produced non-finite values or missed its residual contract.
class NumericalError : public Error {
  public:
    using Error::Error;
};

}  // namespace ks1d
