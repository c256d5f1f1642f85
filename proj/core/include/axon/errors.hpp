#pragma once

#include <stdexcept>
#include <string>

namespace axon {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent user input (parameters, configuration files).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A state left its admissible set (l <= 0, NaN, kernel domain exceeded...).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Evaluation requested outside the tabulated domain.
class DomainError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace axon
