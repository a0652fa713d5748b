#pragma once

#include <stdexcept>
#include <string>

namespace netinf {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Invalid arguments, out-of-range parameters, inconsistent configuration.
class ValidationError : public Error {
public:
  using Error::Error;
};

// Unreadable or malformed input data (files, records, columns).
class DataError : public Error {
public:
  using Error::Error;
};

// Numerical failure: rank deficiency, non-positive-definite covariance,
// degenerate likelihood.
class NumericError : public Error {
public:
  using Error::Error;
};

}  // namespace netinf
