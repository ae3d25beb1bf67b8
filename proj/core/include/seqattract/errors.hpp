#pragma once

#include <stdexcept>
#include <string>

namespace seqattract {

// Base for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Vector/matrix dimensions do not line up.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// NaN or infinity reached a place that requires finite values.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Caller violated a documented precondition (bad hyperparameter, ineligible
// sequence, infeasible request).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Malformed on-disk data.
class FormatError : public Error {
 public:
  using Error::Error;
};

class TruncatedError : public FormatError {
 public:
  using FormatError::FormatError;
};

class IllegalValueError : public FormatError {
 public:
  using FormatError::FormatError;
};

class ChecksumError : public FormatError {
 public:
  using FormatError::FormatError;
};

// File could not be opened, read, or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace seqattract
