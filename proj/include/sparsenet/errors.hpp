#pragma once

#include <stdexcept>
#include <string>

#include "sparsenet/types.hpp"

namespace sparsenet {

// Error families map to CLI exit codes: validation 2, convergence 3, agreement 4.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

class AgreementError : public Error {
 public:
  using Error::Error;
};

class NonFiniteError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ShapeMismatchError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NotNormalizedError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class EmptyMatrixError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class InvalidStructureError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ConstantColumnError : public ValidationError {
 public:
  explicit ConstantColumnError(Index column)
      : ValidationError("constant column at index " + std::to_string(column)),
        column_(column) {}
  Index column() const { return column_; }

 private:
  Index column_;
};

class UnderdeterminedError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NotPositiveDefiniteError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NonPositiveDiagonalError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NotConvergedError : public ConvergenceError {
 public:
  using ConvergenceError::ConvergenceError;
};

}  // namespace sparsenet
