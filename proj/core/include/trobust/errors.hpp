#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace trobust {

// Base class for all numerical failures raised by this library.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An argument lies outside the mathematical domain of a function.
class DomainError : public NumericError {
 public:
  using NumericError::NumericError;
};

// Shapes of matrices/vectors passed together do not agree.
class DimensionError : public NumericError {
 public:
  using NumericError::NumericError;
};

// A linear solve met a (numerically) rank-deficient matrix.
class SingularMatrixError : public NumericError {
 public:
  SingularMatrixError(const std::string& what, int deficientColumns)
      : NumericError(what), deficientColumns_(deficientColumns) {}
  int deficientColumns() const noexcept { return deficientColumns_; }

 private:
  int deficientColumns_ = 0;
};

// A per-observation computation produced a non-finite value.
class OverflowError : public NumericError {
 public:
  OverflowError(const std::string& what, std::size_t index)
      : NumericError(what), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_ = 0;
};

// An information matrix that must be positive definite is not.
class DegenerateInformationError : public NumericError {
 public:
  DegenerateInformationError(const std::string& what, double nu)
      : NumericError(what), nu_(nu) {}
  double nu() const noexcept { return nu_; }

 private:
  double nu_ = 0.0;
};

// An iterative routine exhausted its iteration budget without converging.
class NonConvergenceError : public NumericError {
 public:
  NonConvergenceError(const std::string& what, int iterations)
      : NumericError(what), iterations_(iterations) {}
  int iterations() const noexcept { return iterations_; }

 private:
  int iterations_ = 0;
};

// A simulation specification or serialized payload is structurally invalid.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace trobust
