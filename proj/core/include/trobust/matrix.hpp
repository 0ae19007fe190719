#pragma once

#include <cstddef>
#include <vector>

namespace trobust {

using Vector = std::vector<double>;

// Dense row-major matrix of doubles. Deliberately minimal: just what the
// regression and simulation code needs, with bounds implied by construction.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t i, std::size_t j) noexcept {
    return data_[i * cols_ + j];
  }
  double operator()(std::size_t i, std::size_t j) const noexcept {
    return data_[i * cols_ + j];
  }

  double* rowPtr(std::size_t i) noexcept { return data_.data() + i * cols_; }
  const double* rowPtr(std::size_t i) const noexcept {
    return data_.data() + i * cols_;
  }

  Vector& storage() noexcept { return data_; }
  const Vector& storage() const noexcept { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  Vector data_;
};

double dot(const Vector& a, const Vector& b);
double norm2(const Vector& v);
double normInf(const Vector& v);

// y = A x  (dimensions checked, DimensionError on mismatch).
Vector matVec(const Matrix& a, const Vector& x);
// y = A^T x.
Vector matTVec(const Matrix& a, const Vector& x);

// Result of an ordinary least-squares solve.
struct LeastSquaresFit {
  Vector coef;               // minimizer of ||y - X b||^2
  double rss = 0.0;          // residual sum of squares at the minimizer
  double residualMeanSquare = 0.0;  // rss / rows
};

// Householder-QR least squares. Throws SingularMatrixError when X is
// numerically rank deficient (reports how many pivots collapsed).
LeastSquaresFit solveLeastSquares(const Matrix& x, const Vector& y);

// In-place Cholesky of a symmetric matrix passed as its dense square storage.
// On success `a` holds the lower factor L (upper triangle zeroed) and the
// function returns true; returns false if a pivot is not strictly positive.
bool choleskyLower(Matrix& a);

// log(det A) for symmetric positive definite A. Throws SingularMatrixError
// when the factorization fails.
double choleskyLogDet(Matrix a);

// Solve A x = b for symmetric positive definite A.
Vector choleskySolve(Matrix a, const Vector& b);

// Full inverse of a symmetric positive definite matrix.
Matrix choleskyInverse(Matrix a);

// Eigenvalues of a symmetric matrix via the cyclic Jacobi method, ascending.
Vector symmetricEigenvalues(Matrix a);

}  // namespace trobust
