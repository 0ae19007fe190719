#pragma once

#include <cstddef>

#include "trobust/matrix.hpp"

namespace trobust {

// Degrees of freedom of the error law, with the Gaussian limit (nu -> inf)
// represented explicitly instead of by a floating-point infinity.
class DegreesOfFreedom {
 public:
  static DegreesOfFreedom gaussianLimit() noexcept {
    DegreesOfFreedom d;
    d.gaussian_ = true;
    return d;
  }
  static DegreesOfFreedom finite(double nu);

  bool isGaussian() const noexcept { return gaussian_; }

  // Finite value; throws DomainError in the Gaussian limit.
  double nu() const;

  // omega = 1/nu, with the Gaussian limit mapping to exactly 0.
  double omega() const noexcept { return gaussian_ ? 0.0 : 1.0 / nu_; }

  friend bool operator==(const DegreesOfFreedom&, const DegreesOfFreedom&) = default;

 private:
  DegreesOfFreedom() = default;
  bool gaussian_ = false;
  double nu_ = 0.0;
};

// A regression problem: response y (length n) and design X (n rows, p
// columns, intercept column included by the caller if wanted).
struct Dataset {
  Matrix X;
  Vector y;

  Dataset(Matrix design, Vector response);

  std::size_t n() const noexcept { return X.rows(); }
  std::size_t p() const noexcept { return X.cols(); }
};

// y - X beta.
Vector residuals(const Vector& beta, const Dataset& data);

// Parameters of the location-scale regression model.
struct ModelParams {
  Vector beta;
  double sigma = 1.0;
  DegreesOfFreedom dof = DegreesOfFreedom::gaussianLimit();
};

}  // namespace trobust
