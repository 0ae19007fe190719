#include "trobust/data.hpp"

#include <cmath>
#include <string>

#include "trobust/errors.hpp"

namespace trobust {

DegreesOfFreedom DegreesOfFreedom::finite(double nu) {
  if (!std::isfinite(nu) || nu <= 0.0) {
    throw DomainError(
        "DegreesOfFreedom::finite: value must be positive and finite, got " +
        std::to_string(nu) + " (use gaussianLimit() for the normal model)");
  }
  DegreesOfFreedom d;
  d.gaussian_ = false;
  d.nu_ = nu;
  return d;
}

double DegreesOfFreedom::nu() const {
  if (gaussian_) {
    throw DomainError("DegreesOfFreedom::nu: no finite value in the Gaussian limit");
  }
  return nu_;
}

Dataset::Dataset(Matrix design, Vector response)
    : X(std::move(design)), y(std::move(response)) {
  if (X.rows() != y.size()) {
    throw DimensionError("Dataset: " + std::to_string(X.rows()) +
                         " design rows vs " + std::to_string(y.size()) +
                         " responses");
  }
  if (X.rows() < X.cols() + 1) {
    throw DimensionError("Dataset: need at least p + 1 = " +
                         std::to_string(X.cols() + 1) + " observations, got " +
                         std::to_string(X.rows()));
  }
  for (double v : X.storage()) {
    if (!std::isfinite(v)) throw DomainError("Dataset: design contains a non-finite value");
  }
  for (double v : y) {
    if (!std::isfinite(v)) throw DomainError("Dataset: response contains a non-finite value");
  }
}

Vector residuals(const Vector& beta, const Dataset& data) {
  if (beta.size() != data.p()) {
    throw DimensionError("residuals: " + std::to_string(beta.size()) +
                         " coefficients vs " + std::to_string(data.p()) +
                         " design columns");
  }
  Vector r = data.y;
  for (std::size_t i = 0; i < data.n(); ++i) {
    const double* row = data.X.rowPtr(i);
    double fit = 0.0;
    for (std::size_t j = 0; j < data.p(); ++j) fit += row[j] * beta[j];
    r[i] -= fit;
  }
  return r;
}

}  // namespace trobust
