#pragma once

#include <optional>

#include "trobust/data.hpp"
#include "trobust/matrix.hpp"

namespace trobust {

// Log-likelihood of the regression model with scaled Student-t errors
//   y_i = x_i' beta + sigma * eps_i,  eps_i ~ t_nu  (iid).
// The Gaussian limit (dof.isGaussian()) evaluates the normal log-likelihood.
// Throws OverflowError (with the offending observation index) if a per-term
// contribution is non-finite, DomainError for sigma <= 0.
double tLogLikelihood(const ModelParams& params, const Dataset& data);

// Normal-errors log-likelihood at (beta, sigma).
double gaussianLogLikelihood(const Vector& beta, double sigma, const Dataset& data);

// Gradient of tLogLikelihood in (beta_1..beta_p, sigma), finite nu only.
Vector scoreBetaSigma(const ModelParams& params, const Dataset& data);

// Observed information (negative Hessian) in (beta, sigma), a (p+1)x(p+1)
// symmetric matrix, finite nu only.
Matrix observedInfoBetaSigma(const ModelParams& params, const Dataset& data);

// Expected (Fisher) information per the full parameter (beta_1..beta_p,
// sigma, nu), a (p+2)x(p+2) matrix; the beta block is orthogonal to
// (sigma, nu). Finite nu only.
Matrix expectedFisherInfo(const ModelParams& params, const Dataset& data);

namespace detail {

// Additive constant of the t density: lgam((nu+1)/2) - lgam(nu/2) - log(pi nu)/2.
double tConstantTerm(double nu);

// Non-throwing likelihood evaluation for optimizer callbacks: returns
// nullopt instead of throwing when a term over/underflows.
std::optional<double> tryTLogLikelihood(const ModelParams& params, const Dataset& data);

}  // namespace detail

}  // namespace trobust
