#include "trobust/likelihood.hpp"

#include <cmath>
#include <string>

#include "trobust/errors.hpp"
#include "trobust/special.hpp"

namespace trobust {

namespace {

constexpr double kLogTwoPi = 1.8378770664093454836;

void requireScale(double sigma, const char* fn) {
  if (!std::isfinite(sigma) || sigma <= 0.0) {
    throw DomainError(std::string(fn) + ": sigma must be positive and finite, got " +
                      std::to_string(sigma));
  }
}

}  // namespace

namespace detail {

double tConstantTerm(double nu) {
  // For large nu the direct form subtracts two log-gamma values of size
  // ~(nu/2)*log(nu/2); their rounding error alone swamps the O(1) result and,
  // scaled by n, can exceed the true criterion near the Gaussian limit.  Use
  // logGamma(z + 1/2) - logGamma(z) = log(z)/2 - 1/(8z) + O(z^-3) with
  // z = nu/2, which collapses the whole constant to -log(2*pi)/2 - 1/(4*nu).
  if (nu >= 1e6) {
    return -0.5 * kLogTwoPi - 0.25 / nu;
  }
  return logGamma(0.5 * (nu + 1.0)) - logGamma(0.5 * nu) -
         0.5 * std::log(3.14159265358979323846 * nu);
}

std::optional<double> tryTLogLikelihood(const ModelParams& params, const Dataset& data) {
  if (!(params.sigma > 0.0) || !std::isfinite(params.sigma)) return std::nullopt;
  const std::size_t n = data.n();
  const Vector r = residuals(params.beta, data);
  if (params.dof.isGaussian()) {
    double rss = 0.0;
    for (double ri : r) rss += ri * ri;
    const double value = -static_cast<double>(n) * std::log(params.sigma) -
                         0.5 * rss / (params.sigma * params.sigma) -
                         0.5 * static_cast<double>(n) * kLogTwoPi;
    if (!std::isfinite(value)) return std::nullopt;
    return value;
  }
  const double nu = params.dof.nu();
  const double c = detail::tConstantTerm(nu);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double z = r[i] / params.sigma;
    const double term = std::log1p(z * z / nu);
    if (!std::isfinite(term)) return std::nullopt;
    sum += term;
  }
  const double value = static_cast<double>(n) * (c - std::log(params.sigma)) -
                       0.5 * (nu + 1.0) * sum;
  if (!std::isfinite(value)) return std::nullopt;
  return value;
}

}  // namespace detail

double gaussianLogLikelihood(const Vector& beta, double sigma, const Dataset& data) {
  requireScale(sigma, "gaussianLogLikelihood");
  const Vector r = residuals(beta, data);
  double rss = 0.0;
  for (double ri : r) rss += ri * ri;
  const double n = static_cast<double>(data.n());
  return -n * std::log(sigma) - 0.5 * rss / (sigma * sigma) - 0.5 * n * kLogTwoPi;
}

double tLogLikelihood(const ModelParams& params, const Dataset& data) {
  requireScale(params.sigma, "tLogLikelihood");
  if (params.dof.isGaussian()) {
    return gaussianLogLikelihood(params.beta, params.sigma, data);
  }
  const double nu = params.dof.nu();
  const double c = detail::tConstantTerm(nu);
  const Vector r = residuals(params.beta, data);
  double sum = 0.0;
  for (std::size_t i = 0; i < data.n(); ++i) {
    const double z = r[i] / params.sigma;
    const double term = std::log1p(z * z / nu);
    if (!std::isfinite(term)) {
      throw OverflowError(
          "tLogLikelihood: non-finite contribution at observation " + std::to_string(i),
          i);
    }
    sum += term;
  }
  const double n = static_cast<double>(data.n());
  const double value = n * (c - std::log(params.sigma)) - 0.5 * (nu + 1.0) * sum;
  if (!std::isfinite(value)) {
    throw OverflowError("tLogLikelihood: non-finite total", data.n());
  }
  return value;
}

Vector scoreBetaSigma(const ModelParams& params, const Dataset& data) {
  requireScale(params.sigma, "scoreBetaSigma");
  const double nu = params.dof.nu();
  const double sigma = params.sigma;
  const std::size_t n = data.n();
  const std::size_t p = data.p();
  const Vector r = residuals(params.beta, data);

  Vector g(p + 1, 0.0);
  const double s2 = sigma * sigma;
  double sigmaAcc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    // Common factor r_i / (nu sigma^2 + r_i^2); numerically stable for any r.
    const double denom = nu * s2 + r[i] * r[i];
    const double w = r[i] / denom;
    const double* row = data.X.rowPtr(i);
    for (std::size_t j = 0; j < p; ++j) g[j] += row[j] * w;
    sigmaAcc += r[i] * w;
  }
  const double np1 = nu + 1.0;
  for (std::size_t j = 0; j < p; ++j) g[j] *= np1;
  g[p] = -static_cast<double>(n) / sigma + np1 / sigma * sigmaAcc;
  return g;
}

Matrix observedInfoBetaSigma(const ModelParams& params, const Dataset& data) {
  requireScale(params.sigma, "observedInfoBetaSigma");
  const double nu = params.dof.nu();
  const double sigma = params.sigma;
  const double s2 = sigma * sigma;
  const std::size_t n = data.n();
  const std::size_t p = data.p();
  const Vector r = residuals(params.beta, data);

  Matrix info(p + 1, p + 1, 0.0);
  double jss = -static_cast<double>(n) / s2;
  const double np1 = nu + 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double z = r[i] / sigma;
    const double z2 = z * z;
    const double d = nu + z2;
    const double d2 = d * d;
    const double* row = data.X.rowPtr(i);
    // beta-beta block: (nu+1)/sigma^2 * x x' (nu - z^2) / d^2.
    const double wbb = np1 / s2 * (nu - z2) / d2;
    for (std::size_t a = 0; a < p; ++a) {
      for (std::size_t b = a; b < p; ++b) {
        info(a, b) += wbb * row[a] * row[b];
      }
    }
    // beta-sigma block: 2 nu (nu+1) / sigma^2 * x z / d^2.
    const double wbs = 2.0 * nu * np1 / s2 * z / d2;
    for (std::size_t a = 0; a < p; ++a) info(a, p) += wbs * row[a];
    // sigma-sigma: -(n)/sigma^2 + (nu+1)/sigma^2 * sum [z^2/d + 2 nu z^2/d^2].
    jss += np1 / s2 * (z2 / d + 2.0 * nu * z2 / d2);
  }
  info(p, p) = jss;
  for (std::size_t a = 0; a < p + 1; ++a) {
    for (std::size_t b = a + 1; b < p + 1; ++b) info(b, a) = info(a, b);
  }
  return info;
}

Matrix expectedFisherInfo(const ModelParams& params, const Dataset& data) {
  requireScale(params.sigma, "expectedFisherInfo");
  const double nu = params.dof.nu();
  const double sigma = params.sigma;
  const double s2 = sigma * sigma;
  const double n = static_cast<double>(data.n());
  const std::size_t p = data.p();

  Matrix info(p + 2, p + 2, 0.0);
  // beta block: (nu+1) / ((nu+3) sigma^2) * X'X.
  const double wb = (nu + 1.0) / ((nu + 3.0) * s2);
  for (std::size_t i = 0; i < data.n(); ++i) {
    const double* row = data.X.rowPtr(i);
    for (std::size_t a = 0; a < p; ++a) {
      for (std::size_t b = a; b < p; ++b) {
        info(a, b) += wb * row[a] * row[b];
      }
    }
  }
  // (sigma, sigma), (sigma, nu), (nu, nu) entries.
  info(p, p) = 2.0 * n * nu / (s2 * (nu + 3.0));
  info(p, p + 1) = -2.0 * n / (sigma * (nu + 1.0) * (nu + 3.0));
  const double bracket = trigammaHalfGap(0.5 * nu) -
                         2.0 * (nu + 5.0) / (nu * (nu + 1.0) * (nu + 3.0));
  info(p + 1, p + 1) = 0.25 * n * bracket;
  for (std::size_t a = 0; a < p + 2; ++a) {
    for (std::size_t b = a + 1; b < p + 2; ++b) info(b, a) = info(a, b);
  }
  return info;
}

}  // namespace trobust
