#include "trobust/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "trobust/errors.hpp"
#include "trobust/likelihood.hpp"
#include "trobust/priors.hpp"
#include "trobust/special.hpp"

namespace trobust {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct GaussianFit {
  Vector beta;
  double sigmaML = 0.0;
  double rss = 0.0;
  double loglik = 0.0;
};

GaussianFit gaussianClosedForm(const Dataset& data) {
  const auto ls = solveLeastSquares(data.X, data.y);
  const double n = static_cast<double>(data.n());
  GaussianFit fit;
  fit.beta = ls.coef;
  fit.rss = ls.rss;
  double yScale = 0.0;
  for (double v : data.y) yScale += v * v;
  if (ls.rss <= 1e-24 * std::max(1.0, yScale)) {
    throw DegenerateInformationError(
        "gaussian fit: residual variance is numerically zero", kInf);
  }
  fit.sigmaML = std::sqrt(ls.rss / n);
  fit.loglik = gaussianLogLikelihood(fit.beta, fit.sigmaML, data);
  return fit;
}

// Log-determinant of the Gaussian observed information in (beta, sigma) at
// the maximum-likelihood point: block diagonal with X'X / sigma^2 and
// 2n / sigma^2.
double gaussianInfoLogDet(const Dataset& data, double sigmaML) {
  const std::size_t p = data.p();
  Matrix xtx(p, p, 0.0);
  for (std::size_t i = 0; i < data.n(); ++i) {
    const double* row = data.X.rowPtr(i);
    for (std::size_t a = 0; a < p; ++a)
      for (std::size_t b = a; b < p; ++b) xtx(a, b) += row[a] * row[b];
  }
  for (std::size_t a = 0; a < p; ++a)
    for (std::size_t b = a + 1; b < p; ++b) xtx(b, a) = xtx(a, b);
  const double n = static_cast<double>(data.n());
  return choleskyLogDet(std::move(xtx)) + std::log(2.0 * n) -
         (2.0 * static_cast<double>(p) + 2.0) * std::log(sigmaML);
}

}  // namespace

InnerFit innerMaximizeBetaSigma(const DegreesOfFreedom& dof, const Dataset& data,
                                const OptimControl& control,
                                const std::optional<WarmStart>& warm) {
  InnerFit fit;
  if (dof.isGaussian()) {
    const GaussianFit g = gaussianClosedForm(data);
    fit.beta = g.beta;
    fit.sigma = g.sigmaML;
    fit.loglik = g.loglik;
    fit.iterations = 0;
    fit.converged = true;
    return fit;
  }

  const std::size_t p = data.p();
  Vector start(p + 1, 0.0);
  if (warm.has_value()) {
    if (warm->beta.size() != p) {
      throw DimensionError("innerMaximizeBetaSigma: warm start has " +
                           std::to_string(warm->beta.size()) +
                           " coefficients, design has " + std::to_string(p));
    }
    for (std::size_t j = 0; j < p; ++j) start[j] = warm->beta[j];
    start[p] = std::log(warm->sigma);
  } else {
    const auto ls = solveLeastSquares(data.X, data.y);
    const double dfree = static_cast<double>(data.n() > p ? data.n() - p : 1);
    const double sigma0 = std::sqrt(ls.rss / dfree);
    if (!(sigma0 > 1e-150)) {
      throw DegenerateInformationError(
          "innerMaximizeBetaSigma: residual scale is numerically zero",
          dof.nu());
    }
    for (std::size_t j = 0; j < p; ++j) start[j] = ls.coef[j];
    start[p] = std::log(sigma0);
  }

  // Optimize over (beta, log sigma); the log parameterization keeps the
  // positivity constraint implicit and makes the scale gradient unit-free.
  Objective f = [&](const Vector& x) {
    ModelParams params;
    params.beta.assign(x.begin(), x.begin() + static_cast<long>(p));
    params.sigma = std::exp(x[p]);
    params.dof = dof;
    const auto value = detail::tryTLogLikelihood(params, data);
    return value ? *value : -kInf;
  };
  Gradient grad = [&](const Vector& x) {
    ModelParams params;
    params.beta.assign(x.begin(), x.begin() + static_cast<long>(p));
    params.sigma = std::exp(x[p]);
    params.dof = dof;
    Vector g = scoreBetaSigma(params, data);
    g[p] *= params.sigma;  // d/d(log sigma) = sigma * d/d(sigma)
    return g;
  };

  // The score components are sums over observations: both their natural
  // scale and their attainable rounding floor grow linearly with n (the
  // log-likelihood itself is O(n), so near the optimum a step that would
  // shave the gradient below a fixed absolute threshold improves the value
  // by less than its rounding error and the line search stalls).  Scaling
  // the threshold by n keeps the certified parameter accuracy n-independent,
  // since the curvature grows with n at the same rate.
  OptimControl scaled = control;
  scaled.gradientTolerance =
      control.gradientTolerance * std::max(1.0, static_cast<double>(data.n()));
  const OptimResult res = quasiNewtonMaximize(f, start, scaled, &grad);
  fit.beta.assign(res.argmax.begin(), res.argmax.begin() + static_cast<long>(p));
  fit.sigma = std::exp(res.argmax[p]);
  fit.loglik = res.value;
  fit.iterations = res.iterations;
  fit.converged = res.converged;
  fit.loglikTrace = res.valueTrace;

  // Newton polish with the analytic observed information. The quasi-Newton
  // loop stops inside a tolerance ball whose radius tracks the line search's
  // value-rounding floor; quantities evaluated at the returned point with
  // nonzero gradient there (the adjusted profile's log-determinant term, the
  // curvature behind Wald standard errors) see that radius linearly. One or
  // two damped Newton steps shrink it quadratically at the cost of a single
  // matrix factorization per step, making those downstream values
  // insensitive to the stopping tolerance.
  if (fit.converged) {
    ModelParams params;
    params.dof = dof;
    for (int step = 0; step < 2; ++step) {
      params.beta = fit.beta;
      params.sigma = fit.sigma;
      Vector s;
      Matrix info;
      try {
        s = scoreBetaSigma(params, data);
        info = observedInfoBetaSigma(params, data);
      } catch (const NumericError&) {
        break;
      }
      Vector delta;
      try {
        delta = choleskySolve(info, s);
      } catch (const NumericError&) {
        break;  // not positive definite here; keep the quasi-Newton point
      }
      bool improved = false;
      double damping = 1.0;
      for (int attempt = 0; attempt < 3 && !improved; ++attempt, damping *= 0.5) {
        ModelParams trial = params;
        for (std::size_t j = 0; j < p; ++j) trial.beta[j] += damping * delta[j];
        trial.sigma += damping * delta[p];
        if (!(trial.sigma > 0.0)) continue;
        const auto value = detail::tryTLogLikelihood(trial, data);
        if (value && *value >= fit.loglik) {
          fit.beta = trial.beta;
          fit.sigma = trial.sigma;
          fit.loglik = *value;
          improved = true;
        }
      }
      if (!improved) break;
    }
  }
  return fit;
}

ProfilePoint profileLogLik(double nu, const Dataset& data, const OptimControl& control) {
  const InnerFit fit =
      innerMaximizeBetaSigma(DegreesOfFreedom::finite(nu), data, control);
  if (!fit.converged) {
    throw NonConvergenceError(
        "profileLogLik: inner fit did not converge at nu = " + std::to_string(nu),
        fit.iterations);
  }
  return ProfilePoint{fit.loglik, fit.beta, fit.sigma};
}

ProfilePoint adjustedProfileLogLik(double nu, const Dataset& data,
                                   const OptimControl& control) {
  ProfilePoint point = profileLogLik(nu, data, control);
  ModelParams params{point.betaHat, point.sigmaHat, DegreesOfFreedom::finite(nu)};
  Matrix info = observedInfoBetaSigma(params, data);
  double logDet = 0.0;
  try {
    logDet = choleskyLogDet(std::move(info));
  } catch (const SingularMatrixError&) {
    throw DegenerateInformationError(
        "adjustedProfileLogLik: observed information in (beta, sigma) is not "
        "positive definite at nu = " + std::to_string(nu),
        nu);
  }
  point.value -= 0.5 * logDet;
  return point;
}

double profileInfoNu(double nu, const Vector& beta, double sigma, const Dataset& data) {
  if (!(nu > 0.0) || !std::isfinite(nu)) {
    throw DomainError("profileInfoNu: nu must be positive and finite, got " +
                      std::to_string(nu));
  }
  const std::size_t n = data.n();
  const std::size_t p = data.p();
  const Vector r = residuals(beta, data);

  // d^2 l / d nu^2 at (beta, sigma, nu): the trigamma pair is evaluated via
  // the cancellation-free gap, psi'((nu+1)/2) - psi'(nu/2) = -gap(nu/2).
  double lnunu = -0.25 * static_cast<double>(n) * trigammaHalfGap(0.5 * nu);
  Vector q(p + 1, 0.0);  // (d^2 l / d nu d beta, d^2 l / d nu d sigma)
  for (std::size_t i = 0; i < n; ++i) {
    const double z = r[i] / sigma;
    const double z2 = z * z;
    const double d = nu + z2;
    const double d2 = d * d;
    lnunu += 0.5 * (1.0 / nu - 1.0 / d - (z2 - 1.0) / d2);
    const double* row = data.X.rowPtr(i);
    const double wb = z * (z2 - 1.0) / d2 / sigma;
    for (std::size_t j = 0; j < p; ++j) q[j] += wb * row[j];
    q[p] += z2 * (z2 - 1.0) / d2 / sigma;
  }

  ModelParams params{beta, sigma, DegreesOfFreedom::finite(nu)};
  Matrix jll = observedInfoBetaSigma(params, data);
  Vector u;
  try {
    u = choleskySolve(std::move(jll), q);
  } catch (const SingularMatrixError&) {
    throw DegenerateInformationError(
        "profileInfoNu: nuisance information is not positive definite at nu = " +
            std::to_string(nu),
        nu);
  }
  const double jp = -lnunu - dot(q, u);
  if (!(jp > 0.0) || !std::isfinite(jp)) {
    throw DegenerateInformationError(
        "profileInfoNu: non-positive profile curvature at nu = " + std::to_string(nu),
        nu);
  }
  return jp;
}

FlatnessResult flatnessStatistic(const Vector& z) {
  FlatnessResult out;
  double stat = 0.0;
  for (double zi : z) {
    const double t = zi * zi - 1.0;
    stat += t * t;
  }
  out.statistic = stat;
  out.flat = stat < 2.0 * static_cast<double>(z.size());
  return out;
}

FlatnessResult flatnessCheck(const Dataset& data) {
  const auto ls = solveLeastSquares(data.X, data.y);
  const double n = static_cast<double>(data.n());
  const double sigmaML = std::sqrt(ls.rss / n);
  Vector r = residuals(ls.coef, data);
  if (!(sigmaML > 0.0)) {
    // Exact fit: standardized residuals are all zero, trivially flat.
    FlatnessResult out;
    out.statistic = n;
    out.flat = true;
    return out;
  }
  for (double& ri : r) ri /= sigmaML;
  return flatnessStatistic(r);
}

namespace {

// Objective over omega = 1/nu with memoized values, warm-started inner fits,
// and per-omega fit storage so the best point's (beta, sigma) is recoverable.
class OmegaEvaluator {
 public:
  OmegaEvaluator(NuObjective kind, const Dataset& data, const OptimControl& control)
      : kind_(kind), data_(data), control_(control) {}

  double operator()(double omega) {
    if (auto it = cache_.find(omega); it != cache_.end()) return it->second;
    ++evaluations_;
    double value = -kInf;
    if (omega <= 0.0) {
      value = (omega < 0.0) ? -kInf : gaussianBranch();
    } else {
      value = interior(omega);
    }
    cache_.emplace(omega, value);
    return value;
  }

  double gaussianBranch() {
    if (gaussianValue_.has_value()) return *gaussianValue_;
    double value = -kInf;
    if (kind_ != NuObjective::PseudoPosterior) {
      try {
        const GaussianFit g = gaussianClosedForm(data_);
        value = g.loglik;
        if (kind_ == NuObjective::AdjustedProfile) {
          value -= 0.5 * gaussianInfoLogDet(data_, g.sigmaML);
        }
      } catch (const NumericError&) {
        value = -kInf;
      }
    }
    gaussianValue_ = value;
    return value;
  }

  const InnerFit* fitAt(double omega) const {
    auto it = fits_.find(omega);
    return it == fits_.end() ? nullptr : &it->second;
  }

  int evaluations() const { return evaluations_; }
  long innerIterations() const { return innerIterations_; }

 private:
  double interior(double omega) {
    const double nu = 1.0 / omega;
    std::optional<WarmStart> warm;
    if (control_.warmStartInner && warm_.has_value()) warm = warm_;
    InnerFit fit;
    try {
      fit = innerMaximizeBetaSigma(DegreesOfFreedom::finite(nu), data_, control_, warm);
    } catch (const NumericError&) {
      return -kInf;
    }
    innerIterations_ += fit.iterations;
    if (!fit.converged) return -kInf;
    warm_ = WarmStart{fit.beta, fit.sigma};

    double value = fit.loglik;
    if (kind_ == NuObjective::AdjustedProfile) {
      ModelParams params{fit.beta, fit.sigma, DegreesOfFreedom::finite(nu)};
      try {
        value -= 0.5 * choleskyLogDet(observedInfoBetaSigma(params, data_));
      } catch (const NumericError&) {
        return -kInf;
      }
    } else if (kind_ == NuObjective::PseudoPosterior) {
      try {
        value += nuBlockLogPrior(nu);
      } catch (const NumericError&) {
        return -kInf;
      }
    }
    if (std::isfinite(value)) fits_[omega] = std::move(fit);
    return value;
  }

  NuObjective kind_;
  const Dataset& data_;
  const OptimControl& control_;
  std::map<double, double> cache_;
  std::map<double, InnerFit> fits_;
  std::optional<WarmStart> warm_;
  std::optional<double> gaussianValue_;
  int evaluations_ = 0;
  long innerIterations_ = 0;
};

NuMethod toNuMethod(NuObjective kind) {
  switch (kind) {
    case NuObjective::Profile: return NuMethod::Profile;
    case NuObjective::AdjustedProfile: return NuMethod::AdjustedProfile;
    case NuObjective::PseudoPosterior: return NuMethod::PseudoPosteriorMAP;
  }
  return NuMethod::Profile;
}

}  // namespace

double nuObjectiveValue(NuObjective kind, double omega, const Dataset& data,
                        const OptimControl& control) {
  if (omega < 0.0 || !std::isfinite(omega)) {
    throw DomainError("nuObjectiveValue: omega must be finite and >= 0, got " +
                      std::to_string(omega));
  }
  OmegaEvaluator eval(kind, data, control);
  return eval(omega);
}

NuEstimationResult outerMaximizeOmega(NuObjective kind, const Dataset& data,
                                      const OptimControl& control) {
  NuEstimationResult result;
  result.method = toNuMethod(kind);

  const FlatnessResult flat = flatnessCheck(data);
  result.flatnessDetected = flat.flat;
  result.flatnessStat = flat.statistic;

  OmegaEvaluator eval(kind, data, control);
  const double omegaMax = control.omegaMax;

  double bestX = 0.0;
  double bestV = -kInf;
  auto consider = [&](double x, double v) {
    if (v > bestV) {
      bestV = v;
      bestX = x;
    }
  };

  for (double w0 : control.omegaInit) {
    const double start = std::clamp(w0, 0.0, omegaMax);
    const auto br = brentMaximize([&](double w) { return eval(w); }, 0.0,
                                  omegaMax, start, 1e-8, 200);
    consider(br.x, br.value);
  }
  // Both interval ends compete as candidates; Brent can stall short of them.
  consider(0.0, eval(0.0));
  consider(omegaMax, eval(omegaMax));

  result.outerEvaluations = eval.evaluations();
  result.innerIterationsTotal = eval.innerIterations();

  if (!std::isfinite(bestV)) {
    result.converged = false;
    result.omegaHat = 0.0;
    result.nuHat = DegreesOfFreedom::gaussianLimit();
    result.objectiveValue = bestV;
    return result;
  }

  result.converged = true;
  result.objectiveValue = bestV;
  result.omegaHat = bestX;
  if (bestX <= control.omegaCap) {
    result.nuHat = DegreesOfFreedom::gaussianLimit();
    return result;
  }

  const double nuHat = 1.0 / bestX;
  result.nuHat = DegreesOfFreedom::finite(nuHat);
  if (const InnerFit* fit = eval.fitAt(bestX)) {
    try {
      const double jp = profileInfoNu(nuHat, fit->beta, fit->sigma, data);
      result.waldSE = 1.0 / std::sqrt(jp);
    } catch (const NumericError&) {
      result.waldSE = std::nullopt;
    }
  }
  return result;
}

}  // namespace trobust
