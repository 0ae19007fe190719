#include "trobust/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <string>

#include "trobust/errors.hpp"
#include "trobust/likelihood.hpp"
#include "trobust/priors.hpp"
#include "trobust/profile.hpp"

namespace trobust {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kLogTwoPi = 1.8378770664093454836;
constexpr double kLogSix = 1.7917594692280550008;

double parsePositiveReal(const std::string& text, const std::string& tag) {
  char* end = nullptr;
  const double value = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0' || !std::isfinite(value) || value <= 0.0) {
    throw SchemaError("method tag '" + tag + "': '" + text +
                      "' is not a positive number");
  }
  return value;
}

std::string formatReal(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", value);
  return buf;
}

// Boundary value of the Jeffreys joint criterion at the Gaussian limit,
// maximized over (beta, sigma) in closed form: beta is least squares and
// sigma^2 = RSS / (n + 1).
struct JeffreysBoundary {
  double value = -kInf;
  Vector beta;
  double sigma = 0.0;
};

JeffreysBoundary jeffreysBoundaryValue(const Dataset& data) {
  JeffreysBoundary out;
  const auto ls = solveLeastSquares(data.X, data.y);
  double yScale = 0.0;
  for (double v : data.y) yScale += v * v;
  if (ls.rss <= 1e-24 * std::max(1.0, yScale)) return out;  // degenerate
  const double n = static_cast<double>(data.n());
  const double sigma0 = std::sqrt(ls.rss / (n + 1.0));
  out.value = -(n + 1.0) * std::log(sigma0) - 0.5 * (n + 1.0) -
              0.5 * n * kLogTwoPi + 0.5 * kLogSix;
  out.beta = ls.coef;
  out.sigma = sigma0;
  return out;
}

NuEstimationResult jeffreysMapEstimate(const Dataset& data, const OptimControl& control) {
  NuEstimationResult result;
  result.method = NuMethod::JeffreysMAP;

  const FlatnessResult flat = flatnessCheck(data);
  result.flatnessDetected = flat.flat;
  result.flatnessStat = flat.statistic;

  const std::size_t p = data.p();
  const auto ls = solveLeastSquares(data.X, data.y);
  const double dfree = static_cast<double>(data.n() > p ? data.n() - p : 1);
  const double sigma0 = std::sqrt(std::max(ls.rss / dfree, 1e-300));

  // The joint search below starts from an identity metric, so its path is
  // not invariant to the problem's scaling: the (beta, sigma) curvature
  // carries 1/sigma^2 and the design's column norms while the omega block
  // does not, and badly scaled data can stall the search. The criterion is
  // exactly equivariant under both, so run everything on standardized data:
  // the response divided by the least-squares scale (nu-hat unchanged, the
  // value shifts by (n+1) log scale, undone on return) and each design
  // column divided by its root-mean-square (a linear reparameterization of
  // beta, transparent to both the value and nu-hat).
  const double scale = sigma0;
  Vector standardized(data.y);
  for (double& v : standardized) v /= scale;
  Matrix equilibrated(data.n(), p);
  for (std::size_t j = 0; j < p; ++j) {
    double sumSq = 0.0;
    for (std::size_t i = 0; i < data.n(); ++i) sumSq += data.X(i, j) * data.X(i, j);
    const double columnScale =
        std::sqrt(std::max(sumSq / static_cast<double>(data.n()), 1e-300));
    for (std::size_t i = 0; i < data.n(); ++i) {
      equilibrated(i, j) = data.X(i, j) / columnScale;
    }
  }
  const Dataset work(std::move(equilibrated), std::move(standardized));
  const auto lsWork = solveLeastSquares(work.X, work.y);
  const double valueShift =
      (static_cast<double>(data.n()) + 1.0) * std::log(scale);

  // Criterion in (beta, s = log sigma, omega): log-likelihood plus the
  // independence-Jeffreys log prior with the change of variable to omega
  // contributing -2 log omega.
  auto criterion = [&](const Vector& x) -> double {
    const double omega = x[p + 1];
    if (!(omega > 0.0) || omega > control.omegaMax) return -kInf;
    ModelParams params;
    params.beta.assign(x.begin(), x.begin() + static_cast<long>(p));
    params.sigma = std::exp(x[p]);
    params.dof = DegreesOfFreedom::finite(1.0 / omega);
    const auto loglik = detail::tryTLogLikelihood(params, work);
    if (!loglik) return -kInf;
    double value = *loglik;
    try {
      value += jeffreysIndependenceLogPrior(params.sigma, 1.0 / omega);
    } catch (const NumericError&) {
      return -kInf;
    }
    value -= 2.0 * std::log(omega);
    return std::isfinite(value) ? value : -kInf;
  };
  // Gradient: analytic in beta and s (the prior contributes -1 to the s
  // component), one numerical omega component.
  const Gradient gradient = [&](const Vector& x) -> Vector {
    const double omega = x[p + 1];
    ModelParams params;
    params.beta.assign(x.begin(), x.begin() + static_cast<long>(p));
    params.sigma = std::exp(x[p]);
    params.dof = DegreesOfFreedom::finite(1.0 / omega);
    Vector g(p + 2, 0.0);
    const Vector score = scoreBetaSigma(params, work);
    for (std::size_t j = 0; j < p; ++j) g[j] = score[j];
    g[p] = score[p] * params.sigma - 1.0;
    const double h = control.fdStep * std::max(omega, 1e-2);
    Vector probe = x;
    probe[p + 1] = omega + h;
    const double fp = criterion(probe);
    probe[p + 1] = omega - h;
    const double fm = criterion(probe);
    if (std::isfinite(fp) && std::isfinite(fm)) {
      g[p + 1] = (fp - fm) / (2.0 * h);
    } else {
      const double f0 = criterion(x);
      if (std::isfinite(fp)) {
        g[p + 1] = (fp - f0) / h;
      } else if (std::isfinite(fm)) {
        g[p + 1] = (f0 - fm) / h;
      }
    }
    return g;
  };

  double bestValue = -kInf;
  Vector bestX;
  bool bestConverged = false;
  int evaluations = 0;
  long iterations = 0;
  std::optional<WarmStart> chainStart;
  // The joint criterion is O(n) like the inner log-likelihood, so the
  // absolute gradient threshold scales with n for the same reason as in
  // innerMaximizeBetaSigma (which applies its own scaling internally).
  OptimControl jointControl = control;
  jointControl.gradientTolerance =
      control.gradientTolerance * std::max(1.0, static_cast<double>(data.n()));
  for (double w0 : control.omegaInit) {
    const double start =
        std::clamp(w0, 1e-2, control.omegaMax);  // interior start required
    Vector x0(p + 2, 0.0);
    // Seed the joint search from the profile fit at the starting omega.  Any
    // point on the profile curve dominates the flat small-omega plateau, and
    // the line search only accepts increases, so runs started here cannot
    // terminate on that plateau away from the actual interior mode.
    const InnerFit seed = innerMaximizeBetaSigma(
        DegreesOfFreedom::finite(1.0 / start), work, control, chainStart);
    if (seed.sigma > 0.0 && std::isfinite(seed.sigma)) {
      for (std::size_t j = 0; j < p; ++j) x0[j] = seed.beta[j];
      x0[p] = std::log(seed.sigma);
      chainStart = WarmStart{seed.beta, seed.sigma};
    } else {
      for (std::size_t j = 0; j < p; ++j) x0[j] = lsWork.coef[j];
      x0[p] = 0.0;  // log of the standardized least-squares scale
    }
    x0[p + 1] = start;
    if (!std::isfinite(criterion(x0))) continue;
    const OptimResult res =
        quasiNewtonMaximize(criterion, x0, jointControl, &gradient);
    ++evaluations;
    iterations += res.iterations;
    if (res.value > bestValue) {
      bestValue = res.value;
      bestX = res.argmax;
      bestConverged = res.converged;
    }
  }

  const JeffreysBoundary boundary = jeffreysBoundaryValue(work);
  result.outerEvaluations = evaluations;
  result.innerIterationsTotal = iterations;

  if (!std::isfinite(bestValue) && !std::isfinite(boundary.value)) {
    result.converged = false;
    result.nuHat = DegreesOfFreedom::gaussianLimit();
    result.omegaHat = 0.0;
    result.objectiveValue = -kInf;
    return result;
  }

  if (boundary.value >= bestValue) {
    result.converged = true;
    result.nuHat = DegreesOfFreedom::gaussianLimit();
    result.omegaHat = 0.0;
    result.objectiveValue = boundary.value - valueShift;
    return result;
  }

  const double omegaHat = bestX[p + 1];
  result.converged = bestConverged;
  result.objectiveValue = bestValue - valueShift;
  result.omegaHat = omegaHat;
  if (omegaHat <= control.omegaCap) {
    // The best run pressed into the cap region, where the reporting
    // convention is the closed-form Gaussian limit. That answer is exact, and
    // a boundary supremum cannot satisfy the interior first-order test the
    // quasi-Newton convergence flag encodes, so the flag is set here rather
    // than inherited from the search.
    result.converged = true;
    result.nuHat = DegreesOfFreedom::gaussianLimit();
    return result;
  }
  const double nuHat = 1.0 / omegaHat;
  result.nuHat = DegreesOfFreedom::finite(nuHat);

  // Wald-type SE from the profile curvature at nu-hat, warm-started from the
  // joint mode's (beta, sigma). The curvature in nu is scale-invariant, so
  // the standardized data serves directly.
  try {
    WarmStart warm;
    warm.beta.assign(bestX.begin(), bestX.begin() + static_cast<long>(p));
    warm.sigma = std::exp(bestX[p]);
    const InnerFit fit =
        innerMaximizeBetaSigma(result.nuHat, work, control, warm);
    if (fit.converged) {
      const double jp = profileInfoNu(nuHat, fit.beta, fit.sigma, work);
      result.waldSE = 1.0 / std::sqrt(jp);
    }
  } catch (const NumericError&) {
    result.waldSE = std::nullopt;
  }
  return result;
}

std::size_t requireFullData(const Dataset& data) { return data.n(); }

}  // namespace

MethodSpec parseMethodTag(const std::string& tag) {
  MethodSpec spec;
  if (tag == "profile") {
    spec.kind = EstimatorKind::Profile;
  } else if (tag == "adjusted") {
    spec.kind = EstimatorKind::AdjustedProfile;
  } else if (tag == "jeffreys") {
    spec.kind = EstimatorKind::JeffreysMAP;
  } else if (tag == "pseudo") {
    spec.kind = EstimatorKind::PseudoPosteriorMAP;
  } else if (tag == "ols") {
    spec.kind = EstimatorKind::OLS;
  } else if (tag == "huber") {
    spec.kind = EstimatorKind::Huber;
  } else if (tag.rfind("huber:", 0) == 0) {
    spec.kind = EstimatorKind::Huber;
    const std::string rest = tag.substr(6);
    if (rest == "auto") {
      spec.huberAuto = true;
    } else {
      spec.huberC = parsePositiveReal(rest, tag);
    }
  } else if (tag.rfind("fixed:", 0) == 0) {
    spec.kind = EstimatorKind::FixedNu;
    spec.fixedNu = parsePositiveReal(tag.substr(6), tag);
  } else {
    throw SchemaError(
        "unknown method tag '" + tag +
        "' (expected profile, adjusted, jeffreys, pseudo, fixed:<nu>, ols, "
        "huber, huber:auto, or huber:<c>)");
  }
  return spec;
}

std::string methodTag(const MethodSpec& spec) {
  switch (spec.kind) {
    case EstimatorKind::Profile: return "profile";
    case EstimatorKind::AdjustedProfile: return "adjusted";
    case EstimatorKind::JeffreysMAP: return "jeffreys";
    case EstimatorKind::PseudoPosteriorMAP: return "pseudo";
    case EstimatorKind::FixedNu: return "fixed:" + formatReal(spec.fixedNu);
    case EstimatorKind::OLS: return "ols";
    case EstimatorKind::Huber:
      if (spec.huberAuto) return "huber:auto";
      if (spec.huberC == 1.345) return "huber";
      return "huber:" + formatReal(spec.huberC);
  }
  throw SchemaError("methodTag: unhandled estimator kind");
}

std::string nuMethodName(NuMethod method) {
  switch (method) {
    case NuMethod::Profile: return "profile";
    case NuMethod::AdjustedProfile: return "adjusted";
    case NuMethod::JeffreysMAP: return "jeffreys";
    case NuMethod::PseudoPosteriorMAP: return "pseudo";
    case NuMethod::Fixed: return "fixed";
  }
  return "unknown";
}

NuEstimationResult estimateNu(NuMethod method, const Dataset& data,
                              const OptimControl& control) {
  switch (method) {
    case NuMethod::Profile:
      return outerMaximizeOmega(NuObjective::Profile, data, control);
    case NuMethod::AdjustedProfile:
      return outerMaximizeOmega(NuObjective::AdjustedProfile, data, control);
    case NuMethod::PseudoPosteriorMAP:
      return outerMaximizeOmega(NuObjective::PseudoPosterior, data, control);
    case NuMethod::JeffreysMAP:
      return jeffreysMapEstimate(data, control);
    case NuMethod::Fixed:
      throw DomainError("estimateNu: Fixed is not an estimation method; use "
                        "estimateNuFixed");
  }
  throw DomainError("estimateNu: unhandled method");
}

NuEstimationResult estimateNuFixed(double nu, const Dataset& data) {
  NuEstimationResult result;
  result.method = NuMethod::Fixed;
  result.nuHat = DegreesOfFreedom::finite(nu);
  result.omegaHat = 1.0 / nu;
  result.objectiveValue = kNaN;
  result.converged = true;
  const FlatnessResult flat = flatnessCheck(data);
  result.flatnessDetected = flat.flat;
  result.flatnessStat = flat.statistic;
  return result;
}

double jeffreysJointLogDensity(const ModelParams& params, const Dataset& data) {
  return tLogLikelihood(params, data) +
         jeffreysIndependenceLogPrior(params.sigma, params.dof.nu());
}

FitResult fitTRegression(const Dataset& data, const DegreesOfFreedom& dof,
                         const OptimControl& control) {
  if (dof.isGaussian()) {
    FitResult out = fitOLS(data);
    out.method = "gaussian";
    out.nuUsed = DegreesOfFreedom::gaussianLimit();
    if (!out.diagnostics.degenerate) {
      // Report the maximum-likelihood scale and matching information-based
      // standard errors rather than the degrees-of-freedom-corrected ones.
      const double n = static_cast<double>(data.n());
      const double p = static_cast<double>(data.p());
      const double ratio = std::sqrt((n - p) / n);
      out.sigma *= ratio;
      if (out.stdErrors) {
        for (double& se : *out.stdErrors) se *= ratio;
        // sigma's own SE under the Gaussian information is sigma / sqrt(2n).
        (*out.stdErrors)[data.p()] = out.sigma / std::sqrt(2.0 * n);
      }
    }
    return out;
  }

  FitResult out;
  out.method = "t";
  out.nuUsed = dof;
  const InnerFit fit = innerMaximizeBetaSigma(dof, data, control);
  out.beta = fit.beta;
  out.sigma = fit.sigma;
  out.loglik = fit.loglik;
  out.diagnostics.iterations = fit.iterations;
  out.diagnostics.converged = fit.converged;
  out.diagnostics.loglikTrace = fit.loglikTrace;

  ModelParams params{fit.beta, fit.sigma, dof};
  try {
    const Matrix cov = choleskyInverse(observedInfoBetaSigma(params, data));
    Vector se(data.p() + 1, 0.0);
    for (std::size_t j = 0; j < se.size(); ++j) se[j] = std::sqrt(cov(j, j));
    out.stdErrors = std::move(se);
  } catch (const NumericError&) {
    out.stdErrors = std::nullopt;
  }
  return out;
}

FitResult fitOLS(const Dataset& data) {
  const std::size_t n = requireFullData(data);
  const std::size_t p = data.p();
  const auto ls = solveLeastSquares(data.X, data.y);

  FitResult out;
  out.method = "ols";
  out.beta = ls.coef;
  out.nuUsed = DegreesOfFreedom::gaussianLimit();
  out.diagnostics.converged = true;

  double yScale = 0.0;
  for (double v : data.y) yScale += v * v;
  if (ls.rss <= 1e-24 * std::max(1.0, yScale)) {
    out.sigma = 0.0;
    out.loglik = kNaN;
    out.diagnostics.degenerate = true;
    return out;
  }

  const double dfree = static_cast<double>(n - p);
  out.sigma = std::sqrt(ls.rss / dfree);
  const double sigmaML = std::sqrt(ls.rss / static_cast<double>(n));
  out.loglik = gaussianLogLikelihood(ls.coef, sigmaML, data);

  Matrix xtx(p, p, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = data.X.rowPtr(i);
    for (std::size_t a = 0; a < p; ++a)
      for (std::size_t b = a; b < p; ++b) xtx(a, b) += row[a] * row[b];
  }
  for (std::size_t a = 0; a < p; ++a)
    for (std::size_t b = a + 1; b < p; ++b) xtx(b, a) = xtx(a, b);
  try {
    const Matrix inv = choleskyInverse(std::move(xtx));
    Vector se(p + 1, 0.0);
    for (std::size_t j = 0; j < p; ++j) se[j] = out.sigma * std::sqrt(inv(j, j));
    se[p] = out.sigma / std::sqrt(2.0 * dfree);
    out.stdErrors = std::move(se);
  } catch (const NumericError&) {
    out.stdErrors = std::nullopt;
  }
  return out;
}

double huberRho(double u, double c) {
  const double a = std::abs(u);
  return a <= c ? 0.5 * u * u : c * a - 0.5 * c * c;
}

double huberWeight(double u, double c) {
  const double a = std::abs(u);
  return a <= c ? 1.0 : c / a;
}

namespace {

double medianOf(Vector v) {
  const std::size_t n = v.size();
  const std::size_t mid = n / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<long>(mid), v.end());
  double hi = v[mid];
  if (n % 2 == 1) return hi;
  std::nth_element(v.begin(), v.begin() + static_cast<long>(mid) - 1,
                   v.begin() + static_cast<long>(mid));
  return 0.5 * (v[mid - 1] + hi);
}

struct HuberIrlsFit {
  Vector beta;
  double scale = 0.0;
  int iterations = 0;
  bool converged = false;
  bool degenerate = false;
};

HuberIrlsFit huberIrls(const Dataset& data, double c, int maxIterations,
                       double tolerance, const Vector& start) {
  const std::size_t n = data.n();
  const std::size_t p = data.p();
  HuberIrlsFit fit;
  fit.beta = start;

  Matrix xw(n, p, 0.0);
  Vector yw(n, 0.0);
  for (int iter = 0; iter < maxIterations; ++iter) {
    Vector r = residuals(fit.beta, data);
    Vector centered = r;
    const double med = medianOf(r);
    for (double& v : centered) v = std::abs(v - med);
    const double scale = 1.4826 * medianOf(centered);
    if (!(scale > 1e-12 * std::max(1.0, std::abs(med)))) {
      fit.scale = 0.0;
      fit.degenerate = true;
      fit.iterations = iter;
      return fit;
    }
    fit.scale = scale;
    for (std::size_t i = 0; i < n; ++i) {
      const double w = std::sqrt(huberWeight(r[i] / scale, c));
      const double* row = data.X.rowPtr(i);
      for (std::size_t j = 0; j < p; ++j) xw(i, j) = w * row[j];
      yw[i] = w * data.y[i];
    }
    const auto ls = solveLeastSquares(xw, yw);
    double delta = 0.0;
    double scaleRef = 1.0;
    for (std::size_t j = 0; j < p; ++j) {
      delta = std::max(delta, std::abs(ls.coef[j] - fit.beta[j]));
      scaleRef = std::max(scaleRef, std::abs(ls.coef[j]));
    }
    fit.beta = ls.coef;
    fit.iterations = iter + 1;
    if (delta <= tolerance * scaleRef) {
      fit.converged = true;
      break;
    }
  }
  return fit;
}

// Estimated asymptotic variance factor of the Huber coefficient estimator:
// scale^2 * mean(psi^2) / mean(psi')^2 at the converged fit.
double huberVarianceProxy(const Dataset& data, const HuberIrlsFit& fit, double c) {
  if (fit.degenerate || !(fit.scale > 0.0)) return kInf;
  const Vector r = residuals(fit.beta, data);
  double psi2 = 0.0;
  double psiPrime = 0.0;
  for (double ri : r) {
    const double u = ri / fit.scale;
    const double psi = std::clamp(u, -c, c);
    psi2 += psi * psi;
    if (std::abs(u) <= c) psiPrime += 1.0;
  }
  const double n = static_cast<double>(data.n());
  psi2 /= n;
  psiPrime /= n;
  if (!(psiPrime > 0.0)) return kInf;
  return fit.scale * fit.scale * psi2 / (psiPrime * psiPrime);
}

}  // namespace

FitResult fitHuber(const Dataset& data, const HuberConfig& config) {
  if (!(config.c > 0.0)) {
    throw DomainError("fitHuber: tuning constant must be positive, got " +
                      std::to_string(config.c));
  }
  const auto ls = solveLeastSquares(data.X, data.y);

  HuberIrlsFit chosen;
  double chosenC = config.c;
  if (config.autoTune) {
    double bestV = kInf;
    bool any = false;
    for (int k = 0; k <= 18; ++k) {
      const double c = 0.7 + 0.1 * k;  // grid 0.7 .. 2.5
      const HuberIrlsFit fit =
          huberIrls(data, c, config.maxIterations, config.tolerance, ls.coef);
      const double v = huberVarianceProxy(data, fit, c);
      if (v < bestV) {
        bestV = v;
        chosen = fit;
        chosenC = c;
        any = true;
      }
    }
    if (!any) {
      chosen = huberIrls(data, config.c, config.maxIterations, config.tolerance,
                         ls.coef);
      chosenC = config.c;
    }
  } else {
    chosen = huberIrls(data, config.c, config.maxIterations, config.tolerance,
                       ls.coef);
  }

  FitResult out;
  out.method = "huber";
  out.beta = chosen.beta;
  out.sigma = chosen.scale;
  out.nuUsed = DegreesOfFreedom::gaussianLimit();
  out.loglik = kNaN;
  out.huberC = chosenC;
  out.diagnostics.iterations = chosen.iterations;
  out.diagnostics.converged = chosen.converged;
  out.diagnostics.degenerate = chosen.degenerate;
  return out;
}

PipelineResult runPipeline(const MethodSpec& spec, const Dataset& data,
                           const OptimControl& control) {
  PipelineResult out;
  switch (spec.kind) {
    case EstimatorKind::Profile:
    case EstimatorKind::AdjustedProfile:
    case EstimatorKind::JeffreysMAP:
    case EstimatorKind::PseudoPosteriorMAP: {
      NuMethod method = NuMethod::Profile;
      if (spec.kind == EstimatorKind::AdjustedProfile) method = NuMethod::AdjustedProfile;
      if (spec.kind == EstimatorKind::JeffreysMAP) method = NuMethod::JeffreysMAP;
      if (spec.kind == EstimatorKind::PseudoPosteriorMAP) method = NuMethod::PseudoPosteriorMAP;
      out.nuEstimate = estimateNu(method, data, control);
      out.fit = fitTRegression(data, out.nuEstimate->nuHat, control);
      out.fit.method = methodTag(spec);
      break;
    }
    case EstimatorKind::FixedNu: {
      out.nuEstimate = estimateNuFixed(spec.fixedNu, data);
      out.fit = fitTRegression(data, out.nuEstimate->nuHat, control);
      out.fit.method = methodTag(spec);
      break;
    }
    case EstimatorKind::OLS:
      out.fit = fitOLS(data);
      break;
    case EstimatorKind::Huber: {
      HuberConfig cfg;
      cfg.c = spec.huberC;
      cfg.autoTune = spec.huberAuto;
      out.fit = fitHuber(data, cfg);
      out.fit.method = methodTag(spec);
      break;
    }
  }
  return out;
}

}  // namespace trobust
