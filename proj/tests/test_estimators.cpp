#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "support.hpp"
#include "trobust/errors.hpp"
#include "trobust/estimators.hpp"
#include "trobust/likelihood.hpp"
#include "trobust/stackloss.hpp"

using namespace trobust;
using testsupport::closeAbs;
using testsupport::closeRel;

TEST_SUITE("estimators") {

TEST_CASE("method tags parse and print consistently") {
  const char* roundTrips[] = {"profile", "adjusted", "jeffreys",   "pseudo",
                              "ols",     "huber",    "huber:auto", "fixed:2.5",
                              "fixed:10", "huber:0.8"};
  for (const char* tag : roundTrips) {
    CHECK_MESSAGE(methodTag(parseMethodTag(tag)) == tag, "tag=", tag);
  }
  CHECK(parseMethodTag("fixed:3").kind == EstimatorKind::FixedNu);
  CHECK(parseMethodTag("fixed:3").fixedNu == 3.0);
  CHECK(parseMethodTag("huber:auto").huberAuto);
  CHECK(parseMethodTag("huber").huberC == doctest::Approx(1.345));

  CHECK_THROWS_AS(parseMethodTag("bogus"), SchemaError);
  CHECK_THROWS_AS(parseMethodTag("fixed:"), SchemaError);
  CHECK_THROWS_AS(parseMethodTag("fixed:-1"), SchemaError);
  CHECK_THROWS_AS(parseMethodTag("huber:0"), SchemaError);
  CHECK_THROWS_AS(parseMethodTag(""), SchemaError);
}

TEST_CASE("stack-loss degrees of freedom land in the published neighborhood") {
  // The classical reanalyses of this dataset put the ML estimate near 1.1;
  // the adjustment pushes the estimate up, the pseudo posterior slightly down.
  const Dataset data = stacklossData();
  const OptimControl control;
  const NuEstimationResult profile = estimateNu(NuMethod::Profile, data, control);
  REQUIRE_FALSE(profile.nuHat.isGaussian());
  CHECK(profile.nuHat.nu() > 0.9);
  CHECK(profile.nuHat.nu() < 1.3);
  CHECK(profile.converged);

  const NuEstimationResult adjusted =
      estimateNu(NuMethod::AdjustedProfile, data, control);
  REQUIRE_FALSE(adjusted.nuHat.isGaussian());
  CHECK(adjusted.nuHat.nu() > profile.nuHat.nu());

  const NuEstimationResult jeffreys =
      estimateNu(NuMethod::JeffreysMAP, data, control);
  REQUIRE_FALSE(jeffreys.nuHat.isGaussian());
  CHECK(jeffreys.nuHat.nu() > 0.9);
  CHECK(jeffreys.nuHat.nu() < 1.5);

  const NuEstimationResult pseudo =
      estimateNu(NuMethod::PseudoPosteriorMAP, data, control);
  REQUIRE_FALSE(pseudo.nuHat.isGaussian());
  CHECK(pseudo.nuHat.nu() < profile.nuHat.nu());
}

TEST_CASE("all four estimates are invariant under response rescaling") {
  const Dataset data = testsupport::simulatedDataset(60, 2, 2.0, 1101);
  Vector shifted(data.y);
  for (std::size_t i = 0; i < data.n(); ++i) {
    double rowSum = 0.0;
    for (std::size_t j = 0; j < data.p(); ++j) rowSum += data.X(i, j);
    shifted[i] = 3.0 * data.y[i] + rowSum;
  }
  const Dataset moved(data.X, shifted);
  // This draw leaves the adjusted objective very flat (nu-hat near 20), where
  // inner-fit value noise turns into argmax drift; tighter inner fits keep
  // the two runs numerically equivariant.
  OptimControl control;
  control.gradientTolerance = 1e-8;
  for (NuMethod method : {NuMethod::Profile, NuMethod::AdjustedProfile,
                          NuMethod::JeffreysMAP, NuMethod::PseudoPosteriorMAP}) {
    const NuEstimationResult base = estimateNu(method, data, control);
    const NuEstimationResult trans = estimateNu(method, moved, control);
    REQUIRE_FALSE(base.nuHat.isGaussian());
    REQUIRE_FALSE(trans.nuHat.isGaussian());
    CHECK_MESSAGE(
        std::abs(trans.nuHat.nu() / base.nuHat.nu() - 1.0) <= 1e-4,
        nuMethodName(method), ": ", base.nuHat.nu(), " vs ", trans.nuHat.nu());
  }
}

TEST_CASE("jeffreys joint density shifts by -(n+1) log a under scaling") {
  const Dataset data = testsupport::simulatedDataset(30, 2, 2.0, 1102);
  const double n = 30.0;
  Vector scaled(data.y);
  const double a = 3.0;
  for (double& v : scaled) v *= a;
  const Dataset moved(data.X, scaled);

  for (double nu : {1.0, 2.5, 8.0}) {
    const Vector beta = {0.7, 1.2};
    Vector betaScaled = beta;
    for (double& b : betaScaled) b *= a;
    const double sigma = 1.1;
    const double base = jeffreysJointLogDensity(
        ModelParams{beta, sigma, DegreesOfFreedom::finite(nu)}, data);
    const double trans = jeffreysJointLogDensity(
        ModelParams{betaScaled, a * sigma, DegreesOfFreedom::finite(nu)}, moved);
    CHECK_MESSAGE(closeAbs(trans - base, -(n + 1.0) * std::log(a), 1e-8),
                  "nu=", nu);
  }
}

TEST_CASE("fixed-nu wrapper echoes its input and measures flatness") {
  const Dataset data = stacklossData();
  const NuEstimationResult r = estimateNuFixed(4.0, data);
  CHECK(r.method == NuMethod::Fixed);
  CHECK(r.converged);
  REQUIRE_FALSE(r.nuHat.isGaussian());
  CHECK(r.nuHat.nu() == 4.0);
  CHECK(r.flatnessStat == doctest::Approx(44.25550827054349));
  CHECK_FALSE(r.flatnessDetected);

  CHECK_THROWS_AS(estimateNu(NuMethod::Fixed, data, OptimControl{}), DomainError);
}

TEST_CASE("ols fit matches the classical stack-loss analysis") {
  const FitResult fit = fitOLS(stacklossData());
  CHECK(fit.method == "ols");
  CHECK(closeRel(fit.beta[0], -39.91967442012403, 1e-9));
  CHECK(closeRel(fit.beta[1], 0.7156402004852834, 1e-9));
  CHECK(closeRel(fit.beta[2], 1.2952861243885710, 1e-9));
  CHECK(closeRel(fit.beta[3], -0.1521225191486518, 1e-9));
  CHECK(closeRel(fit.sigma, 3.2433639181852227, 1e-10));
  // Log-likelihood is reported at the ML scale.
  CHECK(closeRel(fit.loglik, -52.28779550239973, 1e-10));
  REQUIRE(fit.stdErrors.has_value());
  CHECK(fit.stdErrors->size() == 5);  // four coefficients + sigma
  for (double se : *fit.stdErrors) CHECK(se > 0.0);
  CHECK(fit.nuUsed.isGaussian());
}

TEST_CASE("ols reports exact fits as degenerate instead of failing") {
  Matrix x(6, 2);
  Vector y(6);
  for (std::size_t i = 0; i < 6; ++i) {
    x(i, 0) = 1.0;
    x(i, 1) = static_cast<double>(i);
    y[i] = 3.0 + 2.0 * x(i, 1);
  }
  const FitResult fit = fitOLS(Dataset(std::move(x), std::move(y)));
  CHECK(fit.diagnostics.degenerate);
  CHECK(fit.sigma == 0.0);
  CHECK_FALSE(fit.stdErrors.has_value());
  CHECK(std::isnan(fit.loglik));
  CHECK(closeRel(fit.beta[1], 2.0, 1e-10));
}

TEST_CASE("t-regression at fixed nu: stationary, finite standard errors") {
  const Dataset data = testsupport::simulatedDataset(50, 2, 2.0, 1103);
  const FitResult fit =
      fitTRegression(data, DegreesOfFreedom::finite(2.0), OptimControl{});
  CHECK(fit.method == "t");
  CHECK(fit.diagnostics.converged);
  const Vector score = scoreBetaSigma(
      ModelParams{fit.beta, fit.sigma, DegreesOfFreedom::finite(2.0)}, data);
  for (double g : score) CHECK(std::abs(g) <= 1e-3);
  REQUIRE(fit.stdErrors.has_value());
  for (double se : *fit.stdErrors) CHECK(se > 0.0);

  // The gaussian marker routes to the least-squares fit at the ML scale.
  const FitResult gauss =
      fitTRegression(data, DegreesOfFreedom::gaussianLimit(), OptimControl{});
  CHECK(gauss.method == "gaussian");
  const FitResult ols = fitOLS(data);
  CHECK(closeRel(gauss.sigma, ols.sigma * std::sqrt(48.0 / 50.0), 1e-12));
  CHECK(closeRel(gauss.beta[0], ols.beta[0], 1e-12));
}

TEST_CASE("huber loss and weight closed forms") {
  CHECK(huberRho(1.0, 1.5) == doctest::Approx(0.5));
  CHECK(huberRho(3.0, 1.5) == doctest::Approx(3.375));
  CHECK(huberRho(-3.0, 1.5) == doctest::Approx(3.375));
  CHECK(huberWeight(1.0, 1.5) == doctest::Approx(1.0));
  CHECK(huberWeight(3.0, 1.5) == doctest::Approx(0.5));
  CHECK(huberWeight(-3.0, 1.5) == doctest::Approx(0.5));
}

TEST_CASE("huber with an enormous threshold reproduces least squares") {
  const Dataset data = testsupport::simulatedDataset(40, 3, 0.0, 1104);
  HuberConfig config;
  config.c = 1e6;
  const FitResult huber = fitHuber(data, config);
  const FitResult ols = fitOLS(data);
  for (std::size_t j = 0; j < 3; ++j) {
    CHECK(closeAbs(huber.beta[j], ols.beta[j], 1e-6));
  }
  CHECK(std::isnan(huber.loglik));  // no likelihood is attached to this fit
  REQUIRE(huber.huberC.has_value());
  CHECK(*huber.huberC == 1e6);
}

TEST_CASE("huber 1-D slope matches a dense grid over the objective") {
  // Five points, one gross outlier; scale fixed at the converged estimate,
  // then the slope must minimize the Huber objective over a fine grid.
  Matrix x(5, 1);
  Vector y(5);
  const double xs[5] = {1.0, 2.0, 3.0, 4.0, 5.0};
  const double ys[5] = {1.1, 1.9, 3.2, 4.0, 50.0};
  for (std::size_t i = 0; i < 5; ++i) {
    x(i, 0) = xs[i];
    y[i] = ys[i];
  }
  const Dataset data(std::move(x), std::move(y));
  HuberConfig config;
  config.c = 1.345;
  const FitResult fit = fitHuber(data, config);
  REQUIRE(fit.diagnostics.converged);

  // Recover the scale the IRLS used at convergence: median absolute deviation
  // about the residual median, scaled for normal consistency.
  Vector resid(5);
  for (std::size_t i = 0; i < 5; ++i) resid[i] = data.y[i] - xs[i] * fit.beta[0];
  Vector sorted = resid;
  std::sort(sorted.begin(), sorted.end());
  const double med = sorted[2];
  Vector dev(5);
  for (std::size_t i = 0; i < 5; ++i) dev[i] = std::abs(resid[i] - med);
  std::sort(dev.begin(), dev.end());
  const double scale = 1.4826 * dev[2];

  const auto objective = [&](double slope) {
    double total = 0.0;
    for (std::size_t i = 0; i < 5; ++i) {
      total += huberRho((data.y[i] - slope * xs[i]) / scale, config.c);
    }
    return total;
  };
  double bestSlope = fit.beta[0];
  double bestVal = objective(bestSlope);
  for (int i = -4000; i <= 4000; ++i) {
    const double slope = fit.beta[0] + i * 1e-5;
    const double val = objective(slope);
    if (val < bestVal) {
      bestVal = val;
      bestSlope = slope;
    }
  }
  CHECK_MESSAGE(closeAbs(fit.beta[0], bestSlope, 1e-4),
                "fit=", fit.beta[0], " grid=", bestSlope);

  // The outlier barely moves the robust fit: slope stays near 1.
  CHECK(fit.beta[0] > 0.8);
  CHECK(fit.beta[0] < 1.4);
}

TEST_CASE("huber resists contamination far better than least squares") {
  RngStream rng(1105, 2);
  const std::size_t n = 80;
  Matrix x = testsupport::randomDesign(n, 2, rng);
  Vector y(n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = x(i, 0) * 1.0 + x(i, 1) * 2.0 + rng.drawNormal();
  }
  for (std::size_t i = 0; i < 8; ++i) y[i * 9] += 40.0;  // gross outliers
  const Dataset data(std::move(x), std::move(y));
  const FitResult huber = fitHuber(data, HuberConfig{});
  const FitResult ols = fitOLS(data);
  const double huberErr = std::hypot(huber.beta[0] - 1.0, huber.beta[1] - 2.0);
  const double olsErr = std::hypot(ols.beta[0] - 1.0, ols.beta[1] - 2.0);
  CHECK(huberErr < olsErr);
}

TEST_CASE("auto-tuned huber picks a constant inside the search grid") {
  const Dataset data = testsupport::simulatedDataset(60, 2, 2.0, 1106);
  HuberConfig config;
  config.autoTune = true;
  const FitResult fit = fitHuber(data, config);
  REQUIRE(fit.huberC.has_value());
  CHECK(*fit.huberC >= 0.7 - 1e-12);
  CHECK(*fit.huberC <= 2.5 + 1e-12);
  CHECK(fit.method == "huber");
}

TEST_CASE("pipeline wires estimation into the second-stage fit") {
  const Dataset data = testsupport::simulatedDataset(60, 2, 2.0, 1107);
  const MethodSpec spec = parseMethodTag("profile");
  const PipelineResult result = runPipeline(spec, data, OptimControl{});
  REQUIRE(result.nuEstimate.has_value());
  CHECK(result.fit.method == "profile");
  CHECK(result.fit.nuUsed == result.nuEstimate->nuHat);

  const PipelineResult ols = runPipeline(parseMethodTag("ols"), data, OptimControl{});
  CHECK_FALSE(ols.nuEstimate.has_value());
  CHECK(ols.fit.method == "ols");

  const PipelineResult fixed =
      runPipeline(parseMethodTag("fixed:2"), data, OptimControl{});
  REQUIRE(fixed.nuEstimate.has_value());
  REQUIRE_FALSE(fixed.fit.nuUsed.isGaussian());
  CHECK(fixed.fit.nuUsed.nu() == 2.0);
  CHECK(fixed.fit.method == "fixed:2");
}

}  // TEST_SUITE
