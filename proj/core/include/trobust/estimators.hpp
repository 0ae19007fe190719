#pragma once

#include <optional>
#include <string>

#include "trobust/data.hpp"
#include "trobust/optim.hpp"
#include "trobust/results.hpp"

namespace trobust {

// Everything the harness and CLI can run, including the plain baselines.
enum class EstimatorKind {
  Profile,
  AdjustedProfile,
  JeffreysMAP,
  PseudoPosteriorMAP,
  FixedNu,
  OLS,
  Huber,
};

struct MethodSpec {
  EstimatorKind kind = EstimatorKind::Profile;
  double fixedNu = 0.0;    // FixedNu only
  double huberC = 1.345;   // Huber only
  bool huberAuto = false;  // Huber only: data-driven tuning-constant grid
};

// Tags: "profile", "adjusted", "jeffreys", "pseudo", "fixed:<nu>", "ols",
// "huber", "huber:auto", "huber:<c>". Throws SchemaError on anything else.
MethodSpec parseMethodTag(const std::string& tag);
std::string methodTag(const MethodSpec& spec);

// Degrees-of-freedom estimation by the chosen criterion. Fixed is not an
// estimation method; use estimateNuFixed.
NuEstimationResult estimateNu(NuMethod method, const Dataset& data,
                              const OptimControl& control);

// Wrap a user-chosen nu in the result type (records flatness diagnostics).
NuEstimationResult estimateNuFixed(double nu, const Dataset& data);

// Joint log density (up to a constant): log-likelihood plus the
// independence-Jeffreys log prior at finite nu. Exposed for invariance tests.
double jeffreysJointLogDensity(const ModelParams& params, const Dataset& data);

// Maximum-likelihood regression fit at fixed degrees of freedom (the second
// stage of the two-stage procedure). Standard errors come from the inverse
// observed information when it is positive definite.
FitResult fitTRegression(const Dataset& data, const DegreesOfFreedom& dof,
                         const OptimControl& control = {});

// Ordinary least squares with Gaussian-model log-likelihood and classical
// standard errors. An exact fit (zero residual variance) is reported with
// sigma = 0 and the degenerate flag rather than an error.
FitResult fitOLS(const Dataset& data);

struct HuberConfig {
  double c = 1.345;
  bool autoTune = false;  // grid-search c in {0.7, 0.8, ..., 2.5}
  int maxIterations = 200;
  double tolerance = 1e-9;
};

// Huber loss and IRLS weight, exposed for tests.
double huberRho(double u, double c);
double huberWeight(double u, double c);

// Huber regression by iteratively reweighted least squares with MAD scale.
FitResult fitHuber(const Dataset& data, const HuberConfig& config = {});

// One estimator end to end: nu estimation (when applicable) followed by the
// fit the method prescribes.
struct PipelineResult {
  FitResult fit;
  std::optional<NuEstimationResult> nuEstimate;
};

PipelineResult runPipeline(const MethodSpec& spec, const Dataset& data,
                           const OptimControl& control);

}  // namespace trobust
