#pragma once

#include <optional>
#include <string>
#include <vector>

#include "trobust/data.hpp"
#include "trobust/matrix.hpp"

namespace trobust {

// How the degrees of freedom were chosen.
enum class NuMethod {
  Profile,           // maximize the profile log-likelihood
  AdjustedProfile,   // profile corrected by the nuisance information
  JeffreysMAP,       // joint posterior mode, independence-Jeffreys prior
  PseudoPosteriorMAP,  // profile plus the nu-block prior
  Fixed,             // user-supplied value
};

std::string nuMethodName(NuMethod method);

// Outcome of a degrees-of-freedom estimation.
struct NuEstimationResult {
  NuMethod method = NuMethod::Profile;
  DegreesOfFreedom nuHat = DegreesOfFreedom::gaussianLimit();
  double omegaHat = 0.0;       // 1/nu at the optimum (0 in the Gaussian limit)
  double objectiveValue = 0.0;
  bool converged = false;
  bool flatnessDetected = false;  // likelihood flat in nu at the Gaussian end
  double flatnessStat = 0.0;
  std::optional<double> waldSE;  // from the profile information, when defined
  int outerEvaluations = 0;
  long innerIterationsTotal = 0;
};

struct FitDiagnostics {
  int iterations = 0;
  bool converged = false;
  bool degenerate = false;  // e.g. zero residual variance
  std::vector<double> loglikTrace;
};

// A fitted regression, whatever the method.
struct FitResult {
  std::string method;  // tag such as "profile", "ols", "huber", "fixed:2"
  Vector beta;
  double sigma = 0.0;
  DegreesOfFreedom nuUsed = DegreesOfFreedom::gaussianLimit();
  double loglik = 0.0;  // NaN for fits without a likelihood (Huber)
  std::optional<Vector> stdErrors;  // per coefficient, then sigma
  std::optional<double> huberC;
  FitDiagnostics diagnostics;
};

}  // namespace trobust
