#pragma once

#include <optional>

#include "trobust/data.hpp"
#include "trobust/matrix.hpp"
#include "trobust/optim.hpp"
#include "trobust/results.hpp"

namespace trobust {

// Inner maximization over (beta, sigma) at fixed degrees of freedom.
struct InnerFit {
  Vector beta;
  double sigma = 0.0;
  double loglik = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> loglikTrace;
};

struct WarmStart {
  Vector beta;
  double sigma = 0.0;
};

// Maximize the log-likelihood over (beta, log sigma) at fixed dof. The
// Gaussian limit is solved in closed form (least squares, sigma^2 = RSS/n).
InnerFit innerMaximizeBetaSigma(const DegreesOfFreedom& dof, const Dataset& data,
                                const OptimControl& control,
                                const std::optional<WarmStart>& warm = std::nullopt);

struct ProfilePoint {
  double value = 0.0;  // profile log-likelihood at nu
  Vector betaHat;
  double sigmaHat = 0.0;
};

// Profile log-likelihood l_p(nu) = max_{beta, sigma} l(beta, sigma, nu).
// Throws NonConvergenceError if the inner fit fails.
ProfilePoint profileLogLik(double nu, const Dataset& data, const OptimControl& control);

// Adjusted profile: l_p(nu) - (1/2) log det j_{ll}(nu), with j_{ll} the
// observed information in (beta, sigma) at the inner optimum. Throws
// DegenerateInformationError when that matrix is not positive definite.
ProfilePoint adjustedProfileLogLik(double nu, const Dataset& data,
                                   const OptimControl& control);

// Curvature of the profile log-likelihood in nu at its maximizer:
//   j_p(nu) = -l_nunu - q' j_{ll}^{-1} q,  q = (l_nubeta, l_nusigma).
// Throws DegenerateInformationError when not positive.
double profileInfoNu(double nu, const Vector& beta, double sigma, const Dataset& data);

struct FlatnessResult {
  bool flat = false;
  double statistic = 0.0;  // sum (z_i^2 - 1)^2, compared against 2n
};

// Flatness statistic for standardized residuals z: the profile likelihood has
// zero slope in omega = 1/nu at the Gaussian end iff sum (z^2 - 1)^2 < 2n.
FlatnessResult flatnessStatistic(const Vector& z);

// Convenience: least-squares residuals standardized by the ML scale
// sqrt(RSS/n), fed through flatnessStatistic.
FlatnessResult flatnessCheck(const Dataset& data);

enum class NuObjective {
  Profile,
  AdjustedProfile,
  PseudoPosterior,  // profile plus the nu-block prior
};

// Objective value as a function of omega = 1/nu (cold inner starts; meant
// for plotting and tests). omega = 0 evaluates the Gaussian-limit branch.
double nuObjectiveValue(NuObjective kind, double omega, const Dataset& data,
                        const OptimControl& control);

// Maximize the chosen objective over omega in [0, control.omegaMax] with
// Brent's method from each start in control.omegaInit, warm-starting the
// inner fits. Values at or below control.omegaCap report the Gaussian limit.
NuEstimationResult outerMaximizeOmega(NuObjective kind, const Dataset& data,
                                      const OptimControl& control);

}  // namespace trobust
