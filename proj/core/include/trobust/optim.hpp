#pragma once

#include <functional>
#include <vector>

#include "trobust/matrix.hpp"

namespace trobust {

// Shared knobs for the optimizers. Fields not used by a particular routine
// are simply ignored there.
struct OptimControl {
  double gradientTolerance = 1e-6;  // sup-norm stopping rule for BFGS
  int maxIterations = 200;
  double fdStep = 1e-6;             // central-difference step for FD gradients
  std::vector<double> omegaInit = {0.5, 0.2, 0.1};  // outer search starts
  double omegaCap = 1e-3;   // omega at or below this reports the Gaussian limit
  double omegaMax = 1.5;    // upper end of the omega search interval
  bool warmStartInner = true;  // reuse (beta, sigma) across outer evaluations
};

enum class StopReason {
  GradientTolerance,
  MaxIterations,
  LineSearchFailure,
};

struct OptimResult {
  Vector argmax;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
  StopReason reason = StopReason::MaxIterations;
  double gradientNorm = 0.0;       // sup norm at the final iterate
  std::vector<double> valueTrace;  // objective value after each iteration
};

using Objective = std::function<double(const Vector&)>;
using Gradient = std::function<Vector(const Vector&)>;

// Maximize f by BFGS with backtracking line search. The objective may return
// -infinity to mark infeasible points (the line search backtracks away from
// them; the start must be feasible). When `grad` is null the gradient is
// taken by central finite differences, falling back to one-sided steps where
// a probe lands on an infeasible point.
OptimResult quasiNewtonMaximize(const Objective& f, const Vector& start,
                                const OptimControl& control,
                                const Gradient* grad = nullptr);

struct Brent1DResult {
  double x = 0.0;
  double value = 0.0;
  int evaluations = 0;
};

// Maximize a univariate function on [lo, hi] by Brent's method (golden
// section with parabolic acceleration), starting from interior point x0.
// The function may return -infinity for infeasible points.
Brent1DResult brentMaximize(const std::function<double(double)>& f, double lo,
                            double hi, double x0, double tol, int maxIter);

}  // namespace trobust
