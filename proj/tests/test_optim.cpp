#include <doctest.h>

#include <cmath>
#include <limits>

#include "support.hpp"
#include "trobust/errors.hpp"
#include "trobust/optim.hpp"

using namespace trobust;
using testsupport::closeAbs;

TEST_SUITE("optim") {

TEST_CASE("quadratic bowl from the origin") {
  const Objective f = [](const Vector& x) {
    const double d0 = x[0] - 1.0, d1 = x[1] - 2.0, d2 = x[2] - 3.0;
    return -(d0 * d0 + d1 * d1 + d2 * d2);
  };
  const OptimResult r = quasiNewtonMaximize(f, {0.0, 0.0, 0.0}, OptimControl{});
  CHECK(r.converged);
  CHECK(r.reason == StopReason::GradientTolerance);
  CHECK(closeAbs(r.argmax[0], 1.0, 1e-8));
  CHECK(closeAbs(r.argmax[1], 2.0, 1e-8));
  CHECK(closeAbs(r.argmax[2], 3.0, 1e-8));
  CHECK(r.gradientNorm <= OptimControl{}.gradientTolerance);
}

TEST_CASE("negated rosenbrock from the classical start") {
  const Objective f = [](const Vector& x) {
    const double a = 1.0 - x[0];
    const double b = x[1] - x[0] * x[0];
    return -(a * a + 100.0 * b * b);
  };
  OptimControl control;
  control.maxIterations = 500;
  control.gradientTolerance = 1e-8;
  const OptimResult r = quasiNewtonMaximize(f, {-1.2, 1.0}, control);
  CHECK(r.converged);
  CHECK(closeAbs(r.argmax[0], 1.0, 1e-6));
  CHECK(closeAbs(r.argmax[1], 1.0, 1e-6));
}

TEST_CASE("analytic gradient reproduces the finite-difference path") {
  const Objective f = [](const Vector& x) {
    return -(3.0 * x[0] * x[0] + 0.5 * x[1] * x[1] + x[0] * x[1]) + 2.0 * x[0];
  };
  const Gradient g = [](const Vector& x) -> Vector {
    return {-6.0 * x[0] - x[1] + 2.0, -x[1] - x[0]};
  };
  const OptimResult withGrad =
      quasiNewtonMaximize(f, {5.0, -3.0}, OptimControl{}, &g);
  const OptimResult without = quasiNewtonMaximize(f, {5.0, -3.0}, OptimControl{});
  CHECK(withGrad.converged);
  CHECK(without.converged);
  CHECK(closeAbs(withGrad.argmax[0], without.argmax[0], 1e-6));
  CHECK(closeAbs(withGrad.argmax[1], without.argmax[1], 1e-6));
  // Stationary point solves the linear system exactly: with y = -x the first
  // equation -6x - y + 2 = 0 gives x = 2/5, so the argmax is (2/5, -2/5).
  // A tighter gradient tolerance pins the argmax correspondingly tighter.
  OptimControl tight;
  tight.gradientTolerance = 1e-10;
  const OptimResult sharp = quasiNewtonMaximize(f, {5.0, -3.0}, tight, &g);
  CHECK(closeAbs(sharp.argmax[0], 2.0 / 5.0, 1e-7));
  CHECK(closeAbs(sharp.argmax[1], -2.0 / 5.0, 1e-7));
}

TEST_CASE("barrier objective: -inf off the feasible half-line") {
  // max log(x) - x over x > 0 is attained at x = 1.
  const Objective f = [](const Vector& x) {
    if (x[0] <= 0.0) return -std::numeric_limits<double>::infinity();
    return std::log(x[0]) - x[0];
  };
  const OptimResult r = quasiNewtonMaximize(f, {3.0}, OptimControl{});
  CHECK(r.converged);
  CHECK(closeAbs(r.argmax[0], 1.0, 1e-6));
  CHECK(closeAbs(r.value, -1.0, 1e-10));
}

TEST_CASE("infeasible start is rejected loudly") {
  const Objective f = [](const Vector& x) {
    if (x[0] <= 0.0) return -std::numeric_limits<double>::infinity();
    return -x[0];
  };
  CHECK_THROWS_AS(quasiNewtonMaximize(f, {-1.0}, OptimControl{}), DomainError);
}

TEST_CASE("iteration budget exhaustion is reported, not hidden") {
  const Objective f = [](const Vector& x) {
    const double a = 1.0 - x[0];
    const double b = x[1] - x[0] * x[0];
    return -(a * a + 100.0 * b * b);
  };
  OptimControl control;
  control.maxIterations = 2;
  const OptimResult r = quasiNewtonMaximize(f, {-1.2, 1.0}, control);
  CHECK_FALSE(r.converged);
  CHECK(r.reason == StopReason::MaxIterations);
  CHECK(r.iterations == 2);
}

TEST_CASE("accepted steps never decrease the objective") {
  const Objective f = [](const Vector& x) {
    const double a = 1.0 - x[0];
    const double b = x[1] - x[0] * x[0];
    return -(a * a + 100.0 * b * b);
  };
  OptimControl control;
  control.maxIterations = 300;
  const OptimResult r = quasiNewtonMaximize(f, {-1.2, 1.0}, control);
  REQUIRE(r.valueTrace.size() >= 2);
  for (std::size_t i = 1; i < r.valueTrace.size(); ++i) {
    CHECK(r.valueTrace[i] >= r.valueTrace[i - 1] - 1e-12);
  }
}

TEST_CASE("brent maximization on a smooth unimodal function") {
  const auto f = [](double x) { return -(x - 0.3) * (x - 0.3); };
  const Brent1DResult r = brentMaximize(f, 0.0, 1.0, 0.7, 1e-10, 200);
  CHECK(closeAbs(r.x, 0.3, 1e-7));
  CHECK(r.evaluations > 0);
}

TEST_CASE("brent handles -inf regions and boundary maxima") {
  // log(x) - x on [-0.5, 5]: -inf left of zero, maximum at 1.
  const auto f = [](double x) {
    if (x <= 0.0) return -std::numeric_limits<double>::infinity();
    return std::log(x) - x;
  };
  const Brent1DResult r = brentMaximize(f, -0.5, 5.0, 2.0, 1e-10, 200);
  CHECK(closeAbs(r.x, 1.0, 1e-6));

  // Start inside the infeasible region: the search must slide into domain.
  const Brent1DResult r2 = brentMaximize(f, -0.5, 5.0, -0.4, 1e-10, 200);
  CHECK(closeAbs(r2.x, 1.0, 1e-6));

  // Strictly decreasing objective drives the maximizer to the lower end.
  const auto g = [](double x) { return -x; };
  const Brent1DResult r3 = brentMaximize(g, 0.0, 1.0, 0.5, 1e-10, 200);
  CHECK(r3.x <= 1e-5);
}

}  // TEST_SUITE
