#pragma once

// Shared helpers for the unit suites: comparison predicates, finite-difference
// oracles, and small dataset generators.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>

#include "trobust/data.hpp"
#include "trobust/matrix.hpp"
#include "trobust/rng.hpp"

namespace testsupport {

using trobust::Dataset;
using trobust::Matrix;
using trobust::RngStream;
using trobust::Vector;

// |a - b| <= tol * max(1, |a|, |b|): relative for large values, absolute
// near zero.
inline bool closeRel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

inline bool closeAbs(double a, double b, double tol) {
  return std::abs(a - b) <= tol;
}

// Central-difference gradient of a scalar function of a vector.
inline Vector fdGradient(const std::function<double(const Vector&)>& f, Vector x,
                         double h = 1e-6) {
  Vector g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double step = h * std::max(1.0, std::abs(x[i]));
    const double keep = x[i];
    x[i] = keep + step;
    const double up = f(x);
    x[i] = keep - step;
    const double dn = f(x);
    x[i] = keep;
    g[i] = (up - dn) / (2.0 * step);
  }
  return g;
}

// Central-difference Hessian (symmetric by construction).
inline Matrix fdHessian(const std::function<double(const Vector&)>& f, Vector x,
                        double h = 1e-4) {
  const std::size_t d = x.size();
  Matrix hess(d, d);
  const double f0 = f(x);
  Vector step(d);
  for (std::size_t i = 0; i < d; ++i) step[i] = h * std::max(1.0, std::abs(x[i]));
  for (std::size_t i = 0; i < d; ++i) {
    const double keep = x[i];
    x[i] = keep + step[i];
    const double up = f(x);
    x[i] = keep - step[i];
    const double dn = f(x);
    x[i] = keep;
    hess(i, i) = (up - 2.0 * f0 + dn) / (step[i] * step[i]);
  }
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i + 1; j < d; ++j) {
      const double keepI = x[i];
      const double keepJ = x[j];
      x[i] = keepI + step[i];
      x[j] = keepJ + step[j];
      const double pp = f(x);
      x[j] = keepJ - step[j];
      const double pm = f(x);
      x[i] = keepI - step[i];
      const double mm = f(x);
      x[j] = keepJ + step[j];
      const double mp = f(x);
      x[i] = keepI;
      x[j] = keepJ;
      const double mixed = (pp - pm - mp + mm) / (4.0 * step[i] * step[j]);
      hess(i, j) = mixed;
      hess(j, i) = mixed;
    }
  }
  return hess;
}

// n x p design: intercept column (when asked) then standard-normal entries.
inline Matrix randomDesign(std::size_t n, std::size_t p, RngStream& rng,
                           bool intercept = true) {
  Matrix x(n, p);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      x(i, j) = (intercept && j == 0) ? 1.0 : rng.drawNormal();
    }
  }
  return x;
}

// y = X * 1 + sigma * t_nu noise; nu <= 0 selects normal noise.
inline Dataset simulatedDataset(std::size_t n, std::size_t p, double nu,
                                std::uint64_t seed, double sigma = 1.0,
                                bool intercept = true) {
  RngStream rng(seed, 17);
  Matrix x = randomDesign(n, p, rng, intercept);
  Vector y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double mean = 0.0;
    for (std::size_t j = 0; j < p; ++j) mean += x(i, j);
    const double eps = nu > 0.0 ? rng.drawStudentT(nu) : rng.drawNormal();
    y[i] = mean + sigma * eps;
  }
  return Dataset(std::move(x), std::move(y));
}

}  // namespace testsupport
