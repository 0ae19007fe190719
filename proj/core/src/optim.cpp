#include "trobust/optim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "trobust/errors.hpp"

namespace trobust {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Vector fdGradient(const Objective& f, const Vector& x, double fx, double h) {
  Vector g(x.size(), 0.0);
  Vector probe = x;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double step = h * std::max(1.0, std::abs(x[j]));
    probe[j] = x[j] + step;
    const double fp = f(probe);
    probe[j] = x[j] - step;
    const double fm = f(probe);
    probe[j] = x[j];
    if (std::isfinite(fp) && std::isfinite(fm)) {
      g[j] = (fp - fm) / (2.0 * step);
    } else if (std::isfinite(fp)) {
      g[j] = (fp - fx) / step;  // one-sided against a barrier below
    } else if (std::isfinite(fm)) {
      g[j] = (fx - fm) / step;  // one-sided against a barrier above
    } else {
      g[j] = 0.0;
    }
  }
  return g;
}

}  // namespace

OptimResult quasiNewtonMaximize(const Objective& f, const Vector& start,
                                const OptimControl& control,
                                const Gradient* grad) {
  const std::size_t d = start.size();
  OptimResult out;
  out.argmax = start;
  out.value = f(start);
  if (!std::isfinite(out.value)) {
    throw DomainError("quasiNewtonMaximize: objective not finite at the start");
  }

  auto gradient = [&](const Vector& x, double fx) {
    return grad ? (*grad)(x) : fdGradient(f, x, fx, control.fdStep);
  };

  Vector x = start;
  double fx = out.value;
  Vector g = gradient(x, fx);

  // Inverse Hessian approximation of -f (we minimize -f), stored dense.
  Matrix h(d, d, 0.0);
  auto resetH = [&] {
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) h(i, j) = (i == j) ? 1.0 : 0.0;
  };
  resetH();

  bool firstStep = true;
  out.reason = StopReason::MaxIterations;
  for (int iter = 0; iter < control.maxIterations; ++iter) {
    out.gradientNorm = normInf(g);
    if (out.gradientNorm <= control.gradientTolerance) {
      out.converged = true;
      out.reason = StopReason::GradientTolerance;
      break;
    }

    // Ascent direction dir = H g (H approximates the inverse Hessian of -f,
    // so H g points uphill for f).
    Vector dir(d, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < d; ++j) s += h(i, j) * g[j];
      dir[i] = s;
    }
    double slope = dot(g, dir);
    if (!(slope > 0.0) || !std::isfinite(slope)) {
      // Curvature information went bad: restart from steepest ascent.
      resetH();
      dir = g;
      slope = dot(g, g);
      if (!(slope > 0.0)) {
        out.converged = true;
        out.reason = StopReason::GradientTolerance;
        break;
      }
    }

    // Armijo backtracking on f(x + t dir) >= f(x) + c1 t slope.
    const double c1 = 1e-4;
    double t = 1.0;
    Vector xNew(d, 0.0);
    double fNew = -kInf;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      for (std::size_t i = 0; i < d; ++i) xNew[i] = x[i] + t * dir[i];
      fNew = f(xNew);
      if (std::isfinite(fNew) && fNew >= fx + c1 * t * slope) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      out.reason = StopReason::LineSearchFailure;
      break;
    }

    Vector gNew = gradient(xNew, fNew);
    Vector s(d, 0.0), yv(d, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
      s[i] = xNew[i] - x[i];
      // y for the minimization of -f: (-gNew) - (-g) = g - gNew.
      yv[i] = g[i] - gNew[i];
    }
    const double sy = dot(s, yv);
    const double sNorm = norm2(s);
    const double yNorm = norm2(yv);
    if (sy > 1e-10 * sNorm * yNorm && sy > 0.0) {
      if (firstStep) {
        // Scale the initial inverse Hessian to the observed curvature.
        const double scale = sy / dot(yv, yv);
        for (std::size_t i = 0; i < d; ++i)
          for (std::size_t j = 0; j < d; ++j) h(i, j) = (i == j) ? scale : 0.0;
        firstStep = false;
      }
      // BFGS inverse update (for the -f minimization; identical algebra).
      Vector hy(d, 0.0);
      for (std::size_t i = 0; i < d; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < d; ++j) acc += h(i, j) * yv[j];
        hy[i] = acc;
      }
      const double yhy = dot(yv, hy);
      const double rho = 1.0 / sy;
      for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
          h(i, j) += (1.0 + yhy * rho) * rho * s[i] * s[j] -
                     rho * (hy[i] * s[j] + s[i] * hy[j]);
        }
      }
    }

    x = std::move(xNew);
    fx = fNew;
    g = std::move(gNew);
    out.iterations = iter + 1;
    out.valueTrace.push_back(fx);
  }

  out.argmax = x;
  out.value = fx;
  out.gradientNorm = normInf(g);
  if (!out.converged && out.gradientNorm <= control.gradientTolerance) {
    out.converged = true;
    out.reason = StopReason::GradientTolerance;
  }
  return out;
}

Brent1DResult brentMaximize(const std::function<double(double)>& f, double lo,
                            double hi, double x0, double tol, int maxIter) {
  if (!(lo < hi)) throw DomainError("brentMaximize: empty interval");
  x0 = std::clamp(x0, lo, hi);

  Brent1DResult out;
  const double golden = 0.3819660112501051;  // 2 - phi

  double a = lo, b = hi;
  double x = x0;
  double fx = f(x);
  ++out.evaluations;
  if (!std::isfinite(fx)) {
    // Slide the start toward the middle until feasible.
    for (int k = 0; k < 32 && !std::isfinite(fx); ++k) {
      x = a + (golden + 0.01 * k) * (b - a);
      if (x <= a || x >= b) x = 0.5 * (a + b);
      fx = f(x);
      ++out.evaluations;
    }
    if (!std::isfinite(fx)) {
      out.x = x0;
      out.value = -kInf;
      return out;
    }
  }

  double w = x, v = x;
  double fw = fx, fv = fx;
  double d = 0.0, e = 0.0;

  for (int iter = 0; iter < maxIter; ++iter) {
    const double m = 0.5 * (a + b);
    const double tol1 = tol * std::abs(x) + 1e-12;
    const double tol2 = 2.0 * tol1;
    if (std::abs(x - m) <= tol2 - 0.5 * (b - a)) break;

    bool useGolden = true;
    if (std::abs(e) > tol1) {
      // Parabola through (x, fx), (w, fw), (v, fv); maximize, so flip signs.
      const double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double pNum = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) pNum = -pNum;
      q = std::abs(q);
      const double eOld = e;
      e = d;
      if (std::abs(pNum) < std::abs(0.5 * q * eOld) && pNum > q * (a - x) &&
          pNum < q * (b - x)) {
        d = pNum / q;
        const double u = x + d;
        if (u - a < tol2 || b - u < tol2) d = (m > x) ? tol1 : -tol1;
        useGolden = false;
      }
    }
    if (useGolden) {
      e = (x < m) ? b - x : a - x;
      d = golden * e;
    }

    const double u = (std::abs(d) >= tol1) ? x + d : x + ((d > 0.0) ? tol1 : -tol1);
    double fu = f(u);
    ++out.evaluations;
    if (!std::isfinite(fu)) fu = -kInf;

    if (fu >= fx) {
      if (u < x) b = x; else a = x;
      v = w; fv = fw;
      w = x; fw = fx;
      x = u; fx = fu;
    } else {
      if (u < x) a = u; else b = u;
      if (fu >= fw || w == x) {
        v = w; fv = fw;
        w = u; fw = fu;
      } else if (fu >= fv || v == x || v == w) {
        v = u; fv = fu;
      }
    }
  }

  out.x = x;
  out.value = fx;
  return out;
}

}  // namespace trobust
