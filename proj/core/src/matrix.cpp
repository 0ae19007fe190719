#include "trobust/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "trobust/errors.hpp"

namespace trobust {

double dot(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) {
    throw DimensionError("dot: vectors of size " + std::to_string(a.size()) +
                         " and " + std::to_string(b.size()));
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const Vector& v) { return std::sqrt(dot(v, v)); }

double normInf(const Vector& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

Vector matVec(const Matrix& a, const Vector& x) {
  if (a.cols() != x.size()) {
    throw DimensionError("matVec: " + std::to_string(a.cols()) + " columns vs " +
                         std::to_string(x.size()) + " entries");
  }
  Vector y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double* row = a.rowPtr(i);
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += row[j] * x[j];
    y[i] = s;
  }
  return y;
}

Vector matTVec(const Matrix& a, const Vector& x) {
  if (a.rows() != x.size()) {
    throw DimensionError("matTVec: " + std::to_string(a.rows()) + " rows vs " +
                         std::to_string(x.size()) + " entries");
  }
  Vector y(a.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double* row = a.rowPtr(i);
    const double xi = x[i];
    for (std::size_t j = 0; j < a.cols(); ++j) y[j] += row[j] * xi;
  }
  return y;
}

LeastSquaresFit solveLeastSquares(const Matrix& x, const Vector& y) {
  const std::size_t n = x.rows();
  const std::size_t p = x.cols();
  if (y.size() != n) {
    throw DimensionError("solveLeastSquares: " + std::to_string(n) +
                         " rows vs " + std::to_string(y.size()) + " responses");
  }
  if (n < p) {
    throw DimensionError("solveLeastSquares: fewer rows (" + std::to_string(n) +
                         ") than columns (" + std::to_string(p) + ")");
  }

  // Householder QR applied to a working copy of [X | y].
  Matrix r = x;
  Vector qty = y;

  // Column scale for the rank test.
  double maxColNorm = 0.0;
  for (std::size_t j = 0; j < p; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += r(i, j) * r(i, j);
    maxColNorm = std::max(maxColNorm, std::sqrt(s));
  }
  const double pivotTol =
      std::max(1e-300, maxColNorm * 1e-12 * static_cast<double>(std::max<std::size_t>(n, 1)));

  int deficient = 0;
  for (std::size_t k = 0; k < p; ++k) {
    // Householder vector for column k, rows k..n-1.
    double alpha = 0.0;
    for (std::size_t i = k; i < n; ++i) alpha += r(i, k) * r(i, k);
    alpha = std::sqrt(alpha);
    if (alpha <= pivotTol) {
      ++deficient;
      continue;
    }
    if (r(k, k) > 0.0) alpha = -alpha;
    Vector v(n - k, 0.0);
    v[0] = r(k, k) - alpha;
    for (std::size_t i = k + 1; i < n; ++i) v[i - k] = r(i, k);
    double vnorm2 = 0.0;
    for (double t : v) vnorm2 += t * t;
    if (vnorm2 <= 0.0) {
      ++deficient;
      continue;
    }
    r(k, k) = alpha;
    for (std::size_t i = k + 1; i < n; ++i) r(i, k) = 0.0;
    // Apply reflector to remaining columns and to y.
    for (std::size_t j = k + 1; j < p; ++j) {
      double s = 0.0;
      for (std::size_t i = k; i < n; ++i) s += v[i - k] * r(i, j);
      const double f = 2.0 * s / vnorm2;
      for (std::size_t i = k; i < n; ++i) r(i, j) -= f * v[i - k];
    }
    {
      double s = 0.0;
      for (std::size_t i = k; i < n; ++i) s += v[i - k] * qty[i];
      const double f = 2.0 * s / vnorm2;
      for (std::size_t i = k; i < n; ++i) qty[i] -= f * v[i - k];
    }
  }

  // Rank check on the R diagonal.
  for (std::size_t k = 0; k < p; ++k) {
    if (std::abs(r(k, k)) <= pivotTol) {
      // Count every collapsed pivot before reporting.
      int bad = 0;
      for (std::size_t j = 0; j < p; ++j) {
        if (std::abs(r(j, j)) <= pivotTol) ++bad;
      }
      throw SingularMatrixError(
          "solveLeastSquares: design matrix is rank deficient (" +
              std::to_string(bad) + " of " + std::to_string(p) +
              " columns numerically dependent)",
          bad);
    }
  }
  (void)deficient;

  // Back substitution R b = (Q^T y)[0..p-1].
  Vector coef(p, 0.0);
  for (std::size_t kk = p; kk-- > 0;) {
    double s = qty[kk];
    for (std::size_t j = kk + 1; j < p; ++j) s -= r(kk, j) * coef[j];
    coef[kk] = s / r(kk, kk);
  }

  double rss = 0.0;
  for (std::size_t i = p; i < n; ++i) rss += qty[i] * qty[i];
  // Guard against tiny negative round-off when n == p.
  rss = std::max(rss, 0.0);

  LeastSquaresFit fit;
  fit.coef = std::move(coef);
  fit.rss = rss;
  fit.residualMeanSquare = n > 0 ? rss / static_cast<double>(n) : 0.0;
  return fit;
}

bool choleskyLower(Matrix& a) {
  const std::size_t n = a.rows();
  if (a.cols() != n) {
    throw DimensionError("choleskyLower: matrix is " + std::to_string(n) + "x" +
                         std::to_string(a.cols()));
  }
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= a(j, k) * a(j, k);
    if (!(d > 0.0) || !std::isfinite(d)) return false;
    const double l = std::sqrt(d);
    a(j, j) = l;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= a(i, k) * a(j, k);
      a(i, j) = s / l;
    }
    for (std::size_t k = j + 1; k < n; ++k) a(j, k) = 0.0;
  }
  return true;
}

double choleskyLogDet(Matrix a) {
  const std::size_t n = a.rows();
  if (!choleskyLower(a)) {
    throw SingularMatrixError("choleskyLogDet: matrix is not positive definite",
                              static_cast<int>(n));
  }
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::log(a(i, i));
  return 2.0 * s;
}

Vector choleskySolve(Matrix a, const Vector& b) {
  const std::size_t n = a.rows();
  if (b.size() != n) {
    throw DimensionError("choleskySolve: " + std::to_string(n) + "x" +
                         std::to_string(a.cols()) + " matrix vs " +
                         std::to_string(b.size()) + " entries");
  }
  if (!choleskyLower(a)) {
    throw SingularMatrixError("choleskySolve: matrix is not positive definite",
                              static_cast<int>(n));
  }
  Vector x = b;
  for (std::size_t i = 0; i < n; ++i) {
    double s = x[i];
    for (std::size_t k = 0; k < i; ++k) s -= a(i, k) * x[k];
    x[i] = s / a(i, i);
  }
  for (std::size_t ii = n; ii-- > 0;) {
    double s = x[ii];
    for (std::size_t k = ii + 1; k < n; ++k) s -= a(k, ii) * x[k];
    x[ii] = s / a(ii, ii);
  }
  return x;
}

Matrix choleskyInverse(Matrix a) {
  const std::size_t n = a.rows();
  if (!choleskyLower(a)) {
    throw SingularMatrixError("choleskyInverse: matrix is not positive definite",
                              static_cast<int>(n));
  }
  // Invert L in place, then form (L^-1)^T L^-1.
  Matrix linv(n, n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    linv(j, j) = 1.0 / a(j, j);
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = 0.0;
      for (std::size_t k = j; k < i; ++k) s -= a(i, k) * linv(k, j);
      linv(i, j) = s / a(i, i);
    }
  }
  Matrix inv(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = 0.0;
      for (std::size_t k = i; k < n; ++k) s += linv(k, i) * linv(k, j);
      inv(i, j) = s;
      inv(j, i) = s;
    }
  }
  return inv;
}

Vector symmetricEigenvalues(Matrix a) {
  const std::size_t n = a.rows();
  if (a.cols() != n) {
    throw DimensionError("symmetricEigenvalues: matrix is " + std::to_string(n) +
                         "x" + std::to_string(a.cols()));
  }
  // Cyclic Jacobi rotations until the off-diagonal mass is negligible.
  const int maxSweeps = 64;
  for (int sweep = 0; sweep < maxSweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
    if (off < 1e-24) break;
    for (std::size_t pcol = 0; pcol + 1 < n; ++pcol) {
      for (std::size_t q = pcol + 1; q < n; ++q) {
        const double apq = a(pcol, q);
        if (std::abs(apq) < 1e-300) continue;
        const double app = a(pcol, pcol);
        const double aqq = a(q, q);
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, pcol);
          const double akq = a(k, q);
          a(k, pcol) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(pcol, k);
          const double aqk = a(q, k);
          a(pcol, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  Vector eig(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) eig[i] = a(i, i);
  std::sort(eig.begin(), eig.end());
  return eig;
}

}  // namespace trobust
