#include "trobust/special.hpp"

#include <cmath>
#include <string>

#include "trobust/errors.hpp"

namespace trobust {

namespace {

constexpr double kPi = 3.14159265358979323846;

void requirePositiveFinite(double x, const char* fn) {
  if (!std::isfinite(x) || x <= 0.0) {
    throw DomainError(std::string(fn) + ": argument must be positive and finite, got " +
                      std::to_string(x));
  }
}

// Lanczos coefficients (g = 7, n = 9).
constexpr double kLanczos[9] = {
    0.99999999999980993,      676.5203681218851,     -1259.1392167224028,
    771.32342877765313,       -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,     9.9843695780195716e-6, 1.5056327351493116e-7,
};

double logGammaLanczos(double x) {
  // Valid for x >= 0.5.
  const double z = x - 1.0;
  double acc = kLanczos[0];
  for (int i = 1; i < 9; ++i) acc += kLanczos[i] / (z + i);
  const double t = z + 7.5;
  return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(acc);
}

}  // namespace

double logGamma(double x) {
  requirePositiveFinite(x, "logGamma");
  if (x >= 0.5) return logGammaLanczos(x);
  // Reflection keeps accuracy near zero: Gamma(x) Gamma(1-x) = pi / sin(pi x).
  return std::log(kPi / std::sin(kPi * x)) - logGammaLanczos(1.0 - x);
}

double digamma(double x) {
  requirePositiveFinite(x, "digamma");
  double acc = 0.0;
  while (x < 12.0) {
    acc -= 1.0 / x;
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  // Asymptotic series: ln x - 1/(2x) - sum B_{2k} / (2k x^{2k}).
  double series = std::log(x) - 0.5 * inv;
  double p = inv2;
  series -= p / 12.0;           // B_2 / 2 = 1/12
  p *= inv2;
  series += p / 120.0;          // B_4 / 4 = -1/120
  p *= inv2;
  series -= p / 252.0;          // B_6 / 6 = 1/252
  p *= inv2;
  series += p / 240.0;          // B_8 / 8 = -1/240
  p *= inv2;
  series -= p / 132.0;          // B_10 / 10 = 1/132
  p *= inv2;
  series += p * (691.0 / 32760.0);  // B_12 / 12
  p *= inv2;
  series -= p / 12.0;           // B_14 / 14
  return series + acc;
}

double trigamma(double x) {
  requirePositiveFinite(x, "trigamma");
  double acc = 0.0;
  while (x < 12.0) {
    acc += 1.0 / (x * x);
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  // psi'(x) ~ 1/x + 1/(2x^2) + sum B_{2k} x^{-2k-1}.
  double series = inv + 0.5 * inv2;
  double p = inv * inv2;  // x^{-3}
  series += p / 6.0;      // B_2
  p *= inv2;
  series -= p / 30.0;     // B_4
  p *= inv2;
  series += p / 42.0;     // B_6
  p *= inv2;
  series -= p / 30.0;     // B_8
  p *= inv2;
  series += p * (5.0 / 66.0);  // B_10
  p *= inv2;
  series -= p * (691.0 / 2730.0);  // B_12
  p *= inv2;
  series += p * (7.0 / 6.0);  // B_14
  return series + acc;
}

double trigammaHalfGap(double x) {
  requirePositiveFinite(x, "trigammaHalfGap");
  // Recurrence psi'(t) = psi'(t+1) + 1/t^2 gives
  //   D(x) = D(x+1) + 1/x^2 - 1/(x+1/2)^2 = D(x+1) + (x + 1/4) / (x^2 (x+1/2)^2),
  // where D(x) = psi'(x) - psi'(x + 1/2). The shifted term is exact (no
  // subtraction of near-equal quantities), so we walk x up to the asymptotic
  // region and evaluate a series for the tail.
  double acc = 0.0;
  while (x < 12.0) {
    const double xh = x + 0.5;
    acc += (x + 0.25) / (x * x * xh * xh);
    x += 1.0;
  }
  // For large x write D(x) with d_m = (1+1/(2x))^{-m} differences computed via
  // expm1/log1p so every term keeps relative accuracy:
  //   D(x) = 1/(2 x (x+1/2)) + (1/2) d2 + d3/6 - d5/30 + d7/42 - d9/30
  //          + (5/66) d11 - (691/2730) d13,
  // where d_m = x^{-m} - (x+1/2)^{-m} = expm1(m log1p(1/(2x))) / (x+1/2)^m.
  const double l = std::log1p(0.5 / x);
  const double xh = x + 0.5;
  auto d = [&](int m) {
    return std::expm1(static_cast<double>(m) * l) / std::pow(xh, m);
  };
  double series = 1.0 / (2.0 * x * xh);
  series += 0.5 * d(2);
  series += d(3) / 6.0;
  series -= d(5) / 30.0;
  series += d(7) / 42.0;
  series -= d(9) / 30.0;
  series += d(11) * (5.0 / 66.0);
  series -= d(13) * (691.0 / 2730.0);
  return series + acc;
}

}  // namespace trobust
