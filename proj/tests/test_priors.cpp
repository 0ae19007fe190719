#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "trobust/errors.hpp"
#include "trobust/priors.hpp"
#include "trobust/special.hpp"

using namespace trobust;
using testsupport::closeRel;

TEST_SUITE("priors") {

TEST_CASE("brackets match their defining trigamma expressions at moderate nu") {
  for (double nu : {0.5, 1.0, 2.0, 5.0, 10.0}) {
    const double gap = trigamma(nu / 2.0) - trigamma((nu + 1.0) / 2.0);
    const double jeffreys = gap - 2.0 * (nu + 3.0) / (nu * (nu + 1.0) * (nu + 1.0));
    const double block = gap - 2.0 * (nu + 5.0) / (nu * (nu + 1.0) * (nu + 3.0));
    CHECK_MESSAGE(closeRel(jeffreysNuBracket(nu), jeffreys, 1e-9), "nu=", nu);
    CHECK_MESSAGE(closeRel(nuBlockBracket(nu), block, 1e-9), "nu=", nu);
  }
}

TEST_CASE("both brackets are strictly positive across the working range") {
  for (double nu = 1e-3; nu <= 1e5; nu *= 2.5) {
    CHECK_MESSAGE(jeffreysNuBracket(nu) > 0.0, "jeffreys nu=", nu);
    CHECK_MESSAGE(nuBlockBracket(nu) > 0.0, "block nu=", nu);
    CHECK_MESSAGE(std::isfinite(nuBlockLogPrior(nu)), "log prior nu=", nu);
  }
}

TEST_CASE("bracket tails decay like 6/nu^4 and 14/nu^4") {
  // The next expansion term is O(1/nu) relative, so a 15/nu band checks the
  // order and the constant without pinning the correction term itself.
  for (double nu : {300.0, 1000.0, 3000.0}) {
    const double nu4 = nu * nu * nu * nu;
    CHECK_MESSAGE(std::abs(jeffreysNuBracket(nu) * nu4 / 6.0 - 1.0) < 15.0 / nu,
                  "jeffreys nu=", nu, " scaled=", jeffreysNuBracket(nu) * nu4);
    CHECK_MESSAGE(std::abs(nuBlockBracket(nu) * nu4 / 14.0 - 1.0) < 15.0 / nu,
                  "block nu=", nu, " scaled=", nuBlockBracket(nu) * nu4);
  }
}

TEST_CASE("independence prior: closed form and exact sigma scaling") {
  // nu = 1 collapses to one trigamma expression: the rational term of the
  // bracket is 2(nu+3)/(nu(nu+1)^2) = 2 there.
  const double expected =
      0.5 * std::log(1.0 / 4.0) +
      0.5 * std::log(trigamma(0.5) - trigamma(1.0) - 2.0);
  CHECK(closeRel(jeffreysIndependenceLogPrior(1.0, 1.0), expected, 1e-12));

  for (double nu : {0.5, 1.0, 3.0, 25.0}) {
    const double diff = jeffreysIndependenceLogPrior(2.0, nu) -
                        jeffreysIndependenceLogPrior(1.0, nu);
    CHECK_MESSAGE(closeRel(diff, -std::log(2.0), 1e-12), "nu=", nu);
  }
}

TEST_CASE("nu-block prior tail ratios: 1/4 at large nu, 1/2 near zero") {
  const double largeRatio =
      std::exp(nuBlockLogPrior(2.0e4) - nuBlockLogPrior(1.0e4));
  CHECK(std::abs(largeRatio - 0.25) <= 0.05 * 0.25);
  const double smallRatio =
      std::exp(nuBlockLogPrior(2.0e-4) - nuBlockLogPrior(1.0e-4));
  CHECK(std::abs(smallRatio - 0.5) <= 0.05 * 0.5);
}

TEST_CASE("domain errors on invalid arguments") {
  CHECK_THROWS_AS(jeffreysIndependenceLogPrior(0.0, 2.0), DomainError);
  CHECK_THROWS_AS(jeffreysIndependenceLogPrior(1.0, 0.0), DomainError);
  CHECK_THROWS_AS(nuBlockLogPrior(-1.0), DomainError);
}

}  // TEST_SUITE
