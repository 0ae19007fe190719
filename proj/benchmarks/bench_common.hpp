#pragma once

// Shared dataset generation for the benchmark binaries: a random regression
// design with intercept, unit coefficients, and scaled Student-t errors.

#include <cstddef>
#include <cstdint>

#include "trobust/data.hpp"
#include "trobust/matrix.hpp"
#include "trobust/rng.hpp"

namespace bench {

inline trobust::Dataset makeDataset(std::size_t n, std::size_t p, double nu,
                                    std::uint64_t seed = 9001) {
  trobust::RngStream rng(seed, 1);
  trobust::Matrix X(n, p);
  for (std::size_t i = 0; i < n; ++i) {
    X(i, 0) = 1.0;
    for (std::size_t j = 1; j < p; ++j) X(i, j) = rng.drawNormal();
  }
  trobust::Vector y(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double mean = 0.0;
    for (std::size_t j = 0; j < p; ++j) mean += X(i, j);
    y[i] = mean + (nu > 0.0 ? rng.drawStudentT(nu) : rng.drawNormal());
  }
  return trobust::Dataset(std::move(X), std::move(y));
}

}  // namespace bench
