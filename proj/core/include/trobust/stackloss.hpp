#pragma once

#include <string>

#include "trobust/data.hpp"
#include "trobust/matrix.hpp"

namespace trobust {

// The 21-observation stack-loss plant dataset (Brownlee), bundled so the
// library and CLI examples run without external files.

// 21x4 design: intercept, air flow, water temperature, acid concentration.
Matrix stacklossDesign();

// The stack-loss response, length 21.
Vector stacklossResponse();

// Dataset combining the two above.
Dataset stacklossData();

// Canonical CSV text of the fixture (response column first); byte-identical
// to data/stackloss.csv in the repository.
std::string stacklossCsv();

}  // namespace trobust
