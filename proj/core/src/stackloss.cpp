#include "trobust/stackloss.hpp"

#include <array>
#include <cstdio>

namespace trobust {

namespace {

// Rows: air flow, water temperature, acid concentration, stack loss.
constexpr std::array<std::array<int, 4>, 21> kRows = {{
    {80, 27, 89, 42}, {80, 27, 88, 37}, {75, 25, 90, 37}, {62, 24, 87, 28},
    {62, 22, 87, 18}, {62, 23, 87, 18}, {62, 24, 93, 19}, {62, 24, 93, 20},
    {58, 23, 87, 15}, {58, 18, 80, 14}, {58, 18, 89, 14}, {58, 17, 88, 13},
    {58, 18, 82, 11}, {58, 19, 93, 12}, {50, 18, 89, 8},  {50, 18, 86, 7},
    {50, 19, 72, 8},  {50, 19, 79, 8},  {50, 20, 80, 9},  {56, 20, 82, 15},
    {70, 20, 91, 15},
}};

}  // namespace

Matrix stacklossDesign() {
  Matrix x(21, 4, 0.0);
  for (std::size_t i = 0; i < 21; ++i) {
    x(i, 0) = 1.0;
    x(i, 1) = kRows[i][0];
    x(i, 2) = kRows[i][1];
    x(i, 3) = kRows[i][2];
  }
  return x;
}

Vector stacklossResponse() {
  Vector y(21, 0.0);
  for (std::size_t i = 0; i < 21; ++i) y[i] = kRows[i][3];
  return y;
}

Dataset stacklossData() { return Dataset(stacklossDesign(), stacklossResponse()); }

std::string stacklossCsv() {
  std::string text = "stack_loss,air_flow,water_temp,acid_conc\n";
  char line[64];
  for (const auto& row : kRows) {
    std::snprintf(line, sizeof(line), "%d,%d,%d,%d\n", row[3], row[0], row[1],
                  row[2]);
    text += line;
  }
  return text;
}

}  // namespace trobust
