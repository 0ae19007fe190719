#pragma once

#include <cstdint>
#include <random>

#include "trobust/matrix.hpp"

namespace trobust {

// A reproducible random stream: (seed, stream) pairs give independent,
// deterministic sequences. Replications and design generation each get their
// own stream id so adding methods or reordering work never shifts draws.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

  double drawUniform();            // U(0, 1)
  double drawNormal();             // N(0, 1)
  double drawChiSquare(double dof);
  double drawStudentT(double nu);  // z / sqrt(w / nu)

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
};

Vector sampleNormal(std::size_t n, RngStream& rng);
Vector sampleStudentT(double nu, std::size_t n, RngStream& rng);

}  // namespace trobust
