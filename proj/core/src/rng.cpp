#include "trobust/rng.hpp"

#include <cmath>
#include <string>

#include "trobust/errors.hpp"

namespace trobust {

namespace {

// splitmix64 step; used to decorrelate (seed, stream) into engine seed words.
std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::mt19937_64 makeEngine(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t state = seed;
  const std::uint64_t a = splitmix64(state);
  state ^= stream * 0xda942042e4dd58b5ULL + 0x9e3779b97f4a7c15ULL;
  const std::uint64_t b = splitmix64(state);
  const std::uint64_t c = splitmix64(state);
  std::seed_seq seq{
      static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32),
      static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream), engine_(makeEngine(seed, stream)) {}

double RngStream::drawUniform() {
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  return dist(engine_);
}

double RngStream::drawNormal() {
  std::normal_distribution<double> dist(0.0, 1.0);
  return dist(engine_);
}

double RngStream::drawChiSquare(double dof) {
  if (!(dof > 0.0)) {
    throw DomainError("drawChiSquare: degrees of freedom must be positive, got " +
                      std::to_string(dof));
  }
  std::chi_squared_distribution<double> dist(dof);
  return dist(engine_);
}

double RngStream::drawStudentT(double nu) {
  if (!(nu > 0.0)) {
    throw DomainError("drawStudentT: degrees of freedom must be positive, got " +
                      std::to_string(nu));
  }
  const double z = drawNormal();
  const double w = drawChiSquare(nu);
  return z / std::sqrt(w / nu);
}

Vector sampleNormal(std::size_t n, RngStream& rng) {
  Vector v(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i] = rng.drawNormal();
  return v;
}

Vector sampleStudentT(double nu, std::size_t n, RngStream& rng) {
  Vector v(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i] = rng.drawStudentT(nu);
  return v;
}

}  // namespace trobust
