#include "cayley/random.hpp"

#include <cmath>
#include <numbers>

#include "cayley/linalg.hpp"

namespace cayley {

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

Matrix Rng::gaussian(Index rows, Index cols) {
  Matrix out(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) out(i, j) = normal();
  }
  return out;
}

Matrix Rng::uniform_matrix(Index rows, Index cols, double lo, double hi) {
  Matrix out(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) out(i, j) = uniform(lo, hi);
  }
  return out;
}

Seed Rng::derive(Seed base, std::uint64_t stream) {
  // splitmix64 finalizer over (base, stream)
  std::uint64_t z = base.value + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return Seed{z ^ (z >> 31)};
}

StiefelPoint random_stiefel(Index n, Index p, Rng& rng) {
  return qr_orthonormalize(rng.gaussian(n, p));
}

Matrix random_orthogonal(Index n, Rng& rng) {
  return qr_orthonormalize(rng.gaussian(n, n)).mat();
}

SkewParam random_skew_param(Index n, Index p, double scale, Rng& rng) {
  const Matrix a = scale * rng.gaussian(p, p);
  return SkewParam(std::sqrt(2.0) * skew_part(a), scale * rng.gaussian(n - p, p));
}

}  // namespace cayley
