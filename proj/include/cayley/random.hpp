#pragma once

#include <cstdint>
#include <random>

#include "cayley/core.hpp"
#include "cayley/points.hpp"

namespace cayley {

/// Seed for reproducible instance generation.
struct Seed {
  std::uint64_t value = 0;
};

/// Deterministic generator: std::mt19937_64 (algorithm fixed by the standard)
/// with uniforms built from the top 53 bits and normals from Box-Muller. Does
/// not go through std::*_distribution, whose output is implementation-defined,
/// so streams are identical across standard libraries.
class Rng {
 public:
  explicit Rng(Seed seed) : engine_(seed.value) {}
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform();
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal.
  double normal();

  Matrix gaussian(Index rows, Index cols);
  Matrix uniform_matrix(Index rows, Index cols, double lo, double hi);

  /// Derives an independent child seed, e.g. one per trial.
  static Seed derive(Seed base, std::uint64_t stream);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Haar-like random Stiefel point (QR of a Gaussian matrix).
StiefelPoint random_stiefel(Index n, Index p, Rng& rng);
/// Random N x N orthogonal matrix.
Matrix random_orthogonal(Index n, Rng& rng);
/// Random element of Q_{N,p} with i.i.d. N(0, scale^2) entries in A and B.
SkewParam random_skew_param(Index n, Index p, double scale, Rng& rng);

}  // namespace cayley
