#pragma once

#include <cstdint>
#include <iosfwd>

#include "cayley/cost.hpp"
#include "cayley/gradient.hpp"
#include "cayley/points.hpp"
#include "cayley/random.hpp"

namespace cayley {

/// min -tr(U^T A U) over St(p, N) for a symmetric PSD A = Ã^T Ã.
struct EigenInstance {
  Matrix a;
  double optimum_value = 0.0;  // -(sum of the p largest eigenvalues of a)
  Matrix optimum_basis;        // matching eigenvectors, N x p
  Vector top_eigenvalues;      // p largest eigenvalues, descending
  Index n = 0;
  Index p = 0;
  std::uint64_t seed = 0;
};

/// Ã has i.i.d. N(0, 1) entries drawn from Rng(seed); A = Ã^T Ã.
EigenInstance make_eigen_instance(Index n, Index p, std::uint64_t seed);

/// Builds an instance around a given symmetric matrix (optimum from a
/// symmetric eigendecomposition).
EigenInstance eigen_instance_from_matrix(Matrix a, Index p, std::uint64_t seed = 0);

/// f(U) = -tr(U^T A U), grad f(U) = -2 A U. Provides a fused evaluation that
/// forms A U once.
CostFunction eigen_cost(const EigenInstance& inst);

/// f(U) = ||U - target||_F^2 / 2, grad f(U) = U - target.
CostFunction distance_cost(const StiefelPoint& target);

/// S(theta) = diag(R(theta), I_{N-2}) with R the 2 x 2 rotation, stored as a
/// structured center with T = diag(R(theta), I_{p-2}).
struct RotationCenter {
  CenterPoint center;
  StiefelPoint left;  // first p columns of S(theta)
};

/// Requires p >= 2.
RotationCenter rotation_center(double theta, Index n, Index p);

/// Stochastic eigen costs with A^xi = A + noise_sigma E, E = (G + G^T) / 2 and
/// G i.i.d. N(0, 1). E[E] = 0 and E[E^2] = (N + 1) / 2 I, so
/// E||grad f^xi(U) - grad f(U)||_F^2 = 2 noise_sigma^2 p (N + 1) exactly for
/// every U in St(p, N); that value is the family's sigma^2.
StochasticCostFamily stochastic_eigen_family(const EigenInstance& inst, double noise_sigma);

/// Initial point from the QR factor of a matrix with i.i.d. uniform [0, 1]
/// entries.
StiefelPoint uniform_initial_point(Index n, Index p, Rng& rng);

/// Text format: a header line "n p seed", then the N x N matrix row-major,
/// one row per line, 17 significant digits. The optimum is recomputed on read.
void write_instance(std::ostream& os, const EigenInstance& inst);
EigenInstance read_instance(std::istream& is);

}  // namespace cayley
