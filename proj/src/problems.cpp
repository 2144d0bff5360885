#include "cayley/problems.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstdio>
#include <istream>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>

#include "cayley/linalg.hpp"

namespace cayley {

EigenInstance eigen_instance_from_matrix(Matrix a, Index p, std::uint64_t seed) {
  const Index n = a.rows();
  if (a.cols() != n) throw DimensionError("eigen instance: matrix must be square");
  if (p < 1 || p > n) throw DimensionError("eigen instance: need 1 <= p <= N");
  if ((a - a.transpose()).norm() > 1e-12 * std::max(1.0, a.norm())) {
    throw PreconditionError("eigen instance: matrix is not symmetric");
  }
  a = (0.5 * (a + a.transpose())).eval();

  Eigen::SelfAdjointEigenSolver<Matrix> eig(a);
  if (eig.info() != Eigen::Success) throw FactorizationError("eigen instance: eigensolver failed");
  // eigenvalues come out ascending
  EigenInstance inst;
  inst.optimum_basis = eig.eigenvectors().rightCols(p).rowwise().reverse();
  inst.top_eigenvalues = eig.eigenvalues().tail(p).reverse();
  inst.optimum_value = -inst.top_eigenvalues.sum();
  inst.a = std::move(a);
  inst.n = n;
  inst.p = p;
  inst.seed = seed;
  return inst;
}

EigenInstance make_eigen_instance(Index n, Index p, std::uint64_t seed) {
  if (n < 1) throw DimensionError("make_eigen_instance: N must be positive");
  Rng rng(seed);
  const Matrix at = rng.gaussian(n, n);
  Matrix a = at.transpose() * at;
  return eigen_instance_from_matrix(std::move(a), p, seed);
}

CostFunction eigen_cost(const EigenInstance& inst) {
  // shared so copies of the cost do not duplicate the N x N matrix
  auto a = std::make_shared<const Matrix>(inst.a);
  return CostFunction(
      inst.n, inst.p,
      [a](const Matrix& u) { return -(u.transpose() * (*a * u)).trace(); },
      [a](const Matrix& u) -> Matrix { return -2.0 * (*a * u); },
      [a](const Matrix& u) {
        const Matrix au = *a * u;
        return std::pair<double, Matrix>(-u.cwiseProduct(au).sum(), -2.0 * au);
      });
}

CostFunction distance_cost(const StiefelPoint& target) {
  auto t = std::make_shared<const Matrix>(target.mat());
  return CostFunction(
      target.n(), target.p(), [t](const Matrix& u) { return 0.5 * (u - *t).squaredNorm(); },
      [t](const Matrix& u) -> Matrix { return u - *t; });
}

RotationCenter rotation_center(double theta, Index n, Index p) {
  if (p < 2 || n <= p) throw DimensionError("rotation_center: need 2 <= p < N");
  Matrix t = Matrix::Identity(p, p);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  t(0, 0) = c;
  t(0, 1) = -s;
  t(1, 0) = s;
  t(1, 1) = c;
  CenterPoint center = CenterPoint::structured(t, n);
  StiefelPoint left = StiefelPoint::unchecked(center.left());
  return {std::move(center), std::move(left)};
}

StochasticCostFamily stochastic_eigen_family(const EigenInstance& inst, double noise_sigma) {
  if (!(noise_sigma >= 0.0)) throw PreconditionError("stochastic_eigen_family: noise_sigma must be >= 0");
  const EigenInstance base = inst;
  const Index n = inst.n;
  auto sampler = [base, noise_sigma, n](Rng& rng) {
    if (noise_sigma == 0.0) return eigen_cost(base);
    const Matrix g = rng.gaussian(n, n);
    EigenInstance perturbed;
    perturbed.a = base.a + noise_sigma * 0.5 * (g + g.transpose());
    perturbed.n = base.n;
    perturbed.p = base.p;
    return eigen_cost(perturbed);
  };
  const double sigma2 = 2.0 * noise_sigma * noise_sigma * static_cast<double>(inst.p) *
                        static_cast<double>(n + 1);
  return StochasticCostFamily(eigen_cost(inst), std::move(sampler), sigma2);
}

StiefelPoint uniform_initial_point(Index n, Index p, Rng& rng) {
  return qr_orthonormalize(rng.uniform_matrix(n, p, 0.0, 1.0));
}

void write_instance(std::ostream& os, const EigenInstance& inst) {
  os << inst.n << ' ' << inst.p << ' ' << inst.seed << '\n';
  char buf[32];
  for (Index i = 0; i < inst.n; ++i) {
    for (Index j = 0; j < inst.n; ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", inst.a(i, j));
      if (j > 0) os << ' ';
      os << buf;
    }
    os << '\n';
  }
}

EigenInstance read_instance(std::istream& is) {
  long long n = 0;
  long long p = 0;
  std::uint64_t seed = 0;
  if (!(is >> n >> p >> seed) || n < 1 || p < 1 || p > n) {
    throw PreconditionError("read_instance: malformed header");
  }
  Matrix a(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      std::string tok;
      if (!(is >> tok)) throw PreconditionError("read_instance: truncated payload");
      a(i, j) = std::stod(tok);
    }
  }
  return eigen_instance_from_matrix(std::move(a), p, seed);
}

}  // namespace cayley
