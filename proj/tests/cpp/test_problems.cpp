#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "cayley/gradient.hpp"
#include "cayley/linalg.hpp"
#include "cayley/problems.hpp"
#include "cayley/random.hpp"
#include "cayley/transform.hpp"
#include "oracles.hpp"

using namespace cayley;

TEST(EigenCost, IdentityMatrix) {
  const CostFunction f = eigen_cost(eigen_instance_from_matrix(Matrix::Identity(8, 8), 3));
  Rng rng(1);
  for (int i = 0; i < 10; ++i) EXPECT_NEAR(f.value(random_stiefel(8, 3, rng).mat()), -3.0, 1e-13);
}

TEST(EigenInstance, OptimumProperties) {
  const EigenInstance inst = make_eigen_instance(50, 5, 2);
  const CostFunction f = eigen_cost(inst);
  EXPECT_LE((inst.a - inst.a.transpose()).norm(), 1e-12);
  EXPECT_NEAR(f.value(inst.optimum_basis), inst.optimum_value, 1e-9 * std::abs(inst.optimum_value));
  EXPECT_LE(stationarity_residual(StiefelPoint(inst.optimum_basis), f), 1e-8 * inst.top_eigenvalues(0));
  for (Index i = 1; i < inst.p; ++i) EXPECT_GE(inst.top_eigenvalues(i - 1), inst.top_eigenvalues(i));
  Rng rng(2);
  for (int i = 0; i < 100; ++i) EXPECT_LE(inst.optimum_value, f.value(random_stiefel(50, 5, rng).mat()));
}

TEST(EigenInstance, SeedDeterminism) {
  EXPECT_EQ(make_eigen_instance(20, 2, 9).a, make_eigen_instance(20, 2, 9).a);
  EXPECT_NE(make_eigen_instance(20, 2, 9).a, make_eigen_instance(20, 2, 10).a);
}

TEST(EigenInstance, RejectsNonSymmetric) {
  Matrix a = Matrix::Identity(3, 3);
  a(0, 1) = 1.0;
  EXPECT_THROW(eigen_instance_from_matrix(a, 1), PreconditionError);
}

TEST(EigenCost, FusedMatchesSeparate) {
  const EigenInstance inst = make_eigen_instance(15, 3, 3);
  const CostFunction f = eigen_cost(inst);
  ASSERT_TRUE(f.has_fused());
  Rng rng(3);
  const Matrix u = random_stiefel(15, 3, rng).mat();
  const auto [val, grad] = f.value_and_gradient(u);
  EXPECT_NEAR(val, f.value(u), 1e-12 * std::abs(val));
  EXPECT_LE((grad - f.gradient(u)).norm(), 1e-12 * grad.norm());
}

TEST(EigenCost, RightInvariance) {
  const CostFunction f = eigen_cost(make_eigen_instance(20, 4, 4));
  Rng rng(4);
  for (int i = 0; i < 20; ++i) {
    const Matrix u = random_stiefel(20, 4, rng).mat();
    const Matrix q = random_orthogonal(4, rng);
    EXPECT_NEAR(f.value(u * q), f.value(u), 1e-12 * std::abs(f.value(u)));
  }
}

TEST(Costs, FiniteDifferences) {
  Rng rng(5);
  const double h = 1e-6;
  const CostFunction costs[] = {eigen_cost(make_eigen_instance(10, 3, 5)), distance_cost(random_stiefel(10, 3, rng))};
  for (const CostFunction& f : costs) {
    for (int k = 0; k < 20; ++k) {
      const Matrix u = rng.gaussian(10, 3);
      const Matrix e = rng.gaussian(10, 3);
      const double fd = oracle::central_difference([&](double t) { return f.value(u + t * e); }, h);
      const double an = (f.gradient(u).array() * e.array()).sum();
      EXPECT_TRUE(oracle::fd_agrees(fd, an, f.value(u), 1e-5, h)) << fd << " vs " << an;
    }
  }
}

TEST(DistanceCost, ZeroAtTarget) {
  Rng rng(6);
  const StiefelPoint t = random_stiefel(7, 2, rng);
  const CostFunction f = distance_cost(t);
  EXPECT_EQ(f.value(t.mat()), 0.0);
  EXPECT_EQ(f.gradient(t.mat()).norm(), 0.0);
}

TEST(RotationCenter, ThetaZeroIsIdentity) {
  const RotationCenter rc = rotation_center(0.0, 6, 3);
  EXPECT_LE((rc.center.dense() - Matrix::Identity(6, 6)).norm(), 1e-15);
}

TEST(RotationCenter, DeterminantFormula) {
  const Index n = 12;
  const Index p = 4;
  const Matrix target = rotation_center(std::numbers::pi, n, p).left.mat();
  for (double theta : {std::numbers::pi / 1000, std::numbers::pi / 4, std::numbers::pi / 2, std::numbers::pi}) {
    const Matrix sle = rotation_center(theta, n, p).left.mat();
    const double det = (Matrix::Identity(p, p) + sle.transpose() * target).determinant();
    EXPECT_NEAR(det, std::pow(2.0, p - 1) * (1.0 - std::cos(theta)), 1e-12);
  }
  const Matrix sle = rotation_center(std::numbers::pi, n, p).left.mat();
  EXPECT_NEAR((Matrix::Identity(p, p) + sle.transpose() * target).determinant(), std::pow(2.0, p), 1e-12);
}

TEST(RotationCenter, RequiresTwoColumns) {
  EXPECT_THROW(rotation_center(1.0, 5, 1), DimensionError);
}

TEST(StochasticFamily, ZeroNoiseIsDeterministic) {
  const EigenInstance inst = make_eigen_instance(10, 2, 7);
  const StochasticCostFamily fam = stochastic_eigen_family(inst, 0.0);
  Rng rng(7);
  const Matrix u = random_stiefel(10, 2, rng).mat();
  const CostFunction draw = fam.draw(rng);
  EXPECT_EQ(draw.value(u), eigen_cost(inst).value(u));
  EXPECT_EQ(draw.gradient(u), eigen_cost(inst).gradient(u));
  EXPECT_EQ(fam.sigma_squared(), 0.0);
}

TEST(StochasticFamily, MeanAndVariance) {
  const Index n = 12;
  const Index p = 2;
  const EigenInstance inst = make_eigen_instance(n, p, 8);
  const StochasticCostFamily fam = stochastic_eigen_family(inst, 0.5);
  Rng rng(8);
  const Matrix u = random_stiefel(n, p, rng).mat();
  const Matrix g = eigen_cost(inst).gradient(u);
  const int draws = 10000;
  Matrix sum = Matrix::Zero(n, p);
  Matrix sum_sq = Matrix::Zero(n, p);
  double var_sum = 0.0;
  for (int i = 0; i < draws; ++i) {
    const Matrix d = fam.draw(rng).gradient(u) - g;
    sum += d;
    sum_sq += d.cwiseProduct(d);
    var_sum += d.squaredNorm();
  }
  const Matrix mean = sum / draws;
  const Matrix se = ((sum_sq / draws - mean.cwiseProduct(mean)) / draws).cwiseSqrt();
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < p; ++j) EXPECT_LE(std::abs(mean(i, j)), 3.0 * se(i, j) + 1e-12) << i << "," << j;
  }
  // sigma^2 is exact for this family, so the sample mean sits near it
  EXPECT_LE(var_sum / draws, fam.sigma_squared() * 1.05);
  EXPECT_GE(var_sum / draws, fam.sigma_squared() * 0.95);
}

TEST(UniformInitialPoint, Feasible) {
  Rng rng(9);
  EXPECT_LE(feasibility(uniform_initial_point(30, 5, rng).mat()), 1e-13);
}

TEST(Serialization, RoundTrip) {
  const EigenInstance inst = make_eigen_instance(9, 3, 42);
  std::stringstream ss;
  write_instance(ss, inst);
  const EigenInstance back = read_instance(ss);
  EXPECT_EQ(back.n, 9);
  EXPECT_EQ(back.p, 3);
  EXPECT_EQ(back.seed, 42u);
  EXPECT_EQ(back.a, inst.a);
  EXPECT_EQ(back.optimum_value, inst.optimum_value);
}

TEST(Serialization, MalformedHeader) {
  std::stringstream ss("3 5 1\n");
  EXPECT_THROW(read_instance(ss), PreconditionError);
  std::stringstream truncated("2 1 0\n1 0\n0\n");
  EXPECT_THROW(read_instance(truncated), PreconditionError);
}
