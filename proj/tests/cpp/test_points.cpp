#include <gtest/gtest.h>

#include "cayley/linalg.hpp"
#include "cayley/points.hpp"
#include "cayley/random.hpp"

using namespace cayley;

TEST(StiefelPoint, ChecksFeasibility) {
  EXPECT_NO_THROW(StiefelPoint(Matrix::Identity(4, 2)));
  EXPECT_THROW(StiefelPoint(2.0 * Matrix::Identity(4, 2)), PreconditionError);
  EXPECT_THROW(StiefelPoint(Matrix::Identity(2, 3)), DimensionError);
  EXPECT_NO_THROW(StiefelPoint::unchecked(2.0 * Matrix::Identity(4, 2)));
}

TEST(StiefelPoint, Blocks) {
  Rng rng(1);
  const StiefelPoint u = random_stiefel(7, 3, rng);
  EXPECT_EQ(Matrix(u.upper()), u.mat().topRows(3));
  EXPECT_EQ(Matrix(u.lower()), u.mat().bottomRows(4));
}

TEST(SkewParam, InnerProductMatchesDenseFrobenius) {
  Rng rng(2);
  for (int i = 0; i < 20; ++i) {
    const SkewParam v1 = random_skew_param(9, 4, 1.0, rng);
    const SkewParam v2 = random_skew_param(9, 4, 1.0, rng);
    const double dense = v1.to_dense().cwiseProduct(v2.to_dense()).sum();
    EXPECT_NEAR(v1.inner(v2), dense, 1e-12 * std::max(1.0, std::abs(dense)));
    EXPECT_NEAR(v1.norm(), v1.to_dense().norm(), 1e-12);
    EXPECT_NEAR(v1.squared_norm(), v1.a().squaredNorm() + 2.0 * v1.b().squaredNorm(), 1e-12);
    EXPECT_NEAR(v1.spectral_norm(), svd(v1.to_dense()).sigma(0), 1e-10);
  }
}

TEST(SkewParam, DenseRoundTrip) {
  Rng rng(3);
  const SkewParam v = random_skew_param(6, 2, 1.0, rng);
  const Matrix d = v.to_dense();
  EXPECT_LE((d + d.transpose()).norm(), 0.0);
  EXPECT_EQ(d.bottomRightCorner(4, 4).norm(), 0.0);
  const SkewParam back = SkewParam::from_dense(d, 2);
  EXPECT_EQ((back - v).norm(), 0.0);
}

TEST(SkewParam, EnforcesSkewness) {
  Matrix a(2, 2);
  a << 0, 1, -1, 0;
  EXPECT_NO_THROW(SkewParam(a, Matrix::Zero(3, 2)));
  a(1, 0) = 1.0;
  EXPECT_THROW(SkewParam(a, Matrix::Zero(3, 2)), PreconditionError);
  EXPECT_THROW(SkewParam(Matrix::Zero(2, 2), Matrix::Zero(3, 1)), DimensionError);
  // tiny asymmetry is projected away
  Matrix almost(2, 2);
  almost << 0, 1, -1 + 1e-13, 0;
  const SkewParam v(almost, Matrix::Zero(1, 2));
  EXPECT_EQ((v.a() + v.a().transpose()).norm(), 0.0);
}

TEST(SkewParam, Arithmetic) {
  Rng rng(4);
  const SkewParam v1 = random_skew_param(5, 2, 1.0, rng);
  const SkewParam v2 = random_skew_param(5, 2, 1.0, rng);
  const SkewParam lin = 2.0 * v1 - v2 * 0.5;
  EXPECT_LE((lin.to_dense() - (2.0 * v1.to_dense() - 0.5 * v2.to_dense())).norm(), 1e-14);
  EXPECT_THROW(v1 + SkewParam::zero(6, 2), DimensionError);
}

TEST(CenterPoint, StructuredMatchesDense) {
  Rng rng(5);
  const Matrix t = random_orthogonal(3, rng);
  const CenterPoint s = CenterPoint::structured(t, 8);
  Matrix dense = Matrix::Identity(8, 8);
  dense.topLeftCorner(3, 3) = t;
  EXPECT_EQ((s.dense() - dense).norm(), 0.0);
  EXPECT_EQ((s.left() - dense.leftCols(3)).norm(), 0.0);
  EXPECT_EQ((s.right() - dense.rightCols(5)).norm(), 0.0);
  const Matrix x = rng.gaussian(8, 2);
  const CenterPoint g = CenterPoint::general(dense, 3);
  EXPECT_LE((s.left_t_times(x) - g.left_t_times(x)).norm(), 1e-15);
  EXPECT_LE((s.right_t_times(x) - g.right_t_times(x)).norm(), 1e-15);
  EXPECT_LE((s.times(x) - dense * x).norm(), 1e-14);
  EXPECT_TRUE(s.is_structured());
  EXPECT_FALSE(g.is_structured());
}

TEST(CenterPoint, RejectsNonOrthogonal) {
  EXPECT_THROW(CenterPoint::general(2.0 * Matrix::Identity(4, 4), 2), PreconditionError);
  EXPECT_THROW(CenterPoint::structured(2.0 * Matrix::Identity(2, 2), 4), PreconditionError);
}

TEST(TangentVector, Checks) {
  Rng rng(6);
  const StiefelPoint u = random_stiefel(6, 2, rng);
  EXPECT_THROW(TangentVector(u, u.mat()), PreconditionError);
  // U K with K skew is tangent
  Matrix k(2, 2);
  k << 0, 1, -1, 0;
  EXPECT_NO_THROW(TangentVector(u, u.mat() * k));
  EXPECT_THROW(TangentVector(u, Matrix::Zero(5, 2)), DimensionError);
}
