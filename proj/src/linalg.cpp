#include "cayley/linalg.hpp"

#include <cmath>

namespace cayley {

Matrix skew_part(const Matrix& x) {
  if (x.rows() != x.cols()) throw DimensionError("skew_part: matrix must be square");
  return 0.5 * (x - x.transpose());
}

SvdResult svd(const Matrix& x) {
  if (!x.allFinite()) throw FactorizationError("svd: non-finite input");
  Eigen::JacobiSVD<Matrix> solver(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (solver.info() != Eigen::Success) throw FactorizationError("svd: no convergence");
  return {solver.matrixU(), solver.singularValues(), solver.matrixV().transpose()};
}

double spectral_norm(const Matrix& x) {
  if (x.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> solver(x);
  return solver.singularValues()(0);
}

StiefelPoint qr_orthonormalize(const Matrix& x) {
  const Index n = x.rows();
  const Index p = x.cols();
  if (p > n) throw DimensionError("qr_orthonormalize: need N >= p");
  Eigen::HouseholderQR<Matrix> qr(x);
  const Matrix r = qr.matrixQR().topRows(p).triangularView<Eigen::Upper>();
  const double scale = x.norm();
  Vector signs(p);
  for (Index j = 0; j < p; ++j) {
    const double d = r(j, j);
    if (!(std::abs(d) >= 1e-12 * scale) || scale == 0.0) {
      throw RankError("qr_orthonormalize: input is numerically rank deficient");
    }
    signs(j) = d < 0.0 ? -1.0 : 1.0;
  }
  Matrix q = qr.householderQ() * Matrix::Identity(n, p);
  q = q * signs.asDiagonal();
  return StiefelPoint::unchecked(std::move(q));
}

StiefelPoint polar_factor(const Matrix& x) {
  if (x.cols() > x.rows()) throw DimensionError("polar_factor: need N >= p");
  const SvdResult f = svd(x);
  const Index p = x.cols();
  if (p > 0 && !(f.sigma(p - 1) > 1e-12 * f.sigma(0))) {
    throw RankError("polar_factor: input is numerically rank deficient");
  }
  return StiefelPoint::unchecked(f.u * f.vt);
}

Matrix schur_complement(const SkewParam& v) {
  const Index p = v.p();
  return Matrix::Identity(p, p) + v.a() + v.b().transpose() * v.b();
}

SmallLu::SmallLu(const Matrix& m) : lu_(m), lu_t_(m.transpose()) {}

Matrix SmallLu::solve_right(const Matrix& x) const {
  return lu_t_.solve(x.transpose()).transpose();
}

double SmallLu::log_abs_determinant() const {
  const auto& lu = lu_.matrixLU();
  double acc = 0.0;
  for (Index i = 0; i < lu.rows(); ++i) acc += std::log(std::abs(lu(i, i)));
  return acc;
}

Matrix solve_ipv(const SkewParam& v, const Matrix& rhs) {
  const Index n = v.n();
  const Index p = v.p();
  if (rhs.rows() != n) throw DimensionError("solve_ipv: RHS must have N rows");
  const SmallLu m(schur_complement(v));
  if (p > 0 && !(m.rcond() >= 1e-14)) {
    throw SingularMatrixError("solve_ipv: Schur complement is singular", m.rcond());
  }
  Matrix out(n, rhs.cols());
  const auto r_top = rhs.topRows(p);
  const auto r_bot = rhs.bottomRows(n - p);
  out.topRows(p) = m.solve(r_top + v.b().transpose() * r_bot);
  out.bottomRows(n - p) = r_bot - v.b() * out.topRows(p);
  return out;
}

}  // namespace cayley
