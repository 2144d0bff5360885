#include "cayley/transform.hpp"

#include <cmath>
#include <sstream>

#include "cayley/linalg.hpp"

namespace cayley {

namespace {

void check_shapes(const CenterPoint& s, Index n, Index p, const char* who) {
  if (s.n() != n || s.p() != p) {
    std::ostringstream os;
    os << who << ": center is " << s.n() << "x" << s.p() << " but operand is " << n << "x" << p;
    throw DimensionError(os.str());
  }
}

}  // namespace

SkewParam forward(const CenterPoint& s, const StiefelPoint& u) {
  const Index n = u.n();
  const Index p = u.p();
  check_shapes(s, n, p, "forward");

  const Matrix sle_t_u = s.left_t_times(u.mat());
  const Matrix x = Matrix::Identity(p, p) + sle_t_u;
  const SmallLu lu(x);
  const double det = lu.determinant();
  if (!(std::abs(det) >= 1e-12 * std::ldexp(1.0, static_cast<int>(p)))) {
    std::ostringstream os;
    os << "forward: U lies on the singular-point set, det(I + S_le^T U) = " << det;
    throw SingularPointError(os.str(), det);
  }
  const Matrix x_inv = lu.inverse();
  Matrix a = 2.0 * x_inv.transpose() * skew_part(sle_t_u.transpose()) * x_inv;
  Matrix b = -s.right_t_times(u.mat()) * x_inv;
  return SkewParam(0.5 * (a - a.transpose()), std::move(b));
}

StiefelPoint inverse(const CenterPoint& s, const SkewParam& v) {
  const Index n = v.n();
  const Index p = v.p();
  check_shapes(s, n, p, "inverse");

  const SmallLu m(schur_complement(v));
  if (const auto* st = std::get_if<CenterPoint::Structured>(&s.rep())) {
    Matrix u(n, p);
    const Matrix m_inv = m.inverse();
    u.topRows(p) = st->t * (2.0 * m_inv - Matrix::Identity(p, p));
    u.bottomRows(n - p) = -2.0 * v.b() * m_inv;
    return StiefelPoint::unchecked(std::move(u));
  }
  const Matrix& full = std::get<CenterPoint::General>(s.rep()).s;
  const auto s_le = full.leftCols(p);
  const auto s_ri = full.rightCols(n - p);
  const Matrix y = s_le - s_ri * v.b();
  return StiefelPoint::unchecked(2.0 * m.solve_right(y) - s_le);
}

CenterPoint construct_center(const StiefelPoint& u) {
  const SvdResult f = svd(u.upper());
  return CenterPoint::structured(f.u * f.vt, u.n());
}

StiefelPoint align_right_invariant(const CenterPoint& s, const StiefelPoint& u) {
  check_shapes(s, u.n(), u.p(), "align_right_invariant");
  const SvdResult f = svd(s.left_t_times(u.mat()));
  // Q = Q2 Q1^T
  const Matrix q = f.vt.transpose() * f.u.transpose();
  return StiefelPoint::unchecked(u.mat() * q);
}

SingularDiagnostic singular_diagnostic(const CenterPoint& s, const SkewParam& v) {
  check_shapes(s, v.n(), v.p(), "singular_diagnostic");
  const SmallLu m(schur_complement(v));
  // det(M) = det(I + V) > 0, so only |det| is needed.
  const double log_det = m.log_abs_determinant();
  const double log_value = static_cast<double>(v.p()) * std::log(2.0) - log_det;
  return {std::exp(log_value), log_value};
}

double mobility(const SkewParam& v) {
  const Index p = v.p();
  const Matrix& b = v.b();
  if (p == 0) return 2.0;
  double sigma_max = 0.0;
  double sigma_min = 0.0;
  if (b.rows() > 0) {
    Eigen::JacobiSVD<Matrix> solver(b);
    const Vector& sv = solver.singularValues();
    sigma_max = sv(0);
    sigma_min = b.rows() >= p ? sv(p - 1) : 0.0;
  }
  return 2.0 * std::sqrt(1.0 + sigma_max * sigma_max) / (1.0 + sigma_min * sigma_min);
}

SkewParam canonicalize_general_skew(const Matrix& w, const CenterPoint& s) {
  const Index n = s.n();
  const Index p = s.p();
  if (w.rows() != n || w.cols() != n) {
    throw DimensionError("canonicalize_general_skew: W must be N x N");
  }
  if ((w + w.transpose()).norm() > 1e-10 * std::max(1.0, w.norm())) {
    throw PreconditionError("canonicalize_general_skew: W is not skew-symmetric");
  }
  const Matrix a = w.topLeftCorner(p, p);
  const Matrix b = w.bottomLeftCorner(n - p, p);
  const Matrix c = w.bottomRightCorner(n - p, n - p);
  Eigen::PartialPivLU<Matrix> ipc(Matrix::Identity(n - p, n - p) + c);
  if (n - p > 0 && !(ipc.rcond() >= 1e-14)) {
    throw SingularMatrixError("canonicalize_general_skew: I + C is singular", ipc.rcond());
  }
  const Matrix b_hat = ipc.solve(b);
  const Matrix a_hat = a - b_hat.transpose() * c * b_hat;
  return SkewParam(0.5 * (a_hat - a_hat.transpose()), b_hat);
}

}  // namespace cayley
