#include "cayley/retraction.hpp"

#include <cmath>
#include <sstream>

#include "cayley/linalg.hpp"

namespace cayley {

namespace {

void check_tangent_shape(const StiefelPoint& u, const Matrix& d, const char* who) {
  if (d.rows() != u.n() || d.cols() != u.p()) {
    std::ostringstream os;
    os << who << ": direction must be " << u.n() << "x" << u.p();
    throw DimensionError(os.str());
  }
}

// P_U X = X - U (U^T X) / 2
Matrix apply_p(const Matrix& u, const Matrix& x) { return x - 0.5 * u * (u.transpose() * x); }

// Z = (I + A B^T)^{-1} through the 2p x 2p capacitance matrix I + B^T A.
class LowRankCayley {
 public:
  LowRankCayley(const Matrix& u, const Matrix& d) : a_(u.rows(), 2 * u.cols()), b_(u.rows(), 2 * u.cols()) {
    const Index p = u.cols();
    const Matrix half_pd = 0.5 * apply_p(u, d);
    a_ << u, half_pd;
    b_ << half_pd, -u;
    const Matrix k = Matrix::Identity(2 * p, 2 * p) + b_.transpose() * a_;
    lu_.compute(k);
    lu_t_.compute(k.transpose());
    if (p > 0 && !(lu_.rcond() >= 1e-14)) {
      throw StepTooLargeError("Cayley retraction: low-rank inner matrix is singular");
    }
  }

  Matrix z_times(const Matrix& x) const { return x - a_ * lu_.solve(b_.transpose() * x); }
  Matrix zt_times(const Matrix& y) const {
    return y - b_ * lu_t_.solve(a_.transpose() * y);
  }

 private:
  Matrix a_;
  Matrix b_;
  Eigen::PartialPivLU<Matrix> lu_;
  Eigen::PartialPivLU<Matrix> lu_t_;
};

}  // namespace

TangentVector project_tangent(const StiefelPoint& u, const Matrix& x) {
  check_tangent_shape(u, x, "project_tangent");
  const Matrix& um = u.mat();
  const Matrix ut_x = um.transpose() * x;
  Matrix out = 0.5 * um * (ut_x - ut_x.transpose()) + (x - um * ut_x);
  return TangentVector::unchecked(u, std::move(out));
}

TangentVector riemannian_grad(const StiefelPoint& u, const CostFunction& f) {
  return project_tangent(u, f.gradient(u.mat()));
}

StiefelPoint retract_qr(const StiefelPoint& u, const TangentVector& d) {
  check_tangent_shape(u, d.mat(), "retract_qr");
  return qr_orthonormalize(u.mat() + d.mat());
}

StiefelPoint retract_polar(const StiefelPoint& u, const TangentVector& d) {
  check_tangent_shape(u, d.mat(), "retract_polar");
  return polar_factor(u.mat() + d.mat());
}

StiefelPoint retract_cayley(const StiefelPoint& u, const TangentVector& d) {
  check_tangent_shape(u, d.mat(), "retract_cayley");
  const LowRankCayley z(u.mat(), d.mat());
  return StiefelPoint::unchecked(2.0 * z.z_times(u.mat()) - u.mat());
}

Matrix orthogonal_complement(const StiefelPoint& u) {
  const Index n = u.n();
  Eigen::HouseholderQR<Matrix> qr(u.mat());
  const Matrix q = qr.householderQ();
  return q.rightCols(n - u.p());
}

SkewParam psi_map(const StiefelPoint& u, const Matrix& u_perp, const TangentVector& d) {
  check_tangent_shape(u, d.mat(), "psi_map");
  if (u_perp.rows() != u.n() || u_perp.cols() != u.n() - u.p()) {
    throw DimensionError("psi_map: U_perp must be N x (N - p)");
  }
  const Matrix ut_d = u.mat().transpose() * d.mat();
  return SkewParam(-0.25 * (ut_d - ut_d.transpose()), -0.5 * u_perp.transpose() * d.mat());
}

TangentVector psi_inverse(const StiefelPoint& u, const Matrix& u_perp, const SkewParam& v) {
  if (v.n() != u.n() || v.p() != u.p()) throw DimensionError("psi_inverse: shape mismatch");
  Matrix d = -2.0 * (u.mat() * v.a() + u_perp * v.b());
  return TangentVector::unchecked(u, std::move(d));
}

TangentVector inverse_retract_cayley(const StiefelPoint& u, const StiefelPoint& target) {
  if (target.n() != u.n() || target.p() != u.p()) {
    throw DimensionError("inverse_retract_cayley: shape mismatch");
  }
  const Index p = u.p();
  const Matrix& um = u.mat();
  const Matrix& fm = target.mat();
  const Matrix ft_u = fm.transpose() * um;
  const SmallLu lu(Matrix::Identity(p, p) + ft_u);
  const double det = lu.determinant();
  if (!(std::abs(det) >= 1e-12 * std::ldexp(1.0, static_cast<int>(p)))) {
    throw SingularPointError("inverse_retract_cayley: target is on the singular-point set", det);
  }
  // (I + U^T F) = (I + F^T U)^T
  Matrix d = 2.0 * lu.solve_right(um) + 2.0 * fm * lu.inverse().transpose() - 2.0 * um;
  return TangentVector::unchecked(u, std::move(d));
}

TangentVector grad_retraction_pullback(const StiefelPoint& u, const TangentVector& d,
                                       const Matrix& euclidean_grad_at_image) {
  check_tangent_shape(u, d.mat(), "grad_retraction_pullback");
  check_tangent_shape(u, euclidean_grad_at_image, "grad_retraction_pullback");
  const Matrix& um = u.mat();
  const LowRankCayley z(um, d.mat());
  const Matrix zu = z.z_times(um);
  const Matrix ztg = z.zt_times(euclidean_grad_at_image);
  // -2 P_U Skew(zu ztg^T) U = -P_U (zu (ztg^T U) - ztg (zu^T U))
  const Matrix inner = zu * (ztg.transpose() * um) - ztg * (zu.transpose() * um);
  return TangentVector::unchecked(u, -apply_p(um, inner));
}

TangentVector grad_retraction_pullback(const StiefelPoint& u, const TangentVector& d,
                                       const CostFunction& f) {
  const StiefelPoint image = retract_cayley(u, d);
  return grad_retraction_pullback(u, d, f.gradient(image.mat()));
}

}  // namespace cayley
