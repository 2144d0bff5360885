#include "cayley/points.hpp"

#include <cmath>
#include <sstream>

namespace cayley {

namespace {

double orthogonality_defect(const Matrix& q) {
  return (q.transpose() * q - Matrix::Identity(q.cols(), q.cols())).norm();
}

}  // namespace

double feasibility(const Matrix& u) { return orthogonality_defect(u); }

StiefelPoint::StiefelPoint(Matrix mat, double tol) : mat_(std::move(mat)) {
  if (mat_.cols() > mat_.rows()) {
    throw DimensionError("StiefelPoint: p must not exceed N");
  }
  const double defect = orthogonality_defect(mat_);
  if (!(defect <= tol)) {
    std::ostringstream os;
    os << "StiefelPoint: ||U^T U - I||_F = " << defect << " exceeds " << tol;
    throw PreconditionError(os.str());
  }
}

StiefelPoint StiefelPoint::unchecked(Matrix mat) {
  return StiefelPoint(std::move(mat), Unchecked{});
}

SkewParam::SkewParam(Index n, Index p)
    : a_(Matrix::Zero(p, p)), b_(Matrix::Zero(n - p, p)) {
  if (p < 0 || p > n) throw DimensionError("SkewParam: need 0 <= p <= N");
}

SkewParam::SkewParam(Matrix a, Matrix b) {
  if (a.rows() != a.cols()) throw DimensionError("SkewParam: A must be square");
  if (b.cols() != a.cols()) throw DimensionError("SkewParam: B must have p columns");
  const double asym = (a + a.transpose()).norm();
  if (asym > 1e-10 * std::max(1.0, a.norm())) {
    throw PreconditionError("SkewParam: A is not skew-symmetric");
  }
  a_ = 0.5 * (a - a.transpose());
  b_ = std::move(b);
}

SkewParam SkewParam::from_dense(const Matrix& v, Index p) {
  if (v.rows() != v.cols() || p > v.rows()) {
    throw DimensionError("SkewParam::from_dense: need square N x N with p <= N");
  }
  const Index n = v.rows();
  Matrix a = v.topLeftCorner(p, p);
  return SkewParam(0.5 * (a - a.transpose()), v.bottomLeftCorner(n - p, p), Trusted{});
}

Matrix SkewParam::to_dense() const {
  const Index n = this->n();
  const Index p = this->p();
  Matrix v = Matrix::Zero(n, n);
  v.topLeftCorner(p, p) = a_;
  v.bottomLeftCorner(n - p, p) = b_;
  v.topRightCorner(p, n - p) = -b_.transpose();
  return v;
}

double SkewParam::inner(const SkewParam& other) const {
  if (other.p() != p() || other.n() != n()) {
    throw DimensionError("SkewParam::inner: shape mismatch");
  }
  return (a_.array() * other.a_.array()).sum() + 2.0 * (b_.array() * other.b_.array()).sum();
}

double SkewParam::norm() const { return std::sqrt(squared_norm()); }

double SkewParam::spectral_norm() const {
  if (n() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(to_dense());
  return svd.singularValues()(0);
}

SkewParam& SkewParam::operator+=(const SkewParam& rhs) {
  if (rhs.p() != p() || rhs.n() != n()) throw DimensionError("SkewParam: shape mismatch");
  a_ += rhs.a_;
  b_ += rhs.b_;
  return *this;
}

SkewParam& SkewParam::operator-=(const SkewParam& rhs) {
  if (rhs.p() != p() || rhs.n() != n()) throw DimensionError("SkewParam: shape mismatch");
  a_ -= rhs.a_;
  b_ -= rhs.b_;
  return *this;
}

SkewParam& SkewParam::operator*=(double s) {
  a_ *= s;
  b_ *= s;
  return *this;
}

CenterPoint CenterPoint::general(Matrix s, Index p) {
  if (s.rows() != s.cols()) throw DimensionError("CenterPoint: S must be square");
  if (p < 0 || p > s.rows()) throw DimensionError("CenterPoint: need 0 <= p <= N");
  if (orthogonality_defect(s) > 1e-10) {
    throw PreconditionError("CenterPoint: S is not orthogonal");
  }
  return CenterPoint(General{std::move(s)}, p);
}

CenterPoint CenterPoint::structured(Matrix t, Index n) {
  if (t.rows() != t.cols()) throw DimensionError("CenterPoint: T must be square");
  if (t.rows() > n) throw DimensionError("CenterPoint: p must not exceed N");
  if (orthogonality_defect(t) > 1e-10) {
    throw PreconditionError("CenterPoint: T is not orthogonal");
  }
  const Index p = t.rows();
  return CenterPoint(Structured{std::move(t), n}, p);
}

CenterPoint CenterPoint::identity(Index n, Index p) {
  return structured(Matrix::Identity(p, p), n);
}

Index CenterPoint::n() const {
  return std::visit(
      [](const auto& r) -> Index {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, General>) {
          return r.s.rows();
        } else {
          return r.n;
        }
      },
      rep_);
}

Matrix CenterPoint::left() const {
  if (const auto* g = std::get_if<General>(&rep_)) return g->s.leftCols(p_);
  const auto& st = std::get<Structured>(rep_);
  Matrix out = Matrix::Zero(st.n, p_);
  out.topRows(p_) = st.t;
  return out;
}

Matrix CenterPoint::right() const {
  const Index n = this->n();
  if (const auto* g = std::get_if<General>(&rep_)) return g->s.rightCols(n - p_);
  Matrix out = Matrix::Zero(n, n - p_);
  out.bottomRows(n - p_).setIdentity();
  return out;
}

Matrix CenterPoint::dense() const {
  if (const auto* g = std::get_if<General>(&rep_)) return g->s;
  const auto& st = std::get<Structured>(rep_);
  Matrix out = Matrix::Identity(st.n, st.n);
  out.topLeftCorner(p_, p_) = st.t;
  return out;
}

Matrix CenterPoint::left_t_times(const Matrix& x) const {
  if (x.rows() != n()) throw DimensionError("CenterPoint: operand must have N rows");
  if (const auto* g = std::get_if<General>(&rep_)) {
    return g->s.leftCols(p_).transpose() * x;
  }
  return std::get<Structured>(rep_).t.transpose() * x.topRows(p_);
}

Matrix CenterPoint::right_t_times(const Matrix& x) const {
  const Index n = this->n();
  if (x.rows() != n) throw DimensionError("CenterPoint: operand must have N rows");
  if (const auto* g = std::get_if<General>(&rep_)) {
    return g->s.rightCols(n - p_).transpose() * x;
  }
  return x.bottomRows(n - p_);
}

Matrix CenterPoint::times(const Matrix& x) const {
  const Index n = this->n();
  if (x.rows() != n) throw DimensionError("CenterPoint: operand must have N rows");
  if (const auto* g = std::get_if<General>(&rep_)) return g->s * x;
  Matrix out = x;
  out.topRows(p_) = std::get<Structured>(rep_).t * x.topRows(p_);
  return out;
}

TangentVector::TangentVector(StiefelPoint base, Matrix mat)
    : base_(std::move(base)), mat_(std::move(mat)) {
  if (mat_.rows() != base_.n() || mat_.cols() != base_.p()) {
    throw DimensionError("TangentVector: shape must match the base point");
  }
  const Matrix utd = base_.mat().transpose() * mat_;
  const double defect = (utd + utd.transpose()).norm();
  if (defect > 1e-10 * std::max(1.0, mat_.norm())) {
    throw PreconditionError("TangentVector: U^T D is not skew-symmetric");
  }
}

TangentVector TangentVector::unchecked(StiefelPoint base, Matrix mat) {
  return TangentVector(std::move(base), std::move(mat), Unchecked{});
}

}  // namespace cayley
