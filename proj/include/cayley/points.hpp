#pragma once

#include <variant>

#include "cayley/core.hpp"

namespace cayley {

/// Default tolerance on ||U^T U - I_p||_F accepted when wrapping a matrix as a
/// Stiefel point.
inline constexpr double kFeasibilityTol = 1e-10;

/// ||U^T U - I_p||_F.
double feasibility(const Matrix& u);

/// A point U of St(p, N): an N x p matrix with orthonormal columns.
class StiefelPoint {
 public:
  /// Validates orthonormality within `tol`; throws PreconditionError otherwise.
  explicit StiefelPoint(Matrix mat, double tol = kFeasibilityTol);

  /// Wraps iterates produced by the algorithms without re-checking feasibility
  /// (retraction-based runs are allowed to drift; drift is reported, not
  /// rejected).
  static StiefelPoint unchecked(Matrix mat);

  Index n() const { return mat_.rows(); }
  Index p() const { return mat_.cols(); }
  const Matrix& mat() const { return mat_; }

  /// Leading p x p block U_up.
  auto upper() const { return mat_.topRows(p()); }
  /// Trailing (N - p) x p block U_lo.
  auto lower() const { return mat_.bottomRows(n() - p()); }

 private:
  struct Unchecked {};
  StiefelPoint(Matrix mat, Unchecked) : mat_(std::move(mat)) {}

  Matrix mat_;
};

/// Compressed element of Q_{N,p}:
///
///     V = [ A  -B^T ]      A in R^{p x p} skew-symmetric,
///         [ B   0   ]      B in R^{(N-p) x p}.
///
/// Only A and B are stored. The Frobenius geometry of the full N x N matrix is
/// reproduced by weighting the B block twice:
///
///     <V1, V2> = tr(A1^T A2) + 2 tr(B1^T B2).
///
/// Every step, norm and directional derivative in Q_{N,p} must go through
/// inner()/norm().
class SkewParam {
 public:
  /// Zero element of Q_{N,p}.
  SkewParam(Index n, Index p);

  /// `a` must be skew-symmetric within 1e-10 * max(1, ||a||_F); it is stored
  /// exactly skew by taking (a - a^T) / 2.
  SkewParam(Matrix a, Matrix b);

  static SkewParam zero(Index n, Index p) { return SkewParam(n, p); }

  /// Extracts blocks [[V]]_11 and [[V]]_21 of a full N x N matrix. The
  /// remaining blocks are ignored.
  static SkewParam from_dense(const Matrix& v, Index p);

  Index n() const { return a_.rows() + b_.rows(); }
  Index p() const { return a_.rows(); }
  const Matrix& a() const { return a_; }
  const Matrix& b() const { return b_; }

  /// Full N x N skew-symmetric matrix.
  Matrix to_dense() const;

  double inner(const SkewParam& other) const;
  double squared_norm() const { return inner(*this); }
  double norm() const;
  /// Spectral norm of the full N x N embedding.
  double spectral_norm() const;

  SkewParam& operator+=(const SkewParam& rhs);
  SkewParam& operator-=(const SkewParam& rhs);
  SkewParam& operator*=(double s);

  friend SkewParam operator+(SkewParam lhs, const SkewParam& rhs) { return lhs += rhs; }
  friend SkewParam operator-(SkewParam lhs, const SkewParam& rhs) { return lhs -= rhs; }
  friend SkewParam operator*(double s, SkewParam v) { return v *= s; }
  friend SkewParam operator*(SkewParam v, double s) { return v *= s; }

 private:
  struct Trusted {};
  SkewParam(Matrix a, Matrix b, Trusted) : a_(std::move(a)), b_(std::move(b)) {}

  Matrix a_;
  Matrix b_;
};

/// Orthogonal center S in O(N). Either stored fully, or in the structured form
/// S = diag(T, I_{N-p}) with T in O(p), where only T is kept.
class CenterPoint {
 public:
  struct General {
    Matrix s;
  };
  struct Structured {
    Matrix t;
    Index n;
  };

  /// `s` must be N x N orthogonal within 1e-10 (Frobenius); p is the column
  /// count of the Stiefel points it parametrizes.
  static CenterPoint general(Matrix s, Index p);
  /// `t` must be p x p orthogonal within 1e-10 (Frobenius).
  static CenterPoint structured(Matrix t, Index n);
  /// S = I_N in structured form.
  static CenterPoint identity(Index n, Index p);

  Index n() const;
  Index p() const { return p_; }
  bool is_structured() const { return std::holds_alternative<Structured>(rep_); }
  const std::variant<General, Structured>& rep() const { return rep_; }

  /// S_le = S I_{N x p}, the first p columns.
  Matrix left() const;
  /// S_ri, the last N - p columns.
  Matrix right() const;
  /// Full N x N matrix.
  Matrix dense() const;

  /// S_le^T X for X with N rows.
  Matrix left_t_times(const Matrix& x) const;
  /// S_ri^T X for X with N rows.
  Matrix right_t_times(const Matrix& x) const;
  /// S_le X_top + S_ri X_bottom for X with N rows, i.e. S X.
  Matrix times(const Matrix& x) const;

 private:
  CenterPoint(std::variant<General, Structured> rep, Index p)
      : rep_(std::move(rep)), p_(p) {}

  std::variant<General, Structured> rep_;
  Index p_;
};

/// Tangent vector at a Stiefel point: U^T D + D^T U = 0.
class TangentVector {
 public:
  /// Checks ||U^T D + D^T U||_F <= 1e-10 * max(1, ||D||_F).
  TangentVector(StiefelPoint base, Matrix mat);

  /// Wraps a matrix already known to be tangent (e.g. a projection result).
  static TangentVector unchecked(StiefelPoint base, Matrix mat);

  const StiefelPoint& base() const { return base_; }
  const Matrix& mat() const { return mat_; }

 private:
  struct Unchecked {};
  TangentVector(StiefelPoint base, Matrix mat, Unchecked)
      : base_(std::move(base)), mat_(std::move(mat)) {}

  StiefelPoint base_;
  Matrix mat_;
};

}  // namespace cayley
