#pragma once

#include "cayley/core.hpp"
#include "cayley/points.hpp"

namespace cayley {

/// Skew(X) = (X - X^T) / 2.
Matrix skew_part(const Matrix& x);

struct SvdResult {
  Matrix u;
  Vector sigma;  // nonincreasing, nonnegative
  Matrix vt;
};

/// Thin SVD X = u diag(sigma) vt. Backed by two-sided Jacobi, which always
/// converges; a non-finite input raises FactorizationError.
SvdResult svd(const Matrix& x);

/// Largest singular value (0 for empty matrices).
double spectral_norm(const Matrix& x);

/// Orthonormal basis of span(X) from Householder QR with the R diagonal forced
/// nonnegative, so the result is a deterministic function of X.
/// Throws RankError when min |R_ii| < 1e-12 * ||X||_F.
StiefelPoint qr_orthonormalize(const Matrix& x);

/// Orthonormal polar factor X (X^T X)^{-1/2} = u vt. Throws RankError when
/// sigma_min < 1e-12 * sigma_max.
StiefelPoint polar_factor(const Matrix& x);

/// Schur complement M = I_p + A + B^T B of I + V.
Matrix schur_complement(const SkewParam& v);

/// (I + V)^{-1} RHS for RHS with N rows. Only the p x p Schur complement M is
/// factored:
///
///     M x_top = r_top + B^T r_bottom,   x_bottom = r_bottom - B x_top.
///
/// Throws SingularMatrixError if the 1-norm reciprocal condition estimate of M
/// drops below 1e-14 (impossible for finite input, since sigma_i(I+V) >= 1).
Matrix solve_ipv(const SkewParam& v, const Matrix& rhs);

/// Factorization of a small square matrix with a reciprocal condition
/// estimate, shared by the transform and gradient code.
class SmallLu {
 public:
  explicit SmallLu(const Matrix& m);
  Matrix solve(const Matrix& rhs) const { return lu_.solve(rhs); }
  /// X M^{-1}.
  Matrix solve_right(const Matrix& x) const;
  Matrix inverse() const { return lu_.inverse(); }
  double determinant() const { return lu_.determinant(); }
  /// log |det|, computed from the pivots.
  double log_abs_determinant() const;
  double rcond() const { return lu_.rcond(); }

 private:
  Eigen::PartialPivLU<Matrix> lu_;
  Eigen::PartialPivLU<Matrix> lu_t_;
};

}  // namespace cayley
