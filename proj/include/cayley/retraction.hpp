#pragma once

#include "cayley/cost.hpp"
#include "cayley/points.hpp"

namespace cayley {

/// Orthogonal projection onto T_U St(p,N):
/// P(X) = U (U^T X - X^T U) / 2 + (I - U U^T) X.
TangentVector project_tangent(const StiefelPoint& u, const Matrix& x);

/// Riemannian gradient P(grad f(U)).
TangentVector riemannian_grad(const StiefelPoint& u, const CostFunction& f);

/// qf(U + D).
StiefelPoint retract_qr(const StiefelPoint& u, const TangentVector& d);

/// Polar factor of U + D.
StiefelPoint retract_polar(const StiefelPoint& u, const TangentVector& d);

/// Cayley retraction (I + W)^{-1} (I - W) U with W = Skew(U D^T P_U) and
/// P_U = I - U U^T / 2. Evaluated as 2 Z U - U with the Sherman-Morrison-
/// Woodbury form
///
///     Z = (I + W)^{-1} = I - A (I_2p + B^T A)^{-1} B^T,
///     A = [U, P_U D / 2],  B = [P_U D / 2, -U],
///
/// which costs O(N p^2). Throws StepTooLargeError if the 2p x 2p inner matrix
/// is numerically singular (rcond < 1e-14).
StiefelPoint retract_cayley(const StiefelPoint& u, const TangentVector& d);

/// Orthogonal complement U_perp (N x (N-p)) from a full QR of U.
Matrix orthogonal_complement(const StiefelPoint& u);

/// Psi_{[U U_perp]}(D) = -1/2 [[U^T D, -(U_perp^T D)^T], [U_perp^T D, 0]].
SkewParam psi_map(const StiefelPoint& u, const Matrix& u_perp, const TangentVector& d);

/// Inverse of psi_map: D = -2 S V I_{N x p} with S = [U U_perp].
TangentVector psi_inverse(const StiefelPoint& u, const Matrix& u_perp, const SkewParam& v);

/// Inverse of retract_cayley at U:
/// 2 U (I + F^T U)^{-1} + 2 F (I + U^T F)^{-1} - 2 U for target F.
/// Throws SingularPointError when det(I + F^T U) vanishes numerically.
TangentVector inverse_retract_cayley(const StiefelPoint& u, const StiefelPoint& target);

/// Euclidean gradient of D -> f(R^Cay_U(D)) on T_U St(p,N):
/// -2 P_U Skew(Z U grad f(R_U(D))^T Z) U, evaluated in O(N p^2) through the
/// same low-rank form of Z.
TangentVector grad_retraction_pullback(const StiefelPoint& u, const TangentVector& d,
                                       const CostFunction& f);

/// Same, reusing grad f already evaluated at R^Cay_U(D).
TangentVector grad_retraction_pullback(const StiefelPoint& u, const TangentVector& d,
                                       const Matrix& euclidean_grad_at_image);

}  // namespace cayley
