#pragma once

#include "cayley/core.hpp"
#include "cayley/points.hpp"

namespace cayley {

/// Generalized left-localized Cayley transform Phi_S : St(p,N) \ E_{N,p}(S) ->
/// Q_{N,p}. With X = I_p + S_le^T U,
///
///     A = 2 X^{-T} Skew(U^T S_le) X^{-1},   B = -S_ri^T U X^{-1}.
///
/// Throws SingularPointError when |det X| < 1e-12 * 2^p. Structured centers
/// cost N p^2 + O(p^3) flops.
SkewParam forward(const CenterPoint& s, const StiefelPoint& u);

/// Inverse transform Phi_S^{-1}(V) = 2 (S_le - S_ri B) M^{-1} - S_le with the
/// Schur complement M = I_p + A + B^T B. For S = diag(T, I) this is the stacked
/// form [2 T M^{-1} - T; -2 B M^{-1}].
StiefelPoint inverse(const CenterPoint& s, const SkewParam& v);

/// Structured center diag(Q1 Q2^T, I) from an SVD U_up = Q1 Sigma Q2^T.
/// Guarantees det(I_p + S_le^T U) = det(I_p + Sigma) >= 1 and ||B_S(U)||_2 <= 1.
/// The SVD factors are not unique when U_up has repeated or zero singular
/// values; any choice carries the same guarantee.
CenterPoint construct_center(const StiefelPoint& u);

/// For right-orthogonal-invariant costs: U* = U Q2 Q1^T from an SVD
/// S_le^T U = Q1 Sigma Q2^T, so that S_le^T U* is symmetric PSD and
/// ||Phi_S(U*)||_2 <= 1.
StiefelPoint align_right_invariant(const CenterPoint& s, const StiefelPoint& u);

struct SingularDiagnostic {
  double value;      // g(V) = det(I_p + S_le^T Phi_S^{-1}(V)) = 2^p / det(M)
  double log_value;  // p ln 2 - ln det(M)
};

/// Distance-to-singular-set diagnostic g(V) > 0; g -> 0 as ||V||_2 -> infinity.
SingularDiagnostic singular_diagnostic(const CenterPoint& s, const SkewParam& v);

/// Mobility r(V) = 2 sqrt(1 + ||B||_2^2) / (1 + sigma_min(B)^2), an upper bound
/// on ||Phi_S^{-1}(V + tau E) - Phi_S^{-1}(V)||_F / tau for unit E. sigma_min is
/// the p-th singular value of B (zero when N - p < p).
double mobility(const SkewParam& v);

/// Maps a general skew W = [[A, -B^T], [B, C]] to V in Q_{N,p} with
/// Phi_S^{-1}(V) equal to the first p columns of S (I - W)(I + W)^{-1}:
///
///     B' = (I + C)^{-1} B,   A' = A - B'^T C B'.
SkewParam canonicalize_general_skew(const Matrix& w, const CenterPoint& s);

}  // namespace cayley
