#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cayley/cost.hpp"
#include "cayley/points.hpp"

namespace cayley {

/// Armijo backtracking parameters. Defaults follow the usual Manopt values
/// (rho = 0.5, c = 2^-13).
struct BacktrackingConfig {
  double c = 0x1.0p-13;
  double rho = 0.5;
  double gamma_initial = 1e-3;
  int max_halvings = 60;

  void validate() const;
};

/// A run stops at iteration n when any of these fires (checked in this order):
/// n >= max_iters, ||D_n|| / ||D_0|| <= grad_ratio_tol,
/// |f_n - f_{n-1}| / |f_n| <= fval_rel_tol.
struct StoppingConfig {
  int max_iters = 5000;
  double grad_ratio_tol = 1e-10;
  double fval_rel_tol = 1e-20;

  void validate() const;
};

enum class StopReason {
  kStationaryStart,
  kMaxIters,
  kGradRatio,
  kFvalRelChange,
  kStalledLineSearch,
};

std::string to_string(StopReason reason);

struct IterationRecord {
  int iter;
  double fval;
  double grad_norm;
  double feasibility;
  double cum_time_s;
};

/// Trace of one optimizer run. grad_norm is measured in the geometry the
/// algorithm works in: the weighted Frobenius norm of Q_{N,p} for the
/// parametrized runs, the plain Frobenius norm of tangent vectors otherwise.
struct RunRecord {
  std::vector<IterationRecord> history;  // history[0] is the initial point
  Matrix final_u;
  StopReason stop_reason = StopReason::kMaxIters;

  int iterations() const { return history.empty() ? 0 : history.back().iter; }
  const IterationRecord& final() const { return history.back(); }
};

/// Largest gamma in {gamma_initial rho^k : 0 <= k <= max_halvings} with
///     phi(gamma) <= f0 - c gamma ||G||^2,
/// where phi(gamma) is the cost after a step of length gamma along -G and
/// grad_sq_norm = ||G||^2. A phi that throws StepTooLargeError or returns a
/// non-finite value counts as a failed trial. Throws LineSearchStalled when
/// every trial fails.
double backtrack(const std::function<double(double)>& phi, double f0, double grad_sq_norm,
                 const BacktrackingConfig& cfg);

/// Backtracking for f_S over Q_{N,p} from V along -G, with ||G|| taken in the
/// weighted Frobenius norm of SkewParam.
double backtrack(const std::function<double(const SkewParam&)>& f_s, const SkewParam& v,
                 const SkewParam& g, const BacktrackingConfig& cfg);

/// Gradient descent on f o Phi_S^{-1} over the fixed space Q_{N,p}
/// (V_{n+1} = V_n - gamma_n grad f_S(V_n), U_{n+1} = Phi_S^{-1}(V_{n+1})).
/// Uses construct_center(U0) when no center is given. Throws SingularPointError
/// if U0 lies on the singular-point set of the given center.
RunRecord run_gdm_cp(const CostFunction& f, const StiefelPoint& u0,
                     const std::optional<CenterPoint>& center, const BacktrackingConfig& bt,
                     const StoppingConfig& stop);

/// Gradient descent on D -> f(R^Cay_{anchor}(D)) over the fixed tangent space
/// at the anchor, started from D_0 = (R^Cay_{anchor})^{-1}(U0).
RunRecord run_gdm_cp_retraction(const CostFunction& f, const StiefelPoint& anchor,
                                const StiefelPoint& u0, const BacktrackingConfig& bt,
                                const StoppingConfig& stop);

enum class RetractionKind { kQr, kPolar, kCayley };

std::string to_string(RetractionKind kind);

/// Riemannian steepest descent U_{n+1} = R_{U_n}(-gamma_n grad f(U_n)) with
/// Armijo backtracking on f o R_{U_n}.
RunRecord run_gdm_retraction(const CostFunction& f, const StiefelPoint& u0, RetractionKind kind,
                             const BacktrackingConfig& bt, const StoppingConfig& stop);

}  // namespace cayley
