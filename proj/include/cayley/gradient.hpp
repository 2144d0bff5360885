#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "cayley/cost.hpp"
#include "cayley/points.hpp"
#include "cayley/random.hpp"

namespace cayley {

/// Gradient of f o Phi_S^{-1} at V, with respect to the Frobenius inner product
/// of the full N x N embedding (see SkewParam::inner). With U = Phi_S^{-1}(V),
/// G = grad f(U), Y = (S_le - S_ri B) M^{-1}:
///
///     W11 = M^{-1} G^T Y
///     W12 = M^{-1} (G^T Y B^T + G^T S_ri)
///     W21 = -B W11
///
/// and the result is W - W^T restricted to Q_{N,p}: A = W11 - W11^T,
/// B = W21 - W12^T. Structured centers cost at most 5 N p^2 + O(p^3).
SkewParam grad_pullback(const CenterPoint& s, const SkewParam& v, const CostFunction& f);

/// Same, reusing a Euclidean gradient already evaluated at U = Phi_S^{-1}(V).
SkewParam grad_pullback(const CenterPoint& s, const SkewParam& v, const Matrix& euclidean_grad);

/// Specialization at V = 0 (U = S_le): A = G^T S_le - S_le^T G, B = -S_ri^T G.
SkewParam grad_at_zero(const CenterPoint& s, const CostFunction& f);

/// Change of center: given Phi_{S1}^{-1}(V1) = Phi_{S2}^{-1}(V2) and
/// g2 = grad (f o Phi_{S2}^{-1})(V2), returns grad (f o Phi_{S1}^{-1})(V1)
/// without evaluating f. Throws PreconditionError if the two base points differ
/// by more than 1e-8 (Frobenius).
///
/// Works with dense N x N intermediates; intended for analysis and tests rather
/// than inner loops.
SkewParam transform_gradient(const CenterPoint& s1, const SkewParam& v1, const CenterPoint& s2,
                             const SkewParam& v2, const SkewParam& g2);

/// ||(I - U U^T) G||_F + ||U^T G - G^T U||_F with G = grad f(U). Zero exactly at
/// stationary points of f over St(p, N).
double stationarity_residual(const StiefelPoint& u, const CostFunction& f);

/// A family f^xi of stochastic costs with E[grad f^xi] = grad f and
/// E||grad f^xi - grad f||_F^2 <= sigma_squared on St(p, N).
class StochasticCostFamily {
 public:
  using Sampler = std::function<CostFunction(Rng&)>;

  StochasticCostFamily(CostFunction mean, Sampler sampler, double sigma_squared)
      : mean_(std::move(mean)), sampler_(std::move(sampler)), sigma_squared_(sigma_squared) {}

  const CostFunction& mean() const { return mean_; }
  CostFunction draw(Rng& rng) const { return sampler_(rng); }
  double sigma_squared() const { return sigma_squared_; }

 private:
  CostFunction mean_;
  Sampler sampler_;
  double sigma_squared_;
};

struct BoundsConfig {
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
  /// max over St(p,N) of ||grad f(U)||_2. Estimated by sampling when unset.
  std::optional<double> mu;
  /// Lipschitz constant of grad f on St(p,N). Estimated when unset.
  std::optional<double> lipschitz;
  /// max over St(p,N) of ||grad f(U)||_F. Estimated when unset.
  std::optional<double> grad_fro_max;
  /// Optional variance check.
  const StochasticCostFamily* stochastic = nullptr;
  std::size_t variance_draws = 10000;
};

/// Outcome of the sampled gradient-bound checks. Violations are reported, not
/// thrown: estimated constants may undershoot.
struct BoundReport {
  double mu = 0.0;
  double lipschitz = 0.0;
  double grad_fro_max = 0.0;

  std::size_t lipschitz_checks = 0;
  std::size_t lipschitz_violations = 0;
  double lipschitz_worst_ratio = 0.0;  // lhs / (4 (mu + L) ||V1 - V2||_F)

  std::size_t norm_checks = 0;
  std::size_t norm_violations = 0;
  double norm_worst_ratio = 0.0;  // ||grad f_S(V)||_F / (2 max ||grad f||_F)

  bool variance_checked = false;
  std::size_t variance_draws = 0;
  double variance_ratio = 0.0;      // E||grad f^xi_S - grad f_S||^2 / sigma^2
  double variance_ratio_se = 0.0;   // standard error of variance_ratio
  bool variance_ok = true;          // variance_ratio <= 4 + 3 se

  bool passed() const {
    return lipschitz_violations == 0 && norm_violations == 0 && variance_ok;
  }
};

/// Samples V, (V1, V2) in Q_{N,p} and checks
///   ||grad f_S(V1) - grad f_S(V2)||_F <= 4 (mu + L) ||V1 - V2||_F,
///   ||grad f_S(V)||_F <= 2 max ||grad f||_F,
/// and, if a stochastic family is supplied, the 4 sigma^2 variance bound.
/// Unset constants are estimated from 10^3 random Stiefel points and inflated
/// by a safety factor of 2.
BoundReport check_gradient_bounds(const CostFunction& f, const CenterPoint& s,
                                  const BoundsConfig& cfg);

}  // namespace cayley
