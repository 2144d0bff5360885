#pragma once

#include <functional>
#include <utility>

#include "cayley/core.hpp"

namespace cayley {

/// Smooth cost f : R^{N x p} -> R with its Euclidean gradient. Instances are
/// immutable and may be shared across threads as long as the wrapped callables
/// are.
class CostFunction {
 public:
  using ValueFn = std::function<double(const Matrix&)>;
  using GradientFn = std::function<Matrix(const Matrix&)>;
  using FusedFn = std::function<std::pair<double, Matrix>(const Matrix&)>;

  /// `fused` is optional; costs whose value and gradient share work (e.g. A U
  /// for the trace cost) should provide it.
  CostFunction(Index n, Index p, ValueFn value, GradientFn gradient, FusedFn fused = {});

  Index n() const { return n_; }
  Index p() const { return p_; }

  double value(const Matrix& u) const { return value_(u); }
  Matrix gradient(const Matrix& u) const { return gradient_(u); }
  std::pair<double, Matrix> value_and_gradient(const Matrix& u) const;
  bool has_fused() const { return static_cast<bool>(fused_); }

  /// Same cost with the gradient sign flipped. Only used as a negative control
  /// by the gradient checks.
  CostFunction with_flipped_gradient() const;

 private:
  Index n_;
  Index p_;
  ValueFn value_;
  GradientFn gradient_;
  FusedFn fused_;
};

/// f = const. Useful as the trivial case of every check.
CostFunction constant_cost(Index n, Index p, double c = 0.0);

}  // namespace cayley
