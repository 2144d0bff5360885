#include "cayley/cost.hpp"

namespace cayley {

CostFunction::CostFunction(Index n, Index p, ValueFn value, GradientFn gradient, FusedFn fused)
    : n_(n), p_(p), value_(std::move(value)), gradient_(std::move(gradient)), fused_(std::move(fused)) {
  if (!value_ || !gradient_) throw PreconditionError("CostFunction: value and gradient are required");
}

std::pair<double, Matrix> CostFunction::value_and_gradient(const Matrix& u) const {
  if (fused_) return fused_(u);
  return {value_(u), gradient_(u)};
}

CostFunction CostFunction::with_flipped_gradient() const {
  auto grad = gradient_;
  FusedFn fused;
  if (fused_) {
    fused = [f = fused_](const Matrix& u) {
      auto r = f(u);
      r.second = -r.second;
      return r;
    };
  }
  return CostFunction(n_, p_, value_, [grad](const Matrix& u) -> Matrix { return -grad(u); },
                      std::move(fused));
}

CostFunction constant_cost(Index n, Index p, double c) {
  return CostFunction(
      n, p, [c](const Matrix&) { return c; },
      [](const Matrix& u) -> Matrix { return Matrix::Zero(u.rows(), u.cols()); });
}

}  // namespace cayley
