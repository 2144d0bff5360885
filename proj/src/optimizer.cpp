#include "cayley/optimizer.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "cayley/gradient.hpp"
#include "cayley/retraction.hpp"
#include "cayley/transform.hpp"

namespace cayley {

void BacktrackingConfig::validate() const {
  if (!(c > 0.0 && c < 1.0)) throw PreconditionError("BacktrackingConfig: c must lie in (0, 1)");
  if (!(rho > 0.0 && rho < 1.0)) throw PreconditionError("BacktrackingConfig: rho must lie in (0, 1)");
  if (!(gamma_initial > 0.0)) throw PreconditionError("BacktrackingConfig: gamma_initial must be positive");
  if (max_halvings < 1) throw PreconditionError("BacktrackingConfig: max_halvings must be >= 1");
}

void StoppingConfig::validate() const {
  if (max_iters < 1) throw PreconditionError("StoppingConfig: max_iters must be positive");
  if (!(grad_ratio_tol > 0.0)) throw PreconditionError("StoppingConfig: grad_ratio_tol must be positive");
  if (!(fval_rel_tol > 0.0)) throw PreconditionError("StoppingConfig: fval_rel_tol must be positive");
}

std::string to_string(StopReason reason) {
  switch (reason) {
    case StopReason::kStationaryStart: return "stationary_start";
    case StopReason::kMaxIters: return "max_iters";
    case StopReason::kGradRatio: return "grad_ratio";
    case StopReason::kFvalRelChange: return "fval_rel_change";
    case StopReason::kStalledLineSearch: return "stalled_line_search";
  }
  return "unknown";
}

std::string to_string(RetractionKind kind) {
  switch (kind) {
    case RetractionKind::kQr: return "qr";
    case RetractionKind::kPolar: return "polar";
    case RetractionKind::kCayley: return "cayley";
  }
  return "unknown";
}

double backtrack(const std::function<double(double)>& phi, double f0, double grad_sq_norm,
                 const BacktrackingConfig& cfg) {
  cfg.validate();
  double gamma = cfg.gamma_initial;
  for (int k = 0;; ++k) {
    double trial = std::numeric_limits<double>::infinity();
    try {
      trial = phi(gamma);
    } catch (const StepTooLargeError&) {
    }
    if (std::isfinite(trial) && trial <= f0 - cfg.c * gamma * grad_sq_norm) return gamma;
    if (k == cfg.max_halvings) break;
    gamma *= cfg.rho;
  }
  throw LineSearchStalled("backtrack: Armijo condition never satisfied", gamma);
}

double backtrack(const std::function<double(const SkewParam&)>& f_s, const SkewParam& v,
                 const SkewParam& g, const BacktrackingConfig& cfg) {
  const double f0 = f_s(v);
  return backtrack([&](double gamma) { return f_s(v - gamma * g); }, f0, g.squared_norm(), cfg);
}

namespace {

// The three algorithms share one loop. A Space owns the current iterate, its
// cost, its descent direction D_n, and one cached trial point.
template <class Space>
RunRecord descend(Space& space, const BacktrackingConfig& bt, const StoppingConfig& stop) {
  bt.validate();
  stop.validate();
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - start).count(); };

  RunRecord rec;
  space.init();
  auto record = [&](int iter) {
    rec.history.push_back({iter, space.fval(), std::sqrt(space.grad_sq_norm()),
                           feasibility(space.u()), elapsed()});
  };
  record(0);
  const double d0 = std::sqrt(space.grad_sq_norm());
  if (d0 == 0.0) {
    rec.stop_reason = StopReason::kStationaryStart;
    rec.final_u = space.u();
    return rec;
  }

  for (int n = 1;; ++n) {
    const double f_prev = space.fval();
    try {
      backtrack([&](double gamma) { return space.try_step(gamma); }, f_prev, space.grad_sq_norm(), bt);
    } catch (const LineSearchStalled&) {
      rec.stop_reason = StopReason::kStalledLineSearch;
      break;
    }
    // the accepted step is always the last trial evaluated
    space.accept();
    record(n);

    const double f_n = space.fval();
    const double rel_change = f_n != 0.0 ? std::abs(f_n - f_prev) / std::abs(f_n)
                                         : (f_n == f_prev ? 0.0 : std::numeric_limits<double>::infinity());
    if (n >= stop.max_iters) {
      rec.stop_reason = StopReason::kMaxIters;
      break;
    }
    if (std::sqrt(space.grad_sq_norm()) / d0 <= stop.grad_ratio_tol) {
      rec.stop_reason = StopReason::kGradRatio;
      break;
    }
    if (rel_change <= stop.fval_rel_tol) {
      rec.stop_reason = StopReason::kFvalRelChange;
      break;
    }
  }
  rec.final_u = space.u();
  return rec;
}

// Evaluates f at a trial point; with a fused cost the gradient comes for free
// and is kept for accept().
struct Evaluation {
  double f = 0.0;
  Matrix grad;
  bool has_grad = false;
};

Evaluation evaluate(const CostFunction& f, const Matrix& u, bool want_grad) {
  if (want_grad || f.has_fused()) {
    auto [value, grad] = f.value_and_gradient(u);
    return {value, std::move(grad), true};
  }
  return {f.value(u), Matrix(), false};
}

class CayleyParamSpace {
 public:
  CayleyParamSpace(const CostFunction& f, CenterPoint s, SkewParam v0)
      : f_(f), s_(std::move(s)), v_(std::move(v0)), trial_v_(v_), dir_(v_) {}

  void init() {
    u_ = inverse(s_, v_).mat();
    Evaluation e = evaluate(f_, u_, true);
    fval_ = e.f;
    set_direction(e.grad);
  }
  double fval() const { return fval_; }
  double grad_sq_norm() const { return grad_sq_; }
  const Matrix& u() const { return u_; }

  double try_step(double gamma) {
    trial_v_ = v_ - gamma * dir_;
    trial_u_ = inverse(s_, trial_v_).mat();
    trial_ = evaluate(f_, trial_u_, false);
    return trial_.f;
  }
  void accept() {
    v_ = std::move(trial_v_);
    u_ = std::move(trial_u_);
    fval_ = trial_.f;
    set_direction(trial_.has_grad ? trial_.grad : f_.gradient(u_));
  }

 private:
  void set_direction(const Matrix& euclid) {
    dir_ = grad_pullback(s_, v_, euclid);
    grad_sq_ = dir_.squared_norm();
  }

  const CostFunction& f_;
  CenterPoint s_;
  SkewParam v_;
  SkewParam trial_v_;
  SkewParam dir_;
  Matrix u_;
  Matrix trial_u_;
  Evaluation trial_;
  double fval_ = 0.0;
  double grad_sq_ = 0.0;
};

class AnchoredRetractionSpace {
 public:
  AnchoredRetractionSpace(const CostFunction& f, StiefelPoint anchor, Matrix d0)
      : f_(f), anchor_(std::move(anchor)), d_(std::move(d0)) {}

  void init() {
    u_ = image(d_);
    Evaluation e = evaluate(f_, u_, true);
    fval_ = e.f;
    set_direction(e.grad);
  }
  double fval() const { return fval_; }
  double grad_sq_norm() const { return grad_sq_; }
  const Matrix& u() const { return u_; }

  double try_step(double gamma) {
    trial_d_ = d_ - gamma * dir_;
    trial_u_ = image(trial_d_);
    trial_ = evaluate(f_, trial_u_, false);
    return trial_.f;
  }
  void accept() {
    d_ = std::move(trial_d_);
    u_ = std::move(trial_u_);
    fval_ = trial_.f;
    set_direction(trial_.has_grad ? trial_.grad : f_.gradient(u_));
  }

 private:
  Matrix image(const Matrix& d) const {
    return retract_cayley(anchor_, TangentVector::unchecked(anchor_, d)).mat();
  }
  void set_direction(const Matrix& euclid) {
    dir_ = grad_retraction_pullback(anchor_, TangentVector::unchecked(anchor_, d_), euclid).mat();
    grad_sq_ = dir_.squaredNorm();
  }

  const CostFunction& f_;
  StiefelPoint anchor_;
  Matrix d_;
  Matrix trial_d_;
  Matrix dir_;
  Matrix u_;
  Matrix trial_u_;
  Evaluation trial_;
  double fval_ = 0.0;
  double grad_sq_ = 0.0;
};

class MovingRetractionSpace {
 public:
  MovingRetractionSpace(const CostFunction& f, Matrix u0, RetractionKind kind)
      : f_(f), u_(std::move(u0)), kind_(kind) {}

  void init() {
    Evaluation e = evaluate(f_, u_, true);
    fval_ = e.f;
    set_direction(e.grad);
  }
  double fval() const { return fval_; }
  double grad_sq_norm() const { return grad_sq_; }
  const Matrix& u() const { return u_; }

  double try_step(double gamma) {
    const StiefelPoint base = StiefelPoint::unchecked(u_);
    const TangentVector step = TangentVector::unchecked(base, -gamma * dir_);
    switch (kind_) {
      case RetractionKind::kQr: trial_u_ = retract_qr(base, step).mat(); break;
      case RetractionKind::kPolar: trial_u_ = retract_polar(base, step).mat(); break;
      case RetractionKind::kCayley: trial_u_ = retract_cayley(base, step).mat(); break;
    }
    trial_ = evaluate(f_, trial_u_, false);
    return trial_.f;
  }
  void accept() {
    u_ = std::move(trial_u_);
    fval_ = trial_.f;
    set_direction(trial_.has_grad ? trial_.grad : f_.gradient(u_));
  }

 private:
  void set_direction(const Matrix& euclid) {
    dir_ = project_tangent(StiefelPoint::unchecked(u_), euclid).mat();
    grad_sq_ = dir_.squaredNorm();
  }

  const CostFunction& f_;
  Matrix u_;
  RetractionKind kind_;
  Matrix trial_u_;
  Matrix dir_;
  Evaluation trial_;
  double fval_ = 0.0;
  double grad_sq_ = 0.0;
};

}  // namespace

RunRecord run_gdm_cp(const CostFunction& f, const StiefelPoint& u0,
                     const std::optional<CenterPoint>& center, const BacktrackingConfig& bt,
                     const StoppingConfig& stop) {
  CenterPoint s = center ? *center : construct_center(u0);
  SkewParam v0 = forward(s, u0);
  CayleyParamSpace space(f, std::move(s), std::move(v0));
  return descend(space, bt, stop);
}

RunRecord run_gdm_cp_retraction(const CostFunction& f, const StiefelPoint& anchor,
                                const StiefelPoint& u0, const BacktrackingConfig& bt,
                                const StoppingConfig& stop) {
  Matrix d0 = inverse_retract_cayley(anchor, u0).mat();
  AnchoredRetractionSpace space(f, anchor, std::move(d0));
  return descend(space, bt, stop);
}

RunRecord run_gdm_retraction(const CostFunction& f, const StiefelPoint& u0, RetractionKind kind,
                             const BacktrackingConfig& bt, const StoppingConfig& stop) {
  MovingRetractionSpace space(f, u0.mat(), kind);
  return descend(space, bt, stop);
}

}  // namespace cayley
