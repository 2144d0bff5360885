#include "cayley/gradient.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "cayley/linalg.hpp"
#include "cayley/transform.hpp"

namespace cayley {

SkewParam grad_pullback(const CenterPoint& s, const SkewParam& v, const Matrix& euclidean_grad) {
  const Index n = v.n();
  const Index p = v.p();
  if (s.n() != n || s.p() != p) throw DimensionError("grad_pullback: center/parameter mismatch");
  if (euclidean_grad.rows() != n || euclidean_grad.cols() != p) {
    throw DimensionError("grad_pullback: gradient must be N x p");
  }
  const Matrix& g = euclidean_grad;
  const Matrix& b = v.b();
  const SmallLu m(schur_complement(v));

  // Y = (S_le - S_ri B) M^{-1}
  Matrix y(n, p);
  if (const auto* st = std::get_if<CenterPoint::Structured>(&s.rep())) {
    y.topRows(p) = st->t;
    y.bottomRows(n - p) = -b;
  } else {
    const Matrix& full = std::get<CenterPoint::General>(s.rep()).s;
    y = full.leftCols(p) - full.rightCols(n - p) * b;
  }
  y = m.solve_right(y);

  const Matrix w11 = m.solve(g.transpose() * y);
  const Matrix sri_t_g = s.right_t_times(g);

  Matrix grad_a = w11 - w11.transpose();
  // W21 - W12^T = -B (W11 + W11^T) - S_ri^T G M^{-T}
  Matrix grad_b = -b * (w11 + w11.transpose()) - m.solve(sri_t_g.transpose()).transpose();
  return SkewParam(std::move(grad_a), std::move(grad_b));
}

SkewParam grad_pullback(const CenterPoint& s, const SkewParam& v, const CostFunction& f) {
  const StiefelPoint u = inverse(s, v);
  return grad_pullback(s, v, f.gradient(u.mat()));
}

SkewParam grad_at_zero(const CenterPoint& s, const CostFunction& f) {
  const Matrix s_le = s.left();
  const Matrix g = f.gradient(s_le);
  const Matrix gt_sle = g.transpose() * s_le;
  return SkewParam(gt_sle - gt_sle.transpose(), -s.right_t_times(g));
}

namespace {

// Last N - p columns of the orthogonal matrix S (I - V)(I + V)^{-1}
// = 2 S (I + V)^{-1} - S.
Matrix cayley_right_block(const CenterPoint& s, const SkewParam& v) {
  const Index n = v.n();
  const Index p = v.p();
  Matrix e = Matrix::Zero(n, n - p);
  e.bottomRows(n - p).setIdentity();
  return 2.0 * s.times(solve_ipv(v, e)) - s.right();
}

}  // namespace

SkewParam transform_gradient(const CenterPoint& s1, const SkewParam& v1, const CenterPoint& s2,
                             const SkewParam& v2, const SkewParam& g2) {
  const Index n = v1.n();
  const Index p = v1.p();
  if (v2.n() != n || v2.p() != p || g2.n() != n || g2.p() != p) {
    throw DimensionError("transform_gradient: shape mismatch");
  }
  const double mismatch = (inverse(s1, v1).mat() - inverse(s2, v2).mat()).norm();
  if (!(mismatch <= 1e-8)) {
    throw PreconditionError("transform_gradient: (S1, V1) and (S2, V2) describe different points");
  }

  const Matrix xfrak = cayley_right_block(s1, v1).transpose() * cayley_right_block(s2, v2);
  Matrix d = Matrix::Identity(n, n);
  d.bottomRightCorner(n - p, n - p) = xfrak;

  const Matrix g2d = g2.to_dense();
  Matrix left = Matrix::Zero(n, n);  // [[0, 0], [B2, I]]
  left.bottomLeftCorner(n - p, p) = v2.b();
  left.bottomRightCorner(n - p, n - p).setIdentity();
  const Matrix h = g2d - left * g2d * left.transpose();

  const Matrix ipv2 = Matrix::Identity(n, n) + v2.to_dense();
  const Matrix core = d * ipv2 * h * ipv2.transpose() * d.transpose();
  // (I + V1)^{-1} core (I + V1)^{-T}
  const Matrix half = solve_ipv(v1, core);
  const Matrix gcal = solve_ipv(v1, half.transpose()).transpose();
  return SkewParam::from_dense(gcal, p);
}

double stationarity_residual(const StiefelPoint& u, const CostFunction& f) {
  const Matrix& x = u.mat();
  const Matrix g = f.gradient(x);
  const Matrix ut_g = x.transpose() * g;
  return (g - x * ut_g).norm() + (ut_g - ut_g.transpose()).norm();
}

namespace {

struct Constants {
  double mu = 0.0;
  double lipschitz = 0.0;
  double grad_fro_max = 0.0;
};

Constants estimate_constants(const CostFunction& f, Rng& rng) {
  constexpr int kPoints = 1000;
  constexpr double kSafety = 2.0;
  const Index n = f.n();
  const Index p = f.p();
  Constants c;
  for (int i = 0; i < kPoints; ++i) {
    const StiefelPoint u1 = random_stiefel(n, p, rng);
    const Matrix g1 = f.gradient(u1.mat());
    c.mu = std::max(c.mu, spectral_norm(g1));
    c.grad_fro_max = std::max(c.grad_fro_max, g1.norm());
    // alternate far pairs and nearby pairs for the Lipschitz slope
    const Matrix u2 = (i % 2 == 0) ? random_stiefel(n, p, rng).mat()
                                   : qr_orthonormalize(u1.mat() + 1e-2 * rng.gaussian(n, p)).mat();
    const double du = (u1.mat() - u2).norm();
    if (du > 0.0) c.lipschitz = std::max(c.lipschitz, (g1 - f.gradient(u2)).norm() / du);
  }
  c.mu *= kSafety;
  c.lipschitz *= kSafety;
  c.grad_fro_max *= kSafety;
  return c;
}

}  // namespace

BoundReport check_gradient_bounds(const CostFunction& f, const CenterPoint& s,
                                  const BoundsConfig& cfg) {
  const Index n = f.n();
  const Index p = f.p();
  if (s.n() != n || s.p() != p) throw DimensionError("check_gradient_bounds: shape mismatch");
  Rng rng(cfg.seed);

  BoundReport report;
  if (!cfg.mu || !cfg.lipschitz || !cfg.grad_fro_max) {
    Rng est_rng(Rng::derive(Seed{cfg.seed}, 1));
    const Constants c = estimate_constants(f, est_rng);
    report.mu = cfg.mu.value_or(c.mu);
    report.lipschitz = cfg.lipschitz.value_or(c.lipschitz);
    report.grad_fro_max = cfg.grad_fro_max.value_or(c.grad_fro_max);
  } else {
    report.mu = *cfg.mu;
    report.lipschitz = *cfg.lipschitz;
    report.grad_fro_max = *cfg.grad_fro_max;
  }

  constexpr std::array<double, 4> kScales = {0.1, 1.0, 3.0, 10.0};
  constexpr std::array<double, 4> kGaps = {1e-3, 1e-1, 1.0, 10.0};
  const double lip_const = 4.0 * (report.mu + report.lipschitz);
  const double norm_bound = 2.0 * report.grad_fro_max;
  for (std::size_t i = 0; i < cfg.samples; ++i) {
    const SkewParam v1 = random_skew_param(n, p, kScales[i % kScales.size()], rng);
    const SkewParam dir = random_skew_param(n, p, 1.0, rng);
    const SkewParam v2 = v1 + (kGaps[(i / kScales.size()) % kGaps.size()] / dir.norm()) * dir;
    const SkewParam g1 = grad_pullback(s, v1, f);
    const SkewParam g2 = grad_pullback(s, v2, f);

    const double lhs = (g1 - g2).norm();
    const double rhs = lip_const * (v1 - v2).norm();
    ++report.lipschitz_checks;
    if (lhs > rhs) ++report.lipschitz_violations;
    if (rhs > 0.0) report.lipschitz_worst_ratio = std::max(report.lipschitz_worst_ratio, lhs / rhs);

    for (const SkewParam* g : {&g1, &g2}) {
      const double gn = g->norm();
      ++report.norm_checks;
      if (gn > norm_bound) ++report.norm_violations;
      if (norm_bound > 0.0) report.norm_worst_ratio = std::max(report.norm_worst_ratio, gn / norm_bound);
    }
  }

  if (cfg.stochastic != nullptr && cfg.variance_draws > 1) {
    const StochasticCostFamily& family = *cfg.stochastic;
    // near the center the pulled-back noise is largest (M^{-1} shrinks it as ||B|| grows)
    const SkewParam v = random_skew_param(n, p, 0.1, rng);
    const Matrix u = inverse(s, v).mat();
    const Matrix g_mean = family.mean().gradient(u);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t k = 0; k < cfg.variance_draws; ++k) {
      const CostFunction fk = family.draw(rng);
      // the pullback is linear in the Euclidean gradient
      const double sq = grad_pullback(s, v, fk.gradient(u) - g_mean).squared_norm();
      sum += sq;
      sum_sq += sq * sq;
    }
    const double count = static_cast<double>(cfg.variance_draws);
    const double mean = sum / count;
    const double var = std::max(0.0, (sum_sq - count * mean * mean) / (count - 1.0));
    const double sigma2 = family.sigma_squared();
    report.variance_checked = true;
    report.variance_draws = cfg.variance_draws;
    if (sigma2 > 0.0) {
      report.variance_ratio = mean / sigma2;
      report.variance_ratio_se = std::sqrt(var / count) / sigma2;
      report.variance_ok = report.variance_ratio <= 4.0 + 3.0 * report.variance_ratio_se;
    } else {
      report.variance_ok = mean == 0.0;
    }
  }
  return report;
}

}  // namespace cayley
