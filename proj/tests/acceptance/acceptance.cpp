// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails. Pass a subset of criterion numbers on the
// command line to run only those.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "../cpp/oracles.hpp"
#include "cayley/bench.hpp"
#include "cayley/gradient.hpp"
#include "cayley/linalg.hpp"
#include "cayley/problems.hpp"
#include "cayley/random.hpp"
#include "cayley/retraction.hpp"
#include "cayley/transform.hpp"

using namespace cayley;
namespace bench = cayley::bench;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

CenterPoint random_center(Index n, Index p, Rng& rng, bool structured) {
  if (structured) return CenterPoint::structured(random_orthogonal(p, rng), n);
  return CenterPoint::general(random_orthogonal(n, rng), p);
}

// N in [p + 1, max_n], p in [1, max_p].
std::pair<Index, Index> random_shape(Rng& rng, Index max_n, Index max_p) {
  const Index p = 1 + static_cast<Index>(rng.uniform() * max_p);
  const Index n = p + 1 + static_cast<Index>(rng.uniform() * static_cast<double>(max_n - p));
  return {n, p};
}

Outcome round_trip() {
  Rng rng(101);
  const auto start = std::chrono::steady_clock::now();
  double worst_u = 0.0;
  double worst_v = 0.0;
  int bad = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto [n, p] = random_shape(rng, 200, 20);
    const CenterPoint s = random_center(n, p, rng, i % 2 == 0);
    const StiefelPoint u = random_stiefel(n, p, rng);
    const double eu = (inverse(s, forward(s, u)).mat() - u.mat()).norm();
    // ||V||_F uniform in [0, 10]; i.i.d. N(0, 1) blocks at N = 200 would put
    // Phi_S^{-1}(V) numerically on the singular set (g(V) ~ 1e-40)
    SkewParam v = random_skew_param(n, p, 1.0, rng);
    v *= rng.uniform(0.0, 10.0) / v.norm();
    const double ev = (forward(s, inverse(s, v)) - v).norm();
    worst_u = std::max(worst_u, eu);
    worst_v = std::max(worst_v, ev);
    if (!(eu <= 1e-10 && ev <= 1e-10)) ++bad;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {bad == 0 && secs < 30.0,
          fmt("1000 pairs, worst U error %.2e, worst V error %.2e, %d over 1e-10, %.1f s", worst_u, worst_v, bad,
              secs)};
}

Outcome feasibility_exact() {
  Rng rng(102);
  double worst = 0.0;
  int bad = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto [n, p] = random_shape(rng, 200, 20);
    const CenterPoint s = random_center(n, p, rng, i % 2 == 1);
    SkewParam v = random_skew_param(n, p, 1.0, rng);
    // ||V||_F log-uniform in [1e-3, 1e3]
    v *= std::pow(10.0, rng.uniform(-3.0, 3.0)) / v.norm();
    const double e = feasibility(inverse(s, v).mat());
    worst = std::max(worst, e);
    if (!(e <= 1e-12)) ++bad;
  }
  return {bad == 0, fmt("1000 samples with ||V||_F up to 1e3, worst ||U^T U - I||_F %.2e", worst)};
}

struct FdTally {
  long checks = 0;
  long failures = 0;
  long floor_hits = 0;
  double worst_rel = 0.0;

  void add(double fd, double an, double f0, double h) {
    ++checks;
    const double rel = std::abs(fd - an) / std::max({std::abs(fd), std::abs(an), 1e-300});
    const bool ok = oracle::fd_agrees(fd, an, f0, 1e-5, h);
    if (!ok) ++failures;
    if (rel > 1e-5 && ok) ++floor_hits;
    if (rel <= 1e-5) worst_rel = std::max(worst_rel, rel);
  }
};

Outcome gradients() {
  const Index n = 60;
  const Index p = 5;
  const double h = 1e-6;
  Rng rng(103);
  const EigenInstance inst = make_eigen_instance(n, p, 103);
  const CostFunction costs[] = {eigen_cost(inst), distance_cost(random_stiefel(n, p, rng))};
  FdTally param;
  FdTally retr;
  for (const CostFunction& f : costs) {
    for (int state = 0; state < 20; ++state) {
      const CenterPoint s = state % 2 == 0 ? construct_center(random_stiefel(n, p, rng))
                                           : random_center(n, p, rng, false);
      const SkewParam v = random_skew_param(n, p, 0.5, rng);
      const SkewParam g = grad_pullback(s, v, f);
      const double f0 = f.value(inverse(s, v).mat());

      const StiefelPoint u = random_stiefel(n, p, rng);
      const TangentVector d = project_tangent(u, 0.5 * rng.gaussian(n, p));
      const TangentVector gd = grad_retraction_pullback(u, d, f);
      const double f0d = f.value(retract_cayley(u, d).mat());

      for (int k = 0; k < 50; ++k) {
        const SkewParam e = random_skew_param(n, p, 1.0, rng);
        param.add(oracle::central_difference([&](double t) { return f.value(inverse(s, v + t * e).mat()); }, h),
                  g.inner(e), f0, h);
        const Matrix ed = project_tangent(u, rng.gaussian(n, p)).mat();
        retr.add(oracle::central_difference(
                     [&](double t) {
                       return f.value(retract_cayley(u, TangentVector::unchecked(u, d.mat() + t * ed)).mat());
                     },
                     h),
                 (gd.mat().array() * ed.array()).sum(), f0d, h);
      }
    }
  }
  return {param.failures == 0 && retr.failures == 0,
          fmt("pullback %ld/%ld ok (worst rel %.1e, %ld at rounding floor), retraction %ld/%ld ok (worst rel "
              "%.1e, %ld at rounding floor)",
              param.checks - param.failures, param.checks, param.worst_rel, param.floor_hits,
              retr.checks - retr.failures, retr.checks, retr.worst_rel, retr.floor_hits)};
}

Outcome center_construction() {
  Rng rng(104);
  double min_det = std::numeric_limits<double>::infinity();
  double max_b = 0.0;
  int bad = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto [n, p] = random_shape(rng, 200, 20);
    const StiefelPoint u = random_stiefel(n, p, rng);
    const CenterPoint s = construct_center(u);
    const double det = (Matrix::Identity(p, p) + s.left_t_times(u.mat())).determinant();
    const double b = spectral_norm(forward(s, u).b());
    min_det = std::min(min_det, det);
    max_b = std::max(max_b, b);
    if (!(det >= 1.0 - 1e-10 && b <= 1.0 + 1e-10)) ++bad;
  }
  return {bad == 0, fmt("1000 points, min det %.6f, max ||B||_2 %.12f", min_det, max_b)};
}

Outcome alignment() {
  Rng rng(105);
  double worst = 0.0;
  double worst_f = 0.0;
  int bad = 0;
  for (int i = 0; i < 100; ++i) {
    const auto [n, p] = random_shape(rng, 100, 10);
    const CostFunction f = eigen_cost(make_eigen_instance(n, p, 1000 + i));
    const CenterPoint s = random_center(n, p, rng, i % 2 == 0);
    const StiefelPoint u0 = random_stiefel(n, p, rng);
    const StiefelPoint u = align_right_invariant(s, u0);
    const double norm = forward(s, u).spectral_norm();
    const double df = std::abs(f.value(u.mat()) - f.value(u0.mat())) / std::max(1.0, std::abs(f.value(u0.mat())));
    worst = std::max(worst, norm);
    worst_f = std::max(worst_f, df);
    if (!(norm <= 1.0 + 1e-10)) ++bad;
  }
  return {bad == 0, fmt("100 pairs, max ||Phi_S(U*)||_2 %.12f, max relative cost change %.1e", worst, worst_f)};
}

Outcome retraction_equivalence() {
  Rng rng(106);
  double worst_eq = 0.0;
  double worst_rt = 0.0;
  int bad = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto [n, p] = random_shape(rng, 60, 10);
    const StiefelPoint u = random_stiefel(n, p, rng);
    const Matrix up = orthogonal_complement(u);
    Matrix s(n, n);
    s << u.mat(), up;
    const CenterPoint center = CenterPoint::general(s, p);
    TangentVector d = project_tangent(u, rng.gaussian(n, p));
    const double len = rng.uniform(0.0, 10.0);
    d = TangentVector::unchecked(u, d.mat() * (len / std::max(d.mat().norm(), 1e-300)));
    const StiefelPoint r = retract_cayley(u, d);
    const double eq = (inverse(center, psi_map(u, up, d)).mat() - r.mat()).norm();
    const double rt = (inverse_retract_cayley(u, r).mat() - d.mat()).norm();
    worst_eq = std::max(worst_eq, eq);
    worst_rt = std::max(worst_rt, rt);
    if (!(eq <= 1e-10 && rt <= 1e-9)) ++bad;
  }
  return {bad == 0,
          fmt("1000 pairs, ||D||_F up to 10: worst equivalence error %.2e, worst inverse round trip %.2e", worst_eq,
              worst_rt)};
}

Outcome mobility_bound() {
  bench::ExperimentConfig cfg;
  cfg.experiment = "mobility";
  cfg.trials = 80;
  bench::finalize(cfg);
  std::ostringstream csv;
  const auto rep = bench::cmd_mobility(cfg, csv);
  double worst = 0.0;
  for (const auto& r : rep.rows) worst = std::max(worst, r.max_ratio);
  return {rep.total_violations == 0 && rep.total_samples >= 10000,
          fmt("%ld samples over tau {1e-3, 1, 10}, %ld violations, worst change/r %.4f, isotropic trend %s",
              rep.total_samples, rep.total_violations, worst, rep.monotone_trend ? "decreasing" : "not monotone")};
}

Outcome gradient_bounds() {
  bench::ExperimentConfig cfg;
  cfg.experiment = "bounds";
  cfg.n = 60;
  cfg.p = 5;
  cfg.bound_samples = 1000;
  cfg.variance_draws = 10000;
  bench::finalize(cfg);
  std::ostringstream csv, log;
  const auto rep = bench::cmd_bounds(cfg, csv, log);
  std::string detail;
  for (const auto& s : rep.suites) {
    detail += fmt("%s %ld/%ld (worst ratio %.3f) ", s.name.c_str(), s.checks - s.failures, s.checks, s.worst);
  }
  return {rep.passed(), detail};
}

double gap_at(const bench::EigenRow& row, int iter) {
  for (const auto& h : row.history) {
    if (h.iter == iter) return h.f_gap;
  }
  return row.history.back().f_gap;
}

Outcome eigen_experiment() {
  bench::ExperimentConfig cfg;
  cfg.experiment = "eigen";
  cfg.n = 500;
  cfg.p = 10;
  cfg.trials = 10;
  cfg.seed = 1;
  bench::finalize(cfg);
  const auto start = std::chrono::steady_clock::now();
  std::ostringstream csv;
  const bench::EigenReport rep = bench::cmd_eigen(cfg, csv, nullptr);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  auto converged = [&](const std::string& algo, bool check_feas, int& count, double& worst_feas) {
    const double gamma = rep.best_gamma(algo);
    count = 0;
    worst_feas = 0.0;
    for (const bench::EigenRow* r : rep.rows_for(algo, gamma)) {
      worst_feas = std::max(worst_feas, r->feasi);
      const bool ok = r->fval_minus_optimal <= 1e-6 * std::abs(rep.optimum[r->trial]) && r->itr <= 5000 &&
                      (!check_feas || r->feasi <= 1e-12);
      if (ok) ++count;
    }
    return gamma;
  };
  int cp_ok = 0, qr_ok = 0, polar_ok = 0;
  double cp_feas = 0.0, tmp = 0.0;
  const double g_cp = converged("gdm-cp", true, cp_ok, cp_feas);
  const double g_qr = converged("gdm-qr", false, qr_ok, tmp);
  const double g_polar = converged("gdm-polar", false, polar_ok, tmp);

  const double g_cay = rep.best_gamma("gdm-cayley");
  const auto cp_rows = rep.rows_for("gdm-cp", g_cp);
  const auto cay_rows = rep.rows_for("gdm-cayley", g_cay);
  int ahead = 0;
  for (std::size_t t = 0; t < cp_rows.size(); ++t) {
    if (gap_at(*cp_rows[t], 250) <= gap_at(*cay_rows[t], 250)) ++ahead;
  }
  const bool pass = cp_ok >= 9 && qr_ok >= 9 && polar_ok >= 9 && ahead >= 7 && secs < 600.0;
  return {pass, fmt("gdm-cp %d/10 (gamma %g, max feasi %.1e), gdm-qr %d/10 (gamma %g), gdm-polar %d/10 (gamma %g), "
                    "gdm-cp ahead of gdm-cayley (gamma %g) at iteration 250 on %d/10, %.0f s",
                    cp_ok, g_cp, cp_feas, qr_ok, g_qr, polar_ok, g_polar, g_cay, ahead, secs)};
}

Outcome singular_experiment() {
  bench::ExperimentConfig cfg;
  cfg.experiment = "singular";
  cfg.n = 200;
  cfg.p = 10;
  cfg.trials = 10;
  bench::finalize(cfg);
  std::ostringstream csv;
  const auto rep = bench::cmd_singular(cfg, csv, nullptr);
  const std::size_t per_trial = rep.thetas.size();
  int fast_ok = 0;
  int separated = 0;
  double gap_pi = 0.0, gap_small = 0.0;
  for (int t = 0; t < cfg.trials; ++t) {
    const auto& small = rep.rows[static_cast<std::size_t>(t) * per_trial];
    const auto& pi = rep.rows[static_cast<std::size_t>(t) * per_trial + per_trial - 1];
    gap_pi = std::max(gap_pi, pi.f_gap);
    gap_small = small.f_gap;
    if (pi.f_gap <= 1e-10) ++fast_ok;
    if (small.f_gap >= 10.0 * pi.f_gap) ++separated;
  }
  return {fast_ok >= 8 && separated >= 8,
          fmt("theta=pi reaches f-gap <= 1e-10 on %d/10 (worst %.2e); theta=pi/1000 final gap %.3e, >= 10x on %d/10",
              fast_ok, gap_pi, gap_small, separated)};
}

std::string strip_time(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, out;
  long col = -1;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] == '#') {
      out += line + '\n';
      continue;
    }
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (col < 0) {
      const auto it = std::find(cells.begin(), cells.end(), "time_s");
      col = it == cells.end() ? static_cast<long>(cells.size()) : it - cells.begin();
    }
    for (long i = 0; i < static_cast<long>(cells.size()); ++i) {
      if (i != col) out += cells[i] + ',';
    }
    out += '\n';
  }
  return out;
}

Outcome determinism() {
  bench::ExperimentConfig cfg;
  cfg.experiment = "eigen";
  cfg.n = 60;
  cfg.p = 4;
  cfg.trials = 3;
  cfg.seed = 11;
  cfg.stop.max_iters = 500;
  bench::finalize(cfg);
  std::ostringstream a, b;
  bench::cmd_eigen(cfg, a, nullptr);
  bench::cmd_eigen(cfg, b, nullptr);
  const bool same = strip_time(a.str()) == strip_time(b.str());
  const bool times_differ = a.str() != b.str();
  return {same, fmt("%zu bytes, identical without time_s: %s (raw bytes %s)", a.str().size(), same ? "yes" : "no",
                    times_differ ? "differ in time_s" : "identical")};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"round-trip exactness", round_trip},
      {"feasibility", feasibility_exact},
      {"gradient correctness", gradients},
      {"center construction", center_construction},
      {"right-invariant alignment", alignment},
      {"retraction equivalence", retraction_equivalence},
      {"mobility bound", mobility_bound},
      {"gradient bounds", gradient_bounds},
      {"eigen experiment", eigen_experiment},
      {"singular-point experiment", singular_experiment},
      {"determinism", determinism},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(id)) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s criterion %d (%s): %s\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
