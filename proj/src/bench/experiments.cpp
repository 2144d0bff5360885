#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>

#include "cayley/bench.hpp"
#include "cayley/gradient.hpp"
#include "cayley/linalg.hpp"
#include "cayley/problems.hpp"
#include "cayley/retraction.hpp"
#include "cayley/transform.hpp"

namespace cayley::bench {

namespace {

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};

MeanStd mean_std(const std::vector<double>& xs) {
  MeanStd out;
  if (xs.empty()) return out;
  for (double x : xs) out.mean += x;
  out.mean /= static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double acc = 0.0;
    for (double x : xs) acc += (x - out.mean) * (x - out.mean);
    out.std = std::sqrt(acc / static_cast<double>(xs.size() - 1));
  }
  return out;
}

void write_schema(std::ostream& os, const char* what) {
  os << "# cayley-stiefel " << what << " schema=" << kCsvSchemaVersion << '\n';
}

std::vector<HistoryPoint> to_history(const RunRecord& rec, double optimum) {
  std::vector<HistoryPoint> out;
  out.reserve(rec.history.size());
  for (const auto& h : rec.history) out.push_back({h.iter, h.cum_time_s, h.fval - optimum});
  return out;
}

BacktrackingConfig line_search(double gamma) {
  BacktrackingConfig bt;
  bt.gamma_initial = gamma;
  return bt;
}

// Columns shared by the summary statistics rows of eigen and singular.
struct RunStats {
  std::vector<double> fval, gap, feasi, nrmg, itr, time;
  void add(double f, double g, double fe, double nr, int it, double t) {
    fval.push_back(f);
    gap.push_back(g);
    feasi.push_back(fe);
    nrmg.push_back(nr);
    itr.push_back(it);
    time.push_back(t);
  }
  void write(std::ostream& os, const std::string& prefix, const std::string& suffix) const {
    const std::vector<const std::vector<double>*> cols = {&fval, &gap, &feasi, &nrmg, &itr, &time};
    for (const char* label : {"mean", "std"}) {
      os << prefix << label;
      for (const auto* col : cols) {
        const MeanStd ms = mean_std(*col);
        os << ',' << format_double(label[0] == 'm' ? ms.mean : ms.std);
      }
      os << suffix << '\n';
    }
  }
};

}  // namespace

// ---------------------------------------------------------------------------
// eigen

double EigenReport::best_gamma(const std::string& algorithm) const {
  std::vector<double> gammas;
  for (const auto& r : rows) {
    if (r.algorithm == algorithm && std::find(gammas.begin(), gammas.end(), r.gamma_initial) == gammas.end()) {
      gammas.push_back(r.gamma_initial);
    }
  }
  if (gammas.empty()) throw PreconditionError("best_gamma: no rows for " + algorithm);
  double best = gammas.front();
  int best_hits = -1;
  double best_iters = 0.0;
  for (double g : gammas) {
    int hits = 0;
    double iters = 0.0;
    const auto rs = rows_for(algorithm, g);
    for (const EigenRow* r : rs) {
      if (r->fval_minus_optimal <= 1e-6 * std::abs(optimum.at(r->trial))) ++hits;
      iters += r->itr;
    }
    iters /= static_cast<double>(rs.size());
    if (hits > best_hits || (hits == best_hits && (iters < best_iters || (iters == best_iters && g > best)))) {
      best = g;
      best_hits = hits;
      best_iters = iters;
    }
  }
  return best;
}

std::vector<const EigenRow*> EigenReport::rows_for(const std::string& algorithm, double gamma) const {
  std::vector<const EigenRow*> out;
  for (const auto& r : rows) {
    if (r.algorithm == algorithm && r.gamma_initial == gamma) out.push_back(&r);
  }
  return out;
}

EigenReport cmd_eigen(const ExperimentConfig& cfg_in, std::ostream& csv, std::ostream* history) {
  ExperimentConfig cfg = cfg_in;
  cfg.experiment = "eigen";
  finalize(cfg);
  const int workers = worker_count(cfg);
  const auto trials = static_cast<std::size_t>(cfg.trials);

  std::vector<EigenInstance> instances(trials);
  std::vector<Matrix> starts(trials);
  parallel_for(trials, workers, [&](std::size_t t) {
    instances[t] = make_eigen_instance(cfg.n, cfg.p, Rng::derive(Seed{cfg.seed}, 2 * t).value);
    Rng rng(Rng::derive(Seed{cfg.seed}, 2 * t + 1));
    starts[t] = uniform_initial_point(cfg.n, cfg.p, rng).mat();
  });

  const std::size_t n_alg = cfg.algorithms.size();
  const std::size_t n_gamma = cfg.gammas.size();
  EigenReport report;
  report.rows.resize(trials * n_alg * n_gamma);
  for (const auto& inst : instances) report.optimum.push_back(inst.optimum_value);

  parallel_for(report.rows.size(), workers, [&](std::size_t task) {
    const std::size_t t = task / (n_alg * n_gamma);
    const std::string& algo = cfg.algorithms[(task / n_gamma) % n_alg];
    const double gamma = cfg.gammas[task % n_gamma];
    const EigenInstance& inst = instances[t];
    const CostFunction f = eigen_cost(inst);
    const StiefelPoint u0 = StiefelPoint::unchecked(starts[t]);
    const BacktrackingConfig bt = line_search(gamma);

    RunRecord rec;
    if (algo == "gdm-cp") {
      rec = run_gdm_cp(f, u0, std::nullopt, bt, cfg.stop);
    } else if (algo == "gdm-cp-retraction") {
      rec = run_gdm_cp_retraction(f, u0, u0, bt, cfg.stop);
    } else if (algo == "gdm-cayley") {
      rec = run_gdm_retraction(f, u0, RetractionKind::kCayley, bt, cfg.stop);
    } else if (algo == "gdm-qr") {
      rec = run_gdm_retraction(f, u0, RetractionKind::kQr, bt, cfg.stop);
    } else {
      rec = run_gdm_retraction(f, u0, RetractionKind::kPolar, bt, cfg.stop);
    }
    const auto& last = rec.final();
    report.rows[task] = EigenRow{algo,
                                 cfg.n,
                                 cfg.p,
                                 gamma,
                                 static_cast<int>(t),
                                 last.fval,
                                 last.fval - inst.optimum_value,
                                 last.feasibility,
                                 last.grad_norm,
                                 rec.iterations(),
                                 last.cum_time_s,
                                 rec.stop_reason,
                                 to_history(rec, inst.optimum_value)};
  });

  write_schema(csv, "eigen");
  csv << "algorithm,n,p,gamma_initial,trial,fval,fval_minus_optimal,feasi,nrmg,itr,time_s,stop_reason\n";
  for (const auto& r : report.rows) {
    csv << r.algorithm << ',' << r.n << ',' << r.p << ',' << format_double(r.gamma_initial) << ',' << r.trial
        << ',' << format_double(r.fval) << ',' << format_double(r.fval_minus_optimal) << ','
        << format_double(r.feasi) << ',' << format_double(r.nrmg) << ',' << r.itr << ','
        << format_double(r.time_s) << ',' << to_string(r.stop_reason) << '\n';
  }
  for (const auto& algo : cfg.algorithms) {
    for (double gamma : cfg.gammas) {
      RunStats stats;
      for (const EigenRow* r : report.rows_for(algo, gamma)) {
        stats.add(r->fval, r->fval_minus_optimal, r->feasi, r->nrmg, r->itr, r->time_s);
      }
      stats.write(csv, algo + ',' + std::to_string(cfg.n) + ',' + std::to_string(cfg.p) + ',' +
                           format_double(gamma) + ',', ",");
    }
  }

  if (history != nullptr) {
    write_schema(*history, "eigen-history");
    *history << "algorithm,gamma_initial,trial,iter,cum_time_s,f_gap\n";
    for (const auto& r : report.rows) {
      const std::string prefix = r.algorithm + ',' + format_double(r.gamma_initial) + ',' + std::to_string(r.trial);
      for (const auto& h : r.history) {
        *history << prefix << ',' << h.iter << ',' << format_double(h.cum_time_s) << ','
                 << format_double(h.f_gap) << '\n';
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// singular

SingularReport cmd_singular(const ExperimentConfig& cfg_in, std::ostream& csv, std::ostream* history) {
  ExperimentConfig cfg = cfg_in;
  cfg.experiment = "singular";
  finalize(cfg);
  constexpr double pi = std::numbers::pi;

  SingularReport report;
  report.thetas = {pi / 1000.0, pi / 4.0, pi / 2.0, pi};
  const StiefelPoint target = rotation_center(pi, cfg.n, cfg.p).left;
  const StiefelPoint u0 = rotation_center(pi / 4.0, cfg.n, cfg.p).left;
  const CostFunction f = distance_cost(target);

  const std::size_t n_theta = report.thetas.size();
  const std::size_t n_gamma = cfg.gammas.size();
  const std::size_t per_trial = n_theta * n_gamma;
  struct Slot {
    SingularRow row;
    double gamma;
  };
  std::vector<Slot> slots(static_cast<std::size_t>(cfg.trials) * per_trial);
  parallel_for(slots.size(), worker_count(cfg), [&](std::size_t task) {
    const std::size_t t = task / per_trial;
    const double gamma = cfg.gammas[(task / n_theta) % n_gamma];
    const double theta = report.thetas[task % n_theta];
    const RotationCenter s = rotation_center(theta, cfg.n, cfg.p);
    const RunRecord rec = run_gdm_cp(f, u0, s.center, line_search(gamma), cfg.stop);
    const auto& last = rec.final();
    // f(U*) = 0
    slots[task] = {SingularRow{theta, static_cast<int>(t), last.fval, last.fval, last.feasibility, last.grad_norm,
                               rec.iterations(), last.cum_time_s, rec.stop_reason, to_history(rec, 0.0)},
                   gamma};
  });

  write_schema(csv, "singular");
  csv << "theta,gamma_initial,trial,fval,f_gap,feasi,nrmg,itr,time_s,stop_reason\n";
  for (const auto& s : slots) {
    const auto& r = s.row;
    csv << format_double(r.theta) << ',' << format_double(s.gamma) << ',' << r.trial << ','
        << format_double(r.fval) << ',' << format_double(r.f_gap) << ',' << format_double(r.feasi) << ','
        << format_double(r.nrmg) << ',' << r.itr << ',' << format_double(r.time_s) << ','
        << to_string(r.stop_reason) << '\n';
  }
  for (double gamma : cfg.gammas) {
    for (double theta : report.thetas) {
      RunStats stats;
      for (const auto& s : slots) {
        if (s.gamma == gamma && s.row.theta == theta) {
          stats.add(s.row.fval, s.row.f_gap, s.row.feasi, s.row.nrmg, s.row.itr, s.row.time_s);
        }
      }
      stats.write(csv, format_double(theta) + ',' + format_double(gamma) + ',', ",");
    }
  }

  if (history != nullptr) {
    write_schema(*history, "singular-history");
    *history << "theta,gamma_initial,trial,iter,cum_time_s,f_gap\n";
    for (const auto& s : slots) {
      const std::string prefix =
          format_double(s.row.theta) + ',' + format_double(s.gamma) + ',' + std::to_string(s.row.trial);
      for (const auto& h : s.row.history) {
        *history << prefix << ',' << h.iter << ',' << format_double(h.cum_time_s) << ','
                 << format_double(h.f_gap) << '\n';
      }
    }
  }

  for (auto& s : slots) report.rows.push_back(std::move(s.row));
  return report;
}

// ---------------------------------------------------------------------------
// mobility

namespace {

// Uniform [-0.5, 0.5] entries outside the lower-right block, then Skew().
SkewParam random_q_uniform(Index n, Index p, Rng& rng) {
  Matrix x = rng.uniform_matrix(n, n, -0.5, 0.5);
  x.bottomRightCorner(n - p, n - p).setZero();
  return SkewParam::from_dense(skew_part(x), p);
}

}  // namespace

MobilityReport cmd_mobility(const ExperimentConfig& cfg_in, std::ostream& csv) {
  ExperimentConfig cfg = cfg_in;
  cfg.experiment = "mobility";
  finalize(cfg);
  const Index n = cfg.n;
  const Index p = cfg.p;
  const CenterPoint s = CenterPoint::identity(n, p);
  const int steps = cfg.sweep_points;
  const std::size_t n_tau = cfg.taus.size();
  const bool isotropic = n - p >= p;
  const int n_sweeps = isotropic ? 2 : 1;

  // samples[(sweep, step, tau)][trial] = {b_norm, change, r}
  struct Sample {
    double b_norm, change, r;
  };
  const std::size_t cells = static_cast<std::size_t>(n_sweeps * steps) * n_tau;
  std::vector<std::vector<Sample>> samples(cells, std::vector<Sample>(cfg.trials));

  parallel_for(static_cast<std::size_t>(cfg.trials), worker_count(cfg), [&](std::size_t t) {
    Rng rng(Rng::derive(Seed{cfg.seed}, t));
    const SkewParam v_tilde = random_q_uniform(n, p, rng);
    SkewParam e = random_q_uniform(n, p, rng);
    e *= 1.0 / e.norm();
    const Matrix w = random_stiefel(n - p, p, rng).mat();
    const double c_max = 5.0 / spectral_norm(v_tilde.b());
    for (int sweep = 0; sweep < n_sweeps; ++sweep) {
      for (int k = 0; k < steps; ++k) {
        const double frac = static_cast<double>(k) / (steps - 1);
        const Matrix b = sweep == 0 ? Matrix(frac * c_max * v_tilde.b()) : Matrix(5.0 * frac * w);
        const SkewParam v(v_tilde.a(), b);
        const Matrix base = inverse(s, v).mat();
        const double r = mobility(v);
        const double b_norm = spectral_norm(b);
        for (std::size_t j = 0; j < n_tau; ++j) {
          const double tau = cfg.taus[j];
          const double change = (inverse(s, v + tau * e).mat() - base).norm() / tau;
          samples[(static_cast<std::size_t>(sweep * steps + k)) * n_tau + j][t] = {b_norm, change, r};
        }
      }
    }
  });

  MobilityReport report;
  for (int sweep = 0; sweep < n_sweeps; ++sweep) {
    for (int k = 0; k < steps; ++k) {
      for (std::size_t j = 0; j < n_tau; ++j) {
        const auto& cell = samples[(static_cast<std::size_t>(sweep * steps + k)) * n_tau + j];
        MobilityRow row{sweep == 0 ? "figure" : "isotropic", k, static_cast<double>(k) / (steps - 1),
                        cfg.taus[j], 0.0, 0.0, 0.0, 0.0, static_cast<int>(cell.size()), 0};
        for (const auto& smp : cell) {
          row.b_norm += smp.b_norm;
          row.observed_change += smp.change;
          row.mobility += smp.r;
          row.max_ratio = std::max(row.max_ratio, smp.change / smp.r);
          // allow for rounding in the two evaluations of the difference
          if (smp.change > smp.r * (1.0 + 1e-12)) ++row.violations;
        }
        row.b_norm /= row.samples;
        row.observed_change /= row.samples;
        row.mobility /= row.samples;
        report.total_samples += row.samples;
        report.total_violations += row.violations;
        report.rows.push_back(row);
      }
    }
  }

  if (isotropic) {
    report.monotone_trend = true;
    double prev = std::numeric_limits<double>::infinity();
    for (const auto& row : report.rows) {
      if (row.sweep != "isotropic" || row.tau != cfg.taus.front()) continue;
      if (row.mobility > prev * (1.0 + 1e-12)) report.monotone_trend = false;
      prev = row.mobility;
    }
  }

  write_schema(csv, "mobility");
  csv << "sweep,step,scale,tau,b_norm,observed_change,mobility,max_ratio,samples,violations\n";
  for (const auto& r : report.rows) {
    csv << r.sweep << ',' << r.step << ',' << format_double(r.scale) << ',' << format_double(r.tau) << ','
        << format_double(r.b_norm) << ',' << format_double(r.observed_change) << ','
        << format_double(r.mobility) << ',' << format_double(r.max_ratio) << ',' << r.samples << ','
        << r.violations << '\n';
  }
  return report;
}

// ---------------------------------------------------------------------------
// gradcheck and bounds

bool CheckReport::passed() const {
  return std::all_of(suites.begin(), suites.end(), [](const CheckSuite& s) { return s.failures == 0; });
}

namespace {

struct Problem {
  CostFunction f;
  double mu;
  double lipschitz;
  double grad_fro_max;
  std::optional<EigenInstance> eigen;
};

Problem make_problem(const ExperimentConfig& cfg) {
  const Index n = cfg.n;
  const Index p = cfg.p;
  if (cfg.cost == "eigen") {
    EigenInstance inst = make_eigen_instance(n, p, Rng::derive(Seed{cfg.seed}, 0).value);
    const double a_norm = inst.top_eigenvalues(0);
    // max over St(p,N) of ||2 A U||_F is 2 sqrt(sum of the p largest lambda^2)
    const double g_max = 2.0 * inst.top_eigenvalues.norm();
    CostFunction f = eigen_cost(inst);
    return {cfg.flip_gradient ? f.with_flipped_gradient() : f, 2.0 * a_norm, 2.0 * a_norm, g_max, std::move(inst)};
  }
  if (cfg.cost == "distance") {
    Rng rng(Rng::derive(Seed{cfg.seed}, 0));
    CostFunction f = distance_cost(random_stiefel(n, p, rng));
    // ||U - T||_2 <= 2, ||U - T||_F <= 2 sqrt(p)
    return {cfg.flip_gradient ? f.with_flipped_gradient() : f, 2.0, 1.0,
            2.0 * std::sqrt(static_cast<double>(p)), std::nullopt};
  }
  CostFunction f = constant_cost(n, p, 1.0);
  return {cfg.flip_gradient ? f.with_flipped_gradient() : f, 0.0, 0.0, 0.0, std::nullopt};
}

// Compares a central difference against the analytic directional derivative.
// The absolute floor covers the rounding noise of the difference quotient.
void record_fd(CheckSuite& suite, double fd, double analytic, double f0, double tol) {
  const double err = std::abs(fd - analytic);
  const double scale = std::max(std::abs(fd), std::abs(analytic));
  const double rel = scale > 0.0 ? err / scale : 0.0;
  const bool ok = err <= tol * scale || err <= 1e-9 * std::max(1.0, std::abs(f0));
  ++suite.checks;
  if (!ok) {
    ++suite.failures;
  }
  suite.worst = std::max(suite.worst, rel);
}

void write_suites(const CheckReport& report, const char* what, std::ostream& csv, std::ostream& log) {
  write_schema(csv, what);
  csv << "suite,checks,failures,worst\n";
  for (const auto& s : report.suites) {
    csv << s.name << ',' << s.checks << ',' << s.failures << ',' << format_double(s.worst) << '\n';
    log << (s.failures == 0 ? "PASS " : "FAIL ") << s.name << ": " << s.failures << "/" << s.checks
        << " failures, worst " << s.worst << '\n';
  }
}

}  // namespace

CheckReport cmd_gradcheck(const ExperimentConfig& cfg_in, std::ostream& csv, std::ostream& log) {
  ExperimentConfig cfg = cfg_in;
  cfg.experiment = "gradcheck";
  finalize(cfg);
  const Index n = cfg.n;
  const Index p = cfg.p;
  const Problem prob = make_problem(cfg);
  const CostFunction& f = prob.f;
  const double h = cfg.fd_step;
  Rng rng(Rng::derive(Seed{cfg.seed}, 1));

  CheckSuite euclid{"euclidean"};
  CheckSuite pullback{"cayley_parametrization"};
  CheckSuite retraction{"cayley_retraction"};
  for (int i = 0; i < cfg.states; ++i) {
    const StiefelPoint u = random_stiefel(n, p, rng);
    const Matrix g = f.gradient(u.mat());
    const double fu = f.value(u.mat());
    for (int j = 0; j < cfg.directions; ++j) {
      const Matrix e = rng.gaussian(n, p);
      const double fd = (f.value(u.mat() + h * e) - f.value(u.mat() - h * e)) / (2.0 * h);
      record_fd(euclid, fd, g.cwiseProduct(e).sum(), fu, cfg.fd_tol);
    }

    // alternate general and structured centers
    const CenterPoint s = (i % 2 == 0) ? CenterPoint::general(random_orthogonal(n, rng), p)
                                       : construct_center(random_stiefel(n, p, rng));
    const SkewParam v = random_skew_param(n, p, 1.0, rng);
    const SkewParam gv = grad_pullback(s, v, f);
    const double fv = f.value(inverse(s, v).mat());
    for (int j = 0; j < cfg.directions; ++j) {
      SkewParam e = random_skew_param(n, p, 1.0, rng);
      e *= 1.0 / e.norm();
      const double fd =
          (f.value(inverse(s, v + h * e).mat()) - f.value(inverse(s, v - h * e).mat())) / (2.0 * h);
      record_fd(pullback, fd, gv.inner(e), fv, cfg.fd_tol);
    }

    const TangentVector d = project_tangent(u, rng.gaussian(n, p));
    const Matrix gr = grad_retraction_pullback(u, d, f).mat();
    const double fr = f.value(retract_cayley(u, d).mat());
    for (int j = 0; j < cfg.directions; ++j) {
      const Matrix e = project_tangent(u, rng.gaussian(n, p)).mat();
      const auto at = [&](double t) {
        return f.value(retract_cayley(u, TangentVector::unchecked(u, d.mat() + t * e)).mat());
      };
      const double fd = (at(h) - at(-h)) / (2.0 * h);
      record_fd(retraction, fd, gr.cwiseProduct(e).sum(), fr, cfg.fd_tol);
    }
  }

  CheckReport report;
  report.suites = {euclid, pullback, retraction};
  write_suites(report, "gradcheck", csv, log);
  return report;
}

CheckReport cmd_bounds(const ExperimentConfig& cfg_in, std::ostream& csv, std::ostream& log) {
  ExperimentConfig cfg = cfg_in;
  cfg.experiment = "bounds";
  finalize(cfg);
  const Problem prob = make_problem(cfg);
  Rng rng(Rng::derive(Seed{cfg.seed}, 2));
  const CenterPoint s = construct_center(random_stiefel(cfg.n, cfg.p, rng));

  BoundsConfig bc;
  bc.samples = static_cast<std::size_t>(cfg.bound_samples);
  bc.seed = Rng::derive(Seed{cfg.seed}, 3).value;
  bc.mu = prob.mu;
  bc.lipschitz = prob.lipschitz;
  bc.grad_fro_max = prob.grad_fro_max;
  std::optional<StochasticCostFamily> family;
  if (prob.eigen) {
    family = stochastic_eigen_family(*prob.eigen, cfg.noise_sigma);
    bc.stochastic = &*family;
    bc.variance_draws = static_cast<std::size_t>(cfg.variance_draws);
  }
  const BoundReport b = check_gradient_bounds(prob.f, s, bc);

  log << "constants: mu " << b.mu << ", L " << b.lipschitz << ", max ||grad f||_F " << b.grad_fro_max << '\n';
  CheckReport report;
  report.suites.push_back({"lipschitz", static_cast<long>(b.lipschitz_checks),
                           static_cast<long>(b.lipschitz_violations), b.lipschitz_worst_ratio});
  report.suites.push_back(
      {"norm", static_cast<long>(b.norm_checks), static_cast<long>(b.norm_violations), b.norm_worst_ratio});
  if (b.variance_checked) {
    log << "variance ratio " << b.variance_ratio << " (se " << b.variance_ratio_se << ", " << b.variance_draws
        << " draws)\n";
    report.suites.push_back({"variance", 1, b.variance_ok ? 0 : 1, b.variance_ratio});
  }
  write_suites(report, "bounds", csv, log);
  return report;
}

}  // namespace cayley::bench
