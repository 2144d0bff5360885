#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "cayley/optimizer.hpp"

namespace cayley::bench {

/// Bad flags or config values. The CLI maps it to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

inline constexpr const char* kCsvSchemaVersion = "1";

struct ExperimentConfig {
  std::string experiment = "eigen";  // eigen | singular | mobility | gradcheck | bounds
  long n = 200;
  long p = 10;
  int trials = 10;
  std::uint64_t seed = 1;
  std::vector<double> gammas;           // empty: per-experiment default
  std::vector<std::string> algorithms;  // empty: all five (eigen only)
  StoppingConfig stop;
  std::string out;  // empty: stdout, no history file
  std::string history_out;  // empty: derived from `out`
  int threads = 0;  // 0: BENCH_THREADS, else hardware concurrency

  // gradcheck / bounds
  std::string cost = "eigen";  // eigen | distance | constant
  bool flip_gradient = false;  // negative control
  int states = 20;
  int directions = 50;
  double fd_step = 1e-6;
  double fd_tol = 1e-5;
  int bound_samples = 1000;
  int variance_draws = 10000;
  double noise_sigma = 1.0;

  // mobility
  int sweep_points = 21;
  std::vector<double> taus;  // empty: {1e-3, 1, 10}
};

/// Names accepted by --algo.
const std::vector<std::string>& eigen_algorithms();

/// Applies one key=value setting (same keys as the long CLI flags, with '-'
/// or '_'). Repeated list keys append. Throws UsageError on unknown keys or
/// malformed values.
void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value);

/// Flat key=value file: one setting per line, '#' starts a comment, list
/// values may also be comma separated.
void load_config_file(ExperimentConfig& cfg, const std::string& path);

/// Fills per-experiment defaults and checks n > p >= 1, trials >= 1, known
/// algorithm names and so on. Throws UsageError.
void finalize(ExperimentConfig& cfg);

/// Worker count from cfg.threads, then BENCH_THREADS, then the hardware.
int worker_count(const ExperimentConfig& cfg);

/// Runs task(i) for i in [0, count) on up to `threads` workers. The first
/// exception (by task index) is rethrown after all workers finish.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& task);

/// printf("%.17g").
std::string format_double(double x);

struct HistoryPoint {
  int iter;
  double cum_time_s;
  double f_gap;
};

struct EigenRow {
  std::string algorithm;
  long n;
  long p;
  double gamma_initial;
  int trial;
  double fval;
  double fval_minus_optimal;
  double feasi;
  double nrmg;
  int itr;
  double time_s;
  StopReason stop_reason;
  std::vector<HistoryPoint> history;
};

struct EigenReport {
  std::vector<double> optimum;  // per trial
  std::vector<EigenRow> rows;   // ordered by (trial, algorithm, gamma)

  /// Per algorithm, the gamma_initial whose runs reach
  /// fval_minus_optimal <= 1e-6 |optimum| on the most trials; ties go to the
  /// smaller mean iteration count, then to the larger gamma.
  double best_gamma(const std::string& algorithm) const;
  std::vector<const EigenRow*> rows_for(const std::string& algorithm, double gamma) const;
};

/// Eigenbasis extraction with the selected algorithms and initial step sizes.
/// Writes the summary CSV (per-trial rows, then mean/std rows per algorithm
/// and gamma) to `csv`, and iteration histories to `history` when non-null.
EigenReport cmd_eigen(const ExperimentConfig& cfg, std::ostream& csv, std::ostream* history);

struct SingularRow {
  double theta;
  int trial;
  double fval;
  double f_gap;
  double feasi;
  double nrmg;
  int itr;
  double time_s;
  StopReason stop_reason;
  std::vector<HistoryPoint> history;
};

struct SingularReport {
  std::vector<double> thetas;
  std::vector<SingularRow> rows;  // ordered by (trial, theta)
};

/// Distance cost to U* = S(pi)_le from U0 = S(pi/4)_le, GDM-CP with centers
/// S(theta) for theta in {pi/1000, pi/4, pi/2, pi}.
SingularReport cmd_singular(const ExperimentConfig& cfg, std::ostream& csv, std::ostream* history);

struct MobilityRow {
  std::string sweep;      // "figure" or "isotropic"
  int step;
  double scale;           // c, as a fraction of its sweep maximum
  double tau;
  double b_norm;          // mean ||B||_2
  double observed_change; // mean ||Phi^{-1}(V + tau E) - Phi^{-1}(V)||_F / tau
  double mobility;        // mean r(V)
  double max_ratio;       // worst observed_change / r(V) over trials
  int samples;
  int violations;
};

struct MobilityReport {
  std::vector<MobilityRow> rows;
  long total_samples = 0;
  long total_violations = 0;
  bool monotone_trend = false;  // mean r(V) non-increasing along the isotropic sweep
};

MobilityReport cmd_mobility(const ExperimentConfig& cfg, std::ostream& csv);

struct CheckSuite {
  std::string name;
  long checks = 0;
  long failures = 0;
  double worst = 0.0;  // worst relative error or worst bound ratio
};

struct CheckReport {
  std::vector<CheckSuite> suites;
  bool passed() const;
};

/// Central finite differences against the Euclidean gradient, the gradient
/// on Q_{N,p} and the gradient of f o R^Cay_U.
CheckReport cmd_gradcheck(const ExperimentConfig& cfg, std::ostream& csv, std::ostream& log);

/// Lipschitz, norm and variance bounds of the gradient on Q_{N,p}.
CheckReport cmd_bounds(const ExperimentConfig& cfg, std::ostream& csv, std::ostream& log);

}  // namespace cayley::bench
