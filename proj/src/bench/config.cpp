#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "cayley/bench.hpp"

namespace cayley::bench {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string normalize_key(std::string key) {
  key = trim(key);
  while (!key.empty() && key.front() == '-') key.erase(key.begin());
  std::replace(key.begin(), key.end(), '-', '_');
  return key;
}

template <class T>
T parse_number(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  T out{};
  const char* first = t.data();
  const char* last = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last || t.empty()) {
    throw UsageError("invalid value for " + key + ": '" + text + "'");
  }
  return out;
}

double parse_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "pi") return 3.14159265358979323846;
  return parse_number<double>(key, t);
}

bool parse_bool(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "1" || t == "true" || t == "yes" || t == "on") return true;
  if (t == "0" || t == "false" || t == "no" || t == "off") return false;
  throw UsageError("invalid boolean for " + key + ": '" + text + "'");
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

const std::vector<std::string>& eigen_algorithms() {
  static const std::vector<std::string> names = {"gdm-cp", "gdm-cp-retraction", "gdm-cayley", "gdm-qr",
                                                 "gdm-polar"};
  return names;
}

void apply_setting(ExperimentConfig& cfg, const std::string& raw_key, const std::string& value) {
  const std::string key = normalize_key(raw_key);
  if (key == "experiment") {
    cfg.experiment = trim(value);
  } else if (key == "n") {
    cfg.n = parse_number<long>(key, value);
  } else if (key == "p") {
    cfg.p = parse_number<long>(key, value);
  } else if (key == "trials") {
    cfg.trials = parse_number<int>(key, value);
  } else if (key == "seed") {
    cfg.seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "gamma") {
    for (const auto& item : split_list(value)) cfg.gammas.push_back(parse_double(key, item));
  } else if (key == "algo") {
    for (const auto& item : split_list(value)) cfg.algorithms.push_back(item);
  } else if (key == "out") {
    cfg.out = trim(value);
  } else if (key == "history_out") {
    cfg.history_out = trim(value);
  } else if (key == "threads") {
    cfg.threads = parse_number<int>(key, value);
  } else if (key == "max_iters") {
    cfg.stop.max_iters = parse_number<int>(key, value);
  } else if (key == "grad_ratio_tol") {
    cfg.stop.grad_ratio_tol = parse_double(key, value);
  } else if (key == "fval_rel_tol") {
    cfg.stop.fval_rel_tol = parse_double(key, value);
  } else if (key == "cost") {
    cfg.cost = trim(value);
  } else if (key == "flip_gradient") {
    cfg.flip_gradient = parse_bool(key, value);
  } else if (key == "states") {
    cfg.states = parse_number<int>(key, value);
  } else if (key == "directions") {
    cfg.directions = parse_number<int>(key, value);
  } else if (key == "fd_step") {
    cfg.fd_step = parse_double(key, value);
  } else if (key == "fd_tol") {
    cfg.fd_tol = parse_double(key, value);
  } else if (key == "samples") {
    cfg.bound_samples = parse_number<int>(key, value);
  } else if (key == "variance_draws") {
    cfg.variance_draws = parse_number<int>(key, value);
  } else if (key == "noise_sigma") {
    cfg.noise_sigma = parse_double(key, value);
  } else if (key == "sweep_points") {
    cfg.sweep_points = parse_number<int>(key, value);
  } else if (key == "tau") {
    for (const auto& item : split_list(value)) cfg.taus.push_back(parse_double(key, item));
  } else {
    throw UsageError("unknown setting '" + raw_key + "'");
  }
}

void load_config_file(ExperimentConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError(path + ":" + std::to_string(lineno) + ": expected key=value");
    }
    apply_setting(cfg, line.substr(0, eq), line.substr(eq + 1));
  }
}

void finalize(ExperimentConfig& cfg) {
  static const std::vector<std::string> experiments = {"eigen", "singular", "mobility", "gradcheck",
                                                       "bounds"};
  if (std::find(experiments.begin(), experiments.end(), cfg.experiment) == experiments.end()) {
    throw UsageError("unknown experiment '" + cfg.experiment + "'");
  }
  if (cfg.p < 1 || cfg.n <= cfg.p) throw UsageError("need n > p >= 1");
  if (cfg.trials < 1) throw UsageError("trials must be >= 1");
  if (cfg.threads < 0) throw UsageError("threads must be >= 0");
  try {
    cfg.stop.validate();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  for (double g : cfg.gammas) {
    if (!(g > 0.0)) throw UsageError("gamma values must be positive");
  }

  if (cfg.experiment == "eigen") {
    if (cfg.gammas.empty()) cfg.gammas = {0.1, 0.01, 0.001};
    if (cfg.algorithms.empty()) cfg.algorithms = eigen_algorithms();
    for (const auto& a : cfg.algorithms) {
      const auto& known = eigen_algorithms();
      if (std::find(known.begin(), known.end(), a) == known.end()) {
        throw UsageError("unknown algorithm '" + a + "'");
      }
    }
    // keep the requested order but drop duplicates
    std::vector<std::string> unique;
    for (const auto& a : cfg.algorithms) {
      if (std::find(unique.begin(), unique.end(), a) == unique.end()) unique.push_back(a);
    }
    cfg.algorithms = std::move(unique);
  } else if (!cfg.algorithms.empty()) {
    throw UsageError("--algo only applies to the eigen experiment");
  }
  if (cfg.experiment == "singular") {
    if (cfg.p < 2) throw UsageError("singular experiment needs p >= 2");
    if (cfg.gammas.empty()) cfg.gammas = {0.1};
  }
  if (cfg.experiment == "mobility") {
    if (cfg.taus.empty()) cfg.taus = {1e-3, 1.0, 10.0};
    if (cfg.sweep_points < 2) throw UsageError("sweep_points must be >= 2");
    for (double t : cfg.taus) {
      if (!(t > 0.0)) throw UsageError("tau values must be positive");
    }
  }
  if (cfg.experiment == "gradcheck" || cfg.experiment == "bounds") {
    if (cfg.cost != "eigen" && cfg.cost != "distance" && cfg.cost != "constant") {
      throw UsageError("unknown cost '" + cfg.cost + "'");
    }
    if (cfg.states < 1 || cfg.directions < 1) throw UsageError("states and directions must be >= 1");
    if (!(cfg.fd_step > 0.0) || !(cfg.fd_tol > 0.0)) throw UsageError("fd_step and fd_tol must be positive");
    if (cfg.bound_samples < 1 || cfg.variance_draws < 2) {
      throw UsageError("samples must be >= 1 and variance_draws >= 2");
    }
    if (!(cfg.noise_sigma >= 0.0)) throw UsageError("noise_sigma must be >= 0");
  }
  if (cfg.history_out.empty() && !cfg.out.empty() && cfg.out != "-" &&
      (cfg.experiment == "eigen" || cfg.experiment == "singular")) {
    std::string stem = cfg.out;
    if (stem.size() > 4 && stem.compare(stem.size() - 4, 4, ".csv") == 0) stem.resize(stem.size() - 4);
    cfg.history_out = stem + ".history.csv";
  }
}

int worker_count(const ExperimentConfig& cfg) {
  if (cfg.threads > 0) return cfg.threads;
  if (const char* env = std::getenv("BENCH_THREADS")) {
    int v = 0;
    const std::string s(env);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc() && ptr == s.data() + s.size() && v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace cayley::bench
