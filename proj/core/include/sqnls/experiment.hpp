#pragma once

#include <map>
#include <string>
#include <vector>

#include "sqnls/baselines.hpp"
#include "sqnls/optimizer.hpp"

namespace sqnls {

/// One experiment: a problem, a set of methods, repeated runs over
/// consecutive seeds. Loaded from a flat key=value file; command-line
/// overrides go through apply_override and win over file values.
struct ExperimentConfig {
  std::string problem = "rosenbrock";  // rosenbrock | logistic | ssm
  std::vector<std::string> methods = {"alg1"};
  int repetitions = 1;
  std::uint64_t seed_base = 1;
  std::string out_dir = "out";
  double wall_budget_s = std::numeric_limits<double>::infinity();
  /// Record wall-clock time in the emitted CSVs. Off by default so that
  /// reruns with identical seeds stay byte-identical.
  bool wall_time = false;
  int workers = 0;  // 0 picks the hardware concurrency
  double tail_fraction = 0.2;

  OptimizerConfig opt;
  BaselineConfig base;

  // rosenbrock
  double noise_std = 0.1;
  // logistic: a LIBSVM path, or "synth" for the generated problem
  std::string dataset = "synth";
  double l2_weight = -1.0;  // < 0 picks 1/n
  std::int64_t synth_n = 5000;
  int synth_d = 50;
  double synth_margin = 0.1;
  double synth_flip = 0.05;
  // ssm
  int ssm_n = 100;
  int particles = 200;
  double ssm_scale = 1.0;
  double ssm_true_b = 25.0;
  double ssm_true_q = 1.4142135623730951;

  std::uint64_t data_seed = 42;
  std::vector<double> x0;  // empty picks the per-problem default

  void validate() const;
};

ExperimentConfig load_experiment_config(const std::string& path);

/// Applies one `key = value` setting; throws on unknown keys.
void apply_override(ExperimentConfig& cfg, const std::string& key,
                    const std::string& value);

struct RunSummary {
  std::string problem;
  std::string method;
  std::uint64_t seed = 0;
  double final_cost = 0.0;
  std::int64_t iters = 0;
  double seconds = 0.0;
  bool failed = false;
  std::string error;
};

struct ExperimentResult {
  bool ok = true;
  std::vector<RunSummary> summaries;
  std::map<std::string, std::vector<RunTrace>> traces;  // keyed by method
  std::string summary_path;
};

/// Executes every (method, repetition) pair on a bounded worker pool,
/// writes one trace CSV per run plus summary and plot CSVs, and returns
/// the in-memory results. Failed runs are reported in the summary and
/// flip `ok`; completed artifacts are preserved.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Elementwise median curve across repetitions, aligned by iteration
/// index and truncated to the shortest trace.
std::vector<double> median_curve(const std::vector<RunTrace>& traces,
                                 double (*value)(const StepRecord&));

/// Writes per-method cost-vs-iteration (and, with timing, cost-vs-walltime)
/// median curves.
void emit_plot_data(const std::string& out_dir, const std::string& problem,
                    const std::string& method, const std::vector<RunTrace>& traces,
                    bool include_walltime);

void write_summary_csv(const std::vector<RunSummary>& summaries,
                       const std::string& path);

}  // namespace sqnls
