#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>

#include "sqnls/curvature.hpp"
#include "sqnls/oracle.hpp"
#include "sqnls/trace.hpp"

namespace sqnls {

struct OptimizerConfig {
  /// rho = 1 accepts every proposal and decays the step length like
  /// classic stochastic gradient; rho = 0 runs the stochastic line search.
  int rho = 0;
  /// Step-length shrink factor applied on rejection, in (0, 1).
  double kappa = 0.5;
  /// Maximum step length (alpha_bar); must be <= 1 when rho = 0.
  double alpha_bar0 = 1.0;
  std::int64_t k_max = 1000;
  /// Minibatch size handed to subsampling oracles.
  int batch = 1;
  /// Curvature memory length m.
  int memory = 10;
  /// Least-squares regularizer of the inverse-Hessian estimate.
  double lambda = 0.1;
  double sigma2_floor = 1e-12;
  /// Consecutive rejections before a forced zero-move reset.
  int max_rejects = 30;
  double alpha_min = 1e-10;
  std::uint64_t seed = 0;
  /// Optional decaying maximum step length alpha_bar_k = alpha_bar0 / k
  /// for rho = 0.
  bool decay_alpha_bar = false;
  bool store_iterates = true;

  void validate() const;
};

struct OptimizerState {
  Vector x;
  Vector p;
  double alpha = 1.0;
  std::int64_t k = 1;
  int reject_streak = 0;
  double sigma2 = 1e-12;
  CurvatureMemory mem;
  Rng rng;
  std::optional<NoisyEval> last_eval;
  /// Recompute the search direction on the next step (first call or the
  /// previous proposal was accepted).
  bool fresh_direction = true;
};

/// Probability of accepting a proposal whose estimated cost change is
/// `epsilon` with variance `sigma2`: 1 for any decrease, otherwise the
/// Gaussian CDF value Phi(-epsilon/sigma). At the variance floor the rule
/// degenerates to strict descent (0 for an increase, 1 at equality).
double acceptance_probability(double epsilon, double sigma2,
                              double sigma2_floor = 1e-12);

/// Variance of the subsample mean from paired per-sample differences:
/// sample-variance(diffs)/b, floored. Throws EmptyBatch on b < 1.
double estimate_sigma2(std::span<const double> per_sample_diffs, int b,
                       double sigma2_floor = 1e-12);

OptimizerState init_state(const StochasticOracle& oracle,
                          const OptimizerConfig& cfg, const Vector& x0);

/// One transition of the extended Markov chain: proposal, stochastic
/// acceptance, step-length update, curvature push on accepted moves.
StepRecord step(OptimizerState& state, const StochasticOracle& oracle,
                const OptimizerConfig& cfg);

/// Runs k_max transitions (proposals, counting rejections) from x0.
RunTrace run(const StochasticOracle& oracle, const OptimizerConfig& cfg,
             const Vector& x0,
             double wall_budget_s = std::numeric_limits<double>::infinity());

}  // namespace sqnls
