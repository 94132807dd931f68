#include "sqnls/optimizer.hpp"

#include <chrono>
#include <cmath>

namespace sqnls {

void OptimizerConfig::validate() const {
  if (rho != 0 && rho != 1) {
    throw std::invalid_argument("OptimizerConfig: rho must be 0 or 1");
  }
  if (!(kappa > 0.0 && kappa < 1.0)) {
    throw std::invalid_argument("OptimizerConfig: kappa must lie in (0,1)");
  }
  if (!(alpha_bar0 > 0.0)) {
    throw std::invalid_argument("OptimizerConfig: alpha_bar0 must be positive");
  }
  if (rho == 0 && alpha_bar0 > 1.0) {
    throw std::invalid_argument("OptimizerConfig: alpha_bar0 must be <= 1 for rho = 0");
  }
  if (k_max < 1) {
    throw std::invalid_argument("OptimizerConfig: k_max must be >= 1");
  }
  if (batch < 1 || memory < 1) {
    throw std::invalid_argument("OptimizerConfig: batch and memory must be >= 1");
  }
  if (!(lambda > 0.0) || !(sigma2_floor > 0.0) || !(alpha_min > 0.0)) {
    throw std::invalid_argument(
        "OptimizerConfig: lambda, sigma2_floor and alpha_min must be positive");
  }
  if (max_rejects < 1) {
    throw std::invalid_argument("OptimizerConfig: max_rejects must be >= 1");
  }
}

double acceptance_probability(double epsilon, double sigma2, double sigma2_floor) {
  if (epsilon < 0.0) {
    return 1.0;
  }
  const double s2 = std::max(sigma2, sigma2_floor);
  if (s2 <= sigma2_floor) {
    return epsilon > 0.0 ? 0.0 : 1.0;
  }
  // Phi(-epsilon / sigma)
  return 0.5 * std::erfc(epsilon / std::sqrt(2.0 * s2));
}

double estimate_sigma2(std::span<const double> per_sample_diffs, int b,
                       double sigma2_floor) {
  if (b < 1 || per_sample_diffs.empty()) {
    throw EmptyBatch("estimate_sigma2: batch must hold at least one sample");
  }
  if (static_cast<int>(per_sample_diffs.size()) != b) {
    throw DimensionMismatch("estimate_sigma2: list length does not equal b");
  }
  if (b == 1) {
    return sigma2_floor;
  }
  double mean = 0.0;
  for (double d : per_sample_diffs) {
    mean += d;
  }
  mean /= b;
  double ss = 0.0;
  for (double d : per_sample_diffs) {
    ss += (d - mean) * (d - mean);
  }
  const double sample_var = ss / (b - 1);
  return std::max(sample_var / b, sigma2_floor);
}

OptimizerState init_state(const StochasticOracle& oracle, const OptimizerConfig& cfg,
                          const Vector& x0) {
  cfg.validate();
  if (x0.size() != oracle.dim()) {
    throw DimensionMismatch("init_state: x0 dimension does not match oracle");
  }
  if (!x0.allFinite()) {
    throw NonFiniteIterate("init_state: x0 must be finite");
  }
  OptimizerState st{
      .x = x0,
      .p = Vector::Zero(x0.size()),
      .alpha = cfg.alpha_bar0,
      .k = 1,
      .reject_streak = 0,
      .sigma2 = cfg.sigma2_floor,
      .mem = CurvatureMemory(oracle.dim(), cfg.memory, cfg.lambda),
      .rng = Rng(cfg.seed),
      .last_eval = std::nullopt,
      .fresh_direction = true,
  };
  return st;
}

StepRecord step(OptimizerState& st, const StochasticOracle& oracle,
                const OptimizerConfig& cfg) {
  if (!st.last_eval) {
    const AuxiliaryVariable u = oracle.sample_u(st.rng);
    st.last_eval = oracle.evaluate(st.x, u);
  }
  if (st.fresh_direction) {
    st.p = st.mem.search_direction(st.last_eval->g);
  }

  const std::int64_t k = st.k;
  const double alpha_k = st.alpha;
  const double alpha_bar_k =
      cfg.decay_alpha_bar ? cfg.alpha_bar0 / static_cast<double>(k) : cfg.alpha_bar0;

  // Escape hatch: Algorithm 1 as written can shrink alpha forever on a bad
  // direction; after max_rejects rejections (or once alpha underflows) the
  // step degenerates to an accepted zero move with a fresh measurement.
  const bool forced = st.reject_streak >= cfg.max_rejects || st.alpha < cfg.alpha_min;

  bool accepted = false;
  double f_record = 0.0;
  if (forced) {
    accepted = true;
    f_record = st.last_eval->f;
  } else {
    const Vector proposal = st.x + st.alpha * st.p;
    // Common random numbers: both sides of the acceptance test share one
    // freshly sampled u, so the subsampling noise cancels in the paired
    // per-sample differences.
    const AuxiliaryVariable u_acc = oracle.sample_u(st.rng);
    const NoisyEval at_proposal = oracle.evaluate(proposal, u_acc);
    const NoisyEval at_current = oracle.evaluate(st.x, u_acc);
    const double epsilon = at_proposal.f - at_current.f;

    const std::size_t n_samples = at_current.per_sample_f.size();
    if (n_samples > 0 && at_proposal.per_sample_f.size() == n_samples) {
      std::vector<double> diffs(n_samples);
      for (std::size_t i = 0; i < n_samples; ++i) {
        diffs[i] = at_proposal.per_sample_f[i] - at_current.per_sample_f[i];
      }
      st.sigma2 =
          estimate_sigma2(diffs, static_cast<int>(n_samples), cfg.sigma2_floor);
    }

    const double a = acceptance_probability(epsilon, st.sigma2, cfg.sigma2_floor);
    const double prob = std::max(static_cast<double>(cfg.rho), a);
    const double draw = std::uniform_real_distribution<double>(0.0, 1.0)(st.rng);
    accepted = draw < prob;
    f_record = at_current.f;
  }

  if (accepted) {
    Vector x_next = forced ? st.x : (st.x + st.alpha * st.p).eval();
    if (!x_next.allFinite()) {
      throw NonFiniteIterate("step: iterate became non-finite at k = " +
                             std::to_string(k));
    }
    // Fresh measurement at the accepted point; it supplies the y of the
    // curvature pair and seeds the next direction without a third call.
    const AuxiliaryVariable u_next = oracle.sample_u(st.rng);
    NoisyEval fresh = oracle.evaluate(x_next, u_next);
    if (!forced) {
      st.mem.push_pair({(st.alpha * st.p).eval(), fresh.g - st.last_eval->g});
    }
    st.x = std::move(x_next);
    st.last_eval = std::move(fresh);
    st.alpha = cfg.rho == 1 ? alpha_bar_k / static_cast<double>(k) : alpha_bar_k;
    st.reject_streak = 0;
    st.fresh_direction = true;
  } else {
    st.alpha = cfg.kappa * st.alpha;
    ++st.reject_streak;
    st.fresh_direction = false;
  }
  ++st.k;

  return StepRecord{.k = k, .f = f_record, .alpha = alpha_k, .accepted = accepted,
                    .elapsed_s = 0.0};
}

RunTrace run(const StochasticOracle& oracle, const OptimizerConfig& cfg,
             const Vector& x0, double wall_budget_s) {
  OptimizerState st = init_state(oracle, cfg, x0);
  RunTrace trace;
  trace.records.reserve(cfg.k_max);
  const auto start = std::chrono::steady_clock::now();
  const auto elapsed = [&start] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
  };
  for (std::int64_t i = 0; i < cfg.k_max; ++i) {
    if (elapsed() > wall_budget_s) {
      trace.truncated = true;
      break;
    }
    StepRecord rec = step(st, oracle, cfg);
    rec.elapsed_s = elapsed();
    trace.records.push_back(rec);
    if (cfg.store_iterates) {
      trace.iterates.push_back(st.x);
    }
  }
  return trace;
}

}  // namespace sqnls
