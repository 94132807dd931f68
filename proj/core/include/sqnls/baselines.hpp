#pragma once

#include <cstdint>

#include "sqnls/oracle.hpp"
#include "sqnls/trace.hpp"

namespace sqnls {

struct BaselineConfig {
  enum class Method { sgd, adam, svrg };
  Method method = Method::sgd;
  double eta = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps_adam = 1e-8;
  /// Inner steps per SVRG snapshot; 0 picks 2n/b from the oracle.
  std::int64_t svrg_epoch_len = 0;
  std::int64_t k_max = 1000;
  int batch = 1;
  std::uint64_t seed = 0;
  bool store_iterates = true;

  void validate() const;
};

/// x' = x - eta * g.
Vector sgd_step(const Vector& x, const Vector& g, double eta);

struct AdamState {
  Vector x;
  Vector m;
  Vector v;
  std::int64_t t = 0;
};

AdamState adam_init(const Vector& x0);

/// Bias-corrected first/second-moment update of Kingma & Ba.
void adam_step(AdamState& state, const Vector& g, const BaselineConfig& cfg);

/// One evaluation per iteration: sample u, measure (f, g) at x, update.
RunTrace run_sgd(const StochasticOracle& oracle, const BaselineConfig& cfg,
                 const Vector& x0);
RunTrace run_adam(const StochasticOracle& oracle, const BaselineConfig& cfg,
                  const Vector& x0);

/// Outer snapshots with the exact full gradient; inner updates use
/// g(x, u) - g(x_snap, u) + mu on a shared minibatch u.
RunTrace svrg_run(const FullGradientOracle& oracle, const BaselineConfig& cfg,
                  const Vector& x0);

/// Dispatch on cfg.method; svrg requires a FullGradientOracle.
RunTrace run_baseline(const StochasticOracle& oracle, const BaselineConfig& cfg,
                      const Vector& x0);

}  // namespace sqnls
