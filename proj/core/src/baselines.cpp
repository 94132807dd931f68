#include "sqnls/baselines.hpp"

#include <chrono>
#include <cmath>

#include "sqnls/errors.hpp"

namespace sqnls {

void BaselineConfig::validate() const {
  if (!(eta > 0.0)) {
    throw std::invalid_argument("BaselineConfig: eta must be positive");
  }
  if (beta1 < 0.0 || beta1 >= 1.0 || beta2 < 0.0 || beta2 >= 1.0) {
    throw std::invalid_argument("BaselineConfig: beta1, beta2 must lie in [0,1)");
  }
  if (!(eps_adam > 0.0)) {
    throw std::invalid_argument("BaselineConfig: eps_adam must be positive");
  }
  if (k_max < 1 || batch < 1) {
    throw std::invalid_argument("BaselineConfig: k_max and batch must be >= 1");
  }
}

Vector sgd_step(const Vector& x, const Vector& g, double eta) {
  return x - eta * g;
}

AdamState adam_init(const Vector& x0) {
  return AdamState{.x = x0, .m = Vector::Zero(x0.size()),
                   .v = Vector::Zero(x0.size()), .t = 0};
}

void adam_step(AdamState& st, const Vector& g, const BaselineConfig& cfg) {
  ++st.t;
  st.m = cfg.beta1 * st.m + (1.0 - cfg.beta1) * g;
  st.v = cfg.beta2 * st.v + (1.0 - cfg.beta2) * g.cwiseProduct(g);
  const double m_corr = 1.0 - std::pow(cfg.beta1, static_cast<double>(st.t));
  const double v_corr = 1.0 - std::pow(cfg.beta2, static_cast<double>(st.t));
  const Vector m_hat = st.m / m_corr;
  const Vector v_hat = st.v / v_corr;
  st.x -= cfg.eta * (m_hat.array() / (v_hat.array().sqrt() + cfg.eps_adam)).matrix();
}

namespace {

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

template <typename Update>
RunTrace run_first_order(const StochasticOracle& oracle, const BaselineConfig& cfg,
                         const Vector& x0, Update&& update) {
  cfg.validate();
  if (x0.size() != oracle.dim()) {
    throw DimensionMismatch("run_baseline: x0 dimension mismatch");
  }
  Rng rng(cfg.seed);
  Vector x = x0;
  RunTrace trace;
  trace.records.reserve(cfg.k_max);
  Stopwatch watch;
  for (std::int64_t k = 1; k <= cfg.k_max; ++k) {
    const AuxiliaryVariable u = oracle.sample_u(rng);
    const NoisyEval eval = oracle.evaluate(x, u);
    update(x, eval.g);
    if (!x.allFinite()) {
      throw NonFiniteIterate("run_baseline: iterate became non-finite at k = " +
                             std::to_string(k));
    }
    trace.records.push_back(
        {.k = k, .f = eval.f, .alpha = cfg.eta, .accepted = true,
         .elapsed_s = watch.seconds()});
    if (cfg.store_iterates) {
      trace.iterates.push_back(x);
    }
  }
  return trace;
}

}  // namespace

RunTrace run_sgd(const StochasticOracle& oracle, const BaselineConfig& cfg,
                 const Vector& x0) {
  return run_first_order(oracle, cfg, x0, [&cfg](Vector& x, const Vector& g) {
    x = sgd_step(x, g, cfg.eta);
  });
}

RunTrace run_adam(const StochasticOracle& oracle, const BaselineConfig& cfg,
                  const Vector& x0) {
  AdamState st = adam_init(x0);
  return run_first_order(oracle, cfg, x0, [&cfg, &st](Vector& x, const Vector& g) {
    adam_step(st, g, cfg);
    x = st.x;
  });
}

RunTrace svrg_run(const FullGradientOracle& oracle, const BaselineConfig& cfg,
                  const Vector& x0) {
  cfg.validate();
  if (x0.size() != oracle.dim()) {
    throw DimensionMismatch("svrg_run: x0 dimension mismatch");
  }
  const std::int64_t epoch_len =
      cfg.svrg_epoch_len > 0
          ? cfg.svrg_epoch_len
          : std::max<std::int64_t>(1, 2 * oracle.sample_count() / cfg.batch);

  Rng rng(cfg.seed);
  Vector x = x0;
  Vector snapshot = x0;
  Vector mu = oracle.evaluate_full(snapshot).g;

  RunTrace trace;
  trace.records.reserve(cfg.k_max);
  Stopwatch watch;
  for (std::int64_t k = 1; k <= cfg.k_max; ++k) {
    if ((k - 1) % epoch_len == 0 && k > 1) {
      snapshot = x;  // snapshot policy: last inner iterate
      mu = oracle.evaluate_full(snapshot).g;
    }
    const AuxiliaryVariable u = oracle.sample_u(rng);
    const NoisyEval at_x = oracle.evaluate(x, u);
    const NoisyEval at_snap = oracle.evaluate(snapshot, u);
    const Vector direction = at_x.g - at_snap.g + mu;
    x -= cfg.eta * direction;
    if (!x.allFinite()) {
      throw NonFiniteIterate("svrg_run: iterate became non-finite at k = " +
                             std::to_string(k));
    }
    trace.records.push_back(
        {.k = k, .f = at_x.f, .alpha = cfg.eta, .accepted = true,
         .elapsed_s = watch.seconds()});
    if (cfg.store_iterates) {
      trace.iterates.push_back(x);
    }
  }
  return trace;
}

RunTrace run_baseline(const StochasticOracle& oracle, const BaselineConfig& cfg,
                      const Vector& x0) {
  switch (cfg.method) {
    case BaselineConfig::Method::sgd:
      return run_sgd(oracle, cfg, x0);
    case BaselineConfig::Method::adam:
      return run_adam(oracle, cfg, x0);
    case BaselineConfig::Method::svrg: {
      const auto* full = dynamic_cast<const FullGradientOracle*>(&oracle);
      if (full == nullptr) {
        throw std::invalid_argument("run_baseline: svrg needs a full-gradient oracle");
      }
      return svrg_run(*full, cfg, x0);
    }
  }
  throw std::logic_error("run_baseline: unreachable");
}

}  // namespace sqnls
