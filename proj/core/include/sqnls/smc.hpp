#pragma once

#include <cmath>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "sqnls/oracle.hpp"

namespace sqnls {

/// Parameters of the benchmark nonlinear state-space model:
///   x_{t+1} = 0.5 x_t + b x_t/(1+x_t^2) + 8 cos(1.2 t) + q^{-1} w_t
///   y_t     = 0.05 x_t^2 + e_t,  w_t ~ N(0,1), e_t ~ N(0, 0.1).
/// q scales the process noise inversely, so larger q means less noise.
struct SSMTheta {
  double b = 25.0;
  double q = 1.4142135623730951;  // 1/sqrt(0.5)
};

enum class Resampling { multinomial, systematic };

/// Full particle system of one filter pass: states row t holds the N
/// particles at time t (row 0 is the initial draw), ancestors row t-1
/// the indices they descended from, weights row t-1 the normalized
/// weights after assimilating y_t.
struct ParticleHistory {
  Matrix states;
  Matrix weights;
  Eigen::MatrixXi ancestors;
};

struct PFResult {
  double loglik = 0.0;
  /// All unnormalized weights vanished at some step; loglik is -inf.
  bool degenerate = false;
  ParticleHistory system;
};

struct Eq31Model {
  SSMTheta theta;
  static constexpr int kParamDim = 2;

  double sample_initial(Rng& rng) const {
    return std::normal_distribution<double>(0.0, 1.0)(rng);
  }
  double transition_mean(double x, int t) const {
    return 0.5 * x + theta.b * x / (1.0 + x * x) + 8.0 * std::cos(1.2 * t);
  }
  double transition_std() const { return 1.0 / theta.q; }
  double observation_logpdf(double y, double x) const {
    constexpr double kObsVar = 0.1;
    const double resid = y - 0.05 * x * x;
    return -0.5 * std::log(2.0 * M_PI * kObsVar) - 0.5 * resid * resid / kObsVar;
  }
  Eigen::Vector2d grad_log_transition(double x_next, double x_prev, int t) const {
    const double resid = x_next - transition_mean(x_prev, t);
    Eigen::Vector2d g;
    g(0) = theta.q * theta.q * resid * x_prev / (1.0 + x_prev * x_prev);
    g(1) = 1.0 / theta.q - theta.q * resid * resid;
    return g;
  }
  // The observation density carries no theta dependence in this model.
  Eigen::Vector2d grad_log_observation(double, double) const {
    return Eigen::Vector2d::Zero();
  }
};

namespace detail {

inline int resample_index(const Eigen::Ref<const Vector>& cumulative, double u) {
  int lo = 0;
  int hi = static_cast<int>(cumulative.size()) - 1;
  while (lo < hi) {
    const int mid = (lo + hi) / 2;
    if (cumulative(mid) < u) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  return lo;
}

}  // namespace detail

/// Standard bootstrap filter with resampling at every step.
/// loglik = sum_t log((1/N) sum_i unnormalized weight_i); the per-step
/// arithmetic stays in the log domain so small weights never underflow
/// collectively.
template <typename Model>
PFResult bootstrap_filter(const Model& model, std::span<const double> y, int n_particles,
                          Rng& rng, Resampling scheme = Resampling::multinomial) {
  if (n_particles < 2) {
    throw std::invalid_argument("bootstrap_filter: need at least two particles");
  }
  const int n = static_cast<int>(y.size());
  const int N = n_particles;

  PFResult result;
  result.system.states.resize(n + 1, N);
  result.system.weights.resize(n, N);
  result.system.ancestors.resize(n, N);

  std::normal_distribution<double> std_normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  for (int i = 0; i < N; ++i) {
    result.system.states(0, i) = model.sample_initial(rng);
  }

  Vector cumulative(N);
  Vector logw(N);
  for (int t = 1; t <= n; ++t) {
    auto ancestors = result.system.ancestors.row(t - 1);
    if (t == 1) {
      // The initial cloud is unweighted; propagate it directly.
      for (int i = 0; i < N; ++i) {
        ancestors(i) = i;
      }
    } else {
      const auto prev_w = result.system.weights.row(t - 2);
      double acc = 0.0;
      for (int i = 0; i < N; ++i) {
        acc += prev_w(i);
        cumulative(i) = acc;
      }
      cumulative(N - 1) = 1.0;
      if (scheme == Resampling::multinomial) {
        for (int i = 0; i < N; ++i) {
          ancestors(i) = detail::resample_index(cumulative, unif(rng));
        }
      } else {
        const double offset = unif(rng);
        for (int i = 0; i < N; ++i) {
          ancestors(i) = detail::resample_index(cumulative, (i + offset) / N);
        }
      }
    }

    const double sd = model.transition_std();
    for (int i = 0; i < N; ++i) {
      const double prev = result.system.states(t - 1, ancestors(i));
      result.system.states(t, i) =
          model.transition_mean(prev, t - 1) + sd * std_normal(rng);
    }

    double max_logw = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < N; ++i) {
      logw(i) = model.observation_logpdf(y[t - 1], result.system.states(t, i));
      max_logw = std::max(max_logw, logw(i));
    }
    if (!std::isfinite(max_logw)) {
      result.degenerate = true;
      result.loglik = -std::numeric_limits<double>::infinity();
      return result;
    }
    double sum = 0.0;
    for (int i = 0; i < N; ++i) {
      logw(i) = std::exp(logw(i) - max_logw);
      sum += logw(i);
    }
    if (!(sum > 0.0) || !std::isfinite(sum)) {
      result.degenerate = true;
      result.loglik = -std::numeric_limits<double>::infinity();
      return result;
    }
    result.loglik += max_logw + std::log(sum) - std::log(static_cast<double>(N));
    result.system.weights.row(t - 1) = logw.transpose() / sum;
  }
  return result;
}

/// Fisher-identity score estimate from surviving ancestral paths:
///   grad ~= sum_i w_n^i sum_t [grad log p(x_t | x_{t-1}) + grad log p(y_t | x_t)]
/// accumulated forward along the stored ancestry.
template <typename Model>
Vector fisher_path_gradient(const Model& model, std::span<const double> y,
                            const PFResult& pf) {
  const int n = static_cast<int>(y.size());
  Vector grad = Vector::Zero(Model::kParamDim);
  if (n == 0 || pf.degenerate) {
    return grad;
  }
  const int N = static_cast<int>(pf.system.states.cols());
  Matrix cum = Matrix::Zero(Model::kParamDim, N);
  Matrix next(Model::kParamDim, N);
  for (int t = 1; t <= n; ++t) {
    for (int i = 0; i < N; ++i) {
      const int a = pf.system.ancestors(t - 1, i);
      const double x_prev = pf.system.states(t - 1, a);
      const double x_next = pf.system.states(t, i);
      next.col(i) = cum.col(a) + model.grad_log_transition(x_next, x_prev, t - 1) +
                    model.grad_log_observation(y[t - 1], x_next);
    }
    cum.swap(next);
  }
  for (int i = 0; i < N; ++i) {
    grad += pf.system.weights(n - 1, i) * cum.col(i);
  }
  return grad;
}

/// Draws observations y_1..y_n from the model at `theta`.
std::vector<double> simulate_data(const SSMTheta& theta, int n, std::uint64_t seed);

/// Bootstrap filter for the benchmark model.
PFResult bootstrap_pf(const SSMTheta& theta, const std::vector<double>& y,
                      int n_particles, std::uint64_t seed,
                      Resampling scheme = Resampling::multinomial);

/// Score estimate (dl/db, dl/dq) at `theta` via Fisher's identity.
Vector fisher_gradient(const SSMTheta& theta, const std::vector<double>& y,
                       int n_particles, std::uint64_t seed,
                       Resampling scheme = Resampling::multinomial);

/// Wraps the filter as a stochastic oracle over x = (b, log q); the log
/// parameterization keeps q positive. f = -scale * loglik and g is the
/// matching negative score; u is the filter seed.
std::unique_ptr<StochasticOracle> ssm_oracle(std::vector<double> y, int n_particles,
                                             double scale = 1.0,
                                             Resampling scheme = Resampling::multinomial);

void write_observations_csv(std::span<const double> y, std::ostream& os);
void write_observations_csv(std::span<const double> y, const std::string& path);
std::vector<double> read_observations_csv(const std::string& path);

}  // namespace sqnls
