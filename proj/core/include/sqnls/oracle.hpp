#pragma once

#include <cstdint>
#include <random>
#include <variant>
#include <vector>

#include "sqnls/triangular.hpp"

namespace sqnls {

using Rng = std::mt19937_64;

/// The randomness behind one noisy evaluation: either the minibatch row
/// indices of a subsampling oracle or the seed of a simulation-based one.
/// Fixing u makes evaluate(x, u) a pure function.
class AuxiliaryVariable {
 public:
  AuxiliaryVariable() : value_(std::uint64_t{0}) {}

  static AuxiliaryVariable subset(std::vector<std::int64_t> indices) {
    AuxiliaryVariable u;
    u.value_ = std::move(indices);
    return u;
  }
  static AuxiliaryVariable noise_seed(std::uint64_t seed) {
    AuxiliaryVariable u;
    u.value_ = seed;
    return u;
  }

  bool is_subset() const {
    return std::holds_alternative<std::vector<std::int64_t>>(value_);
  }
  const std::vector<std::int64_t>& indices() const {
    return std::get<std::vector<std::int64_t>>(value_);
  }
  std::uint64_t seed() const { return std::get<std::uint64_t>(value_); }

 private:
  std::variant<std::vector<std::int64_t>, std::uint64_t> value_;
};

/// One noisy measurement of the cost and its gradient at a point.
struct NoisyEval {
  double f = 0.0;
  Vector g;
  AuxiliaryVariable u;
  /// Per-sample losses when the oracle subsamples; empty otherwise.
  /// Paired differences of these drive the acceptance-variance estimate.
  std::vector<double> per_sample_f;
};

class StochasticOracle {
 public:
  virtual ~StochasticOracle() = default;

  virtual int dim() const = 0;
  virtual AuxiliaryVariable sample_u(Rng& rng) const = 0;

  /// Deterministic given (x, u): repeated calls agree bitwise.
  virtual NoisyEval evaluate(const Vector& x, const AuxiliaryVariable& u) const = 0;

  /// Noise-free cost used for summaries: the true or full-batch cost
  /// where one exists, a fixed-seed estimate otherwise.
  virtual double reference_cost(const Vector& x) const = 0;
};

/// Oracle that can additionally evaluate the exact full-batch cost and
/// gradient, as required for SVRG snapshots and reference solutions.
class FullGradientOracle : public StochasticOracle {
 public:
  virtual NoisyEval evaluate_full(const Vector& x) const = 0;
  /// Number of terms in the finite sum (1 for analytic oracles).
  virtual std::int64_t sample_count() const = 0;
};

}  // namespace sqnls
