#include "sqnls/problems.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "sqnls/errors.hpp"

namespace sqnls {

std::vector<std::int64_t> sample_without_replacement(std::int64_t n, int b, Rng& rng) {
  if (b > n) {
    throw BatchTooLarge("sample_without_replacement: b exceeds n");
  }
  if (b < 1) {
    throw EmptyBatch("sample_without_replacement: b must be >= 1");
  }
  // Floyd's algorithm: b iterations regardless of n.
  std::unordered_set<std::int64_t> chosen;
  chosen.reserve(static_cast<std::size_t>(b) * 2);
  for (std::int64_t j = n - b; j < n; ++j) {
    std::uniform_int_distribution<std::int64_t> dist(0, j);
    const std::int64_t t = dist(rng);
    if (!chosen.insert(t).second) {
      chosen.insert(j);
    }
  }
  std::vector<std::int64_t> out(chosen.begin(), chosen.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::function<AuxiliaryVariable(Rng&)> make_batch_sampler(std::int64_t n, int b) {
  if (b > n) {
    throw BatchTooLarge("make_batch_sampler: b exceeds n");
  }
  return [n, b](Rng& rng) {
    return AuxiliaryVariable::subset(sample_without_replacement(n, b, rng));
  };
}

namespace {

// log(1 + exp(-z)) without overflow for large |z|.
double softplus_neg(double z) {
  if (z >= 0.0) {
    return std::log1p(std::exp(-z));
  }
  return -z + std::log1p(std::exp(z));
}

// 1 / (1 + exp(z)), the weight of -y_i a_i in the loss gradient.
double sigmoid_neg(double z) {
  if (z >= 0.0) {
    const double e = std::exp(-z);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(z));
}

class LogisticOracle final : public FullGradientOracle {
 public:
  LogisticOracle(const SparseDataset& data, double l2_weight, int b)
      : data_(data), l2_(l2_weight), b_(b) {
    if (b < 1 || b > data.rows()) {
      throw BatchTooLarge("logistic_oracle: need 1 <= b <= n");
    }
    if (l2_weight < 0.0) {
      throw std::invalid_argument("logistic_oracle: l2_weight must be >= 0");
    }
  }

  int dim() const override { return data_.dim(); }

  AuxiliaryVariable sample_u(Rng& rng) const override {
    return AuxiliaryVariable::subset(sample_without_replacement(data_.rows(), b_, rng));
  }

  NoisyEval evaluate(const Vector& x, const AuxiliaryVariable& u) const override {
    if (!u.is_subset()) {
      throw std::invalid_argument("logistic_oracle: auxiliary variable must be a subset");
    }
    return evaluate_rows(x, u.indices(), u);
  }

  NoisyEval evaluate_full(const Vector& x) const override {
    std::vector<std::int64_t> all(data_.rows());
    for (std::int64_t i = 0; i < data_.rows(); ++i) {
      all[i] = i;
    }
    return evaluate_rows(x, all, AuxiliaryVariable::subset(all));
  }

  std::int64_t sample_count() const override { return data_.rows(); }

  double reference_cost(const Vector& x) const override {
    return evaluate_full(x).f;
  }

 private:
  NoisyEval evaluate_rows(const Vector& x, const std::vector<std::int64_t>& rows,
                          const AuxiliaryVariable& u) const {
    if (x.size() != data_.dim()) {
      throw DimensionMismatch("logistic_oracle: x dimension mismatch");
    }
    NoisyEval eval;
    eval.u = u;
    eval.g = Vector::Zero(x.size());
    eval.per_sample_f.reserve(rows.size());
    const double inv_b = 1.0 / static_cast<double>(rows.size());
    double loss = 0.0;
    for (const std::int64_t i : rows) {
      const double margin = data_.label(i) * data_.dot(i, x);
      const double sample_loss = softplus_neg(margin);
      eval.per_sample_f.push_back(sample_loss);
      loss += sample_loss;
      data_.add_scaled(i, -inv_b * data_.label(i) * sigmoid_neg(margin), eval.g);
    }
    eval.f = loss * inv_b + 0.5 * l2_ * x.squaredNorm();
    eval.g += l2_ * x;
    return eval;
  }

  const SparseDataset& data_;
  double l2_;
  int b_;
};

class RosenbrockOracle final : public FullGradientOracle {
 public:
  explicit RosenbrockOracle(double noise_std) : noise_std_(noise_std) {
    if (noise_std < 0.0) {
      throw std::invalid_argument("rosenbrock_oracle: noise_std must be >= 0");
    }
  }

  int dim() const override { return 2; }

  AuxiliaryVariable sample_u(Rng& rng) const override {
    return AuxiliaryVariable::noise_seed(rng());
  }

  NoisyEval evaluate(const Vector& x, const AuxiliaryVariable& u)
      const override {
    NoisyEval eval = exact(x);
    eval.u = u;
    if (noise_std_ > 0.0) {
      Rng noise_rng(u.seed());
      std::normal_distribution<double> normal(0.0, noise_std_);
      eval.f += normal(noise_rng);
      eval.g(0) += normal(noise_rng);
      eval.g(1) += normal(noise_rng);
    }
    return eval;
  }

  NoisyEval evaluate_full(const Vector& x) const override { return exact(x); }

  std::int64_t sample_count() const override { return 1; }

  double reference_cost(const Vector& x) const override { return exact(x).f; }

 private:
  NoisyEval exact(const Vector& x) const {
    if (x.size() != 2) {
      throw DimensionMismatch("rosenbrock_oracle: x must be 2-dimensional");
    }
    const double a = 1.0 - x(0);
    const double b = x(1) - x(0) * x(0);
    NoisyEval eval;
    eval.f = a * a + 100.0 * b * b;
    eval.g = Vector(2);
    eval.g(0) = -2.0 * a - 400.0 * x(0) * b;
    eval.g(1) = 200.0 * b;
    return eval;
  }

  double noise_std_;
};

}  // namespace

std::unique_ptr<FullGradientOracle> logistic_oracle(const SparseDataset& data,
                                                    double l2_weight, int b) {
  return std::make_unique<LogisticOracle>(data, l2_weight, b);
}

std::unique_ptr<FullGradientOracle> rosenbrock_oracle(double noise_std) {
  return std::make_unique<RosenbrockOracle>(noise_std);
}

}  // namespace sqnls
