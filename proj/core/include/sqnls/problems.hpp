#pragma once

#include <functional>
#include <memory>

#include "sqnls/dataset.hpp"
#include "sqnls/oracle.hpp"

namespace sqnls {

/// Uniform size-b index subsets drawn without replacement from [0, n).
/// Throws BatchTooLarge when b > n.
std::function<AuxiliaryVariable(Rng&)> make_batch_sampler(std::int64_t n, int b);

/// The underlying draw, exposed for reuse; returns sorted indices.
std::vector<std::int64_t> sample_without_replacement(std::int64_t n, int b, Rng& rng);

/// Subsampled logistic loss with an L2 regularizer:
///   f(x, u) = (1/b) sum_{i in u} log(1 + exp(-y_i a_i^T x)) + (l2/2)||x||^2.
/// Per-sample losses are populated for acceptance-variance estimation.
/// The dataset is held by reference and must outlive the oracle.
std::unique_ptr<FullGradientOracle> logistic_oracle(const SparseDataset& data,
                                                    double l2_weight, int b);

/// Two-dimensional Rosenbrock cost f(x) = (1-x1)^2 + 100 (x2 - x1^2)^2
/// with i.i.d. Gaussian noise (std = noise_std, seeded by u) added to the
/// cost and to each gradient component.
std::unique_ptr<FullGradientOracle> rosenbrock_oracle(double noise_std);

}  // namespace sqnls
