#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sqnls/triangular.hpp"

namespace sqnls {

/// Immutable sparse classification dataset with labels in {-1, +1}.
/// Rows are stored CSR-style; feature indices are 0-based internally
/// (LIBSVM text is 1-based). Shareable read-only across concurrent runs.
class SparseDataset {
 public:
  SparseDataset() = default;
  SparseDataset(std::vector<double> labels, std::vector<std::int64_t> row_offsets,
                std::vector<std::int32_t> indices, std::vector<double> values,
                int dim);

  std::int64_t rows() const { return static_cast<std::int64_t>(labels_.size()); }
  int dim() const { return dim_; }
  double label(std::int64_t row) const { return labels_[row]; }

  /// a_i^T x for row i.
  double dot(std::int64_t row, const Vector& x) const;
  /// out += coef * a_i.
  void add_scaled(std::int64_t row, double coef, Vector& out) const;

  std::int64_t nnz(std::int64_t row) const {
    return row_offsets_[row + 1] - row_offsets_[row];
  }
  std::int32_t index_at(std::int64_t row, std::int64_t j) const {
    return indices_[row_offsets_[row] + j];
  }
  double value_at(std::int64_t row, std::int64_t j) const {
    return values_[row_offsets_[row] + j];
  }

 private:
  std::vector<double> labels_;
  std::vector<std::int64_t> row_offsets_;  // rows()+1 entries
  std::vector<std::int32_t> indices_;
  std::vector<double> values_;
  int dim_ = 0;
};

/// Parses LIBSVM text: `<label> <idx>:<val> ...` with 1-based, strictly
/// increasing indices. Labels -1/+1 kept, 0/1 mapped to -1/+1. Blank
/// lines and `#` comments are skipped. Gzip-compressed files are accepted
/// transparently. Throws ParseError / NonMonotoneIndices with the
/// offending line number.
SparseDataset load_libsvm(const std::string& path);

/// Separable-margin synthetic classification problem: unit planted
/// direction, rows shifted to margin >= `margin`, labels flipped with
/// probability `flip_prob`. Deterministic given the seed.
SparseDataset make_synthetic_dataset(std::int64_t n, int d, double margin,
                                     double flip_prob, std::uint64_t seed);

}  // namespace sqnls
