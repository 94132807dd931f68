#include "sqnls/dataset.hpp"

#include <zlib.h>

#include <cctype>
#include <charconv>
#include <random>

#include "sqnls/errors.hpp"
#include "sqnls/oracle.hpp"

namespace sqnls {

SparseDataset::SparseDataset(std::vector<double> labels,
                             std::vector<std::int64_t> row_offsets,
                             std::vector<std::int32_t> indices,
                             std::vector<double> values, int dim)
    : labels_(std::move(labels)),
      row_offsets_(std::move(row_offsets)),
      indices_(std::move(indices)),
      values_(std::move(values)),
      dim_(dim) {
  if (row_offsets_.size() != labels_.size() + 1) {
    throw DimensionMismatch("SparseDataset: offsets do not match row count");
  }
}

double SparseDataset::dot(std::int64_t row, const Vector& x) const {
  double acc = 0.0;
  for (std::int64_t p = row_offsets_[row]; p < row_offsets_[row + 1]; ++p) {
    acc += values_[p] * x(indices_[p]);
  }
  return acc;
}

void SparseDataset::add_scaled(std::int64_t row, double coef, Vector& out) const {
  for (std::int64_t p = row_offsets_[row]; p < row_offsets_[row + 1]; ++p) {
    out(indices_[p]) += coef * values_[p];
  }
}

namespace {

// Reads a whole file through zlib, which passes uncompressed data through
// unchanged, so plain and .gz inputs share one path.
std::string read_possibly_gzipped(const std::string& path) {
  gzFile fp = gzopen(path.c_str(), "rb");
  if (fp == nullptr) {
    throw Error("load_libsvm: cannot open " + path);
  }
  std::string content;
  char buf[1 << 16];
  int got = 0;
  while ((got = gzread(fp, buf, sizeof(buf))) > 0) {
    content.append(buf, static_cast<std::size_t>(got));
  }
  const bool bad = got < 0;
  gzclose(fp);
  if (bad) {
    throw Error("load_libsvm: read error in " + path);
  }
  return content;
}

double parse_label(std::string_view token, long line_no) {
  if (token == "+1" || token == "1") {
    return 1.0;
  }
  if (token == "-1") {
    return -1.0;
  }
  if (token == "0") {
    return -1.0;
  }
  // Accept decimal spellings such as "1.0" or "0.0".
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw ParseError("load_libsvm: malformed label '" + std::string(token) + "'",
                     line_no);
  }
  if (value == 1.0) {
    return 1.0;
  }
  if (value == -1.0 || value == 0.0) {
    return -1.0;
  }
  throw ParseError("load_libsvm: unsupported label '" + std::string(token) + "'",
                   line_no);
}

}  // namespace

SparseDataset load_libsvm(const std::string& path) {
  const std::string content = read_possibly_gzipped(path);

  std::vector<double> labels;
  std::vector<std::int64_t> offsets{0};
  std::vector<std::int32_t> indices;
  std::vector<double> values;
  int max_index = 0;

  long line_no = 0;
  std::size_t pos = 0;
  while (pos <= content.size()) {
    std::size_t eol = content.find('\n', pos);
    if (eol == std::string::npos) {
      eol = content.size();
    }
    std::string_view line(content.data() + pos, eol - pos);
    pos = eol + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }

    std::size_t cursor = 0;
    const auto next_token = [&]() -> std::string_view {
      while (cursor < line.size() &&
             std::isspace(static_cast<unsigned char>(line[cursor]))) {
        ++cursor;
      }
      const std::size_t start = cursor;
      while (cursor < line.size() &&
             !std::isspace(static_cast<unsigned char>(line[cursor]))) {
        ++cursor;
      }
      return line.substr(start, cursor - start);
    };

    const std::string_view label_tok = next_token();
    if (label_tok.empty()) {
      continue;  // blank or comment-only line
    }
    labels.push_back(parse_label(label_tok, line_no));

    std::int32_t prev_index = 0;
    for (std::string_view tok = next_token(); !tok.empty(); tok = next_token()) {
      const std::size_t colon = tok.find(':');
      if (colon == std::string_view::npos) {
        throw ParseError("load_libsvm: expected idx:val, got '" + std::string(tok) + "'",
                         line_no);
      }
      std::int32_t idx = 0;
      const auto idx_sv = tok.substr(0, colon);
      auto [iptr, iec] = std::from_chars(idx_sv.data(), idx_sv.data() + idx_sv.size(), idx);
      if (iec != std::errc{} || iptr != idx_sv.data() + idx_sv.size() || idx < 1) {
        throw ParseError("load_libsvm: malformed feature index in '" +
                             std::string(tok) + "'",
                         line_no);
      }
      double val = 0.0;
      const auto val_sv = tok.substr(colon + 1);
      auto [vptr, vec] = std::from_chars(val_sv.data(), val_sv.data() + val_sv.size(), val);
      if (vec != std::errc{} || vptr != val_sv.data() + val_sv.size() ||
          !std::isfinite(val)) {
        throw ParseError("load_libsvm: malformed feature value in '" +
                             std::string(tok) + "'",
                         line_no);
      }
      if (idx <= prev_index) {
        throw NonMonotoneIndices("load_libsvm: feature indices must strictly increase",
                                 line_no);
      }
      prev_index = idx;
      indices.push_back(idx - 1);  // store 0-based
      values.push_back(val);
      max_index = std::max(max_index, static_cast<int>(idx));
    }
    offsets.push_back(static_cast<std::int64_t>(indices.size()));
  }

  return SparseDataset(std::move(labels), std::move(offsets), std::move(indices),
                       std::move(values), max_index);
}

SparseDataset make_synthetic_dataset(std::int64_t n, int d, double margin,
                                     double flip_prob, std::uint64_t seed) {
  if (n < 1 || d < 1) {
    throw std::invalid_argument("make_synthetic_dataset: n and d must be >= 1");
  }
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  Vector planted(d);
  for (int j = 0; j < d; ++j) {
    planted(j) = normal(rng);
  }
  planted /= planted.norm();

  std::vector<double> labels(n);
  std::vector<std::int64_t> offsets{0};
  std::vector<std::int32_t> indices;
  std::vector<double> values;
  indices.reserve(n * d);
  values.reserve(n * d);

  Vector row(d);
  for (std::int64_t i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) {
      row(j) = normal(rng);
    }
    double m = planted.dot(row);
    if (std::abs(m) < margin) {
      const double target = m >= 0.0 ? margin : -margin;
      row += (target - m) * planted;
      m = target;
    }
    double label = m >= 0.0 ? 1.0 : -1.0;
    if (unif(rng) < flip_prob) {
      label = -label;
    }
    labels[i] = label;
    for (int j = 0; j < d; ++j) {
      indices.push_back(j);
      values.push_back(row(j));
    }
    offsets.push_back(static_cast<std::int64_t>(indices.size()));
  }

  return SparseDataset(std::move(labels), std::move(offsets), std::move(indices),
                       std::move(values), d);
}

}  // namespace sqnls
