#include "sqnls/curvature.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

namespace sqnls {

namespace {

constexpr double kDegenerateNorm = 1e-12;
constexpr double kGammaLo = 1e-8;
constexpr double kGammaHi = 1e8;
constexpr double kBorderMargin = 1e-13;
constexpr int kRefactorPeriod = 64;

}  // namespace

CurvatureMemory::CurvatureMemory(int dim, int capacity, double lambda)
    : dim_(dim), capacity_(capacity), lambda_(lambda) {
  if (dim < 1 || capacity < 1) {
    throw std::invalid_argument("CurvatureMemory: dim and capacity must be >= 1");
  }
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("CurvatureMemory: lambda must be positive");
  }
  y_.setZero(dim_, capacity_);
  s_.setZero(dim_, capacity_);
  r_.resize(0, 0);
}

UpperTriangular CurvatureMemory::factor() const {
  return UpperTriangular(r_, UpperTriangular::unchecked_t{});
}

void CurvatureMemory::push_pair(const CurvaturePair& pair) {
  if (pair.s.size() != dim_ || pair.y.size() != dim_) {
    throw DimensionMismatch("push_pair: pair dimension does not match memory");
  }
  if (!pair.s.allFinite() || !pair.y.allFinite()) {
    return;  // degenerate measurement, skip
  }
  const double s_norm = pair.s.norm();
  const double y_norm = pair.y.norm();
  if (s_norm <= kDegenerateNorm || y_norm <= kDegenerateNorm) {
    return;
  }

  const bool growing = count_ < capacity_;
  const int pos = growing ? count_ : write_index_;

  ++pushes_since_refactor_;
  bool need_refactor = pushes_since_refactor_ >= kRefactorPeriod;
  if (!need_refactor && !try_sliding_update(pos, pair.y, growing)) {
    ++downdate_failure_count_;
    need_refactor = true;
  }

  y_.col(pos) = pair.y;
  s_.col(pos) = pair.s;
  if (growing) {
    ++count_;
  }
  write_index_ = (pos + 1) % capacity_;

  if (need_refactor) {
    refactorize();
  }

  const double sy = pair.s.dot(pair.y);
  if (sy > 0.0) {
    gamma_ = std::clamp(sy / (y_norm * y_norm), kGammaLo, kGammaHi);
  }
}

bool CurvatureMemory::try_sliding_update(int pos, const Vector& v, bool growing) {
  const double diag = lambda_ + v.squaredNorm();

  if (growing) {
    const int n = count_;
    Vector r4 = y_.leftCols(n).transpose() * v;
    detail::solve_upper_transposed_inplace(r_, r4);
    const double arg = diag - r4.squaredNorm();
    if (arg <= kBorderMargin * diag) {
      return false;
    }
    r_.conservativeResize(n + 1, n + 1);
    r_.col(n).head(n) = r4;
    r_.row(n).setZero();
    r_(n, n) = std::sqrt(arg);
    return true;
  }

  const int n = count_;
  const int tail = n - pos - 1;

  Vector r4 = y_.leftCols(pos).transpose() * v;
  detail::solve_upper_transposed_inplace(r_.topLeftCorner(pos, pos), r4);
  const double arg = diag - r4.squaredNorm();
  if (arg <= kBorderMargin * diag) {
    return false;
  }
  const double r5 = std::sqrt(arg);

  Eigen::RowVectorXd r6 =
      (v.transpose() * y_.middleCols(pos + 1, tail) -
       r4.transpose() * r_.block(0, pos + 1, pos, tail)) /
      r5;

  // R6^T R6 = R4^T R4 + r3^T r3 - r6^T r6; update first, then downdate,
  // so the intermediate factor keeps the larger margin.
  Matrix trailing = r_.block(pos + 1, pos + 1, tail, tail);
  Vector work = r_.row(pos).segment(pos + 1, tail).transpose();
  detail::rank1_update_inplace(trailing, work);
  work = r6.transpose();
  if (!detail::rank1_downdate_inplace(trailing, work)) {
    return false;
  }

  r_.col(pos).head(pos) = r4;
  r_(pos, pos) = r5;
  r_.row(pos).segment(pos + 1, tail) = r6;
  r_.block(pos + 1, pos + 1, tail, tail) = trailing;
  return true;
}

void CurvatureMemory::refactorize() {
  const int n = count_;
  Matrix stacked(n + dim_, n);
  stacked.topRows(n) = std::sqrt(lambda_) * Matrix::Identity(n, n);
  stacked.bottomRows(dim_) = y_.leftCols(n);
  r_ = qr_factor_tall(stacked).matrix();
  pushes_since_refactor_ = 0;
  ++refactor_count_;
}

Vector CurvatureMemory::search_direction(const Vector& g) const {
  if (g.size() != dim_) {
    throw DimensionMismatch("search_direction: gradient dimension mismatch");
  }
  if (!g.allFinite()) {
    throw std::invalid_argument("search_direction: gradient must be finite");
  }
  if (g.norm() <= kDegenerateNorm) {
    return Vector::Zero(dim_);
  }
  if (count_ == 0) {
    return -gamma_ * g;
  }

  const auto y = y_.leftCols(count_);
  const auto s = s_.leftCols(count_);
  Vector z = gamma_ * g + (y * (s.transpose() * g)) / lambda_;
  Vector w = y.transpose() * z;
  detail::solve_upper_transposed_inplace(r_, w);
  detail::solve_upper_inplace(r_, w);
  Vector p = -z + y * w;
  return descent_correct(p, g);
}

Matrix CurvatureMemory::dense_inverse_hessian() const {
  if (dim_ > 64) {
    throw DimensionTooLarge("dense_inverse_hessian: guarded to dim <= 64");
  }
  const auto y = y_.leftCols(count_);
  const auto s = s_.leftCols(count_);
  Matrix lhs = lambda_ * Matrix::Identity(dim_, dim_) + y * y.transpose();
  Matrix rhs = lambda_ * gamma_ * Matrix::Identity(dim_, dim_) + y * s.transpose();
  return lhs.ldlt().solve(rhs);
}

Vector descent_correct(const Vector& p, const Vector& g) {
  const double gg = g.squaredNorm();
  if (gg <= kDegenerateNorm * kDegenerateNorm) {
    return p;  // outside the contract; caller treats g as zero
  }
  const double pg = p.dot(g);
  const double beta = 2.0 * std::max(0.0, pg / gg);
  Vector corrected = p - beta * g;
  if (!corrected.allFinite() || !(corrected.dot(g) < 0.0)) {
    return -g;
  }
  return corrected;
}

}  // namespace sqnls
