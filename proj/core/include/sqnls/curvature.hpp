#pragma once

#include "sqnls/triangular.hpp"

namespace sqnls {

/// One curvature measurement: iterate difference s = x_{k+1} - x_k and
/// gradient difference y = g_{k+1} - g_k.
struct CurvaturePair {
  Vector s;
  Vector y;
};

/// Limited-memory inverse-Hessian representation.
///
/// Stores the most recent pairs as columns of Y and S (at most `capacity`
/// of them, replaced circularly) together with an upper-triangular
/// Cholesky factor R of lambda*I + Y^T Y, which is maintained by a
/// sliding-window update: one bordered column exchange plus a rank-1
/// update and downdate of the trailing block. On a downdate failure, or
/// every 64 pushes, the factor is rebuilt from scratch by QR of
/// [sqrt(lambda) I; Y], which bounds the drift of the maintained factor.
///
/// The prior is the scalar matrix gamma*I with gamma tracking
/// clip(s^T y / y^T y) of the latest admitted pair.
///
/// A memory is a value owned by exactly one optimizer run; mutation is
/// sequential within the run, distinct runs never share one.
class CurvatureMemory {
 public:
  CurvatureMemory(int dim, int capacity, double lambda);

  int dim() const { return dim_; }
  int capacity() const { return capacity_; }
  int count() const { return count_; }
  int write_index() const { return write_index_; }
  double lambda() const { return lambda_; }
  double gamma() const { return gamma_; }
  int pushes_since_refactor() const { return pushes_since_refactor_; }

  Eigen::Ref<const Matrix> y_columns() const { return y_.leftCols(count_); }
  Eigen::Ref<const Matrix> s_columns() const { return s_.leftCols(count_); }
  UpperTriangular factor() const;

  long refactor_count() const { return refactor_count_; }
  long downdate_failure_count() const { return downdate_failure_count_; }

  /// Admits a pair, replacing the oldest column once at capacity.
  /// Pairs with ||s|| <= 1e-12, ||y|| <= 1e-12 or non-finite entries are
  /// skipped and leave the memory unchanged.
  void push_pair(const CurvaturePair& pair);

  /// Corrected quasi-Newton direction -H g for the stored model.
  /// Returns the zero vector when ||g|| <= 1e-12 and -gamma*g while the
  /// memory is empty.
  Vector search_direction(const Vector& g) const;

  /// Materializes H = (lambda I + Y Y^T)^{-1} (lambda gamma I + Y S^T).
  /// Test oracle; guarded to dim <= 64 so it never sneaks into a
  /// large-scale path.
  Matrix dense_inverse_hessian() const;

 private:
  bool try_sliding_update(int pos, const Vector& v, bool growing);
  void refactorize();

  int dim_;
  int capacity_;
  int count_ = 0;
  int write_index_ = 0;
  Matrix y_;  // dim x capacity, first `count_` columns valid
  Matrix s_;
  Matrix r_;  // count_ x count_
  double lambda_;
  double gamma_ = 1.0;
  int pushes_since_refactor_ = 0;
  long refactor_count_ = 0;
  long downdate_failure_count_ = 0;
};

/// Reflects p off the gradient so the result mimics a descent direction:
/// p' = p - beta*g with beta = 2*max{0, p^T g / g^T g}, falling back to
/// -g when the corrected inner product fails to come out negative.
Vector descent_correct(const Vector& p, const Vector& g);

}  // namespace sqnls
