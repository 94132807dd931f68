#pragma once

#include <Eigen/Core>

#include "sqnls/errors.hpp"

namespace sqnls {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Upper-triangular factor with strictly positive diagonal.
///
/// Every routine in this header produces factors with this sign
/// convention, which makes them unique and lets round-trip tests
/// compare entries directly.
class UpperTriangular {
 public:
  UpperTriangular() = default;

  /// Takes ownership of `entries`; throws if the strict lower triangle
  /// is nonzero or any diagonal entry is <= 0.
  explicit UpperTriangular(Matrix entries);

  int order() const { return static_cast<int>(entries_.rows()); }
  const Matrix& matrix() const { return entries_; }

  /// Leading principal block of the given order.
  UpperTriangular top_left(int order) const;

 private:
  friend UpperTriangular cholesky(const Matrix&);
  friend UpperTriangular qr_factor_tall(const Matrix&);
  friend UpperTriangular chol_update(const UpperTriangular&, const Vector&);
  friend UpperTriangular chol_downdate(const UpperTriangular&, const Vector&);
  friend class CurvatureMemory;

  struct unchecked_t {};
  UpperTriangular(Matrix entries, unchecked_t) : entries_(std::move(entries)) {}

  Matrix entries_;
};

/// Factors a symmetric positive definite matrix as A = R^T R.
///
/// Throws NotPositiveDefinite when a pivot falls at or below
/// 1e-14 * trace(A)/m, and std::invalid_argument when A is not
/// symmetric to 1e-10 relative tolerance.
UpperTriangular cholesky(const Matrix& a);

/// Upper-triangular R of a QR factorization of a tall matrix,
/// so that R^T R = M^T M. Throws RankDeficient when a remaining
/// column norm collapses below 1e-14 * ||M||_F.
UpperTriangular qr_factor_tall(const Matrix& m);

/// R' with R'^T R' = R^T R + v v^T (Givens rotations; always succeeds).
UpperTriangular chol_update(const UpperTriangular& r, const Vector& v);

/// R' with R'^T R' = R^T R - v v^T, via hyperbolic rotations with a
/// per-step feasibility test. Throws DowndateFailure when positive
/// definiteness would be lost; the caller must refactorize.
UpperTriangular chol_downdate(const UpperTriangular& r, const Vector& v);

/// Solves R x = b (or R^T x = b when `transpose` is set) by substitution.
Vector solve_triangular(const UpperTriangular& r, const Vector& b,
                        bool transpose = false);

namespace detail {

// In-place kernels shared with the sliding-window update in curvature.cpp.
// `v` is consumed as workspace.
void rank1_update_inplace(Eigen::Ref<Matrix> r, Eigen::Ref<Vector> v);
// Returns false when the hypotenuse test fails at some step; `r` is then
// left partially modified and must be discarded.
bool rank1_downdate_inplace(Eigen::Ref<Matrix> r, Eigen::Ref<Vector> v);

void solve_upper_inplace(const Eigen::Ref<const Matrix>& r, Eigen::Ref<Vector> x);
void solve_upper_transposed_inplace(const Eigen::Ref<const Matrix>& r,
                                    Eigen::Ref<Vector> x);

}  // namespace detail

}  // namespace sqnls
