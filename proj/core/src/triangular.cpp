#include "sqnls/triangular.hpp"

#include <cmath>
#include <utility>

namespace sqnls {

namespace {

constexpr double kSymmetryTol = 1e-10;
constexpr double kPivotScale = 1e-14;
constexpr double kColumnCollapse = 1e-14;
// Relative margin for the hypotenuse test in the downdate; values this
// close to the boundary carry no usable digits.
constexpr double kDowndateMargin = 1e-13;

}  // namespace

UpperTriangular::UpperTriangular(Matrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols()) {
    throw std::invalid_argument("UpperTriangular: matrix must be square");
  }
  const int m = order();
  for (int j = 0; j < m; ++j) {
    if (!(entries_(j, j) > 0.0)) {
      throw SingularFactor("UpperTriangular: non-positive diagonal entry");
    }
    for (int i = j + 1; i < m; ++i) {
      if (entries_(i, j) != 0.0) {
        throw std::invalid_argument("UpperTriangular: nonzero below the diagonal");
      }
    }
  }
}

UpperTriangular UpperTriangular::top_left(int order) const {
  return UpperTriangular(entries_.topLeftCorner(order, order), unchecked_t{});
}

UpperTriangular cholesky(const Matrix& a) {
  const int m = static_cast<int>(a.rows());
  if (m < 1 || a.cols() != m) {
    throw std::invalid_argument("cholesky: matrix must be square with m >= 1");
  }
  const double scale = a.cwiseAbs().maxCoeff();
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > kSymmetryTol * std::max(scale, 1.0)) {
    throw std::invalid_argument("cholesky: matrix is not symmetric");
  }

  const double pivot_floor = kPivotScale * a.trace() / m;
  Matrix r = Matrix::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    double pivot = a(i, i) - r.col(i).head(i).squaredNorm();
    if (pivot <= pivot_floor) {
      throw NotPositiveDefinite("cholesky: pivot below threshold at index " +
                                std::to_string(i));
    }
    const double rii = std::sqrt(pivot);
    r(i, i) = rii;
    for (int j = i + 1; j < m; ++j) {
      r(i, j) = (a(i, j) - r.col(i).head(i).dot(r.col(j).head(i))) / rii;
    }
  }
  return UpperTriangular(std::move(r), UpperTriangular::unchecked_t{});
}

UpperTriangular qr_factor_tall(const Matrix& m_in) {
  const int rows = static_cast<int>(m_in.rows());
  const int cols = static_cast<int>(m_in.cols());
  if (rows < cols || cols < 1) {
    throw std::invalid_argument("qr_factor_tall: matrix must be tall");
  }
  const double collapse = kColumnCollapse * m_in.norm();

  // Householder elimination; only the R block survives.
  Matrix work = m_in;
  for (int j = 0; j < cols; ++j) {
    auto column = work.col(j).tail(rows - j);
    const double norm = column.norm();
    if (norm <= collapse) {
      throw RankDeficient("qr_factor_tall: column " + std::to_string(j) +
                          " collapsed");
    }
    double alpha = column(0) >= 0.0 ? -norm : norm;
    Vector v = column;
    v(0) -= alpha;
    const double vsq = v.squaredNorm();
    if (vsq > 0.0) {
      auto trailing = work.bottomRightCorner(rows - j, cols - j);
      trailing -= (2.0 / vsq) * v * (v.transpose() * trailing);
    }
    work.col(j).tail(rows - j).setZero();
    work(j, j) = alpha;
  }

  Matrix r = work.topRows(cols).triangularView<Eigen::Upper>();
  for (int i = 0; i < cols; ++i) {
    if (r(i, i) < 0.0) {
      r.row(i).tail(cols - i) = -r.row(i).tail(cols - i);
    }
    if (!(r(i, i) > 0.0)) {
      throw RankDeficient("qr_factor_tall: zero diagonal at index " +
                          std::to_string(i));
    }
  }
  return UpperTriangular(std::move(r), UpperTriangular::unchecked_t{});
}

namespace detail {

void rank1_update_inplace(Eigen::Ref<Matrix> r, Eigen::Ref<Vector> v) {
  const int m = static_cast<int>(r.rows());
  for (int i = 0; i < m; ++i) {
    const double rii = r(i, i);
    const double vi = v(i);
    const double rot = std::hypot(rii, vi);
    const double c = rii / rot;
    const double s = vi / rot;
    r(i, i) = rot;
    for (int j = i + 1; j < m; ++j) {
      const double rij = r(i, j);
      r(i, j) = c * rij + s * v(j);
      v(j) = c * v(j) - s * rij;
    }
  }
}

bool rank1_downdate_inplace(Eigen::Ref<Matrix> r, Eigen::Ref<Vector> v) {
  const int m = static_cast<int>(r.rows());
  for (int i = 0; i < m; ++i) {
    const double rii = r(i, i);
    const double vi = v(i);
    const double arg = (rii - vi) * (rii + vi);
    if (arg <= kDowndateMargin * rii * rii) {
      return false;  // hypotenuse test failed
    }
    const double rot = std::sqrt(arg);
    const double c = rot / rii;
    const double s = vi / rii;
    r(i, i) = rot;
    for (int j = i + 1; j < m; ++j) {
      r(i, j) = (r(i, j) - s * v(j)) / c;
      v(j) = c * v(j) - s * r(i, j);
    }
  }
  return true;
}

void solve_upper_inplace(const Eigen::Ref<const Matrix>& r, Eigen::Ref<Vector> x) {
  const int m = static_cast<int>(r.rows());
  for (int i = m - 1; i >= 0; --i) {
    double sum = x(i);
    for (int j = i + 1; j < m; ++j) {
      sum -= r(i, j) * x(j);
    }
    x(i) = sum / r(i, i);
  }
}

void solve_upper_transposed_inplace(const Eigen::Ref<const Matrix>& r,
                                    Eigen::Ref<Vector> x) {
  const int m = static_cast<int>(r.rows());
  for (int i = 0; i < m; ++i) {
    double sum = x(i);
    for (int j = 0; j < i; ++j) {
      sum -= r(j, i) * x(j);
    }
    x(i) = sum / r(i, i);
  }
}

}  // namespace detail

UpperTriangular chol_update(const UpperTriangular& r, const Vector& v) {
  if (v.size() != r.order()) {
    throw DimensionMismatch("chol_update: vector length does not match order");
  }
  Matrix out = r.matrix();
  Vector work = v;
  detail::rank1_update_inplace(out, work);
  return UpperTriangular(std::move(out), UpperTriangular::unchecked_t{});
}

UpperTriangular chol_downdate(const UpperTriangular& r, const Vector& v) {
  if (v.size() != r.order()) {
    throw DimensionMismatch("chol_downdate: vector length does not match order");
  }
  Matrix out = r.matrix();
  Vector work = v;
  if (!detail::rank1_downdate_inplace(out, work)) {
    throw DowndateFailure("chol_downdate: positive definiteness lost");
  }
  return UpperTriangular(std::move(out), UpperTriangular::unchecked_t{});
}

Vector solve_triangular(const UpperTriangular& r, const Vector& b, bool transpose) {
  const int m = r.order();
  if (b.size() != m) {
    throw DimensionMismatch("solve_triangular: vector length does not match order");
  }
  for (int i = 0; i < m; ++i) {
    if (!(r.matrix()(i, i) > 0.0)) {
      throw SingularFactor("solve_triangular: non-positive diagonal");
    }
  }
  Vector x = b;
  if (transpose) {
    detail::solve_upper_transposed_inplace(r.matrix(), x);
  } else {
    detail::solve_upper_inplace(r.matrix(), x);
  }
  return x;
}

}  // namespace sqnls
