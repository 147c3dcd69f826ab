#pragma once

#include <Eigen/Core>

#include <cmath>
#include <stdexcept>
#include <string>

namespace bspsa {

/// Dense row-major precision (inverse covariance) matrix.
template <typename Scalar>
using PrecisionMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using PrecisionMatrixd = PrecisionMatrix<double>;
using Vectord = Vector<double>;

/// Raised when Gauss-Jordan elimination meets a vanishing pivot.
class SingularMatrixError : public std::runtime_error {
 public:
  SingularMatrixError(Eigen::Index row, double pivot)
      : std::runtime_error("zero pivot " + std::to_string(pivot) + " at row " +
                           std::to_string(row) +
                           "; precision matrix is far from diagonal, rescale the parameters"),
        row_(row) {}

  Eigen::Index row() const noexcept { return row_; }

 private:
  Eigen::Index row_;
};

/// diag(1 / s_i^2) for prior spreads s_i.
template <typename Derived>
PrecisionMatrix<typename Derived::Scalar> diag_precision(const Eigen::MatrixBase<Derived>& spreads) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = spreads.size();
  if (n < 1) throw std::invalid_argument("diag_precision needs at least one spread");
  PrecisionMatrix<Scalar> m = PrecisionMatrix<Scalar>::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Scalar s = spreads(i);
    if (!(s > Scalar(0))) {
      throw std::invalid_argument("spread " + std::to_string(i) + " must be positive");
    }
    m(i, i) = Scalar(1) / (s * s);
  }
  return m;
}

/// In place: m_ij += g_i g_j / tau^2. The product g_i g_j is commutative in
/// floating point, so a symmetric input stays exactly symmetric.
template <typename MatDerived, typename VecDerived>
void rank1_precision_update_inplace(Eigen::MatrixBase<MatDerived>& m,
                                    const Eigen::MatrixBase<VecDerived>& g,
                                    typename MatDerived::Scalar tau) {
  using Scalar = typename MatDerived::Scalar;
  const Eigen::Index n = m.rows();
  if (m.cols() != n || g.size() != n) {
    throw std::invalid_argument("rank-1 update dimension mismatch");
  }
  if (!(tau > Scalar(0))) throw std::invalid_argument("tau must be positive");
  const Scalar tau2 = tau * tau;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      m(i, j) += g(i) * g(j) / tau2;
    }
  }
}

template <typename MatDerived, typename VecDerived>
PrecisionMatrix<typename MatDerived::Scalar> rank1_precision_update(
    const Eigen::MatrixBase<MatDerived>& m, const Eigen::MatrixBase<VecDerived>& g,
    typename MatDerived::Scalar tau) {
  PrecisionMatrix<typename MatDerived::Scalar> out = m;
  rank1_precision_update_inplace(out, g, tau);
  return out;
}

/// Solves m * x = rhs by Gauss-Jordan elimination without pivoting.
///
/// The precision matrices built by the tuner are close to diagonal, which is
/// what makes the unpivoted elimination safe. A pivot with magnitude below
/// 1e-300 raises SingularMatrixError instead of dividing by it. `m` is copied.
template <typename MatDerived, typename VecDerived>
Vector<typename MatDerived::Scalar> solve_gauss_jordan(const Eigen::MatrixBase<MatDerived>& m,
                                                       const Eigen::MatrixBase<VecDerived>& rhs) {
  using Scalar = typename MatDerived::Scalar;
  const Eigen::Index n = m.rows();
  if (m.cols() != n || rhs.size() != n) {
    throw std::invalid_argument("Gauss-Jordan dimension mismatch");
  }
  PrecisionMatrix<Scalar> a = m;
  Vector<Scalar> x = rhs;
  for (Eigen::Index p = 0; p < n; ++p) {
    const Scalar pivot = a(p, p);
    if (!(std::abs(pivot) >= Scalar(1e-300))) {
      throw SingularMatrixError(p, static_cast<double>(pivot));
    }
    // Columns left of p are already eliminated in every row.
    a.row(p).tail(n - p) /= pivot;
    x(p) /= pivot;
    for (Eigen::Index r = 0; r < n; ++r) {
      if (r == p) continue;
      const Scalar f = a(r, p);
      if (f == Scalar(0)) continue;
      a.row(r).tail(n - p) -= f * a.row(p).tail(n - p);
      x(r) -= f * x(p);
    }
  }
  return x;
}

}  // namespace bspsa
