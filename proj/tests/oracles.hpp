#pragma once

// Test-only reference computations. Nothing here calls into the library's
// solver or update rules.

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

namespace oracle {

/// Gaussian elimination with full pivoting on a long double copy.
inline Eigen::VectorXd full_pivot_solve(const Eigen::MatrixXd& m, const Eigen::VectorXd& rhs) {
  const int n = static_cast<int>(m.rows());
  std::vector<std::vector<long double>> a(n, std::vector<long double>(n + 1));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a[i][j] = m(i, j);
    a[i][n] = rhs(i);
  }
  std::vector<int> col(n);
  for (int j = 0; j < n; ++j) col[j] = j;
  for (int p = 0; p < n; ++p) {
    int br = p, bc = p;
    long double best = 0;
    for (int r = p; r < n; ++r) {
      for (int c = p; c < n; ++c) {
        if (std::fabs(a[r][c]) > best) {
          best = std::fabs(a[r][c]);
          br = r;
          bc = c;
        }
      }
    }
    if (best == 0) throw std::runtime_error("singular");
    std::swap(a[p], a[br]);
    if (bc != p) {
      for (int r = 0; r < n; ++r) std::swap(a[r][p], a[r][bc]);
      std::swap(col[p], col[bc]);
    }
    for (int r = p + 1; r < n; ++r) {
      const long double f = a[r][p] / a[p][p];
      for (int c = p; c <= n; ++c) a[r][c] -= f * a[p][c];
    }
  }
  std::vector<long double> y(n);
  for (int r = n - 1; r >= 0; --r) {
    long double s = a[r][n];
    for (int c = r + 1; c < n; ++c) s -= a[r][c] * y[c];
    y[r] = s / a[r][r];
  }
  Eigen::VectorXd x(n);
  for (int j = 0; j < n; ++j) x(col[j]) = static_cast<double>(y[j]);
  return x;
}

/// Random symmetric positive definite matrix with a condition number of at most `max_cond`.
template <typename Gen>
Eigen::MatrixXd random_spd(int n, double max_cond, Gen& gen) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = normal(gen);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  const Eigen::MatrixXd q = qr.householderQ();
  Eigen::VectorXd eig(n);
  const double log_cond = std::log(max_cond) * unit(gen);
  for (int i = 0; i < n; ++i) eig(i) = std::exp(-log_cond * unit(gen));
  eig(0) = 1.0;
  eig(n - 1) = std::exp(-log_cond);
  Eigen::MatrixXd s = q * eig.asDiagonal() * q.transpose();
  return (s + s.transpose()) / 2.0;
}

/// Leading principal minors by Cholesky-free recursion: all positive iff PD.
inline bool leading_minors_positive(const Eigen::MatrixXd& m) {
  for (int k = 1; k <= m.rows(); ++k) {
    if (!(m.topLeftCorner(k, k).determinant() > 0.0)) return false;
  }
  return true;
}

/// Posterior mean and spread of the single-parameter update, evaluated from
/// the Gaussian product form (A = 2c/sigma^2, B = -A theta) rather than the
/// simplified closed form.
struct Scalar1 {
  long double theta;
  long double spread;
};

inline Scalar1 conjugate_update_1d(long double theta, long double s, long double c,
                                   long double sigma, long double tau, long double w) {
  const long double A = 2 * c / (sigma * sigma);
  const long double B = -A * theta;
  const long double s2 = s * s;
  const long double t2 = tau * tau;
  const long double mean = (A * w * s2 - A * B * s2 + theta * t2) / (A * A * s2 + t2);
  const long double var = s2 * t2 / (A * A * s2 + t2);
  return {mean, std::sqrt(var)};
}

}  // namespace oracle
