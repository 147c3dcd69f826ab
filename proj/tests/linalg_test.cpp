#include "bspsa/linalg.hpp"

#include "oracles.hpp"

#include <Eigen/LU>
#include <doctest.h>

#include <random>

using namespace bspsa;

TEST_CASE("diag_precision") {
  CHECK(diag_precision(Vectord::Constant(1, 1.0)) == PrecisionMatrixd::Identity(1, 1));

  Vectord s(2);
  s << 2.0, 10.0;
  PrecisionMatrixd expected(2, 2);
  expected << 0.25, 0.0, 0.0, 0.01;
  CHECK(diag_precision(s).isApprox(expected, 1e-15));

  CHECK(diag_precision(Vectord::Constant(5, 4.0)) == PrecisionMatrixd::Identity(5, 5) / 16.0);

  s << 1.0, 0.0;
  CHECK_THROWS_AS(diag_precision(s), std::invalid_argument);
  s << -1.0, 1.0;
  CHECK_THROWS_AS(diag_precision(s), std::invalid_argument);
}

TEST_CASE("diag_precision works for other scalars") {
  Eigen::Matrix<float, 3, 1> s(1.0f, 2.0f, 4.0f);
  const auto m = diag_precision(s);
  CHECK(m(2, 2) == doctest::Approx(1.0 / 16.0));
}

TEST_CASE("rank1_precision_update") {
  const PrecisionMatrixd id = PrecisionMatrixd::Identity(2, 2);
  CHECK(rank1_precision_update(id, Vectord::Zero(2), 1.0) == id);

  Vectord g(2);
  g << 2.0, -1.0;
  PrecisionMatrixd expected(2, 2);
  expected << 5.0, -2.0, -2.0, 2.0;
  CHECK(rank1_precision_update(id, g, 1.0) == expected);
  CHECK_THROWS_AS(rank1_precision_update(id, g, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(rank1_precision_update(id, Vectord::Zero(3), 1.0), std::invalid_argument);
}

TEST_CASE("rank1 update adds g g^T / tau^2, stays symmetric and positive definite") {
  std::mt19937_64 gen(21);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> tau(0.1, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 12;
    const Eigen::MatrixXd m = oracle::random_spd(n, 1e4, gen);
    Vectord g(n);
    for (int i = 0; i < n; ++i) g(i) = normal(gen);
    const double t = tau(gen);
    const PrecisionMatrixd out = rank1_precision_update(m, g, t);
    const Eigen::MatrixXd diff = out - m;
    const Eigen::MatrixXd outer = g * g.transpose() / (t * t);
    CHECK((diff - outer).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, outer.cwiseAbs().maxCoeff()));
    // random_spd is exactly symmetric, so the update must keep it bit-for-bit.
    REQUIRE(m == m.transpose());
    CHECK(out == out.transpose());
    CHECK(oracle::leading_minors_positive(out));
  }
}

TEST_CASE("Gauss-Jordan reference systems") {
  Vectord rhs(3);
  rhs << 1.5, -2.0, 7.0;
  CHECK(solve_gauss_jordan(PrecisionMatrixd::Identity(3, 3), rhs) == rhs);

  PrecisionMatrixd m(2, 2);
  m << 2.0, 1.0, 1.0, 3.0;
  Vectord b(2);
  b << 5.0, 10.0;
  const Vectord x = solve_gauss_jordan(m, b);
  CHECK(x(0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(x(1) == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("Gauss-Jordan leaves its input untouched") {
  PrecisionMatrixd m(2, 2);
  m << 2.0, 1.0, 1.0, 3.0;
  const PrecisionMatrixd copy = m;
  solve_gauss_jordan(m, Vectord::Ones(2));
  CHECK(m == copy);
}

TEST_CASE("Gauss-Jordan reports a vanishing pivot") {
  PrecisionMatrixd m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;  // invertible, but needs pivoting
  CHECK_THROWS_AS(solve_gauss_jordan(m, Vectord::Ones(2)), SingularMatrixError);
  m << 1.0, 1.0, 1.0, 1.0;
  try {
    solve_gauss_jordan(m, Vectord::Ones(2));
    FAIL("expected SingularMatrixError");
  } catch (const SingularMatrixError& e) {
    CHECK(e.row() == 1);
  }
  CHECK_THROWS_AS(solve_gauss_jordan(PrecisionMatrixd::Identity(2, 2), Vectord::Ones(3)),
                  std::invalid_argument);
}

TEST_CASE("Gauss-Jordan matches full-pivoting elimination on random SPD systems") {
  std::mt19937_64 gen(77);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + trial % 20;
    const Eigen::MatrixXd m = oracle::random_spd(n, 1e6, gen);
    Vectord rhs(n);
    for (int i = 0; i < n; ++i) rhs(i) = normal(gen);
    const Vectord x = solve_gauss_jordan(m, rhs);
    const double scale = std::max(1.0, rhs.cwiseAbs().maxCoeff());
    CHECK((m * x - rhs).cwiseAbs().maxCoeff() <= 1e-9 * scale);
    const Eigen::VectorXd ref = oracle::full_pivot_solve(m, rhs);
    CHECK((m * ref - rhs).cwiseAbs().maxCoeff() <= 1e-9 * scale);
    // Cross-check the hand-written oracle itself against Eigen.
    const Eigen::VectorXd lu = Eigen::FullPivLU<Eigen::MatrixXd>(m).solve(rhs);
    CHECK((lu - ref).cwiseAbs().maxCoeff() <= 1e-6 * std::max(1.0, ref.cwiseAbs().maxCoeff()));
  }
}
