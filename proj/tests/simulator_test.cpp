#include "bspsa/simulator.hpp"

#include <doctest.h>

#include <cmath>

using namespace bspsa;

TEST_CASE("elo_loss") {
  const auto l = QuadraticLandscape::uniform(2, 0.01, 0.82);
  CHECK(elo_loss(l, Vectord::Zero(2)) == 0.0);
  CHECK(elo_loss(l, Vectord{{10.0, 0.0}}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(elo_loss(l, Vectord{{-10.0, 10.0}}) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK_THROWS_AS(elo_loss(l, Vectord::Zero(3)), std::invalid_argument);
}

TEST_CASE("landscape validation") {
  CHECK_NOTHROW(QuadraticLandscape::uniform(3, 0.01, 0.82).validate());
  CHECK_THROWS(QuadraticLandscape::uniform(3, 0.0, 0.82).validate());
  CHECK_THROWS(QuadraticLandscape::uniform(0, 0.01, 0.82).validate());
  CHECK_THROWS(QuadraticLandscape::uniform(1, 0.01, 1.0).validate());
}

TEST_CASE("game_probabilities") {
  auto p = game_probabilities({0.0}, 0.82);
  CHECK(p.win == doctest::Approx(0.09).epsilon(1e-14));
  CHECK(p.draw == 0.82);
  CHECK(p.loss == doctest::Approx(0.09).epsilon(1e-14));
  CHECK_FALSE(p.clamped);

  p = game_probabilities({400.0}, 0.0);
  CHECK(p.win == doctest::Approx(10.0 / 11.0).epsilon(1e-14));

  // A large deficit with many draws leaves no room for a win.
  p = game_probabilities({-400.0}, 0.82);
  CHECK(p.clamped);
  CHECK(p.win == 0.0);
  CHECK(p.win + p.draw + p.loss == doctest::Approx(1.0).epsilon(1e-15));
  // Draw and loss keep their raw ratio.
  CHECK(p.draw / p.loss == doctest::Approx(0.82 / (1.0 - 1.0 / 11.0 - 0.41)).epsilon(1e-12));
}

TEST_CASE("equal engines: two-game result has mean 0 and sd 0.6") {
  const auto l = QuadraticLandscape::uniform(1, 0.01, 0.82);
  Rng rng(5);
  const Vectord zero = Vectord::Zero(1);
  const int n = 200000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const int w = play_match(l, zero, zero, rng).value();
    sum += w;
    sum2 += w * w;
  }
  const double mean = sum / n;
  const double sd = std::sqrt(sum2 / n - mean * mean);
  CHECK(std::abs(mean) < 4.0 * 0.6 / std::sqrt(n));
  CHECK(sd == doctest::Approx(0.6).epsilon(0.01));
}

TEST_CASE("a 400 Elo edge without draws wins both games 100/121 of the time") {
  QuadraticLandscape l = QuadraticLandscape::uniform(1, 1.0, 0.0);
  Rng rng(6);
  // minus sits at loss 400, plus at 0: x = 400.
  const Vectord plus = Vectord::Zero(1), minus = Vectord::Constant(1, 20.0);
  const int n = 100000;
  int twos = 0;
  for (int i = 0; i < n; ++i) twos += play_match(l, plus, minus, rng).value() == 2;
  const double p = 100.0 / 121.0;
  CHECK(std::abs(static_cast<double>(twos) / n - p) < 4.0 * std::sqrt(p * (1 - p) / n));
}

TEST_CASE("mean match result tracks 2 (2 WP(x) - 1)") {
  Rng rng(7);
  const auto l = QuadraticLandscape::uniform(1, 1.0, 0.82);
  for (double x : {0.0, 10.0, 50.0}) {
    const Vectord plus = Vectord::Zero(1), minus = Vectord::Constant(1, std::sqrt(x));
    const int n = 100000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const int w = play_match(l, plus, minus, rng).value();
      sum += w;
      sum2 += w * w;
    }
    const double mean = sum / n;
    const double se = std::sqrt((sum2 / n - mean * mean) / n);
    const double expected = 2.0 * (2.0 * wp_from_elo({x}) - 1.0);
    CHECK(std::abs(mean - expected) <= 4.0 * se);
  }
}

TEST_CASE("expected_w") {
  const Vectord one = Vectord::Ones(1);
  CHECK(expected_w(Vectord::Zero(1), Vectord::Zero(1), one, one, one) == 0.0);
  // Exponent 0.1; mpmath: 0.099916749916
  CHECK(expected_w(Vectord::Constant(1, 5.0), Vectord::Zero(1), one, one, Vectord::Constant(1, 10.0)) ==
        doctest::Approx(0.09991674991575994).epsilon(1e-12));
  // Linear for small exponents, saturating at +-2.
  const double tiny = expected_w(Vectord::Constant(1, 1e-4), Vectord::Zero(1), one, one, one);
  CHECK(tiny == doctest::Approx(2e-4).epsilon(1e-7));
  CHECK(expected_w(Vectord::Constant(1, 1e3), Vectord::Zero(1), one, one, one) == doctest::Approx(2.0));
  CHECK(expected_w(Vectord::Constant(1, 1e3), Vectord::Zero(1), one, -one, one) == doctest::Approx(-2.0));
  CHECK_THROWS(expected_w(Vectord::Zero(2), Vectord::Zero(1), one, one, one));
}
