#include "bspsa/elo.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

using namespace bspsa;

TEST_CASE("wp_from_elo reference values") {
  CHECK(wp_from_elo({0.0}) == 0.5);
  // mpmath, 40 digits
  CHECK(wp_from_elo({100.0}) == doctest::Approx(0.6400649998028851).epsilon(1e-12));
  CHECK(wp_from_elo({400.0}) == doctest::Approx(10.0 / 11.0).epsilon(1e-14));
}

TEST_CASE("wp_from_elo rejects non-finite input") {
  CHECK_THROWS_AS(wp_from_elo({std::numeric_limits<double>::quiet_NaN()}), std::invalid_argument);
  CHECK_THROWS_AS(wp_from_elo({std::numeric_limits<double>::infinity()}), std::invalid_argument);
}

TEST_CASE("wp_from_elo is complementary and strictly increasing") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> elo(-800.0, 800.0);
  for (int i = 0; i < 2000; ++i) {
    const double x = elo(gen);
    CHECK(std::abs(wp_from_elo({x}) + wp_from_elo({-x}) - 1.0) <= 1e-12);
    double a = elo(gen), b = elo(gen);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    CHECK(wp_from_elo({a}) < wp_from_elo({b}));
  }
}

TEST_CASE("tau_from_draw_rate") {
  CHECK(tau_from_draw_rate(0.82) == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(tau_from_draw_rate(1.0) == 0.0);
  CHECK(tau_from_draw_rate(0.5) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(tau_from_draw_rate(-0.01), std::invalid_argument);
  CHECK_THROWS_AS(tau_from_draw_rate(1.01), std::invalid_argument);
}

TEST_CASE("spsa_r reference values") {
  const HyperInputs h{100.0, 200000, 20.0, 1.0};
  // mpmath: 9.240423798e-4
  CHECK(spsa_r(h) == doctest::Approx(9.240423798187916e-4).epsilon(1e-12));
  CHECK(spsa_r(h) == doctest::Approx(9.24e-4).epsilon(0.01));

  HyperInputs half = h;
  half.n_iterations = 100000;
  CHECK(spsa_r(half) / spsa_r(h) == doctest::Approx(std::pow(2.0, 0.6)).epsilon(1e-12));

  HyperInputs tiny = h;
  tiny.elo100 = 1e-300;
  CHECK(spsa_r(tiny) == doctest::Approx(0.0));
  CHECK(spsa_r(tiny) > 0.0);
}

TEST_CASE("spsa_r monotonicity on random pairs") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(1.0, 500.0);
  std::uniform_int_distribution<long> n(1, 1000000);
  for (int i = 0; i < 500; ++i) {
    const HyperInputs h{u(gen), n(gen), u(gen), 1.0};
    HyperInputs more_n = h;
    more_n.n_iterations += n(gen);
    HyperInputs more_c = h;
    more_c.c_end += u(gen);
    HyperInputs more_elo = h;
    more_elo.elo100 += u(gen);
    CHECK(spsa_r(more_n) < spsa_r(h));
    CHECK(spsa_r(more_c) < spsa_r(h));
    CHECK(spsa_r(more_elo) > spsa_r(h));
  }
}

TEST_CASE("bspsa_hyperparams is a direct assignment") {
  auto p = bspsa_hyperparams({100.0, 1, 1.0, 14.14});
  CHECK(p.s1 == 14.14);
  CHECK(p.sigma == 100.0);
  p = bspsa_hyperparams({1.0, 1, 1.0, 1.0});
  CHECK(p.s1 == 1.0);
  CHECK(p.sigma == 1.0);
  // A 2-Elo offset on curvature 0.01 sits at sqrt(2 / 0.01).
  p = bspsa_hyperparams({100.0, 1, 1.0, std::sqrt(200.0)});
  CHECK(p.s1 == doctest::Approx(14.142135623730951));
  CHECK(p.sigma == 100.0);
}

TEST_CASE("HyperInputs validation") {
  CHECK_NOTHROW(HyperInputs{1.0, 1, 1.0, 1.0}.validate());
  CHECK_THROWS_AS(HyperInputs({0.0, 1, 1.0, 1.0}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(HyperInputs({1.0, 0, 1.0, 1.0}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(HyperInputs({1.0, 1, -1.0, 1.0}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(HyperInputs({1.0, 1, 1.0, 0.0}).validate(), std::invalid_argument);
}
