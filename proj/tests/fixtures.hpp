#pragma once

// Shared experiment setups for the tests.

#include "bspsa/elo.hpp"
#include "bspsa/harness.hpp"

#include <cmath>

namespace fixture {

/// A uniform-curvature simulator cell with hyperparameters derived the way the
/// CLI derives them: Elo(100) = sqrt(100 / a), delta_theta = sqrt((E / n) / a).
inline bspsa::ExperimentConfig cell(bspsa::Method method, int n, long iterations, int repeats,
                                    std::uint64_t seed = 1, double curvature = 0.01,
                                    double c_ratio = -1.0) {
  using namespace bspsa;
  ExperimentConfig cfg;
  cfg.method = method;
  cfg.n_iterations = iterations;
  cfg.repeats = repeats;
  cfg.seed = seed;
  cfg.initial_total_elo = 2.0;
  cfg.landscape = QuadraticLandscape::uniform(n, curvature, 0.82);
  cfg.tau = tau_from_draw_rate(0.82);
  cfg.schedule = GainSchedule::with_defaults(1.0, 1.0, iterations);
  if (c_ratio < 0.0) c_ratio = method == Method::Spsa ? 7.0 : 2.5;
  const double elo100 = std::sqrt(100.0 / curvature);
  const double delta_theta = std::sqrt((cfg.initial_total_elo / n) / curvature);
  for (int i = 0; i < n; ++i) {
    ParamSpec p;
    p.name = "p" + std::to_string(i);
    p.c_end = c_ratio * delta_theta;
    p.r_end = spsa_r({elo100, iterations, p.c_end, delta_theta});
    const auto h = bspsa_hyperparams({elo100, iterations, p.c_end, delta_theta});
    p.s1 = h.s1;
    p.sigma = h.sigma;
    cfg.params.push_back(p);
  }
  return cfg;
}

}  // namespace fixture
