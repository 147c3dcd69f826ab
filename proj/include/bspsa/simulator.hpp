#pragma once

#include "bspsa/elo.hpp"
#include "bspsa/linalg.hpp"
#include "bspsa/optimizers.hpp"
#include "bspsa/rng.hpp"

namespace bspsa {

/// Ground truth of the simulated engine: every parameter's optimum is 0 and the
/// Elo deficit is sum_i a_i theta_i^2.
struct QuadraticLandscape {
  Vectord curvatures;
  double draw_rate = 0.82;

  static QuadraticLandscape uniform(Eigen::Index n, double curvature, double draw_rate);

  void validate() const;
  Eigen::Index size() const noexcept { return curvatures.size(); }
};

/// Elo deficit of `theta` relative to the optimum.
template <typename Derived>
double elo_loss(const QuadraticLandscape& l, const Eigen::MatrixBase<Derived>& theta) {
  if (theta.size() != l.size()) throw std::invalid_argument("elo_loss dimension mismatch");
  return l.curvatures.dot(theta.cwiseAbs2());
}

struct GameProbabilities {
  double win = 0.0;
  double draw = 0.0;
  double loss = 0.0;
  bool clamped = false;  // the constant-draw model had to be renormalized
};

/// Single-game outcome probabilities at Elo advantage `x` with a constant draw rate.
GameProbabilities game_probabilities(EloDiff x, double draw_rate);

/// Plays two independent games between theta_plus (E1) and theta_minus (E2).
MatchOutcome play_match(const QuadraticLandscape& l, const Vectord& theta_plus,
                        const Vectord& theta_minus, Rng& rng);

/// Expected two-game result implied by the tuner's logistic strength model
/// when the true optimum is `theta` and the match is centered at `theta_k`.
/// Diagnostic only.
double expected_w(const Vectord& theta, const Vectord& theta_k, const Vectord& c,
                  const Vectord& delta, const Vectord& sigmas);

}  // namespace bspsa
