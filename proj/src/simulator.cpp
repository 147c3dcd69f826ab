#include "bspsa/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bspsa {

QuadraticLandscape QuadraticLandscape::uniform(Eigen::Index n, double curvature,
                                               double draw_rate) {
  return {Vectord::Constant(n, curvature), draw_rate};
}

void QuadraticLandscape::validate() const {
  if (curvatures.size() < 1) throw std::invalid_argument("landscape needs at least one parameter");
  for (Eigen::Index i = 0; i < curvatures.size(); ++i) {
    if (!(curvatures(i) > 0.0) || !std::isfinite(curvatures(i))) {
      throw std::invalid_argument("curvature " + std::to_string(i) + " must be positive");
    }
  }
  if (!(draw_rate >= 0.0 && draw_rate < 1.0)) {
    throw std::invalid_argument("draw rate must lie in [0, 1)");
  }
}

GameProbabilities game_probabilities(EloDiff x, double draw_rate) {
  if (!(draw_rate >= 0.0 && draw_rate < 1.0)) {
    throw std::invalid_argument("draw rate must lie in [0, 1)");
  }
  const double wp = wp_from_elo(x);
  GameProbabilities p{wp - draw_rate / 2.0, draw_rate, 1.0 - wp - draw_rate / 2.0, false};
  if (p.win < 0.0 || p.loss < 0.0) {
    p.clamped = true;
    p.win = std::clamp(p.win, 0.0, 1.0);
    p.loss = std::clamp(p.loss, 0.0, 1.0);
    const double total = p.win + p.draw + p.loss;
    p.win /= total;
    p.draw /= total;
    p.loss /= total;
  }
  return p;
}

namespace {
int play_game(const GameProbabilities& p, Rng& rng) {
  const double u = rng.uniform();
  if (u < p.win) return 1;
  if (u < p.win + p.draw) return 0;
  return -1;
}
}  // namespace

MatchOutcome play_match(const QuadraticLandscape& l, const Vectord& theta_plus,
                        const Vectord& theta_minus, Rng& rng) {
  const EloDiff x{elo_loss(l, theta_minus) - elo_loss(l, theta_plus)};
  const GameProbabilities p = game_probabilities(x, l.draw_rate);
  const int first = play_game(p, rng);
  const int second = play_game(p, rng);
  return MatchOutcome(first + second);
}

double expected_w(const Vectord& theta, const Vectord& theta_k, const Vectord& c,
                  const Vectord& delta, const Vectord& sigmas) {
  const Eigen::Index n = theta.size();
  if (theta_k.size() != n || c.size() != n || delta.size() != n || sigmas.size() != n) {
    throw std::invalid_argument("expected_w dimension mismatch");
  }
  const double exponent =
      (2.0 * delta.cwiseProduct(c).cwiseProduct(theta - theta_k).cwiseQuotient(sigmas.cwiseAbs2()))
          .sum();
  // 2 (WR - 1) / (WR + 1) with WR = e^exponent.
  return 2.0 * std::tanh(exponent / 2.0);
}

}  // namespace bspsa
