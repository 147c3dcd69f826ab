#include "bspsa/elo.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace bspsa {

double wp_from_elo(EloDiff x) {
  if (!std::isfinite(x.value)) {
    throw std::invalid_argument("Elo difference must be finite");
  }
  return 1.0 / (1.0 + std::pow(10.0, -x.value / 400.0));
}

double tau_from_draw_rate(double draw_rate) {
  if (!(draw_rate >= 0.0 && draw_rate <= 1.0)) {
    throw std::invalid_argument("draw rate must lie in [0, 1], got " + std::to_string(draw_rate));
  }
  // Equal engines: each game is +1/-1 with probability (1-d)/2, so Var(game) = 1-d
  // and the two independent games add.
  return std::sqrt(2.0 * (1.0 - draw_rate));
}

void HyperInputs::validate() const {
  if (!(elo100 > 0.0) || !std::isfinite(elo100)) {
    throw std::invalid_argument("elo100 must be positive");
  }
  if (n_iterations < 1) {
    throw std::invalid_argument("n_iterations must be at least 1");
  }
  if (!(c_end > 0.0) || !std::isfinite(c_end)) {
    throw std::invalid_argument("c_end must be positive");
  }
  if (!(delta_theta > 0.0) || !std::isfinite(delta_theta)) {
    throw std::invalid_argument("delta_theta must be positive");
  }
}

double spsa_r(const HyperInputs& h) {
  if (!(h.elo100 > 0.0) || h.n_iterations < 1 || !(h.c_end > 0.0)) {
    throw std::invalid_argument("spsa_r needs elo100 > 0, N >= 1 and c_end > 0");
  }
  const double n = static_cast<double>(h.n_iterations);
  return 19362.0 * std::log1p(h.elo100 / 11405.0) / (std::pow(n, 0.6) * std::pow(h.c_end, 1.6));
}

BspsaHyperparams bspsa_hyperparams(const HyperInputs& h) {
  return {h.delta_theta, h.elo100};
}

}  // namespace bspsa
