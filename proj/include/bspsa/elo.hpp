#pragma once

namespace bspsa {

/// Strength difference in Elo points. Positive means the first player is stronger.
struct EloDiff {
  double value = 0.0;
};

/// Expected score of a player `x` Elo points stronger than its opponent.
/// Throws std::invalid_argument for non-finite input.
double wp_from_elo(EloDiff x);

/// Standard deviation of a two-game match result between equal engines
/// whose single games are drawn with probability `draw_rate`.
double tau_from_draw_rate(double draw_rate);

/// Per-parameter inputs of the hyperparameter formulas.
struct HyperInputs {
  double elo100 = 0.0;      ///< parameter distance that costs 100 Elo
  long n_iterations = 0;    ///< N
  double c_end = 0.0;       ///< c_N
  double delta_theta = 0.0; ///< estimated distance from the optimum

  void validate() const;
};

/// Final SPSA gain ratio R = a_N / c_N^2 fitted for the two-game setting.
double spsa_r(const HyperInputs& h);

struct BspsaHyperparams {
  double s1 = 0.0;
  double sigma = 0.0;
};

BspsaHyperparams bspsa_hyperparams(const HyperInputs& h);

}  // namespace bspsa
