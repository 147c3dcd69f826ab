#pragma once

#include "bspsa/linalg.hpp"
#include "bspsa/rng.hpp"
#include "bspsa/schedules.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bspsa {

enum class Method { Spsa, Bspsas, Bspsa };

Method parse_method(std::string_view name);
std::string_view to_string(Method method);

/// Static description of one tunable parameter.
struct ParamSpec {
  std::string name;
  double theta_start = 0.0;
  double c_end = 0.0;
  double s1 = 0.0;     // prior spread (BSPSA, BSPSAS)
  double sigma = 0.0;  // strength scale (BSPSA, BSPSAS)
  double r_end = 0.0;  // final a_N / c_N^2 (SPSA)
  std::optional<double> lower;
  std::optional<double> upper;
  bool integer_valued = false;

  /// Checks the fields `method` actually reads, plus the bounds.
  void validate(Method method) const;
};

/// Two-game match result from the perspective of the engine playing theta_plus.
class MatchOutcome {
 public:
  explicit MatchOutcome(int w);
  int value() const noexcept { return w_; }
  friend bool operator==(MatchOutcome, MatchOutcome) = default;

 private:
  int w_;
};

/// Signs Delta_k, every component exactly +1 or -1.
struct PerturbationDraw {
  Vectord delta;

  static PerturbationDraw sample(Eigen::Index n, Rng& rng);
};

struct TunerState {
  Method method = Method::Spsa;
  long k = 1;
  Vectord theta;
  /// Posterior spreads s_k. For BSPSA this is the conditional spread
  /// 1/sqrt(P_ii) derived from the precision matrix; unused by SPSA.
  Vectord spreads;
  PrecisionMatrixd precision;  // BSPSA only
  double tau = 0.0;

  Eigen::Index size() const noexcept { return theta.size(); }
};

/// Everything an update rule reads besides the state.
struct TunerConfig {
  Method method = Method::Bspsa;
  std::vector<ParamSpec> params;
  std::vector<GainSchedule> schedules;
  double tau = 0.6;

  void validate() const;
  Eigen::Index size() const noexcept { return static_cast<Eigen::Index>(params.size()); }
  Vectord sigmas() const;
};

TunerState initial_state(const TunerConfig& config);

/// c_k for every parameter at iteration k.
Vectord perturbation_sizes(std::span<const GainSchedule> schedules, long k);

struct Proposal {
  Vectord theta_plus;
  Vectord theta_minus;
  Vectord c;  // c_k used for both points
  PerturbationDraw draw;
};

Proposal propose(const TunerState& state, std::span<const GainSchedule> schedules,
                 const PerturbationDraw& draw);
Proposal propose(const TunerState& state, std::span<const GainSchedule> schedules, Rng& rng);

/// Value actually sent to a match source: clamped into bounds and rounded for
/// integer parameters. The tuner itself keeps the real-valued point.
Vectord emit(const Vectord& theta, std::span<const ParamSpec> specs);

/// Clamps each component into its bounds.
Vectord apply_constraints(const Vectord& theta, std::span<const ParamSpec> specs);

struct ScalarPosterior {
  double theta = 0.0;
  double spread = 0.0;
};

/// Single-parameter conjugate update with perturbation +c.
ScalarPosterior bspsa1_update(double theta, double spread, double c, double sigma, double tau,
                              double w);

TunerState spsa_update(const TunerConfig& config, const TunerState& state,
                       const PerturbationDraw& draw, MatchOutcome w);
TunerState bspsas_update(const TunerConfig& config, const TunerState& state,
                         const PerturbationDraw& draw, MatchOutcome w);
TunerState bspsa_update(const TunerConfig& config, const TunerState& state,
                        const PerturbationDraw& draw, MatchOutcome w);

/// Dispatches on config.method and clamps the new theta into bounds.
TunerState update(const TunerConfig& config, const TunerState& state,
                  const PerturbationDraw& draw, MatchOutcome w);

}  // namespace bspsa
