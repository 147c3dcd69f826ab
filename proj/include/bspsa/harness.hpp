#pragma once

#include "bspsa/optimizers.hpp"
#include "bspsa/rng.hpp"
#include "bspsa/schedules.hpp"
#include "bspsa/simulator.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bspsa {

/// One (method, parameter count) cell of a simulator experiment.
struct ExperimentConfig {
  Method method = Method::Bspsa;
  long n_iterations = 200000;
  int repeats = 50;
  double initial_total_elo = 2.0;
  std::uint64_t seed = 1;
  /// Fully resolved per-parameter hyperparameters; theta_start is replaced by
  /// the random initial offset of each run.
  std::vector<ParamSpec> params;
  /// Schedule template; c_end and r_end are taken per parameter from `params`.
  GainSchedule schedule;
  QuadraticLandscape landscape;
  double tau = 0.6;
  unsigned parallelism = 0;  ///< worker threads, 0 = hardware concurrency
  bool record_trajectory = true;
  bool record_outcomes = false;  ///< keep every match result (tests, transcripts)

  Eigen::Index n_params() const noexcept { return static_cast<Eigen::Index>(params.size()); }
  void validate() const;
  /// Tuner configuration for a run starting at `start`.
  TunerConfig tuner_config(const Vectord& start) const;
};

struct TrajectoryPoint {
  long k = 0;  ///< matches played so far
  double elo_loss = 0.0;
};

struct RunResult {
  std::uint64_t seed = 0;
  Vectord initial_theta;
  Vectord final_theta;
  double initial_loss = 0.0;
  double final_loss = 0.0;
  double elo_gain = 0.0;
  std::vector<TrajectoryPoint> trajectory;
  std::vector<int> outcomes;  ///< only with record_outcomes
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<RunResult> runs;
  double mean = 0.0;
  double stddev = 0.0;  ///< sample standard deviation, divisor repeats - 1
  double min = 0.0;
  double max = 0.0;
  std::vector<std::string> warnings;
  double wall_seconds = 0.0;
};

class ExperimentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Starting point with elo_loss == total_elo, split evenly across parameters,
/// each component's sign drawn from `rng`.
Vectord initial_offsets(Eigen::Index n, double total_elo, const Vectord& curvatures, Rng& rng);

/// Iteration stride at which trajectories are sampled.
long trajectory_stride(long n_iterations);

/// Independent random streams of one run.
struct RunStreams {
  Rng offsets;
  Rng tuner;
  Rng games;

  explicit RunStreams(std::uint64_t run_seed);
};

RunResult run_single(const ExperimentConfig& config, std::uint64_t run_seed);

ExperimentReport run_experiment(const ExperimentConfig& config);

struct SampleStats {
  double mean = 0.0;
  double stddev = 0.0;
  double min = 0.0;
  double max = 0.0;
};

/// Statistics accumulated in index order so the result does not depend on
/// which thread finished first.
SampleStats summarize(const std::vector<double>& values);

}  // namespace bspsa
