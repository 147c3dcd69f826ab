#include "bspsa/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace bspsa {

void ExperimentConfig::validate() const {
  if (n_iterations < 1) throw std::invalid_argument("iterations must be at least 1");
  if (repeats < 1) throw std::invalid_argument("repeats must be at least 1");
  if (!(initial_total_elo > 0.0) || !std::isfinite(initial_total_elo)) {
    throw std::invalid_argument("initial_total_elo must be positive");
  }
  if (params.empty()) throw std::invalid_argument("experiment needs at least one parameter");
  landscape.validate();
  if (landscape.size() != n_params()) {
    throw std::invalid_argument("landscape has " + std::to_string(landscape.size()) +
                                " curvatures for " + std::to_string(n_params()) + " parameters");
  }
  tuner_config(Vectord::Zero(n_params())).validate();
}

TunerConfig ExperimentConfig::tuner_config(const Vectord& start) const {
  TunerConfig tc;
  tc.method = method;
  tc.tau = tau;
  tc.params = params;
  tc.schedules.reserve(params.size());
  for (std::size_t i = 0; i < params.size(); ++i) {
    tc.params[i].theta_start = start(static_cast<Eigen::Index>(i));
    GainSchedule s = schedule;
    s.c_end = params[i].c_end;
    // SPSA-only; BSPSA(S) never read a_k, keep the schedule valid.
    s.r_end = method == Method::Spsa ? params[i].r_end : 1.0;
    s.n_iterations = n_iterations;
    tc.schedules.push_back(s);
  }
  return tc;
}

Vectord initial_offsets(Eigen::Index n, double total_elo, const Vectord& curvatures, Rng& rng) {
  if (n < 1) throw std::invalid_argument("initial_offsets needs n >= 1");
  if (!(total_elo > 0.0)) throw std::invalid_argument("initial_offsets needs total_elo > 0");
  if (curvatures.size() != n) throw std::invalid_argument("initial_offsets dimension mismatch");
  Vectord theta(n);
  const double share = total_elo / static_cast<double>(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    theta(i) = rng.sign() * std::sqrt(share / curvatures(i));
  }
  return theta;
}

long trajectory_stride(long n_iterations) { return std::max(1L, n_iterations / 1000); }

RunStreams::RunStreams(std::uint64_t run_seed)
    : offsets(mix64(run_seed + 0x6f666673ULL)), tuner(run_seed), games(mix64(run_seed + 0x67616d65ULL)) {}

RunResult run_single(const ExperimentConfig& config, std::uint64_t run_seed) {
  config.validate();
  RunStreams streams(run_seed);
  RunResult result;
  result.seed = run_seed;
  result.initial_theta =
      initial_offsets(config.n_params(), config.initial_total_elo, config.landscape.curvatures,
                      streams.offsets);
  const TunerConfig tuner = config.tuner_config(result.initial_theta);
  TunerState state = initial_state(tuner);
  result.initial_loss = elo_loss(config.landscape, state.theta);

  const long stride = trajectory_stride(config.n_iterations);
  if (config.record_trajectory) {
    result.trajectory.reserve(static_cast<std::size_t>(config.n_iterations / stride + 2));
    result.trajectory.push_back({0, result.initial_loss});
  }
  if (config.record_outcomes) result.outcomes.reserve(static_cast<std::size_t>(config.n_iterations));

  for (long k = 1; k <= config.n_iterations; ++k) {
    const Proposal p = propose(state, tuner.schedules, streams.tuner);
    const MatchOutcome w = play_match(config.landscape, emit(p.theta_plus, tuner.params),
                                      emit(p.theta_minus, tuner.params), streams.games);
    state = update(tuner, state, p.draw, w);
    if (config.record_outcomes) result.outcomes.push_back(w.value());
    if (config.record_trajectory && k % stride == 0) {
      result.trajectory.push_back({k, elo_loss(config.landscape, state.theta)});
    }
  }
  result.final_theta = state.theta;
  result.final_loss = elo_loss(config.landscape, state.theta);
  result.elo_gain = result.initial_loss - result.final_loss;
  return result;
}

SampleStats summarize(const std::vector<double>& values) {
  SampleStats s;
  if (values.empty()) return s;
  double sum = 0.0;
  s.min = values.front();
  s.max = values.front();
  for (double v : values) {
    sum += v;
    s.min = std::min(s.min, v);
    s.max = std::max(s.max, v);
  }
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  // Rounding in the sum can push the mean just past an extreme when all runs agree.
  s.mean = std::clamp(s.mean, s.min, s.max);
  return s;
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  const auto repeats = static_cast<std::size_t>(config.repeats);

  ExperimentReport report;
  report.config = config;
  report.runs.resize(repeats);
  std::vector<std::exception_ptr> errors(repeats);

  unsigned workers = config.parallelism != 0 ? config.parallelism
                                             : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, repeats));

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < repeats; i = next++) {
      try {
        report.runs[i] = run_single(config, run_seed(config.seed, i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
  }

  std::string failures;
  for (std::size_t i = 0; i < repeats; ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const std::exception& e) {
      failures += "\n  run " + std::to_string(i) + " (seed " +
                  std::to_string(run_seed(config.seed, i)) + "): " + e.what();
    }
  }
  if (!failures.empty()) {
    throw ExperimentError(std::string(to_string(config.method)) + " with " +
                          std::to_string(config.n_params()) + " parameters failed:" + failures);
  }

  std::vector<double> gains;
  gains.reserve(repeats);
  for (const auto& r : report.runs) gains.push_back(r.elo_gain);
  const SampleStats stats = summarize(gains);
  report.mean = stats.mean;
  report.stddev = stats.stddev;
  report.min = stats.min;
  report.max = stats.max;
  if (repeats == 1) {
    report.warnings.push_back("only one repeat; standard deviation reported as 0");
  }
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace bspsa
