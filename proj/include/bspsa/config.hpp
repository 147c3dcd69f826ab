#pragma once

#include "bspsa/harness.hpp"
#include "bspsa/session.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bspsa {

/// Invalid configuration: a parse error with line information or a
/// validation error naming the offending field path.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Mode { Simulate, Tune };

/// Parameter fields as written in the config file. Missing hyperparameters
/// are derived from elo100 / delta_theta when the tuner needs them.
struct ParamEntry {
  std::optional<std::string> name;
  std::optional<double> start;
  std::optional<double> c_end;
  std::map<Method, double> c_end_ratio;  ///< c_N as a multiple of delta_theta
  std::optional<double> s1;
  std::optional<double> sigma;
  std::optional<double> r_end;
  std::optional<double> elo100;
  std::optional<double> delta_theta;
  std::optional<double> lower;
  std::optional<double> upper;
  bool integer = false;

  nlohmann::ordered_json to_json() const;
};

struct SimulatorSettings {
  std::vector<int> n_params{1};
  std::optional<double> curvature;               ///< default 0.01 when no list is given
  std::optional<std::vector<double>> curvatures; ///< fixes n_params
  double draw_rate = 0.82;
  double initial_total_elo = 2.0;
};

struct ExperimentSettings {
  int repeats = 50;
  std::uint64_t seed = 1;
  unsigned parallelism = 0;
  bool trajectory = true;
};

struct OracleSettings {
  std::string command;
  std::string checkpoint_path = "bspsa-checkpoint.json";
  long checkpoint_every = 100;
  long timeout_ms = 0;
};

struct OutputSettings {
  std::string dir = "bspsa-out";
  std::string json = "report.json";
  std::string csv = "runs.csv";  ///< empty disables the CSV file
};

struct AppConfig {
  Mode mode = Mode::Simulate;
  std::vector<Method> methods;
  long iterations = 0;
  double tau = 0.6;  ///< resolved
  GainSchedule schedule;  ///< exponents, A and kind; c_end/r_end unused
  std::vector<ParamEntry> params;
  std::optional<ParamEntry> param_template;
  SimulatorSettings simulator;
  ExperimentSettings experiment;
  OracleSettings oracle;
  OutputSettings output;
  std::vector<std::string> warnings;

  /// Input-schema document with every default filled in. Parsing it again
  /// yields an identical configuration.
  nlohmann::ordered_json resolved_json() const;
};

AppConfig parse_config(const std::string& text, Mode mode);
AppConfig load_config(const std::filesystem::path& path, Mode mode);

/// Re-checks cross-field constraints after command-line overrides.
void validate(const AppConfig& config);

/// One experiment per (method, parameter count), methods outermost.
std::vector<ExperimentConfig> experiment_cells(const AppConfig& config);

/// Tuning session for `tune` mode.
SessionConfig session_config(const AppConfig& config);

}  // namespace bspsa
