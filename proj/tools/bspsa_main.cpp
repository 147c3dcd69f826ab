// bspsa: simulate experiments, tune parameters against an external match
// source, and print stored reports.

#include "bspsa/config.hpp"
#include "bspsa/harness.hpp"
#include "bspsa/oracle.hpp"
#include "bspsa/report.hpp"
#include "bspsa/session.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#ifndef BSPSA_VERSION
#define BSPSA_VERSION "0.0.0"
#endif

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace bspsa;

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kConfigError = 2,
  kProtocolError = 3,
  kOracleFailure = 4,
};

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

struct SimulateArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> repeats;
  std::optional<std::string> out;
  bool quiet = false;
};

int run_simulate(const SimulateArgs& args) {
  AppConfig config = load_config(args.config, Mode::Simulate);
  if (args.seed) config.experiment.seed = *args.seed;
  if (args.repeats) config.experiment.repeats = *args.repeats;
  if (args.out) config.output.dir = *args.out;
  validate(config);
  print_warnings(config.warnings);

  std::vector<ExperimentReport> reports;
  for (const ExperimentConfig& cell : experiment_cells(config)) {
    if (!args.quiet) {
      std::cerr << "running " << to_string(cell.method) << " with " << cell.n_params()
                << (cell.n_params() == 1 ? " parameter" : " parameters") << ", " << cell.repeats
                << " x " << cell.n_iterations << " iterations\n";
    }
    reports.push_back(run_experiment(cell));
    print_warnings(reports.back().warnings);
    if (!args.quiet) {
      std::fprintf(stderr, "  done in %.2f s\n", reports.back().wall_seconds);
    }
  }

  const ordered_json doc = report_document(config.resolved_json(), reports);
  const fs::path dir = config.output.dir;
  write_file(dir / config.output.json, doc.dump(2) + "\n");
  if (!config.output.csv.empty()) write_file(dir / config.output.csv, format_runs_csv(doc));
  std::cout << format_table(doc);
  return kOk;
}

struct TuneArgs {
  std::string config;
  std::optional<std::string> oracle_cmd;
  bool resume = false;
};

int run_tune(const TuneArgs& args) {
  AppConfig config = load_config(args.config, Mode::Tune);
  if (args.oracle_cmd) config.oracle.command = *args.oracle_cmd;
  print_warnings(config.warnings);
  if (config.oracle.command.empty()) {
    throw ConfigError("oracle.command: required (or pass --oracle-cmd)");
  }
  const SessionConfig session = session_config(config);
  if (args.resume && !fs::exists(session.checkpoint_path)) {
    throw ConfigError("--resume: no checkpoint at " + session.checkpoint_path.string());
  }
  if (!args.resume && fs::exists(session.checkpoint_path)) {
    std::cerr << "warning: starting fresh; overwriting checkpoint " << session.checkpoint_path
              << '\n';
  }

  SubprocessOracle oracle(config.oracle.command, std::chrono::milliseconds(config.oracle.timeout_ms));
  const TunerState final_state = run_tuning_session(session, oracle, args.resume);

  const auto& params = session.tuner.params;
  const Vectord emitted = emit(final_state.theta, params);
  ordered_json doc;
  doc["schema_version"] = kReportSchemaVersion;
  doc["kind"] = "tuning_result";
  doc["config"] = config.resolved_json();
  doc["method"] = std::string(to_string(final_state.method));
  doc["iterations"] = final_state.k - 1;
  ordered_json theta = ordered_json::object();
  ordered_json values = ordered_json::object();
  for (std::size_t i = 0; i < params.size(); ++i) {
    const auto idx = static_cast<Eigen::Index>(i);
    theta[params[i].name] = final_state.theta(idx);
    if (params[i].integer_valued) {
      values[params[i].name] = static_cast<long long>(emitted(idx));
    } else {
      values[params[i].name] = emitted(idx);
    }
  }
  doc["theta"] = std::move(theta);
  doc["values"] = std::move(values);
  write_file(fs::path(config.output.dir) / config.output.json, doc.dump(2) + "\n");

  std::cout << "tuned " << params.size() << " parameters over " << final_state.k - 1
            << " matches with " << to_string(final_state.method) << '\n';
  for (std::size_t i = 0; i < params.size(); ++i) {
    std::cout << "  " << params[i].name << " = " << doc["values"][params[i].name].dump() << '\n';
  }
  return kOk;
}

int run_report(const std::string& in) {
  std::ifstream file(in);
  if (!file) throw ConfigError(in + ": cannot open report");
  ordered_json doc;
  try {
    doc = ordered_json::parse(file);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(in + ": not a JSON report: " + e.what());
  }
  if (doc.value("kind", "") != "experiment_report") {
    throw ConfigError(in + ": not an experiment report");
  }
  std::cout << format_table(doc);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian and classic SPSA tuners for noisy pairwise-comparison objectives"};
  app.set_version_flag("--version", std::string("bspsa ") + BSPSA_VERSION);
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Run tuner experiments against the match simulator");
  simulate->add_option("--config", sim.config, "Config file (JSON)")->required()->check(CLI::ExistingFile);
  simulate->add_option("--seed", sim.seed, "Override experiment.seed");
  simulate->add_option("--repeats", sim.repeats, "Override experiment.repeats")->check(CLI::PositiveNumber);
  simulate->add_option("--out", sim.out, "Override output.dir");
  simulate->add_flag("--quiet", sim.quiet, "No progress on stderr");

  TuneArgs tune_args;
  auto* tune = app.add_subcommand("tune", "Tune parameters against an external match oracle");
  tune->add_option("--config", tune_args.config, "Config file (JSON)")->required()->check(CLI::ExistingFile);
  tune->add_option("--oracle-cmd", tune_args.oracle_cmd, "Oracle command (overrides oracle.command)");
  tune->add_flag("--resume", tune_args.resume, "Continue from the configured checkpoint");

  std::string report_in;
  auto* report = app.add_subcommand("report", "Print the table of a stored experiment report");
  report->add_option("--in", report_in, "Report JSON written by simulate")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*simulate) return run_simulate(sim);
    if (*tune) return run_tune(tune_args);
    if (*report) return run_report(report_in);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const ProtocolError& e) {
    std::cerr << "protocol error: " << e.what() << '\n';
    return kProtocolError;
  } catch (const OracleFailure& e) {
    std::cerr << "oracle failure: " << e.what() << '\n';
    return kOracleFailure;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kFailure;
}
