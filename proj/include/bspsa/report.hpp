#pragma once

#include "bspsa/harness.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace bspsa {

/// Version of the report document layout; see README for the field list.
inline constexpr int kReportSchemaVersion = 1;

/// One cell of the report: hyperparameters, statistics and per-run results.
nlohmann::ordered_json cell_to_json(const ExperimentReport& report);

/// Complete report document embedding the resolved configuration.
nlohmann::ordered_json report_document(const nlohmann::ordered_json& resolved_config,
                                       const std::vector<ExperimentReport>& cells);

/// Methods as rows and parameter counts as columns, "mean / std" per cell.
/// Works from the JSON form so a stored report prints exactly like a fresh one.
std::string format_table(const nlohmann::ordered_json& document);

/// One line per run: method, n_params, run index, seed, gains and losses.
std::string format_runs_csv(const nlohmann::ordered_json& document);

}  // namespace bspsa
