#include "bspsa/report.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

namespace bspsa {

using nlohmann::ordered_json;

namespace {

ordered_json vector_json(const Vectord& v) {
  ordered_json out = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

}  // namespace

ordered_json cell_to_json(const ExperimentReport& report) {
  const ExperimentConfig& c = report.config;
  ordered_json cell;
  cell["method"] = std::string(to_string(c.method));
  cell["n_params"] = c.n_params();
  cell["iterations"] = c.n_iterations;
  cell["repeats"] = c.repeats;
  cell["seed"] = c.seed;
  cell["tau"] = c.tau;
  cell["draw_rate"] = c.landscape.draw_rate;
  cell["initial_total_elo"] = c.initial_total_elo;
  cell["elo_gain_mean"] = report.mean;
  cell["elo_gain_std"] = report.stddev;
  cell["elo_gain_min"] = report.min;
  cell["elo_gain_max"] = report.max;
  cell["warnings"] = report.warnings;
  cell["schedule"] = {{"kind", std::string(to_string(c.schedule.kind))},
                      {"alpha", c.schedule.alpha},
                      {"gamma", c.schedule.gamma},
                      {"stability", c.schedule.stability}};

  ordered_json params = ordered_json::array();
  for (std::size_t i = 0; i < c.params.size(); ++i) {
    const ParamSpec& p = c.params[i];
    ordered_json jp;
    jp["name"] = p.name;
    jp["curvature"] = c.landscape.curvatures(static_cast<Eigen::Index>(i));
    jp["c_end"] = p.c_end;
    if (c.method == Method::Spsa) {
      jp["r_end"] = p.r_end;
    } else {
      jp["s1"] = p.s1;
      jp["sigma"] = p.sigma;
    }
    params.push_back(std::move(jp));
  }
  cell["params"] = std::move(params);

  ordered_json runs = ordered_json::array();
  for (std::size_t i = 0; i < report.runs.size(); ++i) {
    const RunResult& r = report.runs[i];
    ordered_json jr;
    jr["index"] = i;
    jr["seed"] = r.seed;
    jr["elo_gain"] = r.elo_gain;
    jr["initial_loss"] = r.initial_loss;
    jr["final_loss"] = r.final_loss;
    jr["initial_theta"] = vector_json(r.initial_theta);
    jr["final_theta"] = vector_json(r.final_theta);
    if (c.record_trajectory) {
      ordered_json traj = ordered_json::array();
      for (const auto& pt : r.trajectory) traj.push_back({pt.k, pt.elo_loss});
      jr["trajectory"] = std::move(traj);
    }
    runs.push_back(std::move(jr));
  }
  cell["runs"] = std::move(runs);
  return cell;
}

ordered_json report_document(const ordered_json& resolved_config,
                             const std::vector<ExperimentReport>& cells) {
  ordered_json doc;
  doc["schema_version"] = kReportSchemaVersion;
  doc["kind"] = "experiment_report";
  doc["config"] = resolved_config;
  ordered_json jc = ordered_json::array();
  for (const auto& cell : cells) jc.push_back(cell_to_json(cell));
  doc["cells"] = std::move(jc);
  return doc;
}

std::string format_table(const ordered_json& document) {
  if (!document.contains("cells") || !document["cells"].is_array()) {
    throw std::invalid_argument("report has no \"cells\" array");
  }
  std::vector<std::string> methods;
  std::vector<long> counts;
  std::map<std::pair<std::string, long>, std::string> entries;
  for (const auto& cell : document["cells"]) {
    const auto method = cell.at("method").get<std::string>();
    const auto n = cell.at("n_params").get<long>();
    if (std::find(methods.begin(), methods.end(), method) == methods.end()) methods.push_back(method);
    if (std::find(counts.begin(), counts.end(), n) == counts.end()) counts.push_back(n);
    entries[{method, n}] = fixed(cell.at("elo_gain_mean").get<double>(), 5) + " / " +
                           fixed(cell.at("elo_gain_std").get<double>(), 5);
  }

  std::vector<std::string> header{"Method"};
  for (long n : counts) header.push_back(std::to_string(n) + (n == 1 ? " parameter" : " parameters"));
  std::vector<std::vector<std::string>> rows{header};
  for (const auto& m : methods) {
    std::vector<std::string> row{m};
    for (long n : counts) {
      auto it = entries.find({m, n});
      row.push_back(it == entries.end() ? "-" : it->second);
    }
    rows.push_back(std::move(row));
  }

  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  }
  std::ostringstream out;
  out << "Elo gain mean / standard deviation\n";
  auto rule = [&] {
    for (std::size_t i = 0; i < width.size(); ++i) out << (i ? "-+-" : "") << std::string(width[i], '-');
    out << '\n';
  };
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t i = 0; i < rows[r].size(); ++i) {
      out << (i ? " | " : "") << rows[r][i] << std::string(width[i] - rows[r][i].size(), ' ');
    }
    out << '\n';
    if (r == 0) rule();
  }
  return out.str();
}

std::string format_runs_csv(const ordered_json& document) {
  std::ostringstream out;
  out << "method,n_params,run,seed,elo_gain,initial_loss,final_loss\n";
  for (const auto& cell : document.at("cells")) {
    for (const auto& run : cell.at("runs")) {
      out << cell.at("method").get<std::string>() << ',' << cell.at("n_params").get<long>() << ','
          << run.at("index").get<long>() << ',' << run.at("seed").get<std::uint64_t>() << ','
          << run.at("elo_gain").dump() << ',' << run.at("initial_loss").dump() << ','
          << run.at("final_loss").dump() << '\n';
    }
  }
  return out.str();
}

}  // namespace bspsa
