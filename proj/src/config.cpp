#include "bspsa/config.hpp"

#include "bspsa/elo.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace bspsa {

using nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ConfigError(path + ": " + msg);
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

void check_keys(const ordered_json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) fail(path.empty() ? "<root>" : path, "expected an object");
  for (const auto& [key, _] : obj.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* a) { return key == a; });
    if (!known) fail(join(path, key), "unknown key");
  }
}

double number(const ordered_json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) fail(path, "must be finite");
  return d;
}

double positive(const ordered_json& v, const std::string& path) {
  const double d = number(v, path);
  if (!(d > 0.0)) fail(path, "must be positive");
  return d;
}

long long integer(const ordered_json& v, const std::string& path) {
  if (!v.is_number_integer()) fail(path, "expected an integer");
  return v.get<long long>();
}

bool boolean(const ordered_json& v, const std::string& path) {
  if (!v.is_boolean()) fail(path, "expected true or false");
  return v.get<bool>();
}

std::string string(const ordered_json& v, const std::string& path) {
  if (!v.is_string()) fail(path, "expected a string");
  return v.get<std::string>();
}

double probability(const ordered_json& v, const std::string& path) {
  const double d = number(v, path);
  if (!(d >= 0.0 && d <= 1.0)) fail(path, "must lie in [0, 1]");
  return d;
}

Method method(const ordered_json& v, const std::string& path) {
  try {
    return parse_method(string(v, path));
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
}

ParamEntry parse_param(const ordered_json& j, const std::string& path) {
  check_keys(j, path,
             {"name", "start", "c_end", "c_end_ratio", "s1", "sigma", "r_end", "elo100",
              "delta_theta", "lower", "upper", "integer"});
  ParamEntry p;
  if (j.contains("name")) p.name = string(j["name"], join(path, "name"));
  if (j.contains("start")) p.start = number(j["start"], join(path, "start"));
  if (j.contains("c_end")) p.c_end = positive(j["c_end"], join(path, "c_end"));
  if (j.contains("c_end_ratio")) {
    const auto& r = j["c_end_ratio"];
    const std::string rp = join(path, "c_end_ratio");
    if (r.is_object()) {
      for (const auto& [key, value] : r.items()) {
        p.c_end_ratio[method(ordered_json(key), join(rp, key))] = positive(value, join(rp, key));
      }
    } else {
      const double ratio = positive(r, rp);
      for (Method m : {Method::Spsa, Method::Bspsas, Method::Bspsa}) p.c_end_ratio[m] = ratio;
    }
  }
  if (j.contains("s1")) p.s1 = positive(j["s1"], join(path, "s1"));
  if (j.contains("sigma")) p.sigma = positive(j["sigma"], join(path, "sigma"));
  if (j.contains("r_end")) p.r_end = positive(j["r_end"], join(path, "r_end"));
  if (j.contains("elo100")) p.elo100 = positive(j["elo100"], join(path, "elo100"));
  if (j.contains("delta_theta")) p.delta_theta = positive(j["delta_theta"], join(path, "delta_theta"));
  if (j.contains("lower")) p.lower = number(j["lower"], join(path, "lower"));
  if (j.contains("upper")) p.upper = number(j["upper"], join(path, "upper"));
  if (j.contains("integer")) p.integer = boolean(j["integer"], join(path, "integer"));
  if (p.lower && p.upper && !(*p.lower < *p.upper)) fail(join(path, "lower"), "must be below upper");
  return p;
}

std::pair<std::size_t, std::size_t> line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

/// Resolves one parameter for `m` in a problem of `n` parameters.
ParamSpec resolve_param(const ParamEntry& e, const std::string& path, Method m, long iterations,
                        std::optional<double> default_elo100,
                        std::optional<double> default_delta, const std::string& default_name) {
  ParamSpec p;
  p.name = e.name.value_or(default_name);
  p.theta_start = e.start.value_or(0.0);
  p.lower = e.lower;
  p.upper = e.upper;
  p.integer_valued = e.integer;

  const std::optional<double> elo100 = e.elo100 ? e.elo100 : default_elo100;
  const std::optional<double> delta = e.delta_theta ? e.delta_theta : default_delta;

  if (e.c_end) {
    p.c_end = *e.c_end;
  } else if (auto it = e.c_end_ratio.find(m); it != e.c_end_ratio.end()) {
    if (!delta) fail(join(path, "c_end_ratio"), "needs delta_theta to scale from");
    p.c_end = it->second * *delta;
  } else {
    fail(join(path, "c_end"), "missing (give c_end, or c_end_ratio for " +
                                  std::string(to_string(m)) + ")");
  }

  if (m == Method::Spsa) {
    if (e.r_end) {
      p.r_end = *e.r_end;
    } else if (elo100) {
      p.r_end = spsa_r({*elo100, iterations, p.c_end, delta.value_or(1.0)});
    } else {
      fail(join(path, "r_end"), "missing (give r_end or elo100)");
    }
  } else {
    if (e.s1) {
      p.s1 = *e.s1;
    } else if (delta) {
      p.s1 = *delta;
    } else {
      fail(join(path, "s1"), "missing (give s1 or delta_theta)");
    }
    if (e.sigma) {
      p.sigma = *e.sigma;
    } else if (elo100) {
      p.sigma = *elo100;
    } else {
      fail(join(path, "sigma"), "missing (give sigma or elo100)");
    }
  }
  return p;
}

Vectord landscape_curvatures(const AppConfig& c, int n) {
  if (c.simulator.curvatures) {
    const auto& v = *c.simulator.curvatures;
    return Eigen::Map<const Vectord>(v.data(), static_cast<Eigen::Index>(v.size()));
  }
  return Vectord::Constant(n, c.simulator.curvature.value_or(0.01));
}

}  // namespace

ordered_json ParamEntry::to_json() const {
  ordered_json j = ordered_json::object();
  if (name) j["name"] = *name;
  if (start) j["start"] = *start;
  if (c_end) j["c_end"] = *c_end;
  if (!c_end_ratio.empty()) {
    ordered_json r = ordered_json::object();
    for (const auto& [m, v] : c_end_ratio) r[std::string(to_string(m))] = v;
    j["c_end_ratio"] = std::move(r);
  }
  if (s1) j["s1"] = *s1;
  if (sigma) j["sigma"] = *sigma;
  if (r_end) j["r_end"] = *r_end;
  if (elo100) j["elo100"] = *elo100;
  if (delta_theta) j["delta_theta"] = *delta_theta;
  if (lower) j["lower"] = *lower;
  if (upper) j["upper"] = *upper;
  if (integer) j["integer"] = true;
  return j;
}

AppConfig parse_config(const std::string& text, Mode mode) {
  ordered_json root;
  try {
    root = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const auto [line, col] = line_col(text, e.byte);
    throw ConfigError("parse error at line " + std::to_string(line) + ", column " +
                      std::to_string(col) + ": " + e.what());
  }
  check_keys(root, "", {"method", "iterations", "tau", "draw_rate", "schedule", "params",
                        "param_template", "simulator", "experiment", "oracle", "output"});

  AppConfig c;
  c.mode = mode;

  if (!root.contains("method")) fail("method", "required");
  if (root["method"].is_array()) {
    for (std::size_t i = 0; i < root["method"].size(); ++i) {
      c.methods.push_back(method(root["method"][i], "method[" + std::to_string(i) + "]"));
    }
    if (c.methods.empty()) fail("method", "must name at least one method");
  } else {
    c.methods.push_back(method(root["method"], "method"));
  }
  if (mode == Mode::Tune && c.methods.size() != 1) fail("method", "tune mode takes a single method");

  if (!root.contains("iterations")) fail("iterations", "required");
  c.iterations = integer(root["iterations"], "iterations");
  if (c.iterations < 1) fail("iterations", "must be at least 1");

  if (root.contains("simulator")) {
    if (mode == Mode::Tune) {
      c.warnings.push_back("simulator section is ignored in tune mode");
    } else {
      const auto& s = root["simulator"];
      check_keys(s, "simulator",
                 {"n_params", "curvature", "curvatures", "draw_rate", "initial_total_elo"});
      if (s.contains("n_params")) {
        c.simulator.n_params.clear();
        const auto& np = s["n_params"];
        if (np.is_array()) {
          for (std::size_t i = 0; i < np.size(); ++i) {
            c.simulator.n_params.push_back(
                static_cast<int>(integer(np[i], "simulator.n_params[" + std::to_string(i) + "]")));
          }
        } else {
          c.simulator.n_params.push_back(static_cast<int>(integer(np, "simulator.n_params")));
        }
        if (c.simulator.n_params.empty()) fail("simulator.n_params", "must not be empty");
        for (int n : c.simulator.n_params) {
          if (n < 1) fail("simulator.n_params", "counts must be at least 1");
        }
      }
      if (s.contains("curvature")) c.simulator.curvature = positive(s["curvature"], "simulator.curvature");
      if (s.contains("curvatures")) {
        if (c.simulator.curvature) fail("simulator.curvatures", "give curvature or curvatures, not both");
        if (!s["curvatures"].is_array() || s["curvatures"].empty()) {
          fail("simulator.curvatures", "expected a non-empty array");
        }
        std::vector<double> v;
        for (std::size_t i = 0; i < s["curvatures"].size(); ++i) {
          v.push_back(positive(s["curvatures"][i], "simulator.curvatures[" + std::to_string(i) + "]"));
        }
        if (s.contains("n_params") &&
            (c.simulator.n_params.size() != 1 || c.simulator.n_params[0] != static_cast<int>(v.size()))) {
          fail("simulator.n_params", "must equal the length of simulator.curvatures");
        }
        c.simulator.n_params = {static_cast<int>(v.size())};
        c.simulator.curvatures = std::move(v);
      }
      if (s.contains("draw_rate")) {
        c.simulator.draw_rate = probability(s["draw_rate"], "simulator.draw_rate");
        if (c.simulator.draw_rate >= 1.0) fail("simulator.draw_rate", "must be below 1");
      }
      if (s.contains("initial_total_elo")) {
        c.simulator.initial_total_elo = positive(s["initial_total_elo"], "simulator.initial_total_elo");
      }
    }
  }

  const bool has_tau = root.contains("tau");
  const bool has_draw = root.contains("draw_rate");
  if (has_tau) {
    c.tau = positive(root["tau"], "tau");
    if (has_draw) {
      probability(root["draw_rate"], "draw_rate");
      c.warnings.push_back("both tau and draw_rate given; using tau = " + ordered_json(c.tau).dump());
    }
  } else if (has_draw) {
    c.tau = tau_from_draw_rate(probability(root["draw_rate"], "draw_rate"));
    if (!(c.tau > 0.0)) fail("draw_rate", "a draw rate of 1 gives tau = 0");
  } else if (mode == Mode::Simulate) {
    c.tau = tau_from_draw_rate(c.simulator.draw_rate);
  } else {
    fail("tau", "required in tune mode (give tau or draw_rate)");
  }

  c.schedule = GainSchedule::with_defaults(1.0, 1.0, c.iterations);
  if (root.contains("schedule")) {
    const auto& s = root["schedule"];
    check_keys(s, "schedule", {"kind", "alpha", "gamma", "stability"});
    if (s.contains("kind")) {
      try {
        c.schedule.kind = parse_schedule_kind(string(s["kind"], "schedule.kind"));
      } catch (const std::invalid_argument& e) {
        fail("schedule.kind", e.what());
      }
    }
    if (s.contains("alpha")) c.schedule.alpha = number(s["alpha"], "schedule.alpha");
    if (s.contains("gamma")) c.schedule.gamma = number(s["gamma"], "schedule.gamma");
    if (s.contains("stability")) {
      c.schedule.stability = number(s["stability"], "schedule.stability");
      if (c.schedule.stability < 0.0) fail("schedule.stability", "must be >= 0");
    }
  }
  if (!(c.schedule.alpha > c.schedule.gamma && c.schedule.gamma >= 0.0)) {
    fail("schedule", "needs alpha > gamma >= 0");
  }

  if (root.contains("params")) {
    const auto& ps = root["params"];
    if (!ps.is_array() || ps.empty()) fail("params", "expected a non-empty array");
    for (std::size_t i = 0; i < ps.size(); ++i) {
      c.params.push_back(parse_param(ps[i], "params[" + std::to_string(i) + "]"));
    }
  }
  if (root.contains("param_template")) {
    c.param_template = parse_param(root["param_template"], "param_template");
  }

  if (root.contains("experiment")) {
    const auto& e = root["experiment"];
    check_keys(e, "experiment", {"repeats", "seed", "parallelism", "trajectory"});
    if (e.contains("repeats")) {
      const auto r = integer(e["repeats"], "experiment.repeats");
      if (r < 1) fail("experiment.repeats", "must be at least 1");
      c.experiment.repeats = static_cast<int>(r);
    }
    if (e.contains("seed")) {
      if (!e["seed"].is_number_unsigned()) fail("experiment.seed", "expected a non-negative integer");
      c.experiment.seed = e["seed"].get<std::uint64_t>();
    }
    if (e.contains("parallelism")) {
      const auto p = integer(e["parallelism"], "experiment.parallelism");
      if (p < 0) fail("experiment.parallelism", "must be >= 0");
      c.experiment.parallelism = static_cast<unsigned>(p);
    }
    if (e.contains("trajectory")) c.experiment.trajectory = boolean(e["trajectory"], "experiment.trajectory");
  }

  if (root.contains("oracle")) {
    const auto& o = root["oracle"];
    check_keys(o, "oracle", {"command", "checkpoint_path", "checkpoint_every", "timeout_ms"});
    if (o.contains("command")) c.oracle.command = string(o["command"], "oracle.command");
    if (o.contains("checkpoint_path")) {
      c.oracle.checkpoint_path = string(o["checkpoint_path"], "oracle.checkpoint_path");
    }
    if (o.contains("checkpoint_every")) {
      c.oracle.checkpoint_every = static_cast<long>(integer(o["checkpoint_every"], "oracle.checkpoint_every"));
      if (c.oracle.checkpoint_every < 1) fail("oracle.checkpoint_every", "must be at least 1");
    }
    if (o.contains("timeout_ms")) {
      c.oracle.timeout_ms = static_cast<long>(integer(o["timeout_ms"], "oracle.timeout_ms"));
      if (c.oracle.timeout_ms < 0) fail("oracle.timeout_ms", "must be >= 0");
    }
  }

  if (root.contains("output")) {
    const auto& o = root["output"];
    check_keys(o, "output", {"dir", "json", "csv"});
    if (o.contains("dir")) c.output.dir = string(o["dir"], "output.dir");
    if (o.contains("json")) c.output.json = string(o["json"], "output.json");
    if (o.contains("csv")) c.output.csv = string(o["csv"], "output.csv");
    if (c.output.json.empty()) fail("output.json", "must not be empty");
  }

  validate(c);
  return c;
}

AppConfig load_config(const std::filesystem::path& path, Mode mode) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open config file");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), mode);
}

void validate(const AppConfig& c) {
  if (c.mode == Mode::Tune) {
    if (c.params.empty()) fail("params", "tune mode needs an explicit parameter list");
    if (c.param_template) fail("param_template", "only used in simulate mode");
    std::set<std::string> names;
    for (std::size_t i = 0; i < c.params.size(); ++i) {
      const std::string path = "params[" + std::to_string(i) + "]";
      if (!c.params[i].name) fail(join(path, "name"), "required in tune mode");
      if (!c.params[i].start) fail(join(path, "start"), "required in tune mode");
      if (!names.insert(*c.params[i].name).second) fail(join(path, "name"), "duplicate name");
    }
    session_config(c);
    return;
  }
  if (c.params.empty() && !c.param_template) {
    fail("param_template", "simulate mode needs param_template or params");
  }
  if (!c.params.empty()) {
    if (c.param_template) fail("params", "give params or param_template, not both");
    if (c.simulator.n_params.size() != 1 ||
        c.simulator.n_params[0] != static_cast<int>(c.params.size())) {
      fail("simulator.n_params", "must equal the number of entries in params");
    }
    for (std::size_t i = 0; i < c.params.size(); ++i) {
      if (c.params[i].start) {
        fail("params[" + std::to_string(i) + "].start", "not used in simulate mode (starts are drawn)");
      }
    }
  }
  if (c.simulator.curvatures && !c.param_template && c.params.empty()) {
    fail("simulator.curvatures", "needs parameters");
  }
  if (c.experiment.repeats < 1) fail("experiment.repeats", "must be at least 1");
  experiment_cells(c);
}

std::vector<ExperimentConfig> experiment_cells(const AppConfig& c) {
  if (c.mode != Mode::Simulate) throw ConfigError("experiment cells need a simulate config");
  std::vector<ExperimentConfig> cells;
  for (Method m : c.methods) {
    for (int n : c.simulator.n_params) {
      ExperimentConfig e;
      e.method = m;
      e.n_iterations = c.iterations;
      e.repeats = c.experiment.repeats;
      e.initial_total_elo = c.simulator.initial_total_elo;
      e.seed = c.experiment.seed;
      e.schedule = c.schedule;
      e.landscape = {landscape_curvatures(c, n), c.simulator.draw_rate};
      e.tau = c.tau;
      e.parallelism = c.experiment.parallelism;
      e.record_trajectory = c.experiment.trajectory;
      for (int i = 0; i < n; ++i) {
        const double a = e.landscape.curvatures(i);
        const bool from_list = !c.params.empty();
        const ParamEntry& entry = from_list ? c.params[static_cast<std::size_t>(i)] : *c.param_template;
        const std::string path =
            from_list ? "params[" + std::to_string(i) + "]" : std::string("param_template");
        e.params.push_back(resolve_param(entry, path, m, c.iterations, std::sqrt(100.0 / a),
                                         std::sqrt(c.simulator.initial_total_elo / n / a),
                                         "p" + std::to_string(i + 1)));
      }
      try {
        e.validate();
      } catch (const std::invalid_argument& err) {
        throw ConfigError(std::string(to_string(m)) + " with " + std::to_string(n) +
                          " parameters: " + err.what());
      }
      cells.push_back(std::move(e));
    }
  }
  return cells;
}

SessionConfig session_config(const AppConfig& c) {
  if (c.mode != Mode::Tune) throw ConfigError("session config needs a tune config");
  SessionConfig s;
  s.tuner.method = c.methods.front();
  s.tuner.tau = c.tau;
  s.n_iterations = c.iterations;
  s.seed = c.experiment.seed;
  s.checkpoint_path = c.oracle.checkpoint_path;
  s.checkpoint_every = c.oracle.checkpoint_every;
  for (std::size_t i = 0; i < c.params.size(); ++i) {
    const std::string path = "params[" + std::to_string(i) + "]";
    s.tuner.params.push_back(resolve_param(c.params[i], path, s.tuner.method, c.iterations,
                                           std::nullopt, std::nullopt, path));
    GainSchedule g = c.schedule;
    g.c_end = s.tuner.params.back().c_end;
    g.r_end = s.tuner.method == Method::Spsa ? s.tuner.params.back().r_end : 1.0;
    g.n_iterations = c.iterations;
    s.tuner.schedules.push_back(g);
  }
  try {
    s.tuner.validate();
  } catch (const std::invalid_argument& err) {
    throw ConfigError(err.what());
  }
  return s;
}

ordered_json AppConfig::resolved_json() const {
  ordered_json j;
  ordered_json m = ordered_json::array();
  for (Method x : methods) m.push_back(std::string(to_string(x)));
  j["method"] = std::move(m);
  j["iterations"] = iterations;
  j["tau"] = tau;
  j["schedule"] = {{"kind", std::string(to_string(schedule.kind))},
                   {"alpha", schedule.alpha},
                   {"gamma", schedule.gamma},
                   {"stability", schedule.stability}};
  if (!params.empty()) {
    ordered_json ps = ordered_json::array();
    for (const auto& p : params) ps.push_back(p.to_json());
    j["params"] = std::move(ps);
  }
  if (param_template) j["param_template"] = param_template->to_json();
  if (mode == Mode::Simulate) {
    ordered_json s;
    s["n_params"] = simulator.n_params;
    if (simulator.curvatures) {
      s["curvatures"] = *simulator.curvatures;
    } else {
      s["curvature"] = simulator.curvature.value_or(0.01);
    }
    s["draw_rate"] = simulator.draw_rate;
    s["initial_total_elo"] = simulator.initial_total_elo;
    j["simulator"] = std::move(s);
  }
  j["experiment"] = {{"repeats", experiment.repeats},
                     {"seed", experiment.seed},
                     {"parallelism", experiment.parallelism},
                     {"trajectory", experiment.trajectory}};
  if (mode == Mode::Tune) {
    j["oracle"] = {{"command", oracle.command},
                   {"checkpoint_path", oracle.checkpoint_path},
                   {"checkpoint_every", oracle.checkpoint_every},
                   {"timeout_ms", oracle.timeout_ms}};
  }
  j["output"] = {{"dir", output.dir}, {"json", output.json}, {"csv", output.csv}};
  return j;
}

}  // namespace bspsa
