#include "bspsa/session.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace bspsa {

using nlohmann::ordered_json;

SubprocessOracle::SubprocessOracle(const std::string& command, std::chrono::milliseconds timeout)
    : process_(command), timeout_(timeout) {}

MatchOutcome SubprocessOracle::play(const OracleRequest& request) {
  process_.write_line(encode_request(request));
  const auto line = process_.read_line(timeout_);
  if (!line) {
    const int status = process_.close_and_wait();
    throw OracleFailure("oracle closed its output before answering request " +
                        std::to_string(request.id) + " (exit status " + std::to_string(status) + ")");
  }
  return accept_response(*line, request.id);
}

namespace {

ordered_json vec_json(const Vectord& v) {
  ordered_json a = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Vectord vec_from(const ordered_json& a, Eigen::Index n, const char* field) {
  if (!a.is_array() || static_cast<Eigen::Index>(a.size()) != n) {
    throw std::invalid_argument(std::string("checkpoint field ") + field + " must have " +
                                std::to_string(n) + " entries");
  }
  Vectord v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = a[static_cast<std::size_t>(i)].get<double>();
  return v;
}

}  // namespace

std::string config_hash(const SessionConfig& config) {
  const TunerConfig& t = config.tuner;
  ordered_json j;
  j["method"] = std::string(to_string(t.method));
  j["tau"] = t.tau;
  j["iterations"] = config.n_iterations;
  j["seed"] = config.seed;
  ordered_json params = ordered_json::array();
  for (std::size_t i = 0; i < t.params.size(); ++i) {
    const auto& p = t.params[i];
    const auto& s = t.schedules[i];
    ordered_json jp = {{"name", p.name},        {"start", p.theta_start}, {"c_end", p.c_end},
                       {"s1", p.s1},            {"sigma", p.sigma},       {"r_end", p.r_end},
                       {"integer", p.integer_valued},
                       {"alpha", s.alpha},      {"gamma", s.gamma},       {"stability", s.stability},
                       {"kind", std::string(to_string(s.kind))}};
    jp["lower"] = p.lower ? ordered_json(*p.lower) : ordered_json(nullptr);
    jp["upper"] = p.upper ? ordered_json(*p.upper) : ordered_json(nullptr);
    params.push_back(std::move(jp));
  }
  j["params"] = std::move(params);

  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : j.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ordered_json checkpoint_to_json(const Checkpoint& cp) {
  const TunerState& st = cp.state;
  ordered_json j;
  j["schema_version"] = kCheckpointSchemaVersion;
  j["config_hash"] = cp.config_hash;
  j["method"] = std::string(to_string(st.method));
  j["k"] = st.k;
  j["n"] = st.size();
  j["tau"] = st.tau;
  j["theta"] = vec_json(st.theta);
  j["spreads"] = vec_json(st.spreads);
  if (st.method == Method::Bspsa) {
    ordered_json flat = ordered_json::array();
    for (Eigen::Index r = 0; r < st.precision.rows(); ++r) {
      for (Eigen::Index c = 0; c < st.precision.cols(); ++c) flat.push_back(st.precision(r, c));
    }
    j["precision"] = std::move(flat);
  }
  j["rng_state"] = cp.rng_state;
  return j;
}

Checkpoint checkpoint_from_json(const ordered_json& j) {
  try {
    if (j.at("schema_version").get<int>() != kCheckpointSchemaVersion) {
      throw std::invalid_argument("unsupported checkpoint schema version " +
                                  j.at("schema_version").dump());
    }
    Checkpoint cp;
    cp.config_hash = j.at("config_hash").get<std::string>();
    TunerState& st = cp.state;
    st.method = parse_method(j.at("method").get<std::string>());
    st.k = j.at("k").get<long>();
    st.tau = j.at("tau").get<double>();
    const auto n = j.at("n").get<Eigen::Index>();
    if (n < 1 || st.k < 1) throw std::invalid_argument("checkpoint has invalid n or k");
    st.theta = vec_from(j.at("theta"), n, "theta");
    st.spreads = vec_from(j.at("spreads"), n, "spreads");
    if (st.method == Method::Bspsa) {
      const Vectord flat = vec_from(j.at("precision"), n * n, "precision");
      st.precision = Eigen::Map<const PrecisionMatrixd>(flat.data(), n, n);
    }
    cp.rng_state = j.at("rng_state").get<std::string>();
    return cp;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed checkpoint: ") + e.what());
  }
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write checkpoint " + tmp.string());
    out << checkpoint_to_json(checkpoint).dump(1) << '\n';
    out.flush();
    if (!out) throw std::runtime_error("failed writing checkpoint " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("no checkpoint at " + path.string());
  ordered_json j;
  try {
    j = ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument("checkpoint " + path.string() + " is not valid JSON: " + e.what());
  }
  return checkpoint_from_json(j);
}

TunerState run_tuning_session(const SessionConfig& config, MatchSource& source, bool resume,
                              const SessionObserver& observer) {
  if (config.n_iterations < 1) throw std::invalid_argument("iterations must be at least 1");
  if (config.checkpoint_every < 1) throw std::invalid_argument("checkpoint_every must be >= 1");
  const TunerConfig& tuner = config.tuner;
  const std::string hash = config_hash(config);

  TunerState state;
  Rng rng(config.seed);
  if (resume) {
    Checkpoint cp = load_checkpoint(config.checkpoint_path);
    if (cp.config_hash != hash) {
      throw std::invalid_argument("checkpoint " + config.checkpoint_path.string() +
                                  " was written for a different configuration");
    }
    if (cp.state.method != tuner.method || cp.state.size() != tuner.size()) {
      throw std::invalid_argument("checkpoint does not match the configured parameters");
    }
    state = std::move(cp.state);
    rng = Rng::deserialize(cp.rng_state);
  } else {
    state = initial_state(tuner);
  }

  auto checkpoint = [&] { save_checkpoint(config.checkpoint_path, {hash, state, rng.serialize()}); };
  checkpoint();

  while (state.k <= config.n_iterations) {
    const Proposal p = propose(state, tuner.schedules, rng);
    const OracleRequest request =
        make_request(state.k, tuner.params, emit(p.theta_plus, tuner.params),
                     emit(p.theta_minus, tuner.params));
    const MatchOutcome w = source.play(request);
    state = update(tuner, state, p.draw, w);
    if (observer) observer(state);
    if ((state.k - 1) % config.checkpoint_every == 0 || state.k > config.n_iterations) checkpoint();
  }
  return state;
}

}  // namespace bspsa
