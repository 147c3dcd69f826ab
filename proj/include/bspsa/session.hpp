#pragma once

#include "bspsa/optimizers.hpp"
#include "bspsa/oracle.hpp"
#include "bspsa/rng.hpp"
#include "bspsa/subprocess.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <string>

namespace bspsa {

/// Plays one two-game match per request, strictly one at a time.
class MatchSource {
 public:
  virtual ~MatchSource() = default;
  virtual MatchOutcome play(const OracleRequest& request) = 0;
};

/// MatchSource backed by a child process speaking the NDJSON protocol.
class SubprocessOracle : public MatchSource {
 public:
  explicit SubprocessOracle(const std::string& command,
                            std::chrono::milliseconds timeout = std::chrono::milliseconds(0));
  MatchOutcome play(const OracleRequest& request) override;

 private:
  Subprocess process_;
  std::chrono::milliseconds timeout_;
};

struct SessionConfig {
  TunerConfig tuner;
  long n_iterations = 0;
  std::uint64_t seed = 1;
  std::filesystem::path checkpoint_path;
  long checkpoint_every = 100;
};

inline constexpr int kCheckpointSchemaVersion = 1;

struct Checkpoint {
  std::string config_hash;
  TunerState state;
  std::string rng_state;
};

/// Hex FNV-1a digest of everything that shapes the trajectory.
std::string config_hash(const SessionConfig& config);

nlohmann::ordered_json checkpoint_to_json(const Checkpoint& checkpoint);
Checkpoint checkpoint_from_json(const nlohmann::ordered_json& j);

/// Writes to a sibling temporary file and renames it over `path`.
void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint);
Checkpoint load_checkpoint(const std::filesystem::path& path);

/// Called after each update with the new state.
using SessionObserver = std::function<void(const TunerState&)>;

/// Runs iterations k..N: propose, ask `source` for the match result, update.
/// A checkpoint is written before the first match and then every
/// `checkpoint_every` matches and at the end. With `resume` the session
/// continues from the checkpoint, which must match the configuration.
TunerState run_tuning_session(const SessionConfig& config, MatchSource& source, bool resume,
                              const SessionObserver& observer = {});

}  // namespace bspsa
