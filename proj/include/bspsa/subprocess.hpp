#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>
#include <sys/types.h>

namespace bspsa {

/// Child process run through /bin/sh with line-oriented stdin/stdout pipes.
/// Stderr is inherited. Destruction closes stdin and reaps the child,
/// terminating it if it does not exit on its own.
class Subprocess {
 public:
  explicit Subprocess(const std::string& command);
  ~Subprocess();

  Subprocess(const Subprocess&) = delete;
  Subprocess& operator=(const Subprocess&) = delete;

  /// Writes `line` plus '\n'. Throws OracleFailure if the pipe is closed.
  void write_line(std::string_view line);

  /// Next line without its terminator; nullopt at end of stream. A zero
  /// timeout waits forever. Throws OracleFailure on timeout.
  std::optional<std::string> read_line(std::chrono::milliseconds timeout);

  /// Closes stdin and waits for exit. Returns the exit status, or 128 + signal.
  int close_and_wait(std::chrono::milliseconds grace = std::chrono::milliseconds(2000));

  pid_t pid() const noexcept { return pid_; }

 private:
  pid_t pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
  bool eof_ = false;
  std::optional<int> status_;
};

}  // namespace bspsa
