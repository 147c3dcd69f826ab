#pragma once

#include "bspsa/optimizers.hpp"

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bspsa {

/// The match source answered something that violates the line protocol.
class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The match source died, closed its output or timed out.
class OracleFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ParamValue {
  std::string name;
  double value = 0.0;
  bool integer = false;  ///< serialized as a JSON integer

  friend bool operator==(const ParamValue&, const ParamValue&) = default;
};

/// One two-game match to play: E1 uses theta_plus, E2 uses theta_minus.
struct OracleRequest {
  long id = 0;
  std::vector<ParamValue> theta_plus;
  std::vector<ParamValue> theta_minus;

  friend bool operator==(const OracleRequest&, const OracleRequest&) = default;
};

struct OracleResponse {
  long id = 0;
  int result = 0;
};

/// Builds the request for iteration `id` from emitted parameter vectors.
OracleRequest make_request(long id, std::span<const ParamSpec> specs, const Vectord& plus,
                           const Vectord& minus);

/// Single line, no trailing newline:
/// {"id":7,"theta_plus":{"a":3,"b":0.5},"theta_minus":{"a":1,"b":-0.5}}
std::string encode_request(const OracleRequest& request);
OracleRequest decode_request(std::string_view line);

/// {"id":7,"result":-1}
std::string encode_response(const OracleResponse& response);

/// Parses and range-checks a response line. Throws ProtocolError citing the line.
OracleResponse decode_response(std::string_view line);

/// decode_response plus the id check against the outstanding request.
MatchOutcome accept_response(std::string_view line, long expected_id);

bool is_valid_utf8(std::string_view bytes) noexcept;

}  // namespace bspsa
