#include "bspsa/oracle.hpp"

#include <nlohmann/json.hpp>

#include <cmath>

namespace bspsa {

using nlohmann::ordered_json;

namespace {

std::string quote(std::string_view line) {
  constexpr std::size_t kMax = 200;
  std::string shown(line.substr(0, kMax));
  if (line.size() > kMax) shown += "...";
  return "'" + shown + "'";
}

ordered_json values_json(const std::vector<ParamValue>& values) {
  ordered_json obj = ordered_json::object();
  for (const auto& v : values) {
    if (v.integer) {
      obj[v.name] = static_cast<long long>(std::llround(v.value));
    } else {
      obj[v.name] = v.value;
    }
  }
  return obj;
}

std::vector<ParamValue> values_from_json(const ordered_json& obj, const char* field) {
  if (!obj.is_object()) throw ProtocolError(std::string(field) + " must be an object");
  std::vector<ParamValue> out;
  for (const auto& [name, v] : obj.items()) {
    if (v.is_number_integer()) {
      out.push_back({name, static_cast<double>(v.get<long long>()), true});
    } else if (v.is_number_float()) {
      out.push_back({name, v.get<double>(), false});
    } else {
      throw ProtocolError(std::string(field) + "." + name + " must be a number");
    }
  }
  return out;
}

ordered_json parse_line(std::string_view line) {
  if (!is_valid_utf8(line)) throw ProtocolError("line is not valid UTF-8: " + quote(line));
  try {
    return ordered_json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw ProtocolError("malformed JSON line " + quote(line) + ": " + e.what());
  }
}

}  // namespace

bool is_valid_utf8(std::string_view bytes) noexcept {
  std::size_t i = 0;
  const std::size_t n = bytes.size();
  while (i < n) {
    const auto b = static_cast<unsigned char>(bytes[i]);
    std::size_t len = 0;
    char32_t cp = 0;
    if (b < 0x80) {
      ++i;
      continue;
    } else if ((b & 0xE0) == 0xC0) {
      len = 2;
      cp = b & 0x1F;
    } else if ((b & 0xF0) == 0xE0) {
      len = 3;
      cp = b & 0x0F;
    } else if ((b & 0xF8) == 0xF0) {
      len = 4;
      cp = b & 0x07;
    } else {
      return false;
    }
    if (i + len > n) return false;
    for (std::size_t j = 1; j < len; ++j) {
      const auto c = static_cast<unsigned char>(bytes[i + j]);
      if ((c & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (c & 0x3F);
    }
    // Overlong forms, surrogates and values past U+10FFFF.
    if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000) ||
        (cp >= 0xD800 && cp <= 0xDFFF) || cp > 0x10FFFF) {
      return false;
    }
    i += len;
  }
  return true;
}

OracleRequest make_request(long id, std::span<const ParamSpec> specs, const Vectord& plus,
                           const Vectord& minus) {
  OracleRequest req;
  req.id = id;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const auto idx = static_cast<Eigen::Index>(i);
    req.theta_plus.push_back({specs[i].name, plus(idx), specs[i].integer_valued});
    req.theta_minus.push_back({specs[i].name, minus(idx), specs[i].integer_valued});
  }
  return req;
}

std::string encode_request(const OracleRequest& request) {
  ordered_json j;
  j["id"] = request.id;
  j["theta_plus"] = values_json(request.theta_plus);
  j["theta_minus"] = values_json(request.theta_minus);
  return j.dump();
}

OracleRequest decode_request(std::string_view line) {
  const ordered_json j = parse_line(line);
  if (!j.is_object() || !j.contains("id") || !j["id"].is_number_integer() ||
      !j.contains("theta_plus") || !j.contains("theta_minus")) {
    throw ProtocolError("request needs integer \"id\", \"theta_plus\" and \"theta_minus\": " +
                        quote(line));
  }
  OracleRequest req;
  req.id = j["id"].get<long>();
  req.theta_plus = values_from_json(j["theta_plus"], "theta_plus");
  req.theta_minus = values_from_json(j["theta_minus"], "theta_minus");
  return req;
}

std::string encode_response(const OracleResponse& response) {
  ordered_json j;
  j["id"] = response.id;
  j["result"] = response.result;
  return j.dump();
}

OracleResponse decode_response(std::string_view line) {
  const ordered_json j = parse_line(line);
  if (!j.is_object()) throw ProtocolError("response is not a JSON object: " + quote(line));
  for (const auto& [key, _] : j.items()) {
    if (key != "id" && key != "result") {
      throw ProtocolError("unexpected field \"" + key + "\" in response " + quote(line));
    }
  }
  if (!j.contains("id") || !j["id"].is_number_integer()) {
    throw ProtocolError("response needs an integer \"id\": " + quote(line));
  }
  if (!j.contains("result") || !j["result"].is_number_integer()) {
    throw ProtocolError("response needs an integer \"result\": " + quote(line));
  }
  const auto result = j["result"].get<long long>();
  if (result < -2 || result > 2) {
    throw ProtocolError("result " + std::to_string(result) + " outside [-2, 2] in " + quote(line));
  }
  return {j["id"].get<long>(), static_cast<int>(result)};
}

MatchOutcome accept_response(std::string_view line, long expected_id) {
  const OracleResponse r = decode_response(line);
  if (r.id != expected_id) {
    throw ProtocolError("response id " + std::to_string(r.id) + " does not match request " +
                        std::to_string(expected_id) + ": " + quote(line));
  }
  return MatchOutcome(r.result);
}

}  // namespace bspsa
