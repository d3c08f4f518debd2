#pragma once

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "nodehack/error.hpp"

namespace nodehack {

using json = nlohmann::json;

inline constexpr int kFormatVersion = 1;

/// Strict reader over one JSON object: unknown keys are rejected and every
/// failure names the offending field path.
class Fields {
 public:
  Fields(const json& j, std::string path, std::initializer_list<std::string_view> allowed)
      : j_(j), path_(std::move(path)) {
    if (!j.is_object()) fail(ErrorCode::ParseError, path_ + ": expected an object");
    for (const auto& [k, _] : j.items()) {
      if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
        fail(ErrorCode::ParseError, at(k) + ": unknown field");
    }
  }

  std::string at(std::string_view key) const { return path_ + "." + std::string(key); }
  const std::string& path() const { return path_; }

  bool has(std::string_view key) const { return j_.contains(std::string(key)); }

  const json& req(std::string_view key) const {
    auto it = j_.find(std::string(key));
    if (it == j_.end()) fail(ErrorCode::ParseError, at(key) + ": missing field");
    return *it;
  }

  std::string str(std::string_view key) const {
    const json& v = req(key);
    if (!v.is_string()) fail(ErrorCode::ParseError, at(key) + ": expected string");
    return v.get<std::string>();
  }

  double num(std::string_view key) const {
    const json& v = req(key);
    if (!v.is_number()) fail(ErrorCode::ParseError, at(key) + ": expected number");
    double d = v.get<double>();
    if (!std::isfinite(d)) fail(ErrorCode::ParseError, at(key) + ": expected finite number");
    return d;
  }

  int integer(std::string_view key) const {
    const json& v = req(key);
    if (!v.is_number_integer()) fail(ErrorCode::ParseError, at(key) + ": expected integer");
    return v.get<int>();
  }

  bool boolean(std::string_view key) const {
    const json& v = req(key);
    if (!v.is_boolean()) fail(ErrorCode::ParseError, at(key) + ": expected boolean");
    return v.get<bool>();
  }

  const json& array(std::string_view key) const {
    const json& v = req(key);
    if (!v.is_array()) fail(ErrorCode::ParseError, at(key) + ": expected array");
    return v;
  }

  void version() const {
    const json& v = req("format_version");
    if (!v.is_number_integer() || v.get<int>() != kFormatVersion)
      fail(ErrorCode::ParseError, at("format_version") + ": unsupported version " + v.dump());
  }

 private:
  const json& j_;
  std::string path_;
};

inline std::string index_path(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

/// Parses text into JSON, mapping syntax errors to ParseError.
inline json parse_json_text(std::string_view text, const std::string& what) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    fail(ErrorCode::ParseError, what + ": " + e.what());
  }
}

/// Canonical text form: sorted keys, two-space indent, trailing newline.
inline std::string canonical_text(const json& j) {
  return j.dump(2, ' ', false, json::error_handler_t::replace) + "\n";
}

/// Single-line form used for trace records and protocol messages.
inline std::string compact_text(const json& j) {
  return j.dump(-1, ' ', false, json::error_handler_t::replace);
}

}  // namespace nodehack
