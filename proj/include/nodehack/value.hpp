#pragma once

#include <cmath>
#include <compare>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>

#include <nlohmann/json.hpp>

#include "nodehack/error.hpp"

namespace nodehack {

using json = nlohmann::json;

/// Closed set of runtime types. Boolean and Number never convert into each other.
enum class DataType { Boolean, Number, Text, Color, EntityRef, InstanceRef, ClassRef, Pulse };

enum class Color { Red, Green, Blue, Yellow };

struct EntityRef {
  std::string id;
  auto operator<=>(const EntityRef&) const = default;
};

struct InstanceRef {
  std::string id;
  auto operator<=>(const InstanceRef&) const = default;
};

struct ClassRef {
  std::string id;
  auto operator<=>(const ClassRef&) const = default;
};

struct Pulse {
  auto operator<=>(const Pulse&) const = default;
};

/// Tagged runtime value; the alternative index mirrors `DataType`.
using Value = std::variant<bool, double, std::string, Color, EntityRef, InstanceRef, ClassRef, Pulse>;

inline DataType type_of(const Value& v) { return static_cast<DataType>(v.index()); }

inline std::string_view to_string(DataType t) {
  switch (t) {
    case DataType::Boolean: return "Boolean";
    case DataType::Number: return "Number";
    case DataType::Text: return "Text";
    case DataType::Color: return "Color";
    case DataType::EntityRef: return "EntityRef";
    case DataType::InstanceRef: return "InstanceRef";
    case DataType::ClassRef: return "ClassRef";
    case DataType::Pulse: return "Pulse";
  }
  return "?";
}

inline std::optional<DataType> parse_data_type(std::string_view s) {
  for (int i = 0; i <= static_cast<int>(DataType::Pulse); ++i) {
    auto t = static_cast<DataType>(i);
    if (to_string(t) == s) return t;
  }
  return std::nullopt;
}

inline std::string_view to_string(Color c) {
  switch (c) {
    case Color::Red: return "red";
    case Color::Green: return "green";
    case Color::Blue: return "blue";
    case Color::Yellow: return "yellow";
  }
  return "?";
}

inline std::optional<Color> parse_color(std::string_view s) {
  if (s == "red") return Color::Red;
  if (s == "green") return Color::Green;
  if (s == "blue") return Color::Blue;
  if (s == "yellow") return Color::Yellow;
  return std::nullopt;
}

inline Value make_bool(bool b) { return Value{std::in_place_index<0>, b}; }
inline Value make_number(double d) { return Value{std::in_place_index<1>, d}; }
inline Value make_text(std::string s) { return Value{std::in_place_index<2>, std::move(s)}; }

/// Numbers must be finite to be stored in a Value.
inline bool is_storable(const Value& v) {
  if (auto* d = std::get_if<double>(&v)) return std::isfinite(*d);
  return true;
}

/// Human-readable rendering used by inspection output.
inline std::string display(const Value& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, bool>) {
          return x ? "true" : "false";
        } else if constexpr (std::is_same_v<T, double>) {
          json j = x;
          return j.dump();
        } else if constexpr (std::is_same_v<T, std::string>) {
          return json(x).dump();
        } else if constexpr (std::is_same_v<T, Color>) {
          return std::string(to_string(x));
        } else if constexpr (std::is_same_v<T, EntityRef>) {
          return "entity:" + x.id;
        } else if constexpr (std::is_same_v<T, InstanceRef>) {
          return "instance:" + x.id;
        } else if constexpr (std::is_same_v<T, ClassRef>) {
          return "class:" + x.id;
        } else {
          return "pulse";
        }
      },
      v);
}

// Canonical document form: {"type": "<DataType>", "value": <payload>}; Pulse has no value.
inline json value_to_json(const Value& v) {
  json j;
  j["type"] = std::string(to_string(type_of(v)));
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, bool> || std::is_same_v<T, double> ||
                      std::is_same_v<T, std::string>) {
          j["value"] = x;
        } else if constexpr (std::is_same_v<T, Color>) {
          j["value"] = std::string(to_string(x));
        } else if constexpr (std::is_same_v<T, Pulse>) {
        } else {
          j["value"] = x.id;
        }
      },
      v);
  return j;
}

inline Value value_from_json(const json& j, const std::string& path) {
  if (!j.is_object()) fail(ErrorCode::ParseError, path + ": value must be an object");
  for (const auto& [k, _] : j.items()) {
    if (k != "type" && k != "value") fail(ErrorCode::ParseError, path + "." + k + ": unknown field");
  }
  if (!j.contains("type") || !j["type"].is_string())
    fail(ErrorCode::ParseError, path + ".type: missing field");
  auto type = parse_data_type(j["type"].get<std::string>());
  if (!type) fail(ErrorCode::ParseError, path + ".type: unknown type " + j["type"].dump());
  if (*type == DataType::Pulse) {
    if (j.contains("value")) fail(ErrorCode::ParseError, path + ".value: Pulse carries no value");
    return Pulse{};
  }
  if (!j.contains("value")) fail(ErrorCode::ParseError, path + ".value: missing field");
  const json& p = j["value"];
  const std::string vpath = path + ".value";
  switch (*type) {
    case DataType::Boolean:
      if (!p.is_boolean()) fail(ErrorCode::ParseError, vpath + ": expected boolean");
      return make_bool(p.get<bool>());
    case DataType::Number: {
      if (!p.is_number()) fail(ErrorCode::ParseError, vpath + ": expected number");
      double d = p.get<double>();
      if (!std::isfinite(d)) fail(ErrorCode::ParseError, vpath + ": number must be finite");
      return make_number(d);
    }
    case DataType::Color: {
      if (!p.is_string()) fail(ErrorCode::ParseError, vpath + ": expected color name");
      auto c = parse_color(p.get<std::string>());
      if (!c) fail(ErrorCode::ParseError, vpath + ": unknown color " + p.dump());
      return *c;
    }
    default:
      break;
  }
  if (!p.is_string()) fail(ErrorCode::ParseError, vpath + ": expected string");
  std::string s = p.get<std::string>();
  switch (*type) {
    case DataType::Text: return make_text(std::move(s));
    case DataType::EntityRef: return EntityRef{std::move(s)};
    case DataType::InstanceRef: return InstanceRef{std::move(s)};
    case DataType::ClassRef: return ClassRef{std::move(s)};
    default: break;
  }
  fail(ErrorCode::ParseError, path + ": unreachable value type");
}

}  // namespace nodehack
