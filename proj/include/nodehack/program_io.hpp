#pragma once

/// @file program_io.hpp
/// @brief Canonical JSON form of programs.
///
/// Schema: {"format_version": 1, "nodes": [{id, kind, params, position, locked}],
/// "tubes": [{"from": [node, port], "to": [node, port]}]}. Nodes are emitted in
/// id order and tubes in (from, to) order, so equal programs serialize to
/// identical bytes. Ports are not stored; they are recomputed from the node
/// kind and a SignatureTable on load.

#include <string>

#include "nodehack/graph.hpp"
#include "nodehack/json_util.hpp"
#include "nodehack/value.hpp"

namespace nodehack {

namespace detail {

inline constexpr std::string_view kArithNames[] = {"add", "sub", "mul", "div"};
inline constexpr std::string_view kLogicNames[] = {"and", "or", "xor"};
inline constexpr std::string_view kCompareNames[] = {"eq", "neq", "lt", "leq", "gt", "geq"};
inline constexpr std::string_view kEventNames[] = {"OnTick", "OnPressed", "OnEnterColumn"};

template <typename Enum, std::size_t N>
Enum parse_enum(const std::string_view (&names)[N], const std::string& s, const std::string& path) {
  for (std::size_t i = 0; i < N; ++i)
    if (names[i] == s) return static_cast<Enum>(i);
  fail(ErrorCode::ParseError, path + ": unknown value '" + s + "'");
}

}  // namespace detail

inline std::string_view to_string(ArithOp op) { return detail::kArithNames[static_cast<int>(op)]; }
inline std::string_view to_string(LogicOp op) { return detail::kLogicNames[static_cast<int>(op)]; }
inline std::string_view to_string(CompareOp op) { return detail::kCompareNames[static_cast<int>(op)]; }
inline std::string_view to_string(EventKind e) { return detail::kEventNames[static_cast<int>(e)]; }

inline json kind_params_to_json(const NodeKind& k) {
  json p = json::object();
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, kind::Constant>) {
          p["value"] = value_to_json(n.value);
        } else if constexpr (std::is_same_v<T, kind::Arithmetic> || std::is_same_v<T, kind::Logical> ||
                             std::is_same_v<T, kind::Compare>) {
          p["op"] = std::string(to_string(n.op));
        } else if constexpr (std::is_same_v<T, kind::EventHandler>) {
          p["event"] = std::string(to_string(n.event));
          if (n.event != EventKind::OnTick) p["entity"] = n.entity;
        } else if constexpr (std::is_same_v<T, kind::FunctionCall>) {
          p["function"] = n.function;
        } else if constexpr (std::is_same_v<T, kind::MethodCall>) {
          p["class"] = n.class_id;
          p["method"] = n.method;
        } else if constexpr (std::is_same_v<T, kind::ConstructorCall> || std::is_same_v<T, kind::ClassNode>) {
          p["class"] = n.class_id;
        } else if constexpr (std::is_same_v<T, kind::Entity>) {
          p["entity"] = n.entity;
        }
      },
      k);
  return p;
}

inline NodeKind kind_from_json(const std::string& name, const json& params, const std::string& path) {
  using detail::parse_enum;
  if (name == "Constant") {
    Fields f(params, path, {"value"});
    return kind::Constant{value_from_json(f.req("value"), f.at("value"))};
  }
  if (name == "Arithmetic") {
    Fields f(params, path, {"op"});
    return kind::Arithmetic{parse_enum<ArithOp>(detail::kArithNames, f.str("op"), f.at("op"))};
  }
  if (name == "Logical") {
    Fields f(params, path, {"op"});
    return kind::Logical{parse_enum<LogicOp>(detail::kLogicNames, f.str("op"), f.at("op"))};
  }
  if (name == "Compare") {
    Fields f(params, path, {"op"});
    return kind::Compare{parse_enum<CompareOp>(detail::kCompareNames, f.str("op"), f.at("op"))};
  }
  if (name == "Not") {
    Fields f(params, path, {});
    return kind::Not{};
  }
  if (name == "Conditional") {
    Fields f(params, path, {});
    return kind::Conditional{};
  }
  if (name == "EventHandler") {
    Fields f(params, path, {"event", "entity"});
    auto ev = parse_enum<EventKind>(detail::kEventNames, f.str("event"), f.at("event"));
    if (ev == EventKind::OnTick) {
      if (f.has("entity")) fail(ErrorCode::ParseError, f.at("entity") + ": OnTick takes no entity");
      return kind::EventHandler{ev, {}};
    }
    return kind::EventHandler{ev, f.str("entity")};
  }
  if (name == "FunctionCall") {
    Fields f(params, path, {"function"});
    return kind::FunctionCall{f.str("function")};
  }
  if (name == "MethodCall") {
    Fields f(params, path, {"class", "method"});
    return kind::MethodCall{f.str("class"), f.str("method")};
  }
  if (name == "ConstructorCall") {
    Fields f(params, path, {"class"});
    return kind::ConstructorCall{f.str("class")};
  }
  if (name == "ClassNode") {
    Fields f(params, path, {"class"});
    return kind::ClassNode{f.str("class")};
  }
  if (name == "Entity") {
    Fields f(params, path, {"entity"});
    return kind::Entity{f.str("entity")};
  }
  fail(ErrorCode::ParseError, path + ": unknown node kind '" + name + "'");
}

inline json port_ref_to_json(const PortRef& r) { return json::array({r.node, r.port}); }

inline PortRef port_ref_from_json(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_string() || !j[1].is_string())
    fail(ErrorCode::ParseError, path + ": expected [node, port]");
  return PortRef{j[0].get<std::string>(), j[1].get<std::string>()};
}

inline json node_to_json(const Node& n) {
  return json{{"id", n.id},
              {"kind", std::string(kind_name(n.kind))},
              {"params", kind_params_to_json(n.kind)},
              {"position", json::array({n.position.x, n.position.y})},
              {"locked", n.locked}};
}

inline Node node_from_json(const json& j, const std::string& path, const SignatureTable& sigs) {
  Fields f(j, path, {"id", "kind", "params", "position", "locked"});
  Node node;
  node.id = f.str("id");
  node.kind = kind_from_json(f.str("kind"), f.req("params"), f.at("params"));
  const json& pos = f.req("position");
  if (!pos.is_array() || pos.size() != 2 || !pos[0].is_number() || !pos[1].is_number())
    fail(ErrorCode::ParseError, f.at("position") + ": expected [x, y]");
  node.position = {pos[0].get<double>(), pos[1].get<double>()};
  if (!std::isfinite(node.position.x) || !std::isfinite(node.position.y))
    fail(ErrorCode::ParseError, f.at("position") + ": expected finite coordinates");
  node.locked = f.boolean("locked");
  auto ports = signature_of(node.kind, sigs);
  if (!ports)
    fail(ErrorCode::ParseError, f.at("params") + ": no signature for " + std::string(kind_name(node.kind)) +
                                    " node '" + node.id + "'");
  node.ports = std::move(*ports);
  return node;
}

inline json tube_to_json(const Tube& t) {
  return json{{"from", port_ref_to_json(t.from)}, {"to", port_ref_to_json(t.to)}};
}

inline Tube tube_from_json(const json& j, const std::string& path) {
  Fields f(j, path, {"from", "to"});
  return Tube{port_ref_from_json(f.req("from"), f.at("from")), port_ref_from_json(f.req("to"), f.at("to"))};
}

/// Node and tube arrays without the version field (embedded form).
inline json program_body_to_json(const Program& program) {
  json nodes = json::array();
  for (const auto& [_, n] : program.nodes) nodes.push_back(node_to_json(n));
  json tubes = json::array();
  for (const auto& t : program.tubes) tubes.push_back(tube_to_json(t));
  return json{{"nodes", std::move(nodes)}, {"tubes", std::move(tubes)}};
}

/// Adds parsed nodes and tubes to `program` through the checked edit operations.
inline Program program_body_from_json(Program program, const json& nodes, const json& tubes,
                                      const std::string& path, const SignatureTable& sigs) {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    std::string p = index_path(path + ".nodes", i);
    Node n = node_from_json(nodes[i], p, sigs);
    try {
      program = add_node(std::move(program), std::move(n));
    } catch (const Error& e) {
      fail(ErrorCode::ParseError, p + ": " + e.what());
    }
  }
  for (std::size_t i = 0; i < tubes.size(); ++i) {
    std::string p = index_path(path + ".tubes", i);
    Tube t = tube_from_json(tubes[i], p);
    try {
      program = connect(std::move(program), t.from, t.to);
    } catch (const Error& e) {
      fail(ErrorCode::ParseError, p + ": " + e.what());
    }
  }
  return program;
}

inline json serialize_program(const Program& program) {
  json j = program_body_to_json(program);
  j["format_version"] = kFormatVersion;
  return j;
}

inline Program deserialize_program(const json& j, const SignatureTable& sigs = {}) {
  Fields f(j, "program", {"format_version", "nodes", "tubes"});
  f.version();
  return program_body_from_json(Program{}, f.array("nodes"), f.array("tubes"), "program", sigs);
}

inline Program deserialize_program_text(std::string_view text, const SignatureTable& sigs = {}) {
  return deserialize_program(parse_json_text(text, "program"), sigs);
}

}  // namespace nodehack
