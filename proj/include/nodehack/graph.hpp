#pragma once

/// @file graph.hpp
/// @brief Program representation: nodes, typed ports, tubes, and structural edits.
///
/// A Program is an immutable value. Every edit (`add_node`, `connect`,
/// `disconnect`, ...) takes a Program and returns a new one, or throws
/// `nodehack::Error` with a typed code. Node signatures for the fixed node
/// kinds are defined here; signatures that depend on the surrounding world
/// (entities, classes, extension functions) are supplied through a
/// `SignatureTable`.

#include <algorithm>
#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "nodehack/error.hpp"
#include "nodehack/value.hpp"

namespace nodehack {

enum class Direction { In, Out };

/// A port type is a DataType or the wildcard Any (nullopt).
using PortType = std::optional<DataType>;

struct PortSpec {
  std::string name;
  Direction direction = Direction::In;
  PortType dtype;
  bool required = true;

  bool operator==(const PortSpec&) const = default;

  bool accepts(DataType t) const { return !dtype || *dtype == t; }
};

inline PortSpec in_port(std::string name, PortType t, bool required = true) {
  return PortSpec{std::move(name), Direction::In, t, required};
}
inline PortSpec out_port(std::string name, PortType t) {
  return PortSpec{std::move(name), Direction::Out, t, false};
}

enum class ArithOp { Add, Sub, Mul, Div };
enum class LogicOp { And, Or, Xor };
enum class CompareOp { Eq, Neq, Lt, Leq, Gt, Geq };
enum class EventKind { OnTick, OnPressed, OnEnterColumn };

namespace kind {

struct Constant {
  Value value;
  bool operator==(const Constant&) const = default;
};
struct Arithmetic {
  ArithOp op;
  bool operator==(const Arithmetic&) const = default;
};
struct Logical {
  LogicOp op;
  bool operator==(const Logical&) const = default;
};
struct Not {
  bool operator==(const Not&) const = default;
};
struct Compare {
  CompareOp op;
  bool operator==(const Compare&) const = default;
};
struct Conditional {
  bool operator==(const Conditional&) const = default;
};
struct EventHandler {
  EventKind event;
  std::string entity;  // empty for OnTick
  bool operator==(const EventHandler&) const = default;
};
struct FunctionCall {
  std::string function;
  bool operator==(const FunctionCall&) const = default;
};
struct MethodCall {
  std::string class_id;
  std::string method;
  bool operator==(const MethodCall&) const = default;
};
struct ConstructorCall {
  std::string class_id;
  bool operator==(const ConstructorCall&) const = default;
};
struct Entity {
  std::string entity;
  bool operator==(const Entity&) const = default;
};
struct ClassNode {
  std::string class_id;
  bool operator==(const ClassNode&) const = default;
};

}  // namespace kind

using NodeKind = std::variant<kind::Constant, kind::Arithmetic, kind::Logical, kind::Not, kind::Compare,
                              kind::Conditional, kind::EventHandler, kind::FunctionCall, kind::MethodCall,
                              kind::ConstructorCall, kind::Entity, kind::ClassNode>;

inline std::string_view kind_name(const NodeKind& k) {
  static constexpr std::string_view names[] = {
      "Constant",    "Arithmetic",   "Logical",      "Not",        "Compare",         "Conditional",
      "EventHandler", "FunctionCall", "MethodCall", "ConstructorCall", "Entity",     "ClassNode"};
  return names[k.index()];
}

/// Entity and class nodes front live world state: their input ports write
/// into the world for the next tick, so data never flows from a world-backed
/// node's inputs to its outputs within one pass.
inline bool is_world_backed(const NodeKind& k) {
  return std::holds_alternative<kind::Entity>(k) || std::holds_alternative<kind::ClassNode>(k);
}

struct Position {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Position&) const = default;
};

struct Node {
  std::string id;
  NodeKind kind;
  std::vector<PortSpec> ports;
  Position position;
  bool locked = false;

  bool operator==(const Node&) const = default;

  const PortSpec* find_port(std::string_view name, Direction dir) const {
    for (const auto& p : ports)
      if (p.name == name && p.direction == dir) return &p;
    return nullptr;
  }
};

struct PortRef {
  std::string node;
  std::string port;
  auto operator<=>(const PortRef&) const = default;
};

struct Tube {
  PortRef from;  // Out port
  PortRef to;    // In port
  auto operator<=>(const Tube&) const = default;
};

enum class TubeState { Normal, Error };

struct Program {
  std::map<std::string, Node> nodes;
  std::set<Tube> tubes;

  bool operator==(const Program&) const = default;

  const Node* find(std::string_view id) const {
    auto it = nodes.find(std::string(id));
    return it == nodes.end() ? nullptr : &it->second;
  }

  /// The tube feeding an input port, if any.
  const Tube* incoming(const PortRef& to) const {
    for (const auto& t : tubes)
      if (t.to == to) return &t;
    return nullptr;
  }

  bool has_tubes(std::string_view node) const {
    return std::any_of(tubes.begin(), tubes.end(),
                       [&](const Tube& t) { return t.from.node == node || t.to.node == node; });
  }
};

// ---------------------------------------------------------------------------
// Signatures

/// Port lists for node kinds whose signature depends on context.
struct SignatureTable {
  std::map<std::string, std::vector<PortSpec>> entities;
  std::map<std::string, std::vector<PortSpec>> functions;
  std::map<std::string, std::vector<PortSpec>> constructors;
  std::map<std::string, std::vector<PortSpec>> classes;
  std::map<std::pair<std::string, std::string>, std::vector<PortSpec>> methods;
};

inline bool has_fixed_signature(const NodeKind& k) { return k.index() <= 6; }

/// Ports for the fixed node kinds (Constant through EventHandler).
inline std::vector<PortSpec> fixed_signature(const NodeKind& k) {
  return std::visit(
      [](const auto& n) -> std::vector<PortSpec> {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, kind::Constant>) {
          return {out_port("out", type_of(n.value))};
        } else if constexpr (std::is_same_v<T, kind::Arithmetic>) {
          return {in_port("a", DataType::Number), in_port("b", DataType::Number),
                  out_port("out", DataType::Number)};
        } else if constexpr (std::is_same_v<T, kind::Logical>) {
          return {in_port("a", DataType::Boolean), in_port("b", DataType::Boolean),
                  out_port("out", DataType::Boolean)};
        } else if constexpr (std::is_same_v<T, kind::Not>) {
          return {in_port("in", DataType::Boolean), out_port("out", DataType::Boolean)};
        } else if constexpr (std::is_same_v<T, kind::Compare>) {
          // eq/neq also compare Text and Color operands of matching type.
          PortType operand = (n.op == CompareOp::Eq || n.op == CompareOp::Neq) ? PortType{} : DataType::Number;
          return {in_port("a", operand), in_port("b", operand), out_port("out", DataType::Boolean)};
        } else if constexpr (std::is_same_v<T, kind::Conditional>) {
          return {in_port("cond", DataType::Boolean), in_port("then", std::nullopt),
                  in_port("else", std::nullopt), out_port("out", std::nullopt)};
        } else if constexpr (std::is_same_v<T, kind::EventHandler>) {
          std::vector<PortSpec> ports{out_port("fired", DataType::Pulse)};
          if (n.event == EventKind::OnEnterColumn) {
            ports.push_back(out_port("column", DataType::Number));
            ports.push_back(out_port("color", DataType::Color));
          }
          return ports;
        } else {
          return {};
        }
      },
      k);
}

/// Full signature for any kind, or nullopt when the table has no entry.
inline std::optional<std::vector<PortSpec>> signature_of(const NodeKind& k, const SignatureTable& table) {
  if (has_fixed_signature(k)) return fixed_signature(k);
  auto lookup = [](const auto& map, const auto& key) -> std::optional<std::vector<PortSpec>> {
    auto it = map.find(key);
    if (it == map.end()) return std::nullopt;
    return it->second;
  };
  if (auto* e = std::get_if<kind::Entity>(&k)) return lookup(table.entities, e->entity);
  if (auto* f = std::get_if<kind::FunctionCall>(&k)) return lookup(table.functions, f->function);
  if (auto* c = std::get_if<kind::ConstructorCall>(&k)) return lookup(table.constructors, c->class_id);
  if (auto* c = std::get_if<kind::ClassNode>(&k)) return lookup(table.classes, c->class_id);
  if (auto* m = std::get_if<kind::MethodCall>(&k)) return lookup(table.methods, std::pair{m->class_id, m->method});
  return std::nullopt;
}

namespace detail {

inline bool has_port(const std::vector<PortSpec>& ports, std::string_view name, Direction dir, PortType t) {
  return std::any_of(ports.begin(), ports.end(), [&](const PortSpec& p) {
    return p.name == name && p.direction == dir && p.dtype == t;
  });
}

}  // namespace detail

/// Structural port check used by add_node. Fixed kinds must match their
/// signature exactly; context-dependent kinds must carry their mandatory ports.
inline void check_ports(const Node& node) {
  std::set<std::pair<Direction, std::string>> seen;
  for (const auto& p : node.ports) {
    if (p.name.empty()) fail(ErrorCode::MalformedPorts, "node '" + node.id + "': empty port name");
    if (!seen.insert({p.direction, p.name}).second)
      fail(ErrorCode::MalformedPorts, "node '" + node.id + "': duplicate port '" + p.name + "'");
    if (p.direction == Direction::Out && p.required)
      fail(ErrorCode::MalformedPorts, "node '" + node.id + "': output port '" + p.name + "' marked required");
  }
  if (has_fixed_signature(node.kind)) {
    if (node.ports != fixed_signature(node.kind))
      fail(ErrorCode::MalformedPorts, "node '" + node.id + "': ports do not match the " +
                                          std::string(kind_name(node.kind)) + " signature");
    if (auto* c = std::get_if<kind::Constant>(&node.kind); c && !is_storable(c->value))
      fail(ErrorCode::MalformedPorts, "node '" + node.id + "': constant must be finite");
    return;
  }
  using detail::has_port;
  bool ok = true;
  if (std::holds_alternative<kind::Entity>(node.kind)) {
    ok = has_port(node.ports, "self", Direction::Out, DataType::EntityRef);
  } else if (std::holds_alternative<kind::ClassNode>(node.kind)) {
    ok = has_port(node.ports, "class", Direction::Out, DataType::ClassRef);
  } else if (std::holds_alternative<kind::ConstructorCall>(node.kind)) {
    ok = has_port(node.ports, "out", Direction::Out, DataType::InstanceRef);
  } else if (std::holds_alternative<kind::MethodCall>(node.kind)) {
    ok = has_port(node.ports, "target", Direction::In, std::nullopt);
  }
  if (!ok)
    fail(ErrorCode::MalformedPorts,
         "node '" + node.id + "': missing mandatory port for " + std::string(kind_name(node.kind)));
}

/// Builds a node whose ports come from the kind's signature.
inline Node make_node(std::string id, NodeKind k, const SignatureTable& table = {}, Position pos = {},
                      bool locked = false) {
  auto ports = signature_of(k, table);
  if (!ports)
    fail(ErrorCode::MalformedPorts, "node '" + id + "': no signature known for " + std::string(kind_name(k)));
  return Node{std::move(id), std::move(k), std::move(*ports), pos, locked};
}

// ---------------------------------------------------------------------------
// Edits

inline Program add_node(Program program, Node node) {
  if (program.nodes.count(node.id)) fail(ErrorCode::DuplicateNodeId, "node '" + node.id + "' already exists");
  if (node.id.empty()) fail(ErrorCode::MalformedPorts, "node id must not be empty");
  check_ports(node);
  std::string id = node.id;
  program.nodes.emplace(std::move(id), std::move(node));
  return program;
}

/// Removes a node and every tube touching it (engine-level API).
inline Program remove_node(Program program, const std::string& id) {
  if (!program.nodes.erase(id)) fail(ErrorCode::UnknownNode, "no node '" + id + "'");
  std::erase_if(program.tubes, [&](const Tube& t) { return t.from.node == id || t.to.node == id; });
  return program;
}

inline Program connect(Program program, const PortRef& from, const PortRef& to) {
  const Node* src = program.find(from.node);
  const Node* dst = program.find(to.node);
  if (!src) fail(ErrorCode::UnknownEndpoint, "no node '" + from.node + "'");
  if (!dst) fail(ErrorCode::UnknownEndpoint, "no node '" + to.node + "'");
  const PortSpec* src_out = src->find_port(from.port, Direction::Out);
  const PortSpec* dst_in = dst->find_port(to.port, Direction::In);
  if (!src_out) {
    if (src->find_port(from.port, Direction::In))
      fail(ErrorCode::DirectionMismatch, from.node + "." + from.port + " is an input port");
    fail(ErrorCode::UnknownEndpoint, "no port '" + from.port + "' on '" + from.node + "'");
  }
  if (!dst_in) {
    if (dst->find_port(to.port, Direction::Out))
      fail(ErrorCode::DirectionMismatch, to.node + "." + to.port + " is an output port");
    fail(ErrorCode::UnknownEndpoint, "no port '" + to.port + "' on '" + to.node + "'");
  }
  if (from.node == to.node && from.port == to.port)
    fail(ErrorCode::DirectionMismatch, "a port cannot be connected to itself");
  if (program.incoming(to))
    fail(ErrorCode::InputOccupied, to.node + "." + to.port + " already has an incoming tube");
  program.tubes.insert(Tube{from, to});
  return program;
}

inline Program disconnect(Program program, const PortRef& to) {
  const Tube* t = program.incoming(to);
  if (!t) fail(ErrorCode::NoSuchTube, "no tube into " + to.node + "." + to.port);
  program.tubes.erase(*t);
  return program;
}

/// Replaces a Constant node's value; the output port type follows the value.
inline Program set_constant(Program program, const std::string& id, Value value) {
  auto it = program.nodes.find(id);
  if (it == program.nodes.end()) fail(ErrorCode::UnknownNode, "no node '" + id + "'");
  if (!std::holds_alternative<kind::Constant>(it->second.kind))
    fail(ErrorCode::MalformedPorts, "node '" + id + "' is not a Constant");
  if (!is_storable(value)) fail(ErrorCode::MalformedPorts, "constant must be finite");
  Node& node = it->second;
  node.kind = kind::Constant{std::move(value)};
  node.ports = fixed_signature(node.kind);
  return program;
}

/// Checks every tube against the current port lists (used after loading documents).
inline void check_tubes(const Program& program) {
  std::set<PortRef> written;
  for (const auto& t : program.tubes) {
    const Node* src = program.find(t.from.node);
    const Node* dst = program.find(t.to.node);
    if (!src || !src->find_port(t.from.port, Direction::Out))
      fail(ErrorCode::UnknownEndpoint, "tube source " + t.from.node + "." + t.from.port + " does not exist");
    if (!dst || !dst->find_port(t.to.port, Direction::In))
      fail(ErrorCode::UnknownEndpoint, "tube target " + t.to.node + "." + t.to.port + " does not exist");
    if (t.from.node == t.to.node && t.from.port == t.to.port)
      fail(ErrorCode::DirectionMismatch, "tube connects " + t.to.node + "." + t.to.port + " to itself");
    if (!written.insert(t.to).second)
      fail(ErrorCode::InputOccupied, t.to.node + "." + t.to.port + " has more than one incoming tube");
  }
}

}  // namespace nodehack
