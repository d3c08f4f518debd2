#pragma once

/// @file edits.hpp
/// @brief Player edits: the only way a program changes during play.
///
/// Edit-list document: {"format_version": 1, "edits": [{"op": ..., "args": {...}}]}
///   connect      args {"from": [node, port], "to": [node, port]}
///   disconnect   args {"to": [node, port]}
///   set_constant args {"node": id, "value": {"type": ..., "value": ...}}
///   delete_node  args {"node": id}   (parsed so it can be refused)

#include <set>
#include <string>
#include <vector>

#include "nodehack/graph.hpp"
#include "nodehack/json_util.hpp"
#include "nodehack/program_io.hpp"

namespace nodehack {

enum class EditOp { Connect, Disconnect, SetConstant, DeleteNode };

inline constexpr std::string_view kEditOpNames[] = {"connect", "disconnect", "set_constant", "delete_node"};

inline std::string_view to_string(EditOp op) { return kEditOpNames[static_cast<int>(op)]; }

inline EditOp parse_edit_op(const std::string& s, const std::string& path) {
  return detail::parse_enum<EditOp>(kEditOpNames, s, path);
}

struct Edit {
  EditOp op = EditOp::Connect;
  PortRef from;       // connect
  PortRef to;         // connect, disconnect
  std::string node;   // set_constant, delete_node
  Value value{false};  // set_constant
  bool operator==(const Edit&) const = default;
};

inline Edit connect_edit(PortRef from, PortRef to) { return Edit{EditOp::Connect, std::move(from), std::move(to), {}, false}; }
inline Edit disconnect_edit(PortRef to) { return Edit{EditOp::Disconnect, {}, std::move(to), {}, false}; }
inline Edit set_constant_edit(std::string node, Value v) {
  return Edit{EditOp::SetConstant, {}, {}, std::move(node), std::move(v)};
}
inline Edit delete_node_edit(std::string node) { return Edit{EditOp::DeleteNode, {}, {}, std::move(node), false}; }

inline json edit_to_json(const Edit& e) {
  json args;
  switch (e.op) {
    case EditOp::Connect: args = {{"from", port_ref_to_json(e.from)}, {"to", port_ref_to_json(e.to)}}; break;
    case EditOp::Disconnect: args = {{"to", port_ref_to_json(e.to)}}; break;
    case EditOp::SetConstant: args = {{"node", e.node}, {"value", value_to_json(e.value)}}; break;
    case EditOp::DeleteNode: args = {{"node", e.node}}; break;
  }
  return json{{"op", std::string(to_string(e.op))}, {"args", std::move(args)}};
}

inline Edit edit_from_json(const json& j, const std::string& path) {
  Fields f(j, path, {"op", "args"});
  Edit e;
  e.op = parse_edit_op(f.str("op"), f.at("op"));
  std::string ap = f.at("args");
  const json& args = f.req("args");
  switch (e.op) {
    case EditOp::Connect: {
      Fields a(args, ap, {"from", "to"});
      e.from = port_ref_from_json(a.req("from"), a.at("from"));
      e.to = port_ref_from_json(a.req("to"), a.at("to"));
      break;
    }
    case EditOp::Disconnect: {
      Fields a(args, ap, {"to"});
      e.to = port_ref_from_json(a.req("to"), a.at("to"));
      break;
    }
    case EditOp::SetConstant: {
      Fields a(args, ap, {"node", "value"});
      e.node = a.str("node");
      e.value = value_from_json(a.req("value"), a.at("value"));
      break;
    }
    case EditOp::DeleteNode: {
      Fields a(args, ap, {"node"});
      e.node = a.str("node");
      break;
    }
  }
  return e;
}

inline json edits_to_json(const std::vector<Edit>& edits) {
  json arr = json::array();
  for (const auto& e : edits) arr.push_back(edit_to_json(e));
  return json{{"format_version", kFormatVersion}, {"edits", std::move(arr)}};
}

inline std::vector<Edit> edits_from_json(const json& j, const std::string& path = "edits") {
  Fields f(j, path, {"format_version", "edits"});
  f.version();
  const json& arr = f.array("edits");
  std::vector<Edit> out;
  for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(edit_from_json(arr[i], index_path(f.at("edits"), i)));
  return out;
}

/// Applies one edit under a puzzle's rules. Designer-embedded (locked)
/// structure is off limits: locked constants cannot be changed, nodes cannot
/// be deleted, and a tube whose both ends are locked cannot be added or removed.
inline Program apply_player_edit(Program program, const Edit& e, const std::set<EditOp>& allowed) {
  if (e.op == EditOp::DeleteNode) fail(ErrorCode::ForbiddenEdit, "nodes cannot be deleted during play");
  if (!allowed.count(e.op))
    fail(ErrorCode::ForbiddenEdit, "edit '" + std::string(to_string(e.op)) + "' is not allowed in this puzzle");
  auto locked = [&](const std::string& id) {
    const Node* n = program.find(id);
    return n && n->locked;
  };
  switch (e.op) {
    case EditOp::Connect:
      if (locked(e.from.node) && locked(e.to.node))
        fail(ErrorCode::ForbiddenEdit, "cannot wire two designer-embedded nodes together");
      return connect(std::move(program), e.from, e.to);
    case EditOp::Disconnect:
      if (const Tube* t = program.incoming(e.to); t && locked(t->from.node) && locked(t->to.node))
        fail(ErrorCode::ForbiddenEdit, "cannot remove a designer-embedded tube");
      return disconnect(std::move(program), e.to);
    case EditOp::SetConstant:
      if (locked(e.node)) fail(ErrorCode::ForbiddenEdit, "node '" + e.node + "' is designer-embedded");
      return set_constant(std::move(program), e.node, e.value);
    case EditOp::DeleteNode: break;
  }
  return program;
}

/// Expresses `target` as edits against `base`: disconnects, then constant
/// changes, then connects. Differences no edit can express are refused.
inline std::vector<Edit> diff_programs(const Program& base, const Program& target) {
  std::vector<Edit> out;
  for (const auto& [id, n] : base.nodes)
    if (!target.nodes.count(id)) fail(ErrorCode::ForbiddenEdit, "node '" + id + "' was removed");
  for (const auto& [id, n] : target.nodes) {
    auto it = base.nodes.find(id);
    if (it == base.nodes.end()) fail(ErrorCode::ForbiddenEdit, "node '" + id + "' is not part of the puzzle");
    if (it->second.locked != n.locked) fail(ErrorCode::ForbiddenEdit, "node '" + id + "' changed its locked flag");
  }
  for (const auto& t : base.tubes)
    if (!target.tubes.count(t)) out.push_back(disconnect_edit(t.to));
  for (const auto& [id, n] : target.nodes) {
    const Node& b = base.nodes.at(id);
    if (n.kind == b.kind) continue;
    auto* c = std::get_if<kind::Constant>(&n.kind);
    if (!c || !std::holds_alternative<kind::Constant>(b.kind))
      fail(ErrorCode::ForbiddenEdit, "node '" + id + "' changed kind or parameters");
    out.push_back(set_constant_edit(id, c->value));
  }
  for (const auto& t : target.tubes)
    if (!base.tubes.count(t)) out.push_back(connect_edit(t.from, t.to));
  return out;
}

}  // namespace nodehack
