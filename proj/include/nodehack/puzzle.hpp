#pragma once

/// @file puzzle.hpp
/// @brief Puzzle documents: initial world, template program, palette, rules.
///
/// Schema:
///   {"format_version": 1, "id": n, "title": ..., "prose": ...,
///    "world": {...}, "template": {"nodes": [...], "tubes": [...]},
///    "palette": [node...], "allowed_edits": ["connect", ...],
///    "script": [{"tick": t, "action": "press"|"release", "button": id}],
///    "win": expr, "fail": expr|null, "tick_limit": n}
///
/// Palette nodes are spare parts the player may wire; they join the template
/// in the session program and must be unlocked.

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "nodehack/edits.hpp"
#include "nodehack/program_io.hpp"
#include "nodehack/win.hpp"
#include "nodehack/world_io.hpp"

namespace nodehack {

inline constexpr int kDefaultTickLimit = 200;
inline constexpr int kPuzzleCount = 17;

struct PuzzleSpec {
  int id = 0;
  std::string title;
  std::string prose;
  World world;
  Program template_program;
  std::vector<Node> palette;
  std::set<EditOp> allowed_edits;
  std::vector<ScriptOp> script;
  json win;
  json fail;  // null when the puzzle has no explicit failure condition
  int tick_limit = kDefaultTickLimit;

  SignatureTable signatures() const { return world_signatures(world); }

  /// Template plus palette: the program a session starts from.
  Program initial_program() const {
    Program p = template_program;
    for (const auto& n : palette) p = add_node(std::move(p), n);
    return p;
  }
};

inline json script_op_to_json(const ScriptOp& op) {
  return json{{"tick", op.tick}, {"action", op.action == ScriptAction::Press ? "press" : "release"}, {"button", op.button}};
}

inline ScriptOp script_op_from_json(const json& j, const std::string& path) {
  Fields f(j, path, {"tick", "action", "button"});
  ScriptOp op;
  op.tick = f.integer("tick");
  std::string a = f.str("action");
  if (a != "press" && a != "release") fail(ErrorCode::ParseError, f.at("action") + ": expected press or release");
  op.action = a == "press" ? ScriptAction::Press : ScriptAction::Release;
  op.button = f.str("button");
  return op;
}

inline json puzzle_to_json(const PuzzleSpec& s) {
  json palette = json::array();
  for (const auto& n : s.palette) palette.push_back(node_to_json(n));
  json allowed = json::array();
  for (EditOp op : s.allowed_edits) allowed.push_back(std::string(to_string(op)));
  json script = json::array();
  for (const auto& op : s.script) script.push_back(script_op_to_json(op));
  return json{{"format_version", kFormatVersion},
              {"id", s.id},
              {"title", s.title},
              {"prose", s.prose},
              {"world", world_to_json(s.world)},
              {"template", program_body_to_json(s.template_program)},
              {"palette", std::move(palette)},
              {"allowed_edits", std::move(allowed)},
              {"script", std::move(script)},
              {"win", s.win},
              {"fail", s.fail},
              {"tick_limit", s.tick_limit}};
}

/// Parses and structurally validates a puzzle document. Schema problems are
/// ParseError; documents that parse but break puzzle rules are CorruptSpec.
inline PuzzleSpec puzzle_from_json(const json& j, const std::string& path = "puzzle") {
  Fields f(j, path,
           {"format_version", "id", "title", "prose", "world", "template", "palette", "allowed_edits", "script", "win",
            "fail", "tick_limit"});
  f.version();
  PuzzleSpec s;
  s.id = f.integer("id");
  s.title = f.str("title");
  s.prose = f.str("prose");
  s.world = world_from_json(f.req("world"), f.at("world"));
  SignatureTable sigs = s.signatures();

  Fields t(f.req("template"), f.at("template"), {"nodes", "tubes"});
  s.template_program = program_body_from_json(Program{}, t.array("nodes"), t.array("tubes"), f.at("template"), sigs);

  const json& palette = f.array("palette");
  for (std::size_t i = 0; i < palette.size(); ++i) s.palette.push_back(node_from_json(palette[i], index_path(f.at("palette"), i), sigs));

  const json& allowed = f.array("allowed_edits");
  for (std::size_t i = 0; i < allowed.size(); ++i) {
    std::string p = index_path(f.at("allowed_edits"), i);
    if (!allowed[i].is_string()) fail(ErrorCode::ParseError, p + ": expected string");
    s.allowed_edits.insert(parse_edit_op(allowed[i].get<std::string>(), p));
  }
  if (f.has("script")) {
    const json& script = f.array("script");
    for (std::size_t i = 0; i < script.size(); ++i) s.script.push_back(script_op_from_json(script[i], index_path(f.at("script"), i)));
  }
  s.win = f.req("win");
  s.fail = f.has("fail") ? f.req("fail") : json(nullptr);
  if (f.has("tick_limit")) s.tick_limit = f.integer("tick_limit");

  auto corrupt = [&](const std::string& why) { fail(ErrorCode::CorruptSpec, path + ": " + why); };
  if (s.id < 1 || s.id > kPuzzleCount) corrupt("id must be in 1.." + std::to_string(kPuzzleCount));
  if (s.tick_limit < 1) corrupt("tick_limit must be positive");
  if (s.allowed_edits.count(EditOp::DeleteNode)) corrupt("delete_node cannot be an allowed edit");
  validate_world(s.world);
  for (const auto& n : s.palette)
    if (n.locked) corrupt("palette node '" + n.id + "' must be unlocked");
  try {
    s.initial_program();
  } catch (const Error& e) {
    corrupt(std::string("palette clashes with template: ") + e.what());
  }
  for (const auto& op : s.script)
    if (!s.world.get<Button>(op.button)) corrupt("script names unknown button '" + op.button + "'");
  win::validate(s.win, s.world, f.at("win"));
  if (!s.fail.is_null()) win::validate(s.fail, s.world, f.at("fail"));
  return s;
}

inline PuzzleSpec puzzle_from_text(std::string_view text, const std::string& what = "puzzle") {
  return puzzle_from_json(parse_json_text(text, what), what);
}

}  // namespace nodehack
