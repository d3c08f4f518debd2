#pragma once

/// @file pack.hpp
/// @brief The bundled puzzle directory: p<N>.json plus solutions/p<N>.json.

#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "nodehack/session.hpp"

namespace nodehack {

namespace fs = std::filesystem;

inline std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) fail(ErrorCode::IoError, "cannot write " + path.string());
}

/// NODEHACK_PUZZLE_DIR if set, otherwise the given default.
inline fs::path puzzle_root(const fs::path& fallback) {
  if (const char* env = std::getenv("NODEHACK_PUZZLE_DIR"); env && *env) return env;
  return fallback;
}

inline fs::path puzzle_path(const fs::path& root, int id) { return root / ("p" + std::to_string(id) + ".json"); }
inline fs::path solution_path(const fs::path& root, int id) {
  return root / "solutions" / ("p" + std::to_string(id) + ".json");
}

inline std::vector<Edit> load_edits(const fs::path& path) {
  return edits_from_json(parse_json_text(read_text_file(path), path.string()), path.filename().string());
}

/// Checks the two puzzle invariants by running the puzzle: the template alone
/// must not win and the reference solution must.
inline void check_puzzle_invariants(std::shared_ptr<const PuzzleSpec> spec, const std::vector<Edit>& solution) {
  std::string name = "puzzle " + std::to_string(spec->id);
  if (run_session(spec, {}).solved) fail(ErrorCode::CorruptSpec, name + ": template solves itself");
  RunOutcome r;
  try {
    r = run_session(spec, solution);
  } catch (const Error& e) {
    fail(ErrorCode::CorruptSpec, name + ": reference solution is rejected: " + e.what());
  }
  if (!r.solved) fail(ErrorCode::CorruptSpec, name + ": reference solution does not solve it");
}

/// Loads a bundled puzzle. With `check_invariants`, the reference solution
/// must exist and both puzzle invariants are verified.
inline std::shared_ptr<const PuzzleSpec> load_puzzle(const fs::path& root, int id, bool check_invariants = true) {
  if (id < 1 || id > kPuzzleCount) fail(ErrorCode::UnknownPuzzle, "no puzzle " + std::to_string(id));
  fs::path path = puzzle_path(root, id);
  if (!fs::exists(path)) fail(ErrorCode::UnknownPuzzle, "no puzzle " + std::to_string(id) + " in " + root.string());
  std::string text = read_text_file(path);
  auto spec = std::make_shared<const PuzzleSpec>(puzzle_from_text(text, path.filename().string()));
  if (spec->id != id) fail(ErrorCode::CorruptSpec, path.string() + ": document declares id " + std::to_string(spec->id));
  if (check_invariants) {
    fs::path sol = solution_path(root, id);
    if (!fs::exists(sol)) fail(ErrorCode::CorruptSpec, "puzzle " + std::to_string(id) + " has no reference solution");
    check_puzzle_invariants(spec, load_edits(sol));
  }
  return spec;
}

struct PuzzleSummary {
  int id = 0;
  std::string title;
  std::string prose;
};

inline std::vector<PuzzleSummary> list_puzzles(const fs::path& root) {
  std::vector<PuzzleSummary> out;
  for (int id = 1; id <= kPuzzleCount; ++id) {
    if (!fs::exists(puzzle_path(root, id))) continue;
    auto spec = load_puzzle(root, id, false);
    out.push_back({spec->id, spec->title, spec->prose});
  }
  return out;
}

}  // namespace nodehack
