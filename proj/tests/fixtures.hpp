#pragma once

// Shared fixtures: small hand-built worlds, the random lava walker, and a
// helper that runs the command-line tool.

#include <sys/wait.h>

#include <cstdio>
#include <random>
#include <string>

#include "nodehack/pack.hpp"

#ifndef NODEHACK_CLI
#define NODEHACK_CLI "nodehack"
#endif
#ifndef NODEHACK_TEST_PUZZLES
#define NODEHACK_TEST_PUZZLES "puzzles"
#endif
#ifndef NODEHACK_GOLDEN_DIR
#define NODEHACK_GOLDEN_DIR "golden"
#endif

namespace fixtures {

using namespace nodehack;

inline fs::path puzzles() { return NODEHACK_TEST_PUZZLES; }
inline fs::path golden(int id) { return fs::path(NODEHACK_GOLDEN_DIR) / ("p" + std::to_string(id) + ".jsonl"); }

struct CliResult {
  int exit_code = -1;
  std::string out;
};

inline std::string shell_quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return q + "'";
}

// Runs the CLI with the bundled puzzle directory; stdout is captured and
// stderr discarded unless `keep_stderr`.
inline CliResult run_cli(const std::string& args, bool keep_stderr = false) {
  std::string cmd = "NODEHACK_PUZZLE_DIR=" + shell_quote(puzzles().string()) + " " + shell_quote(NODEHACK_CLI) + " " +
                    args + (keep_stderr ? " 2>&1" : " 2>/dev/null");
  CliResult r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  int status = ::pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

inline std::shared_ptr<const PuzzleSpec> puzzle(int id) { return load_puzzle(puzzles(), id, false); }
inline std::vector<Edit> solution(int id) { return load_edits(solution_path(puzzles(), id)); }

// ---------------------------------------------------------------------------
// Worlds

inline World grid_world(int width, int height) {
  World w;
  w.grid.width = width;
  w.grid.height = height;
  return w;
}

inline Robot robot_at(int col, int row, Heading h = Heading::E, std::string movement = "wheels") {
  Robot r;
  r.cell = Cell{col, row};
  r.heading = h;
  r.movement_type = std::move(movement);
  return r;
}

inline EntityWrite write(std::string entity, std::string prop, Value v) {
  return EntityWrite{std::move(entity), std::move(prop), std::move(v)};
}

inline World step_with(const World& w, std::vector<EntityWrite> writes) {
  return step(w, StepInput{std::move(writes), {}, {}}).world;
}

// ---------------------------------------------------------------------------
// Random lava walks

struct LavaWalkStats {
  long steps = 0;
  long violations = 0;
  long hover_lava_visits = 0;  // steps that ended with a living hover robot on lava
  long deaths = 0;
  std::string first_violation;
};

// A random grid with lava, robots of mixed movement types (some bound to
// instances of a class whose default flips), and an optional door.
inline World random_lava_world(std::mt19937& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  World w = grid_world(std::uniform_int_distribution<int>(3, 8)(rng), std::uniform_int_distribution<int>(1, 4)(rng));
  for (int c = 0; c < w.grid.width; ++c)
    for (int r = 0; r < w.grid.height; ++r)
      if (unit(rng) < 0.3) w.grid.lava.insert(Cell{c, r});
  w.objects.classes = define_class({}, ClassDef{"Bot", "Bot", std::nullopt,
                                                {FieldDef{"movement_type", DataType::Text, make_text("wheels")},
                                                 FieldDef{"body_type", DataType::Text, make_text("standard")}},
                                                {},
                                                {}});
  static const char* kTypes[] = {"wheels", "legs", "hover"};
  int robots = std::uniform_int_distribution<int>(1, 4)(rng);
  for (int i = 0; i < robots; ++i) {
    Cell c{std::uniform_int_distribution<int>(0, w.grid.width - 1)(rng),
           std::uniform_int_distribution<int>(0, w.grid.height - 1)(rng)};
    bool taken = false;
    for (const auto& [_, e] : w.entities)
      if (const auto* r = std::get_if<Robot>(&e); r && r->cell == c) taken = true;
    if (taken) continue;
    std::string movement = kTypes[std::uniform_int_distribution<int>(0, 2)(rng)];
    if (w.grid.is_lava(c) && movement != "hover") w.grid.lava.erase(c);
    Robot r = robot_at(c.col, c.row, static_cast<Heading>(std::uniform_int_distribution<int>(0, 3)(rng)), movement);
    std::string id = "bot" + std::to_string(i);
    if (movement != "hover" && unit(rng) < 0.5) {
      // Bound robots take their movement type from the class.
      w.objects.instances[id + "_obj"] = Instance{id + "_obj", "Bot", {}, id};
      r.instance = id + "_obj";
      if (w.grid.is_lava(c)) w.grid.lava.erase(c);
    }
    w.entities[id] = r;
  }
  if (unit(rng) < 0.5) {
    Door d;
    d.cell = Cell{std::uniform_int_distribution<int>(0, w.grid.width - 1)(rng), 0};
    bool clash = false;
    for (const auto& [_, e] : w.entities)
      if (const auto* r = std::get_if<Robot>(&e); r && r->cell == *d.cell) clash = true;
    if (!clash) w.entities["door"] = d;
  }
  return w;
}

inline void check_lava(const World& w, LavaWalkStats& stats) {
  for (const auto& [id, e] : w.entities) {
    const auto* r = std::get_if<Robot>(&e);
    if (!r || !r->alive || !w.grid.is_lava(r->cell)) continue;
    if (is_hovering(w, *r)) {
      ++stats.hover_lava_visits;
      continue;
    }
    if (stats.violations++ == 0)
      stats.first_violation = id + " alive on lava at tick " + std::to_string(w.tick) + " moving by " +
                              effective_movement(w, *r);
  }
}

// Runs random command sequences until `total_steps` steps have been taken.
inline LavaWalkStats lava_walk(std::uint32_t seed, long total_steps, int episode_length = 200) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  static const char* kCommands[] = {"forward", "forward", "turn_left", "turn_right", "drop_cube", "idle"};
  static const char* kHeadings[] = {"N", "E", "S", "W"};
  static const char* kTypes[] = {"wheels", "legs", "hover"};
  LavaWalkStats stats;
  while (stats.steps < total_steps) {
    World w = random_lava_world(rng);
    check_lava(w, stats);
    for (int i = 0; i < episode_length && stats.steps < total_steps; ++i) {
      StepInput in;
      for (const auto& [id, e] : w.entities) {
        if (!std::holds_alternative<Robot>(e)) continue;
        in.writes.push_back(write(id, "command", make_text(kCommands[std::uniform_int_distribution<int>(0, 5)(rng)])));
        if (unit(rng) < 0.2)
          in.writes.push_back(write(id, "heading", make_text(kHeadings[std::uniform_int_distribution<int>(0, 3)(rng)])));
      }
      if (unit(rng) < 0.1)
        in.class_writes.push_back(
            ClassDefaultWrite{"Bot", "movement_type", make_text(kTypes[std::uniform_int_distribution<int>(0, 2)(rng)])});
      if (w.entities.count("door") && unit(rng) < 0.2) in.writes.push_back(write("door", "open", make_bool(unit(rng) < 0.5)));
      long alive_before = 0, alive_after = 0;
      for (const auto& [_, e] : w.entities)
        if (const auto* r = std::get_if<Robot>(&e); r && r->alive) ++alive_before;
      w = step(std::move(w), in).world;
      for (const auto& [_, e] : w.entities)
        if (const auto* r = std::get_if<Robot>(&e); r && r->alive) ++alive_after;
      stats.deaths += alive_before - alive_after;
      ++stats.steps;
      check_lava(w, stats);
    }
  }
  return stats;
}

}  // namespace fixtures
