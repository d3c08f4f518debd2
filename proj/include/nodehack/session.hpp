#pragma once

/// @file session.hpp
/// @brief A playable puzzle session and the headless evaluate/step loop.
///
/// Each tick:
///  1. script entries for this tick press or release buttons,
///  2. the program is evaluated with OnTick plus every queued event,
///  3. the world steps with the evaluation's writes,
///  4. the fail condition is checked (a dead robot always fails), then win.
/// Events raised by a step are delivered on the next tick.

#include <memory>
#include <string>
#include <vector>

#include "nodehack/evaluator.hpp"
#include "nodehack/puzzle.hpp"

namespace nodehack {

// ---------------------------------------------------------------------------
// Trace serialization

inline json event_to_json(const WorldEvent& e) {
  json j{{"kind", std::string(to_string(e.kind))}};
  if (e.kind != EventKind::OnTick) j["entity"] = e.entity;
  if (e.kind == EventKind::OnEnterColumn) {
    j["column"] = e.column;
    j["color"] = std::string(to_string(e.color));
  }
  return j;
}

inline json diagnostic_to_json(const Diagnostic& d) {
  json tubes = json::array();
  for (const auto& t : d.tubes_marked) tubes.push_back(tube_to_json(t));
  return json{{"code", std::string(to_string(d.code))},
              {"severity", d.severity == Severity::Error ? "error" : "warning"},
              {"node", d.at_node},
              {"port", d.at_port ? json(*d.at_port) : json(nullptr)},
              {"message", d.message},
              {"tubes", std::move(tubes)}};
}

inline json inspection_to_json(const Inspection& i) {
  return json{{"node", i.node},
              {"port", i.port.empty() ? json(nullptr) : json(i.port)},
              {"state", std::string(to_string(i.state))},
              {"value", i.value ? value_to_json(*i.value) : json(nullptr)},
              {"display", i.value ? json(display(*i.value)) : json(nullptr)},
              {"diagnostic", i.diagnostic ? diagnostic_to_json(*i.diagnostic) : json(nullptr)}};
}

/// Evaluation summary: everything a client needs to color tubes and badge nodes.
inline json eval_to_json(const EvalResult& r) {
  json outputs = json::object();
  for (const auto& [ref, v] : r.outputs) outputs[ref.node + "." + ref.port] = value_to_json(v);
  json diags = json::array();
  for (const auto& d : r.diagnostics) diags.push_back(diagnostic_to_json(d));
  json actions = json::array();
  for (const auto& a : r.actions)
    actions.push_back(json{{"entity", a.entity}, {"property", a.property}, {"value", value_to_json(a.value)}});
  json class_writes = json::array();
  for (const auto& c : r.class_writes)
    class_writes.push_back(json{{"class", c.class_id}, {"field", c.field}, {"value", value_to_json(c.value)}});
  json instances = json::array();
  for (const auto& i : r.instances) instances.push_back(i.id);
  json tubes = json::array();
  for (const auto& [t, s] : r.tube_states) {
    json tj = tube_to_json(t);
    tj["state"] = s == TubeState::Error ? "error" : "normal";
    tubes.push_back(std::move(tj));
  }
  json states = json::object();
  for (const auto& [id, s] : r.node_states) states[id] = std::string(to_string(s));
  return json{{"outputs", std::move(outputs)}, {"diagnostics", std::move(diags)}, {"actions", std::move(actions)},
              {"class_writes", std::move(class_writes)}, {"instances", std::move(instances)},
              {"fired", r.fired_events}, {"tube_states", std::move(tubes)}, {"node_states", std::move(states)}};
}

// ---------------------------------------------------------------------------
// Session

class Session {
 public:
  explicit Session(std::shared_ptr<const PuzzleSpec> spec) : spec_(std::move(spec)) { restart(true); }

  const PuzzleSpec& spec() const { return *spec_; }
  std::shared_ptr<const PuzzleSpec> spec_ptr() const { return spec_; }
  const Program& program() const { return program_; }
  const World& world() const { return world_; }
  const std::vector<Edit>& edits() const { return edits_; }
  const EvalResult& last_eval() const { return last_eval_; }
  int ticks() const { return ticks_; }
  bool solved() const { return solved_; }
  bool failed() const { return failed_; }
  bool finished() const { return solved_ || failed_ || ticks_ >= spec_->tick_limit; }

  /// Applies a player edit; on error the session is unchanged.
  void apply_edit(const Edit& e) {
    program_ = apply_player_edit(program_, e, spec_->allowed_edits);
    edits_.push_back(e);
    journal_.push_back(json{{"edit", edit_to_json(e)}});
  }

  /// Runs one tick and returns its trace record.
  json tick() {
    const int t = world_.tick;
    StepResult scripted = apply_script(world_, spec_->script);
    world_ = std::move(scripted.world);
    std::vector<WorldEvent> events{WorldEvent{}};
    events.insert(events.end(), pending_.begin(), pending_.end());
    events.insert(events.end(), scripted.events.begin(), scripted.events.end());

    last_eval_ = evaluate(program_, EvalContext{world_, builtin_registry(), events});
    StepResult stepped = step(world_, StepInput{last_eval_.actions, last_eval_.class_writes, last_eval_.instances});
    world_ = std::move(stepped.world);
    pending_ = std::move(stepped.events);
    ++ticks_;

    bool dead = std::any_of(world_.entities.begin(), world_.entities.end(), [](const auto& kv) {
      const Robot* r = std::get_if<Robot>(&kv.second);
      return r && !r->alive;
    });
    failed_ = failed_ || dead || (!spec_->fail.is_null() && win::holds(spec_->fail, world_, last_eval_));
    solved_ = solved_ || (!failed_ && win::holds(spec_->win, world_, last_eval_));
    note_tick();

    json ev = json::array();
    for (const auto& e : events) ev.push_back(event_to_json(e));
    json record = eval_to_json(last_eval_);
    record.erase("tube_states");
    record.erase("node_states");
    record["tick"] = t;
    record["events"] = std::move(ev);
    record["rejected"] = stepped.rejected;
    record["world"] = world_view_json(world_);
    record["solved"] = solved_;
    record["failed"] = failed_;
    return record;
  }

  /// Ticks until solved, failed, the tick limit, or `max_ticks` more ticks.
  std::vector<json> run_until(int max_ticks) {
    std::vector<json> out;
    for (int i = 0; i < max_ticks && !finished(); ++i) out.push_back(tick());
    return out;
  }

  /// Evaluation the next tick would perform, without stepping the world.
  EvalResult preview() const { return evaluate(program_, EvalContext{world_, builtin_registry(), next_events()}); }

  Inspection inspect(const std::string& node, const std::string& port = {}) const {
    return nodehack::inspect(program_, node, EvalContext{world_, builtin_registry(), next_events()}, port);
  }

  /// Restarts the world; the player's edits are kept unless `clear_edits`.
  void reset(bool clear_edits = false) {
    restart(clear_edits);
    journal_.push_back(json{{"reset", clear_edits}});
  }

  json state_json() const {
    json allowed = json::array();
    for (EditOp op : spec_->allowed_edits) allowed.push_back(std::string(to_string(op)));
    json edits = json::array();
    for (const auto& e : edits_) edits.push_back(edit_to_json(e));
    return json{{"puzzle",
                 {{"id", spec_->id}, {"title", spec_->title}, {"prose", spec_->prose}, {"allowed_edits", allowed},
                  {"tick_limit", spec_->tick_limit}}},
                {"program", program_body_to_json(program_)},
                {"world", world_to_json(world_)},
                {"view", world_view_json(world_)},
                {"eval", eval_to_json(preview())},
                {"edits", std::move(edits)},
                {"ticks", ticks_},
                {"solved", solved_},
                {"failed", failed_}};
  }

  /// Replayable record of everything done to this session.
  json snapshot() const {
    return json{{"format_version", kFormatVersion}, {"puzzle", spec_->id}, {"journal", journal_}};
  }

  /// Replays a snapshot journal on a fresh session for the same puzzle.
  static Session restore(std::shared_ptr<const PuzzleSpec> spec, const json& snap) {
    Fields f(snap, "snapshot", {"format_version", "puzzle", "journal"});
    f.version();
    if (f.integer("puzzle") != spec->id) fail(ErrorCode::ParseError, f.at("puzzle") + ": snapshot is for another puzzle");
    Session s(std::move(spec));
    const json& journal = f.array("journal");
    for (std::size_t i = 0; i < journal.size(); ++i) {
      std::string p = index_path(f.at("journal"), i);
      Fields e(journal[i], p, {"edit", "tick", "reset"});
      if (e.has("edit")) {
        s.apply_edit(edit_from_json(e.req("edit"), e.at("edit")));
      } else if (e.has("tick")) {
        int n = e.integer("tick");
        if (n < 0) fail(ErrorCode::ParseError, e.at("tick") + ": expected a non-negative count");
        for (int k = 0; k < n; ++k) s.tick();
      } else if (e.has("reset")) {
        s.reset(e.boolean("reset"));
      } else {
        fail(ErrorCode::ParseError, p + ": expected edit, tick or reset");
      }
    }
    return s;
  }

 private:
  std::vector<WorldEvent> next_events() const {
    std::vector<WorldEvent> events{WorldEvent{}};
    events.insert(events.end(), pending_.begin(), pending_.end());
    return events;
  }

  void restart(bool clear_edits) {
    world_ = spec_->world;
    pending_.clear();
    last_eval_ = EvalResult{};
    ticks_ = 0;
    solved_ = failed_ = false;
    if (clear_edits) {
      program_ = spec_->initial_program();
      edits_.clear();
    }
  }

  void note_tick() {
    if (!journal_.empty() && journal_.back().contains("tick")) {
      journal_.back()["tick"] = journal_.back()["tick"].get<int>() + 1;
    } else {
      journal_.push_back(json{{"tick", 1}});
    }
  }

  std::shared_ptr<const PuzzleSpec> spec_;
  Program program_;
  World world_;
  std::vector<WorldEvent> pending_;
  std::vector<Edit> edits_;
  EvalResult last_eval_;
  int ticks_ = 0;
  bool solved_ = false;
  bool failed_ = false;
  json journal_ = json::array();
};

struct RunOutcome {
  bool solved = false;
  bool failed = false;
  int ticks_used = 0;
  std::vector<json> trace;
};

/// Applies `edits` to the puzzle's template and runs until win, failure or
/// the tick limit. Edit errors (ForbiddenEdit and graph errors) are thrown.
inline RunOutcome run_session(std::shared_ptr<const PuzzleSpec> spec, const std::vector<Edit>& edits) {
  Session s(std::move(spec));
  for (const auto& e : edits) s.apply_edit(e);
  RunOutcome out;
  out.trace = s.run_until(s.spec().tick_limit);
  out.solved = s.solved();
  out.failed = s.failed();
  out.ticks_used = s.ticks();
  return out;
}

inline RunOutcome run_session(const PuzzleSpec& spec, const std::vector<Edit>& edits) {
  return run_session(std::make_shared<const PuzzleSpec>(spec), edits);
}

/// True iff the puzzle's win condition holds for this world and evaluation.
inline bool check_win(const PuzzleSpec& spec, const World& world, const EvalResult& last_eval) {
  return win::holds(spec.win, world, last_eval);
}

}  // namespace nodehack
