#pragma once

/// @file world.hpp
/// @brief Deterministic grid world: doors, elevators, robots, buttons, cubes,
/// password consoles and the avatar, advanced one tick at a time by `step`.
///
/// Robots move one cell per tick along their heading. `forward` and `idle`
/// persist until another command is written; `turn_left`, `turn_right` and
/// `drop_cube` run once and fall back to `idle`. A robot that is not hovering
/// dies on entering lava and stays there as wreckage. Buttons are pressed
/// while held by the puzzle script or while a heavy, grounded robot stands on
/// them. Events raised during a step are returned for the next evaluation.

#include <array>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "nodehack/error.hpp"
#include "nodehack/graph.hpp"
#include "nodehack/json_util.hpp"
#include "nodehack/oop.hpp"
#include "nodehack/value.hpp"

namespace nodehack {

struct Cell {
  int col = 0;
  int row = 0;
  auto operator<=>(const Cell&) const = default;
};

enum class Heading { N, E, S, W };

inline std::string_view to_string(Heading h) {
  static constexpr std::string_view names[] = {"N", "E", "S", "W"};
  return names[static_cast<int>(h)];
}

inline std::optional<Heading> parse_heading(std::string_view s) {
  if (s == "N") return Heading::N;
  if (s == "E") return Heading::E;
  if (s == "S") return Heading::S;
  if (s == "W") return Heading::W;
  return std::nullopt;
}

inline Cell ahead(Cell c, Heading h) {
  switch (h) {
    case Heading::N: return {c.col, c.row - 1};
    case Heading::E: return {c.col + 1, c.row};
    case Heading::S: return {c.col, c.row + 1};
    case Heading::W: return {c.col - 1, c.row};
  }
  return c;
}

inline constexpr double kMaxElevatorSpeed = 1.0;
inline const std::set<std::string> kRobotCommands = {"forward", "turn_left", "turn_right", "drop_cube", "idle"};

struct Door {
  std::optional<Cell> cell;
  bool open = false;
  bool operator==(const Door&) const = default;
};

struct Elevator {
  double height = 0.0;
  double min = 0.0;
  double max = 0.0;
  double target = 0.0;
  double speed = kMaxElevatorSpeed;
  bool operator==(const Elevator&) const = default;
};

struct Robot {
  Cell cell;
  Heading heading = Heading::E;
  std::string movement_type = "wheels";
  std::string body_type = "standard";
  std::string command = "idle";
  std::optional<std::string> carrying;  // cube id
  bool alive = true;
  std::optional<std::string> instance;  // bound instance supplies movement/body types
  bool operator==(const Robot&) const = default;
};

struct Button {
  std::optional<Cell> cell;
  bool held = false;
  bool pressed = false;
  bool operator==(const Button&) const = default;
};

struct Cube {
  std::optional<Cell> cell;
  std::optional<std::string> carried_by;
  bool operator==(const Cube&) const = default;
};

struct PasswordConsole {
  std::string expected;
  std::string entered;
  bool unlocked = false;
  std::array<std::optional<int>, 4> digits{};
  bool operator==(const PasswordConsole&) const = default;
};

struct Avatar {
  Cell cell;
  std::optional<std::string> riding;  // elevator id
  bool operator==(const Avatar&) const = default;
};

using EntityState = std::variant<Door, Elevator, Robot, Button, Cube, PasswordConsole, Avatar>;

inline std::string_view entity_type_name(const EntityState& e) {
  static constexpr std::string_view names[] = {"Door",   "Elevator",        "Robot", "Button",
                                               "Cube",   "PasswordConsole", "Avatar"};
  return names[e.index()];
}

struct Marker {
  int number = 0;
  Color color = Color::Red;
  bool operator==(const Marker&) const = default;
};

struct Grid {
  int width = 1;
  int height = 1;
  std::set<Cell> lava;
  std::map<Cell, Marker> markers;
  bool operator==(const Grid&) const = default;

  bool contains(Cell c) const { return c.col >= 0 && c.row >= 0 && c.col < width && c.row < height; }
  bool is_lava(Cell c) const { return lava.count(c) > 0; }
  const Marker* marker(Cell c) const {
    auto it = markers.find(c);
    return it == markers.end() ? nullptr : &it->second;
  }
};

struct World {
  int tick = 0;
  Grid grid;
  std::map<std::string, EntityState> entities;
  ObjectStore objects;
  bool operator==(const World&) const = default;

  template <typename T>
  const T* get(const std::string& id) const {
    auto it = entities.find(id);
    return it == entities.end() ? nullptr : std::get_if<T>(&it->second);
  }
  template <typename T>
  T* get(const std::string& id) {
    auto it = entities.find(id);
    return it == entities.end() ? nullptr : std::get_if<T>(&it->second);
  }
};

struct EntityWrite {
  std::string entity;
  std::string property;
  Value value;
  bool operator==(const EntityWrite&) const = default;
};

struct ClassDefaultWrite {
  std::string class_id;
  std::string field;
  Value value;
  bool operator==(const ClassDefaultWrite&) const = default;
};

struct WorldEvent {
  EventKind kind = EventKind::OnTick;
  std::string entity;  // button for OnPressed, robot for OnEnterColumn
  int column = 0;
  Color color = Color::Red;
  bool operator==(const WorldEvent&) const = default;
};

// ---------------------------------------------------------------------------
// Property tables

inline std::string effective_movement(const World& w, const Robot& r) {
  if (r.instance) {
    if (auto it = w.objects.instances.find(*r.instance); it != w.objects.instances.end()) {
      try {
        Value v = read_field(w.objects.classes, it->second, "movement_type");
        if (auto* s = std::get_if<std::string>(&v)) return *s;
      } catch (const Error&) {
      }
    }
  }
  return r.movement_type;
}

inline std::string effective_body(const World& w, const Robot& r) {
  if (r.instance) {
    if (auto it = w.objects.instances.find(*r.instance); it != w.objects.instances.end()) {
      try {
        Value v = read_field(w.objects.classes, it->second, "body_type");
        if (auto* s = std::get_if<std::string>(&v)) return *s;
      } catch (const Error&) {
      }
    }
  }
  return r.body_type;
}

inline bool is_hovering(const World& w, const Robot& r) { return effective_movement(w, r) == "hover"; }

/// Readable properties of an entity, in port order.
inline std::vector<std::pair<std::string, Value>> readable_properties(const World& w, const std::string& id) {
  auto it = w.entities.find(id);
  if (it == w.entities.end()) fail(ErrorCode::UnknownEntity, "no entity '" + id + "'");
  using Props = std::vector<std::pair<std::string, Value>>;
  return std::visit(
      [&](const auto& e) -> Props {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, Door>) {
          return {{"open", make_bool(e.open)}};
        } else if constexpr (std::is_same_v<T, Elevator>) {
          return {{"height", make_number(e.height)}};
        } else if constexpr (std::is_same_v<T, Robot>) {
          return {{"col", make_number(e.cell.col)},
                  {"row", make_number(e.cell.row)},
                  {"heading", make_text(std::string(to_string(e.heading)))},
                  {"movement_type", make_text(effective_movement(w, e))},
                  {"body_type", make_text(effective_body(w, e))},
                  {"carrying", make_bool(e.carrying.has_value())},
                  {"alive", make_bool(e.alive)}};
        } else if constexpr (std::is_same_v<T, Button>) {
          return {{"pressed", make_bool(e.pressed)}};
        } else if constexpr (std::is_same_v<T, Cube>) {
          Cell c = e.cell.value_or(Cell{-1, -1});
          return {{"col", make_number(c.col)}, {"row", make_number(c.row)}, {"carried", make_bool(e.carried_by.has_value())}};
        } else if constexpr (std::is_same_v<T, PasswordConsole>) {
          return {{"entered", make_text(e.entered)}, {"unlocked", make_bool(e.unlocked)}};
        } else {
          double height = 0.0;
          if (e.riding)
            if (const auto* el = w.get<Elevator>(*e.riding)) height = el->height;
          return {{"col", make_number(e.cell.col)}, {"row", make_number(e.cell.row)}, {"height", make_number(height)}};
        }
      },
      it->second);
}

inline std::optional<Value> read_property(const World& w, const std::string& id, std::string_view prop) {
  if (!w.entities.count(id)) return std::nullopt;
  for (auto& [name, v] : readable_properties(w, id))
    if (name == prop) return v;
  return std::nullopt;
}

inline std::vector<Param> writable_properties(const EntityState& e) {
  return std::visit(
      [](const auto& x) -> std::vector<Param> {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Door>) {
          return {{"open", DataType::Boolean}};
        } else if constexpr (std::is_same_v<T, Elevator>) {
          return {{"target", DataType::Number}};
        } else if constexpr (std::is_same_v<T, Robot>) {
          return {{"command", DataType::Text},
                  {"heading", DataType::Text},
                  {"drop", DataType::Boolean},
                  {"blueprint", DataType::InstanceRef}};
        } else if constexpr (std::is_same_v<T, PasswordConsole>) {
          return {{"d1", DataType::Number}, {"d2", DataType::Number}, {"d3", DataType::Number}, {"d4", DataType::Number}};
        } else {
          return {};
        }
      },
      e);
}

/// Entity node signature: readable properties and `self` as outputs,
/// writable properties as optional inputs.
inline std::vector<PortSpec> entity_ports(const World& w, const std::string& id) {
  std::vector<PortSpec> ports;
  for (auto& [name, v] : readable_properties(w, id)) ports.push_back(out_port(name, type_of(v)));
  ports.push_back(out_port("self", DataType::EntityRef));
  for (auto& p : writable_properties(w.entities.at(id))) ports.push_back(in_port(p.name, p.type, false));
  return ports;
}

/// Signatures for every node kind available in this world.
inline SignatureTable world_signatures(const World& w, const NativeRegistry& natives = builtin_registry()) {
  SignatureTable t;
  for (const auto& [id, _] : w.entities) t.entities[id] = entity_ports(w, id);
  add_oop_signatures(t, w.objects.classes, natives);
  return t;
}

// ---------------------------------------------------------------------------
// Stepping

struct StepInput {
  std::vector<EntityWrite> writes;
  std::vector<ClassDefaultWrite> class_writes;
  std::vector<Instance> instances;  // created by constructor nodes this tick
};

struct StepResult {
  World world;
  std::vector<WorldEvent> events;
  std::vector<std::string> rejected;  // InvalidWrite reports; the step still completes
};

inline World submit_password(World w, const std::string& console, const std::string& text) {
  auto* c = w.get<PasswordConsole>(console);
  if (!c) fail(ErrorCode::UnknownEntity, "no password console '" + console + "'");
  c->entered = text;
  c->unlocked = c->entered == c->expected;
  return w;
}

namespace detail {

inline bool presses_button(const World& w, const Robot& r) {
  return r.alive && effective_body(w, r) == "heavy" && !is_hovering(w, r);
}

inline void refresh_buttons(World& w, std::vector<WorldEvent>& events) {
  std::set<Cell> weighted;
  for (const auto& [_, e] : w.entities)
    if (const auto* r = std::get_if<Robot>(&e); r && presses_button(w, *r)) weighted.insert(r->cell);
  for (auto& [id, e] : w.entities) {
    auto* b = std::get_if<Button>(&e);
    if (!b) continue;
    bool now = b->held || (b->cell && weighted.count(*b->cell));
    if (now && !b->pressed) events.push_back(WorldEvent{EventKind::OnPressed, id, 0, Color::Red});
    b->pressed = now;
  }
}

inline void kill_grounded_on_lava(World& w) {
  for (auto& [_, e] : w.entities) {
    auto* r = std::get_if<Robot>(&e);
    if (r && r->alive && w.grid.is_lava(r->cell) && !is_hovering(w, *r)) r->alive = false;
  }
}

inline bool cell_blocked(const World& w, Cell c) {
  if (!w.grid.contains(c)) return true;
  for (const auto& [_, e] : w.entities) {
    if (const auto* d = std::get_if<Door>(&e); d && !d->open && d->cell == c) return true;
    if (const auto* r = std::get_if<Robot>(&e); r && r->cell == c) return true;
  }
  return false;
}

inline std::string check_write(const World& w, const EntityWrite& wr) {
  auto it = w.entities.find(wr.entity);
  if (it == w.entities.end()) return "no entity '" + wr.entity + "'";
  for (const auto& p : writable_properties(it->second)) {
    if (p.name != wr.property) continue;
    if (type_of(wr.value) != p.type)
      return wr.entity + "." + wr.property + " expects " + std::string(to_string(p.type)) + ", got " +
             std::string(to_string(type_of(wr.value)));
    if (!is_storable(wr.value)) return wr.entity + "." + wr.property + " must be finite";
    return {};
  }
  return std::string(entity_type_name(it->second)) + " '" + wr.entity + "' has no writable property '" +
         wr.property + "'";
}

}  // namespace detail

/// Applies one tick of writes and world rules.
inline StepResult step(World w, const StepInput& input) {
  StepResult out;
  auto reject = [&](std::string why) { out.rejected.push_back("InvalidWrite: " + std::move(why)); };

  for (const auto& inst : input.instances) {
    if (!w.objects.classes.count(inst.class_id)) {
      reject("instance '" + inst.id + "' has unknown class '" + inst.class_id + "'");
      continue;
    }
    Instance copy = inst;
    if (auto it = w.objects.instances.find(inst.id); it != w.objects.instances.end())
      copy.bound_entity = it->second.bound_entity;
    w.objects.instances[inst.id] = std::move(copy);
  }

  for (const auto& cw : input.class_writes) {
    try {
      w.objects.classes = set_class_default(std::move(w.objects.classes), cw.class_id, cw.field, cw.value);
    } catch (const Error& e) {
      reject(e.detail());
    }
  }

  std::set<std::string> drops;
  std::set<std::string> consoles_written;
  for (const auto& wr : input.writes) {
    if (auto why = detail::check_write(w, wr); !why.empty()) {
      reject(why);
      continue;
    }
    EntityState& e = w.entities.at(wr.entity);
    if (auto* d = std::get_if<Door>(&e)) {
      d->open = std::get<bool>(wr.value);
    } else if (auto* el = std::get_if<Elevator>(&e)) {
      el->target = std::clamp(std::get<double>(wr.value), el->min, el->max);
    } else if (auto* r = std::get_if<Robot>(&e)) {
      if (wr.property == "command") {
        const auto& cmd = std::get<std::string>(wr.value);
        if (!kRobotCommands.count(cmd)) {
          reject("unknown robot command \"" + cmd + "\"");
          continue;
        }
        r->command = cmd;
      } else if (wr.property == "heading") {
        auto h = parse_heading(std::get<std::string>(wr.value));
        if (!h) {
          reject("unknown heading \"" + std::get<std::string>(wr.value) + "\"");
          continue;
        }
        r->heading = *h;
      } else if (wr.property == "drop") {
        if (std::get<bool>(wr.value)) drops.insert(wr.entity);
      } else if (wr.property == "blueprint") {
        const auto& inst_id = std::get<InstanceRef>(wr.value).id;
        auto inst = w.objects.instances.find(inst_id);
        if (inst == w.objects.instances.end()) {
          reject("no instance '" + inst_id + "'");
          continue;
        }
        if (r->instance && *r->instance != inst_id)
          if (auto old = w.objects.instances.find(*r->instance); old != w.objects.instances.end())
            old->second.bound_entity.reset();
        inst->second.bound_entity = wr.entity;
        r->instance = inst_id;
      }
    } else if (auto* c = std::get_if<PasswordConsole>(&e)) {
      double d = std::get<double>(wr.value);
      if (d != std::floor(d) || d < 0 || d > 9) {
        reject(wr.entity + "." + wr.property + " must be a single digit, got " + display(wr.value));
        continue;
      }
      c->digits[static_cast<std::size_t>(wr.property[1] - '1')] = static_cast<int>(d);
      consoles_written.insert(wr.entity);
    }
  }

  for (const auto& id : consoles_written) {
    const auto& c = *w.get<PasswordConsole>(id);
    if (std::all_of(c.digits.begin(), c.digits.end(), [](const auto& d) { return d.has_value(); })) {
      std::string text;
      for (const auto& d : c.digits) text += static_cast<char>('0' + *d);
      w = submit_password(std::move(w), id, text);
    }
  }

  for (auto& [_, e] : w.entities) {
    if (auto* el = std::get_if<Elevator>(&e)) {
      double delta = std::clamp(el->target - el->height, -el->speed, el->speed);
      el->height = std::clamp(el->height + delta, el->min, el->max);
    }
  }

  // Type changes this tick may have grounded a robot that is standing on lava.
  detail::kill_grounded_on_lava(w);

  for (auto& [id, e] : w.entities) {
    auto* r = std::get_if<Robot>(&e);
    if (!r || !r->alive) continue;
    bool drop = drops.count(id) || r->command == "drop_cube";
    if (drop && r->carrying) {
      if (auto* cube = w.get<Cube>(*r->carrying)) {
        cube->cell = r->cell;
        cube->carried_by.reset();
      }
      r->carrying.reset();
    }
    if (r->command == "forward") {
      Cell next = ahead(r->cell, r->heading);
      if (!detail::cell_blocked(w, next)) {
        r->cell = next;
        if (const Marker* m = w.grid.marker(next))
          out.events.push_back(WorldEvent{EventKind::OnEnterColumn, id, m->number, m->color});
        if (w.grid.is_lava(next) && !is_hovering(w, *r)) r->alive = false;
      }
    } else if (r->command == "turn_left") {
      r->heading = static_cast<Heading>((static_cast<int>(r->heading) + 3) % 4);
    } else if (r->command == "turn_right") {
      r->heading = static_cast<Heading>((static_cast<int>(r->heading) + 1) % 4);
    }
    if (r->command != "forward" && r->command != "idle") r->command = "idle";
  }

  detail::refresh_buttons(w, out.events);
  w.tick += 1;
  out.world = std::move(w);
  return out;
}

inline StepResult step(World w, std::span<const EntityWrite> writes) {
  StepInput in;
  in.writes.assign(writes.begin(), writes.end());
  return step(std::move(w), in);
}

// ---------------------------------------------------------------------------
// Scripted inputs

enum class ScriptAction { Press, Release };

struct ScriptOp {
  int tick = 0;
  ScriptAction action = ScriptAction::Press;
  std::string button;
  bool operator==(const ScriptOp&) const = default;
};

/// Applies the script entries scheduled for the world's current tick. Runs
/// before evaluation, so resulting OnPressed events reach the same tick.
inline StepResult apply_script(World w, std::span<const ScriptOp> script) {
  StepResult out;
  for (const auto& op : script) {
    if (op.tick != w.tick) continue;
    auto* b = w.get<Button>(op.button);
    if (!b) fail(ErrorCode::UnknownEntity, "script names unknown button '" + op.button + "'");
    b->held = op.action == ScriptAction::Press;
  }
  detail::refresh_buttons(w, out.events);
  out.world = std::move(w);
  return out;
}

}  // namespace nodehack
