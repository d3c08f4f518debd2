#pragma once

// JSON forms of classes, instances and worlds, plus world validation.

#include <string>

#include "nodehack/json_util.hpp"
#include "nodehack/oop.hpp"
#include "nodehack/world.hpp"

namespace nodehack {

inline json cell_to_json(Cell c) { return json::array({c.col, c.row}); }

inline Cell cell_from_json(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer())
    fail(ErrorCode::ParseError, path + ": expected [col, row]");
  return Cell{j[0].get<int>(), j[1].get<int>()};
}

inline json opt_to_json(const std::optional<std::string>& s) { return s ? json(*s) : json(nullptr); }
inline json opt_to_json(const std::optional<Cell>& c) { return c ? cell_to_json(*c) : json(nullptr); }

inline std::optional<std::string> opt_string(const Fields& f, std::string_view key) {
  const json& v = f.req(key);
  if (v.is_null()) return std::nullopt;
  if (!v.is_string()) fail(ErrorCode::ParseError, f.at(key) + ": expected string or null");
  return v.get<std::string>();
}

inline std::optional<Cell> opt_cell(const Fields& f, std::string_view key) {
  const json& v = f.req(key);
  if (v.is_null()) return std::nullopt;
  return cell_from_json(v, f.at(key));
}

inline DataType type_field(const Fields& f, std::string_view key) {
  auto t = parse_data_type(f.str(key));
  if (!t) fail(ErrorCode::ParseError, f.at(key) + ": unknown type");
  return *t;
}

// ---------------------------------------------------------------------------
// Classes and instances

inline json param_to_json(const Param& p) { return json{{"name", p.name}, {"type", std::string(to_string(p.type))}}; }

inline std::vector<Param> params_from_json(const json& arr, const std::string& path) {
  if (!arr.is_array()) fail(ErrorCode::ParseError, path + ": expected array");
  std::vector<Param> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    Fields f(arr[i], index_path(path, i), {"name", "type"});
    out.push_back(Param{f.str("name"), type_field(f, "type")});
  }
  return out;
}

inline json class_to_json(const ClassDef& c) {
  json fields = json::array();
  for (const auto& f : c.fields)
    fields.push_back(json{{"name", f.name}, {"type", std::string(to_string(f.type))}, {"default", value_to_json(f.default_value)}});
  json ctor = json::array();
  for (const auto& p : c.constructor_params) ctor.push_back(param_to_json(p));
  json methods = json::array();
  for (const auto& m : c.methods) {
    json ps = json::array(), rs = json::array();
    for (const auto& p : m.params) ps.push_back(param_to_json(p));
    for (const auto& r : m.results) rs.push_back(param_to_json(r));
    methods.push_back(json{{"name", m.name}, {"params", ps}, {"results", rs}, {"impl", m.impl}});
  }
  return json{{"id", c.id},
              {"name", c.name},
              {"parent", opt_to_json(c.parent)},
              {"fields", fields},
              {"constructor_params", ctor},
              {"methods", methods}};
}

inline ClassDef class_from_json(const json& j, const std::string& path) {
  Fields f(j, path, {"id", "name", "parent", "fields", "constructor_params", "methods"});
  ClassDef c;
  c.id = f.str("id");
  c.name = f.str("name");
  c.parent = opt_string(f, "parent");
  const json& fields = f.array("fields");
  for (std::size_t i = 0; i < fields.size(); ++i) {
    Fields ff(fields[i], index_path(f.at("fields"), i), {"name", "type", "default"});
    c.fields.push_back(FieldDef{ff.str("name"), type_field(ff, "type"), value_from_json(ff.req("default"), ff.at("default"))});
  }
  c.constructor_params = params_from_json(f.array("constructor_params"), f.at("constructor_params"));
  const json& methods = f.array("methods");
  for (std::size_t i = 0; i < methods.size(); ++i) {
    Fields mf(methods[i], index_path(f.at("methods"), i), {"name", "params", "results", "impl"});
    c.methods.push_back(MethodDef{mf.str("name"), params_from_json(mf.req("params"), mf.at("params")),
                                  params_from_json(mf.req("results"), mf.at("results")), mf.str("impl")});
  }
  return c;
}

inline json instance_to_json(const Instance& i) {
  json locals = json::object();
  for (const auto& [k, v] : i.local_fields) locals[k] = value_to_json(v);
  return json{{"id", i.id}, {"class", i.class_id}, {"local_fields", locals}, {"bound_entity", opt_to_json(i.bound_entity)}};
}

inline Instance instance_from_json(const json& j, const std::string& path) {
  Fields f(j, path, {"id", "class", "local_fields", "bound_entity"});
  Instance inst{f.str("id"), f.str("class"), {}, opt_string(f, "bound_entity")};
  const json& locals = f.req("local_fields");
  if (!locals.is_object()) fail(ErrorCode::ParseError, f.at("local_fields") + ": expected object");
  for (const auto& [k, v] : locals.items()) inst.local_fields[k] = value_from_json(v, f.at("local_fields") + "." + k);
  return inst;
}

// ---------------------------------------------------------------------------
// Entities

inline json entity_to_json(const std::string& id, const EntityState& e) {
  json j = std::visit(
      [](const auto& x) -> json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Door>) {
          return {{"cell", opt_to_json(x.cell)}, {"open", x.open}};
        } else if constexpr (std::is_same_v<T, Elevator>) {
          return {{"height", x.height}, {"min", x.min}, {"max", x.max}, {"target", x.target}, {"speed", x.speed}};
        } else if constexpr (std::is_same_v<T, Robot>) {
          return {{"cell", cell_to_json(x.cell)},
                  {"heading", std::string(to_string(x.heading))},
                  {"movement_type", x.movement_type},
                  {"body_type", x.body_type},
                  {"command", x.command},
                  {"carrying", opt_to_json(x.carrying)},
                  {"alive", x.alive},
                  {"instance", opt_to_json(x.instance)}};
        } else if constexpr (std::is_same_v<T, Button>) {
          return {{"cell", opt_to_json(x.cell)}, {"held", x.held}, {"pressed", x.pressed}};
        } else if constexpr (std::is_same_v<T, Cube>) {
          return {{"cell", opt_to_json(x.cell)}, {"carried_by", opt_to_json(x.carried_by)}};
        } else if constexpr (std::is_same_v<T, PasswordConsole>) {
          json digits = json::array();
          for (const auto& d : x.digits) digits.push_back(d ? json(*d) : json(nullptr));
          return {{"expected", x.expected}, {"entered", x.entered}, {"unlocked", x.unlocked}, {"digits", digits}};
        } else {
          return {{"cell", cell_to_json(x.cell)}, {"riding", opt_to_json(x.riding)}};
        }
      },
      e);
  j["id"] = id;
  j["type"] = std::string(entity_type_name(e));
  return j;
}

inline std::pair<std::string, EntityState> entity_from_json(const json& j, const std::string& path) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
    fail(ErrorCode::ParseError, path + ".type: missing field");
  const std::string type = j["type"].get<std::string>();
  if (type == "Door") {
    Fields f(j, path, {"id", "type", "cell", "open"});
    return {f.str("id"), Door{opt_cell(f, "cell"), f.boolean("open")}};
  }
  if (type == "Elevator") {
    Fields f(j, path, {"id", "type", "height", "min", "max", "target", "speed"});
    return {f.str("id"), Elevator{f.num("height"), f.num("min"), f.num("max"), f.num("target"), f.num("speed")}};
  }
  if (type == "Robot") {
    Fields f(j, path, {"id", "type", "cell", "heading", "movement_type", "body_type", "command", "carrying", "alive", "instance"});
    Robot r;
    r.cell = cell_from_json(f.req("cell"), f.at("cell"));
    auto h = parse_heading(f.str("heading"));
    if (!h) fail(ErrorCode::ParseError, f.at("heading") + ": expected N, E, S or W");
    r.heading = *h;
    r.movement_type = f.str("movement_type");
    r.body_type = f.str("body_type");
    r.command = f.str("command");
    if (!kRobotCommands.count(r.command)) fail(ErrorCode::ParseError, f.at("command") + ": unknown command");
    r.carrying = opt_string(f, "carrying");
    r.alive = f.boolean("alive");
    r.instance = opt_string(f, "instance");
    return {f.str("id"), r};
  }
  if (type == "Button") {
    Fields f(j, path, {"id", "type", "cell", "held", "pressed"});
    return {f.str("id"), Button{opt_cell(f, "cell"), f.boolean("held"), f.boolean("pressed")}};
  }
  if (type == "Cube") {
    Fields f(j, path, {"id", "type", "cell", "carried_by"});
    return {f.str("id"), Cube{opt_cell(f, "cell"), opt_string(f, "carried_by")}};
  }
  if (type == "PasswordConsole") {
    Fields f(j, path, {"id", "type", "expected", "entered", "unlocked", "digits"});
    PasswordConsole c{f.str("expected"), f.str("entered"), f.boolean("unlocked"), {}};
    const json& digits = f.array("digits");
    if (digits.size() != 4) fail(ErrorCode::ParseError, f.at("digits") + ": expected 4 entries");
    for (std::size_t i = 0; i < 4; ++i) {
      if (digits[i].is_null()) continue;
      if (!digits[i].is_number_integer()) fail(ErrorCode::ParseError, index_path(f.at("digits"), i) + ": expected digit");
      c.digits[i] = digits[i].get<int>();
    }
    return {f.str("id"), c};
  }
  if (type == "Avatar") {
    Fields f(j, path, {"id", "type", "cell", "riding"});
    return {f.str("id"), Avatar{cell_from_json(f.req("cell"), f.at("cell")), opt_string(f, "riding")}};
  }
  fail(ErrorCode::ParseError, path + ".type: unknown entity type '" + type + "'");
}

// ---------------------------------------------------------------------------
// World

/// Structural invariants of a world; throws CorruptSpec.
inline void validate_world(const World& w) {
  auto bad = [](const std::string& why) { fail(ErrorCode::CorruptSpec, why); };
  if (w.grid.width < 1 || w.grid.height < 1) bad("grid must be at least 1x1");
  for (Cell c : w.grid.lava)
    if (!w.grid.contains(c)) bad("lava cell outside grid");
  for (const auto& [c, _] : w.grid.markers)
    if (!w.grid.contains(c)) bad("marker outside grid");
  for (const auto& [id, cls] : w.objects.classes) {
    if (cls.id != id) bad("class key mismatch for '" + id + "'");
    class_chain(w.objects.classes, id);
  }
  for (const auto& [id, inst] : w.objects.instances) {
    if (inst.id != id) bad("instance key mismatch for '" + id + "'");
    if (!w.objects.classes.count(inst.class_id)) bad("instance '" + id + "' has unknown class");
    for (const auto& [field, v] : inst.local_fields) {
      const FieldDef* f = lookup_field(w.objects.classes, inst.class_id, field);
      if (!f || f->type != type_of(v)) bad("instance '" + id + "' has invalid field '" + field + "'");
    }
    if (inst.bound_entity) {
      const auto* r = w.get<Robot>(*inst.bound_entity);
      if (!r || r->instance != id) bad("instance '" + id + "' bound to a robot that does not reference it");
    }
  }
  std::set<Cell> robot_cells;
  for (const auto& [id, e] : w.entities) {
    auto in_grid = [&](const std::optional<Cell>& c) {
      if (c && !w.grid.contains(*c)) bad("entity '" + id + "' lies outside the grid");
    };
    if (const auto* d = std::get_if<Door>(&e)) in_grid(d->cell);
    if (const auto* b = std::get_if<Button>(&e)) in_grid(b->cell);
    if (const auto* a = std::get_if<Avatar>(&e)) {
      in_grid(a->cell);
      if (a->riding && !w.get<Elevator>(*a->riding)) bad("avatar '" + id + "' rides a missing elevator");
    }
    if (const auto* el = std::get_if<Elevator>(&e)) {
      if (!(el->min <= el->height && el->height <= el->max)) bad("elevator '" + id + "' height out of range");
      if (!(el->min <= el->target && el->target <= el->max)) bad("elevator '" + id + "' target out of range");
      if (!(el->speed > 0 && el->speed <= kMaxElevatorSpeed)) bad("elevator '" + id + "' speed must be in (0, 1]");
    }
    if (const auto* cube = std::get_if<Cube>(&e)) {
      if (cube->cell.has_value() == cube->carried_by.has_value()) bad("cube '" + id + "' must be placed or carried");
      in_grid(cube->cell);
      if (cube->carried_by) {
        const auto* r = w.get<Robot>(*cube->carried_by);
        if (!r || r->carrying != id) bad("cube '" + id + "' carried by a robot that does not hold it");
      }
    }
    if (const auto* r = std::get_if<Robot>(&e)) {
      in_grid(r->cell);
      if (!robot_cells.insert(r->cell).second) bad("two robots share a cell");
      if (r->carrying) {
        const auto* cube = w.get<Cube>(*r->carrying);
        if (!cube || cube->carried_by != id) bad("robot '" + id + "' carries an unknown cube");
      }
      if (r->instance) {
        auto it = w.objects.instances.find(*r->instance);
        if (it == w.objects.instances.end() || it->second.bound_entity != id)
          bad("robot '" + id + "' bound to a missing instance");
      }
      if (r->alive && w.grid.is_lava(r->cell) && !is_hovering(w, *r)) bad("living grounded robot on lava");
    }
  }
}

inline json world_to_json(const World& w) {
  json lava = json::array();
  for (Cell c : w.grid.lava) lava.push_back(cell_to_json(c));
  json markers = json::array();
  for (const auto& [c, m] : w.grid.markers)
    markers.push_back(json{{"cell", cell_to_json(c)}, {"number", m.number}, {"color", std::string(to_string(m.color))}});
  json entities = json::array();
  for (const auto& [id, e] : w.entities) entities.push_back(entity_to_json(id, e));
  // Parents before children, then by id, so documents load in one pass.
  std::vector<std::pair<std::size_t, std::string>> order;
  for (const auto& [id, _] : w.objects.classes) order.emplace_back(class_chain(w.objects.classes, id).size(), id);
  std::sort(order.begin(), order.end());
  json classes = json::array();
  for (const auto& [_, id] : order) classes.push_back(class_to_json(w.objects.classes.at(id)));
  json instances = json::array();
  for (const auto& [_, i] : w.objects.instances) instances.push_back(instance_to_json(i));
  return json{{"tick", w.tick},
              {"grid", {{"width", w.grid.width}, {"height", w.grid.height}, {"lava", lava}, {"markers", markers}}},
              {"entities", entities},
              {"classes", classes},
              {"instances", instances}};
}

inline World world_from_json(const json& j, const std::string& path = "world") {
  Fields f(j, path, {"tick", "grid", "entities", "classes", "instances"});
  World w;
  w.tick = f.integer("tick");
  Fields g(f.req("grid"), f.at("grid"), {"width", "height", "lava", "markers"});
  w.grid.width = g.integer("width");
  w.grid.height = g.integer("height");
  const json& lava = g.array("lava");
  for (std::size_t i = 0; i < lava.size(); ++i) w.grid.lava.insert(cell_from_json(lava[i], index_path(g.at("lava"), i)));
  const json& markers = g.array("markers");
  for (std::size_t i = 0; i < markers.size(); ++i) {
    Fields m(markers[i], index_path(g.at("markers"), i), {"cell", "number", "color"});
    auto color = parse_color(m.str("color"));
    if (!color) fail(ErrorCode::ParseError, m.at("color") + ": unknown color");
    w.grid.markers[cell_from_json(m.req("cell"), m.at("cell"))] = Marker{m.integer("number"), *color};
  }
  // Classes may be listed in any order: each pass defines those whose parent
  // is already known. Whatever is left is defined as-is to surface its error.
  const json& classes = f.array("classes");
  std::vector<std::pair<std::string, ClassDef>> pending;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    std::string p = index_path(f.at("classes"), i);
    pending.emplace_back(p, class_from_json(classes[i], p));
  }
  auto define = [&](const std::string& p, ClassDef def) {
    try {
      w.objects.classes = define_class(std::move(w.objects.classes), std::move(def));
    } catch (const Error& e) {
      fail(ErrorCode::ParseError, p + ": " + e.what());
    }
  };
  while (!pending.empty()) {
    auto ready = std::find_if(pending.begin(), pending.end(), [&](const auto& pd) {
      return !pd.second.parent || w.objects.classes.count(*pd.second.parent);
    });
    if (ready == pending.end()) ready = pending.begin();
    define(ready->first, std::move(ready->second));
    pending.erase(ready);
  }
  const json& instances = f.array("instances");
  for (std::size_t i = 0; i < instances.size(); ++i) {
    Instance inst = instance_from_json(instances[i], index_path(f.at("instances"), i));
    std::string id = inst.id;
    if (!w.objects.instances.emplace(id, std::move(inst)).second)
      fail(ErrorCode::ParseError, index_path(f.at("instances"), i) + ": duplicate instance '" + id + "'");
  }
  const json& entities = f.array("entities");
  for (std::size_t i = 0; i < entities.size(); ++i) {
    auto [id, e] = entity_from_json(entities[i], index_path(f.at("entities"), i));
    if (!w.entities.emplace(id, std::move(e)).second)
      fail(ErrorCode::ParseError, index_path(f.at("entities"), i) + ": duplicate entity '" + id + "'");
  }
  return w;
}

/// Compact per-entity view of readable properties (used in traces and state).
inline json world_view_json(const World& w) {
  json out = json::object();
  for (const auto& [id, _] : w.entities) {
    json props = json::object();
    for (auto& [name, v] : readable_properties(w, id)) props[name] = value_to_json(v);
    out[id] = props;
  }
  return out;
}

}  // namespace nodehack
