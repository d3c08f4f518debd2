#pragma once

/// @file win.hpp
/// @brief Declarative win/fail conditions over world state.
///
/// An expression is a JSON object with exactly one key naming the operator:
///
///   {"lit": value}                      typed literal, e.g. {"type":"Number","value":4}
///   {"prop": [entity, property]}        readable entity property
///   {"field": [instance, field]}        instance field through the class chain
///   {"and": [e...]} {"or": [e...]} {"not": e}
///   {"eq": [a, b]} {"neq": [a, b]}      equal runtime type and value
///   {"near": [a, b, tol]}               numbers within tol
///   {"tick_at_least": n}                world tick >= n
///   {"robot_at": [robot, col, row]}     living robot on that cell
///   {"riding": [avatar, elevator]}
///   {"cube_on_marker": n}               a resting cube on the marker numbered n
///   {"no_cube_on_markers": [n...]}
///   {"all_instances": [class, field, value]}  every instance of class (or a
///                                       subclass) reads value; at least one exists
///   {"no_diagnostics": true}            last evaluation had no error diagnostics
///
/// Evaluation is total: anything unreadable makes the enclosing test false.

#include <cmath>
#include <optional>
#include <string>

#include "nodehack/evaluator.hpp"
#include "nodehack/json_util.hpp"
#include "nodehack/world.hpp"

namespace nodehack::win {

namespace detail {

inline void bad(const std::string& path, const std::string& why) { fail(ErrorCode::CorruptSpec, path + ": " + why); }

inline const json& sole_arg(const json& e, const std::string& path, std::string& op) {
  if (!e.is_object() || e.size() != 1) bad(path, "expected an object with exactly one operator key");
  op = e.begin().key();
  return e.begin().value();
}

inline void want_array(const json& a, std::size_t n, const std::string& path) {
  if (!a.is_array() || (n && a.size() != n)) bad(path, "expected an array of " + std::to_string(n) + " items");
}

inline void want_entity(const json& a, const World& w, const std::string& path) {
  if (!a.is_string() || !w.entities.count(a.get<std::string>())) bad(path, "unknown entity " + a.dump());
}

}  // namespace detail

/// Checks an expression's shape and references against a world; throws CorruptSpec.
inline void validate(const json& e, const World& w, const std::string& path) {
  using namespace detail;
  std::string op;
  const json& a = sole_arg(e, path, op);
  std::string p = path + "." + op;
  if (op == "lit") {
    try {
      value_from_json(a, p);
    } catch (const Error& err) {
      bad(p, err.detail());
    }
  } else if (op == "prop") {
    want_array(a, 2, p);
    want_entity(a[0], w, p);
    if (!a[1].is_string() || !read_property(w, a[0].get<std::string>(), a[1].get<std::string>()))
      bad(p, "entity has no readable property " + a[1].dump());
  } else if (op == "field") {
    want_array(a, 2, p);
    if (!a[0].is_string() || !w.objects.instances.count(a[0].get<std::string>())) bad(p, "unknown instance " + a[0].dump());
    if (!a[1].is_string()) bad(p, "expected a field name");
  } else if (op == "and" || op == "or") {
    want_array(a, 0, p);
    for (std::size_t i = 0; i < a.size(); ++i) validate(a[i], w, index_path(p, i));
  } else if (op == "not") {
    validate(a, w, p);
  } else if (op == "eq" || op == "neq") {
    want_array(a, 2, p);
    validate(a[0], w, p + "[0]");
    validate(a[1], w, p + "[1]");
  } else if (op == "near") {
    want_array(a, 3, p);
    validate(a[0], w, p + "[0]");
    validate(a[1], w, p + "[1]");
    if (!a[2].is_number() || a[2].get<double>() < 0) bad(p, "tolerance must be a non-negative number");
  } else if (op == "tick_at_least" || op == "cube_on_marker") {
    if (!a.is_number_integer()) bad(p, "expected an integer");
  } else if (op == "robot_at") {
    want_array(a, 3, p);
    want_entity(a[0], w, p);
    if (!w.get<Robot>(a[0].get<std::string>())) bad(p, "not a robot");
    if (!a[1].is_number_integer() || !a[2].is_number_integer()) bad(p, "expected integer cell");
  } else if (op == "riding") {
    want_array(a, 2, p);
    want_entity(a[0], w, p);
    want_entity(a[1], w, p);
  } else if (op == "no_cube_on_markers") {
    want_array(a, 0, p);
    for (const auto& n : a)
      if (!n.is_number_integer()) bad(p, "expected integers");
  } else if (op == "all_instances") {
    want_array(a, 3, p);
    if (!a[0].is_string() || !w.objects.classes.count(a[0].get<std::string>())) bad(p, "unknown class " + a[0].dump());
    if (!a[1].is_string()) bad(p, "expected a field name");
    try {
      value_from_json(a[2], p + "[2]");
    } catch (const Error& err) {
      bad(p, err.detail());
    }
  } else if (op == "no_diagnostics") {
    if (a != json(true)) bad(p, "expected true");
  } else {
    bad(path, "unknown operator '" + op + "'");
  }
}

/// Evaluates an already validated expression.
inline std::optional<Value> eval(const json& e, const World& w, const EvalResult& last) {
  const std::string& op = e.begin().key();
  const json& a = e.begin().value();
  auto truth = [&](const json& x) {
    auto v = eval(x, w, last);
    return v && *v == make_bool(true);
  };
  if (op == "lit") return value_from_json(a, "lit");
  if (op == "prop") return read_property(w, a[0].get<std::string>(), a[1].get<std::string>());
  if (op == "field") {
    auto it = w.objects.instances.find(a[0].get<std::string>());
    if (it == w.objects.instances.end()) return std::nullopt;
    try {
      return read_field(w.objects.classes, it->second, a[1].get<std::string>());
    } catch (const Error&) {
      return std::nullopt;
    }
  }
  if (op == "and") return make_bool(std::all_of(a.begin(), a.end(), truth));
  if (op == "or") return make_bool(std::any_of(a.begin(), a.end(), truth));
  if (op == "not") {
    auto v = eval(a, w, last);
    if (!v || type_of(*v) != DataType::Boolean) return std::nullopt;
    return make_bool(!std::get<bool>(*v));
  }
  if (op == "eq" || op == "neq") {
    auto l = eval(a[0], w, last), r = eval(a[1], w, last);
    if (!l || !r) return std::nullopt;
    return make_bool((*l == *r) == (op == "eq"));
  }
  if (op == "near") {
    auto l = eval(a[0], w, last), r = eval(a[1], w, last);
    if (!l || !r || type_of(*l) != DataType::Number || type_of(*r) != DataType::Number) return make_bool(false);
    return make_bool(std::fabs(std::get<double>(*l) - std::get<double>(*r)) <= a[2].get<double>());
  }
  if (op == "tick_at_least") return make_bool(w.tick >= a.get<int>());
  if (op == "robot_at") {
    const Robot* r = w.get<Robot>(a[0].get<std::string>());
    return make_bool(r && r->alive && r->cell == Cell{a[1].get<int>(), a[2].get<int>()});
  }
  if (op == "riding") {
    const Avatar* av = w.get<Avatar>(a[0].get<std::string>());
    return make_bool(av && av->riding == a[1].get<std::string>());
  }
  auto cube_on = [&](int number) {
    for (const auto& [_, ent] : w.entities) {
      const Cube* c = std::get_if<Cube>(&ent);
      if (!c || !c->cell || c->carried_by) continue;
      if (const Marker* m = w.grid.marker(*c->cell); m && m->number == number) return true;
    }
    return false;
  };
  if (op == "cube_on_marker") return make_bool(cube_on(a.get<int>()));
  if (op == "no_cube_on_markers")
    return make_bool(std::none_of(a.begin(), a.end(), [&](const json& n) { return cube_on(n.get<int>()); }));
  if (op == "all_instances") {
    const auto& cls = a[0].get<std::string>();
    Value want = value_from_json(a[2], "all_instances");
    bool any = false;
    for (const auto& [_, inst] : w.objects.instances) {
      if (!w.objects.classes.count(inst.class_id) || !is_subclass_of(w.objects.classes, inst.class_id, cls)) continue;
      any = true;
      try {
        if (read_field(w.objects.classes, inst, a[1].get<std::string>()) != want) return make_bool(false);
      } catch (const Error&) {
        return make_bool(false);
      }
    }
    return make_bool(any);
  }
  if (op == "no_diagnostics") return make_bool(!last.has_errors());
  return std::nullopt;
}

inline bool holds(const json& e, const World& w, const EvalResult& last) {
  auto v = eval(e, w, last);
  return v && *v == make_bool(true);
}

}  // namespace nodehack::win
