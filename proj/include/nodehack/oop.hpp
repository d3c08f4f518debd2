#pragma once

/// @file oop.hpp
/// @brief Classes with single inheritance, instances with local field
/// overrides, and the registry of native (engine-defined) functions and methods.
///
/// Field reads are prototype-style: an instance's local value wins, otherwise
/// the default of the nearest class up the chain that declares the field. A
/// class default edit is therefore observed by every instance without a local
/// override, with no retroactive mutation of instances.

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "nodehack/error.hpp"
#include "nodehack/graph.hpp"
#include "nodehack/value.hpp"

namespace nodehack {

struct Param {
  std::string name;
  DataType type;
  bool operator==(const Param&) const = default;
};

struct FieldDef {
  std::string name;
  DataType type;
  Value default_value;
  bool operator==(const FieldDef&) const = default;
};

struct MethodDef {
  std::string name;
  std::vector<Param> params;
  std::vector<Param> results;
  std::string impl;  // native implementation id
  bool operator==(const MethodDef&) const = default;
};

struct ClassDef {
  std::string id;
  std::string name;
  std::optional<std::string> parent;
  std::vector<FieldDef> fields;  // declared here, including default overrides of inherited fields
  std::vector<Param> constructor_params;
  std::vector<MethodDef> methods;
  bool operator==(const ClassDef&) const = default;

  const FieldDef* find_field(std::string_view f) const {
    for (const auto& fd : fields)
      if (fd.name == f) return &fd;
    return nullptr;
  }
  const MethodDef* find_method(std::string_view m) const {
    for (const auto& md : methods)
      if (md.name == m) return &md;
    return nullptr;
  }
};

using ClassTable = std::map<std::string, ClassDef>;

struct Instance {
  std::string id;
  std::string class_id;
  std::map<std::string, Value> local_fields;
  std::optional<std::string> bound_entity;
  bool operator==(const Instance&) const = default;
};

/// Classes from `class_id` up to the root; throws UnknownClass.
inline std::vector<const ClassDef*> class_chain(const ClassTable& table, const std::string& class_id) {
  std::vector<const ClassDef*> chain;
  std::set<std::string> seen;
  std::optional<std::string> cur = class_id;
  while (cur) {
    auto it = table.find(*cur);
    if (it == table.end()) fail(ErrorCode::UnknownClass, "no class '" + *cur + "'");
    if (!seen.insert(*cur).second) fail(ErrorCode::InheritanceCycle, "class '" + class_id + "' inherits from itself");
    chain.push_back(&it->second);
    cur = it->second.parent;
  }
  return chain;
}

inline bool is_subclass_of(const ClassTable& table, const std::string& class_id, const std::string& ancestor) {
  for (const ClassDef* c : class_chain(table, class_id))
    if (c->id == ancestor) return true;
  return false;
}

/// The nearest declaration of a field at or above `class_id`.
inline const FieldDef* lookup_field(const ClassTable& table, const std::string& class_id, std::string_view field) {
  for (const ClassDef* c : class_chain(table, class_id))
    if (const FieldDef* f = c->find_field(field)) return f;
  return nullptr;
}

/// Union of field names along the chain, root declarations first; each entry
/// carries the nearest (effective) declaration.
inline std::vector<FieldDef> effective_fields(const ClassTable& table, const std::string& class_id) {
  auto chain = class_chain(table, class_id);
  std::vector<FieldDef> out;
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
    for (const auto& f : (*it)->fields) {
      auto existing = std::find_if(out.begin(), out.end(), [&](const FieldDef& o) { return o.name == f.name; });
      if (existing != out.end())
        *existing = f;
      else
        out.push_back(f);
    }
  }
  return out;
}

inline const MethodDef& resolve_method(const ClassTable& table, const std::string& class_id, std::string_view name) {
  for (const ClassDef* c : class_chain(table, class_id))
    if (const MethodDef* m = c->find_method(name)) return *m;
  fail(ErrorCode::UnknownMethod, "class '" + class_id + "' has no method '" + std::string(name) + "'");
}

inline ClassTable define_class(ClassTable table, ClassDef def) {
  if (table.count(def.id)) fail(ErrorCode::DuplicateClass, "class '" + def.id + "' already defined");
  if (def.parent) {
    if (*def.parent == def.id) fail(ErrorCode::InheritanceCycle, "class '" + def.id + "' cannot extend itself");
    if (!table.count(*def.parent))
      fail(ErrorCode::UnknownParent, "class '" + def.id + "' extends unknown '" + *def.parent + "'");
  }
  std::set<std::string> names;
  for (const auto& f : def.fields) {
    if (!names.insert(f.name).second)
      fail(ErrorCode::InvalidInputType, "class '" + def.id + "' declares field '" + f.name + "' twice");
    if (type_of(f.default_value) != f.type || !is_storable(f.default_value))
      fail(ErrorCode::InvalidInputType, "default of '" + def.id + "." + f.name + "' is not a finite " +
                                            std::string(to_string(f.type)));
    if (def.parent) {
      if (const FieldDef* inherited = lookup_field(table, *def.parent, f.name); inherited && inherited->type != f.type)
        fail(ErrorCode::InvalidInputType, "override of '" + f.name + "' in '" + def.id + "' changes its type");
    }
  }
  names.clear();
  for (const auto& m : def.methods) {
    if (!names.insert(m.name).second)
      fail(ErrorCode::UnknownMethod, "class '" + def.id + "' declares method '" + m.name + "' twice");
    if (def.parent) {
      const ClassDef* found = nullptr;
      for (const ClassDef* c : class_chain(table, *def.parent))
        if (c->find_method(m.name)) {
          found = c;
          break;
        }
      if (found) {
        const MethodDef& base = *found->find_method(m.name);
        if (base.params != m.params || base.results != m.results)
          fail(ErrorCode::InvalidInputType, "override of '" + m.name + "' in '" + def.id + "' changes its signature");
      }
    }
  }
  std::string id = def.id;
  table.emplace(id, std::move(def));
  // Constructor params become local overrides, so each must name a field of matching type.
  for (const auto& p : table.at(id).constructor_params) {
    const FieldDef* f = lookup_field(table, id, p.name);
    if (!f) fail(ErrorCode::UnknownField, "constructor parameter '" + p.name + "' of '" + id + "' is not a field");
    if (f->type != p.type)
      fail(ErrorCode::InvalidInputType, "constructor parameter '" + p.name + "' of '" + id + "' has the wrong type");
  }
  return table;
}

inline Instance instantiate(const ClassTable& table, const std::string& class_id, std::span<const Value> args,
                            std::string instance_id) {
  auto it = table.find(class_id);
  if (it == table.end()) fail(ErrorCode::UnknownClass, "no class '" + class_id + "'");
  const auto& params = it->second.constructor_params;
  if (args.size() != params.size())
    fail(ErrorCode::ConstructorArityMismatch, "'" + class_id + "' takes " + std::to_string(params.size()) +
                                                  " argument(s), got " + std::to_string(args.size()));
  Instance inst{std::move(instance_id), class_id, {}, std::nullopt};
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (type_of(args[i]) != params[i].type)
      fail(ErrorCode::InvalidInputType, "argument '" + params[i].name + "' expects " +
                                            std::string(to_string(params[i].type)) + ", got " +
                                            std::string(to_string(type_of(args[i]))));
    if (!is_storable(args[i])) fail(ErrorCode::InvalidInputType, "argument '" + params[i].name + "' is not finite");
    inst.local_fields[params[i].name] = args[i];
  }
  return inst;
}

inline Value read_field(const ClassTable& table, const Instance& inst, std::string_view field) {
  if (auto it = inst.local_fields.find(std::string(field)); it != inst.local_fields.end()) return it->second;
  if (const FieldDef* f = lookup_field(table, inst.class_id, field)) return f->default_value;
  fail(ErrorCode::UnknownField, "instance '" + inst.id + "' has no field '" + std::string(field) + "'");
}

inline ClassTable set_class_default(ClassTable table, const std::string& class_id, const std::string& field,
                                    Value value) {
  if (!table.count(class_id)) fail(ErrorCode::UnknownClass, "no class '" + class_id + "'");
  const FieldDef* decl = lookup_field(table, class_id, field);
  if (!decl) fail(ErrorCode::UnknownField, "class '" + class_id + "' has no field '" + field + "'");
  if (type_of(value) != decl->type || !is_storable(value))
    fail(ErrorCode::InvalidInputType, "field '" + field + "' expects " + std::string(to_string(decl->type)));
  ClassDef& cls = table.at(class_id);
  for (auto& f : cls.fields) {
    if (f.name == field) {
      f.default_value = std::move(value);
      return table;
    }
  }
  cls.fields.push_back(FieldDef{field, decl->type, std::move(value)});
  return table;
}

/// Class table plus live instances.
struct ObjectStore {
  ClassTable classes;
  std::map<std::string, Instance> instances;
  bool operator==(const ObjectStore&) const = default;

  /// Instantiates under a fresh id ("obj<N>") and stores the instance.
  const Instance& create(const std::string& class_id, std::span<const Value> args) {
    std::size_t n = instances.size() + 1;
    while (instances.count("obj" + std::to_string(n))) ++n;
    Instance inst = instantiate(classes, class_id, args, "obj" + std::to_string(n));
    std::string id = inst.id;
    return instances.emplace(id, std::move(inst)).first->second;
  }
};

// ---------------------------------------------------------------------------
// Natives

struct NativeResult {
  std::vector<Value> values;
  std::string error;  // non-empty on failure
};

struct MethodCallContext {
  const ClassTable& classes;
  const Instance& self;
  std::span<const Value> args;
};

using MethodImpl = std::function<NativeResult(const MethodCallContext&)>;
using FunctionImpl = std::function<NativeResult(std::span<const Value>)>;

struct FunctionDef {
  std::vector<Param> params;
  std::vector<Param> results;
  FunctionImpl impl;
};

/// Engine-defined functions and method bodies. Programs see only signatures.
class NativeRegistry {
 public:
  void define_function(const std::string& id, std::vector<Param> params, std::vector<Param> results,
                       FunctionImpl impl) {
    functions_[id] = FunctionDef{std::move(params), std::move(results), std::move(impl)};
  }
  void define_method_impl(const std::string& id, MethodImpl impl) { methods_[id] = std::move(impl); }

  const FunctionDef* function(const std::string& id) const {
    auto it = functions_.find(id);
    return it == functions_.end() ? nullptr : &it->second;
  }
  const MethodImpl* method_impl(const std::string& id) const {
    auto it = methods_.find(id);
    return it == methods_.end() ? nullptr : &it->second;
  }
  const std::map<std::string, FunctionDef>& functions() const { return functions_; }

 private:
  std::map<std::string, FunctionDef> functions_;
  std::map<std::string, MethodImpl> methods_;
};

namespace detail {

inline std::string heading_for(Color c, bool reversed) {
  static constexpr const char* forward[] = {"N", "E", "S", "W"};
  static constexpr const char* mirrored[] = {"S", "W", "N", "E"};
  return (reversed ? mirrored : forward)[static_cast<int>(c)];
}

}  // namespace detail

/// Functions and method bodies shipped with the engine.
inline const NativeRegistry& builtin_registry() {
  static const NativeRegistry registry = [] {
    NativeRegistry r;
    const auto num = DataType::Number;
    r.define_function("abs", {{"x", num}}, {{"out", num}}, [](std::span<const Value> a) {
      return NativeResult{{make_number(std::abs(std::get<double>(a[0])))}, {}};
    });
    r.define_function("min", {{"a", num}, {"b", num}}, {{"out", num}}, [](std::span<const Value> a) {
      return NativeResult{{make_number(std::min(std::get<double>(a[0]), std::get<double>(a[1])))}, {}};
    });
    r.define_function("max", {{"a", num}, {"b", num}}, {{"out", num}}, [](std::span<const Value> a) {
      return NativeResult{{make_number(std::max(std::get<double>(a[0]), std::get<double>(a[1])))}, {}};
    });
    r.define_function("heading_of", {{"color", DataType::Color}}, {{"heading", DataType::Text}},
                      [](std::span<const Value> a) {
                        return NativeResult{{make_text(detail::heading_for(std::get<Color>(a[0]), false))}, {}};
                      });
    r.define_method_impl("heading_from_color", [](const MethodCallContext& c) {
      return NativeResult{{make_text(detail::heading_for(std::get<Color>(c.args[0]), false))}, {}};
    });
    r.define_method_impl("heading_from_color_reversed", [](const MethodCallContext& c) {
      return NativeResult{{make_text(detail::heading_for(std::get<Color>(c.args[0]), true))}, {}};
    });
    r.define_method_impl("class_name", [](const MethodCallContext& c) {
      auto it = c.classes.find(c.self.class_id);
      return NativeResult{{make_text(it == c.classes.end() ? c.self.class_id : it->second.name)}, {}};
    });
    return r;
  }();
  return registry;
}

// ---------------------------------------------------------------------------
// Node signatures derived from classes and natives

inline std::vector<PortSpec> constructor_signature(const ClassDef& cls) {
  std::vector<PortSpec> ports;
  for (const auto& p : cls.constructor_params) ports.push_back(in_port(p.name, p.type));
  ports.push_back(out_port("out", DataType::InstanceRef));
  return ports;
}

/// Class nodes take one optional input per field (a class default write) and
/// expose the class reference.
inline std::vector<PortSpec> class_node_signature(const ClassTable& table, const std::string& class_id) {
  std::vector<PortSpec> ports;
  for (const auto& f : effective_fields(table, class_id)) ports.push_back(in_port(f.name, f.type, false));
  ports.push_back(out_port("class", DataType::ClassRef));
  return ports;
}

inline std::vector<PortSpec> method_signature(const MethodDef& m) {
  std::vector<PortSpec> ports{in_port("target", std::nullopt)};
  for (const auto& p : m.params) ports.push_back(in_port(p.name, p.type));
  for (const auto& r : m.results) ports.push_back(out_port(r.name, r.type));
  return ports;
}

inline std::vector<PortSpec> function_signature(const FunctionDef& f) {
  std::vector<PortSpec> ports;
  for (const auto& p : f.params) ports.push_back(in_port(p.name, p.type));
  for (const auto& r : f.results) ports.push_back(out_port(r.name, r.type));
  return ports;
}

/// Adds class, constructor, method and function signatures to `table`.
inline void add_oop_signatures(SignatureTable& table, const ClassTable& classes, const NativeRegistry& natives) {
  for (const auto& [id, cls] : classes) {
    table.constructors[id] = constructor_signature(cls);
    table.classes[id] = class_node_signature(classes, id);
    std::set<std::string> method_names;
    for (const ClassDef* c : class_chain(classes, id))
      for (const auto& m : c->methods) method_names.insert(m.name);
    for (const auto& name : method_names)
      table.methods[{id, name}] = method_signature(resolve_method(classes, id, name));
  }
  for (const auto& [id, f] : natives.functions()) table.functions[id] = function_signature(f);
}

}  // namespace nodehack
