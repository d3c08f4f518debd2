#pragma once

// Reference implementations used by the property tests and the acceptance
// binary. They are deliberately naive and share no code with the engine
// beyond the data types.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "nodehack/evaluator.hpp"

namespace oracle {

using namespace nodehack;

inline std::string pad_id(const char* prefix, int i) {
  std::string s = std::to_string(i);
  if (s.size() < 2) s = "0" + s;
  return prefix + s;
}

// ---------------------------------------------------------------------------
// Cycles

// Node adjacency straight from the tube list. Tubes into entity or class
// nodes do not carry data within a pass, so they are skipped.
inline std::map<std::string, std::set<std::string>> tube_adjacency(const Program& p) {
  std::map<std::string, std::set<std::string>> adj;
  for (const auto& [id, _] : p.nodes) adj[id];
  for (const auto& t : p.tubes) {
    const NodeKind& k = p.nodes.at(t.to.node).kind;
    if (std::holds_alternative<kind::Entity>(k) || std::holds_alternative<kind::ClassNode>(k)) continue;
    adj[t.from.node].insert(t.to.node);
  }
  return adj;
}

// Every elementary cycle, found by extending all simple paths from each start
// node through strictly larger ids. Each cycle therefore begins at its
// smallest id; the result is sorted.
inline std::vector<std::vector<std::string>> brute_force_cycles(const Program& p) {
  auto adj = tube_adjacency(p);
  std::vector<std::vector<std::string>> out;
  std::vector<std::string> path;
  std::set<std::string> on_path;
  std::function<void(const std::string&, const std::string&)> extend = [&](const std::string& start,
                                                                          const std::string& v) {
    for (const auto& w : adj[v]) {
      if (w == start) {
        out.push_back(path);
      } else if (w > start && !on_path.count(w)) {
        path.push_back(w);
        on_path.insert(w);
        extend(start, w);
        on_path.erase(w);
        path.pop_back();
      }
    }
  };
  for (const auto& [start, _] : adj) {
    path = {start};
    on_path = {start};
    extend(start, start);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// A test-only signature for entity nodes: two readable outputs and two
// writable inputs, so random graphs can route tubes through the world.
inline SignatureTable probe_signatures() {
  SignatureTable t;
  t.entities["probe"] = {out_port("v", DataType::Number), out_port("self", DataType::EntityRef),
                         in_port("w1", DataType::Number, false), in_port("w2", DataType::Number, false)};
  return t;
}

// Random program of up to `max_nodes` nodes with arbitrary (untyped) wiring.
// Most nodes are Conditionals (three inputs); some are entity probes.
inline Program random_wiring(std::mt19937& rng, int max_nodes, double density) {
  std::uniform_int_distribution<int> count(1, max_nodes);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int n = count(rng);
  SignatureTable sigs = probe_signatures();
  Program p;
  std::vector<std::string> ids;
  for (int i = 0; i < n; ++i) {
    std::string id = pad_id("n", i);
    NodeKind k = unit(rng) < 0.2 ? NodeKind{kind::Entity{"probe"}} : NodeKind{kind::Conditional{}};
    p = add_node(std::move(p), make_node(id, k, sigs));
    ids.push_back(id);
  }
  std::uniform_int_distribution<int> pick(0, n - 1);
  for (const auto& to : ids) {
    for (const auto& port : p.nodes.at(to).ports) {
      if (port.direction != Direction::In || unit(rng) >= density) continue;
      const std::string& from = ids[pick(rng)];
      const std::string out = std::holds_alternative<kind::Entity>(p.nodes.at(from).kind) ? "v" : "out";
      p = connect(std::move(p), PortRef{from, out}, PortRef{to, port.name});
    }
  }
  return p;
}

// ---------------------------------------------------------------------------
// Pure-expression DAGs

struct DagNode {
  std::string id;
  NodeKind kind;
  std::vector<std::string> args;  // upstream node per input port, in port order
  DataType type;
};

struct Dag {
  std::vector<DagNode> nodes;  // topologically ordered by construction
  Program program;
};

// Random well-typed DAG over Constant, Arithmetic, Logical, Not, Compare and
// Conditional. Every input of every non-constant node is wired.
inline Dag random_dag(std::mt19937& rng, int max_nodes) {
  std::uniform_int_distribution<int> count(1, max_nodes);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int n = count(rng);
  Dag dag;
  auto of_type = [&](DataType t) {
    std::vector<std::string> ids;
    for (const auto& d : dag.nodes)
      if (d.type == t) ids.push_back(d.id);
    return ids;
  };
  auto choose = [&](const std::vector<std::string>& ids) {
    return ids[std::uniform_int_distribution<std::size_t>(0, ids.size() - 1)(rng)];
  };
  auto constant = [&]() -> std::pair<NodeKind, DataType> {
    if (unit(rng) < 0.5) return {kind::Constant{make_bool(unit(rng) < 0.5)}, DataType::Boolean};
    double v = unit(rng) < 0.5 ? std::uniform_int_distribution<int>(-3, 5)(rng) : (unit(rng) * 20.0 - 10.0);
    return {kind::Constant{make_number(v)}, DataType::Number};
  };
  for (int i = 0; i < n; ++i) {
    DagNode d;
    d.id = pad_id("e", i);
    auto nums = of_type(DataType::Number);
    auto bools = of_type(DataType::Boolean);
    int choice = std::uniform_int_distribution<int>(0, 5)(rng);
    bool built = false;
    if (choice == 1 && !nums.empty()) {
      d.kind = kind::Arithmetic{static_cast<ArithOp>(std::uniform_int_distribution<int>(0, 3)(rng))};
      d.args = {choose(nums), choose(nums)};
      d.type = DataType::Number;
      built = true;
    } else if (choice == 2 && !bools.empty()) {
      d.kind = kind::Logical{static_cast<LogicOp>(std::uniform_int_distribution<int>(0, 2)(rng))};
      d.args = {choose(bools), choose(bools)};
      d.type = DataType::Boolean;
      built = true;
    } else if (choice == 3 && !bools.empty()) {
      d.kind = kind::Not{};
      d.args = {choose(bools)};
      d.type = DataType::Boolean;
      built = true;
    } else if (choice == 4 && !nums.empty()) {
      d.kind = kind::Compare{static_cast<CompareOp>(std::uniform_int_distribution<int>(0, 5)(rng))};
      d.args = {choose(nums), choose(nums)};
      d.type = DataType::Boolean;
      built = true;
    } else if (choice == 5 && !bools.empty()) {
      DataType branch = (!nums.empty() && unit(rng) < 0.5) ? DataType::Number : DataType::Boolean;
      auto& pool = branch == DataType::Number ? nums : bools;
      d.kind = kind::Conditional{};
      d.args = {choose(bools), choose(pool), choose(pool)};
      d.type = branch;
      built = true;
    }
    if (!built) std::tie(d.kind, d.type) = constant();
    dag.nodes.push_back(std::move(d));
  }
  for (const auto& d : dag.nodes) dag.program = add_node(std::move(dag.program), make_node(d.id, d.kind));
  for (const auto& d : dag.nodes) {
    std::vector<std::string> inputs;
    for (const auto& p : dag.program.nodes.at(d.id).ports)
      if (p.direction == Direction::In) inputs.push_back(p.name);
    for (std::size_t i = 0; i < d.args.size(); ++i)
      dag.program = connect(std::move(dag.program), PortRef{d.args[i], "out"}, PortRef{d.id, inputs[i]});
  }
  return dag;
}

// Recursive evaluation straight from the operator definitions. nullopt means
// the node fails (division by zero, a non-finite result, or a failed input).
inline std::optional<Value> reference_eval(const Dag& dag, const std::string& id,
                                           std::map<std::string, std::optional<Value>>& memo) {
  if (auto it = memo.find(id); it != memo.end()) return it->second;
  const DagNode& d = *std::find_if(dag.nodes.begin(), dag.nodes.end(), [&](const DagNode& x) { return x.id == id; });
  std::vector<Value> a;
  for (const auto& up : d.args) {
    auto v = reference_eval(dag, up, memo);
    if (!v) return memo[id] = std::nullopt;
    a.push_back(*v);
  }
  auto num = [&](int i) { return std::get<double>(a[i]); };
  auto boolean = [&](int i) { return std::get<bool>(a[i]); };
  std::optional<Value> r;
  if (auto* c = std::get_if<kind::Constant>(&d.kind)) {
    r = c->value;
  } else if (auto* ar = std::get_if<kind::Arithmetic>(&d.kind)) {
    double x = 0;
    bool ok = true;
    switch (ar->op) {
      case ArithOp::Add: x = num(0) + num(1); break;
      case ArithOp::Sub: x = num(0) - num(1); break;
      case ArithOp::Mul: x = num(0) * num(1); break;
      case ArithOp::Div:
        ok = num(1) != 0.0;
        if (ok) x = num(0) / num(1);
        break;
    }
    if (ok && std::isfinite(x)) r = make_number(x);
  } else if (auto* l = std::get_if<kind::Logical>(&d.kind)) {
    bool x = l->op == LogicOp::And ? (boolean(0) && boolean(1)) : l->op == LogicOp::Or ? (boolean(0) || boolean(1))
                                                                                       : (boolean(0) != boolean(1));
    r = make_bool(x);
  } else if (std::holds_alternative<kind::Not>(d.kind)) {
    r = make_bool(!boolean(0));
  } else if (auto* c = std::get_if<kind::Compare>(&d.kind)) {
    double x = num(0), y = num(1);
    bool out = false;
    switch (c->op) {
      case CompareOp::Eq: out = x == y; break;
      case CompareOp::Neq: out = x != y; break;
      case CompareOp::Lt: out = x < y; break;
      case CompareOp::Leq: out = x <= y; break;
      case CompareOp::Gt: out = x > y; break;
      case CompareOp::Geq: out = x >= y; break;
    }
    r = make_bool(out);
  } else if (std::holds_alternative<kind::Conditional>(d.kind)) {
    r = boolean(0) ? a[1] : a[2];
  }
  return memo[id] = r;
}

// Compares the engine's outputs with the reference; returns a description of
// the first mismatch, or an empty string.
inline std::string compare_with_reference(const Dag& dag, const EvalResult& r, double tol = 1e-9) {
  std::map<std::string, std::optional<Value>> memo;
  for (const auto& d : dag.nodes) {
    auto expect = reference_eval(dag, d.id, memo);
    auto it = r.outputs.find(PortRef{d.id, "out"});
    bool has = it != r.outputs.end();
    if (has != expect.has_value())
      return d.id + ": engine " + (has ? "produced a value" : "produced no value") + ", reference " +
             (expect ? display(*expect) : std::string("fails"));
    if (!has) continue;
    if (type_of(it->second) != type_of(*expect)) return d.id + ": type differs";
    if (auto* b = std::get_if<bool>(&*expect)) {
      if (std::get<bool>(it->second) != *b) return d.id + ": boolean differs";
    } else {
      double x = std::get<double>(it->second), y = std::get<double>(*expect);
      if (std::abs(x - y) > tol) return d.id + ": " + std::to_string(x) + " vs " + std::to_string(y);
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Class trees

// Parent links and declared defaults, kept apart from the engine's tables.
struct PlainClasses {
  std::map<std::string, std::optional<std::string>> parent;
  std::map<std::string, std::optional<double>> declared;  // default declared on this class, if any
};

struct PlainInstance {
  std::string id;
  std::string class_id;
  std::optional<double> local;
};

// Walks the chain by hand: local value, else the nearest declaring class.
inline double walk_chain(const PlainClasses& c, const PlainInstance& inst) {
  if (inst.local) return *inst.local;
  std::optional<std::string> cur = inst.class_id;
  while (cur) {
    if (auto d = c.declared.at(*cur)) return *d;
    cur = c.parent.at(*cur);
  }
  return std::nan("");
}

inline bool in_subtree(const PlainClasses& c, const std::string& cls, const std::string& root) {
  std::optional<std::string> cur = cls;
  while (cur) {
    if (*cur == root) return true;
    cur = c.parent.at(*cur);
  }
  return false;
}

// True when some class from `cls` up to (not including) `root` redeclares the field.
inline bool shadowed_below(const PlainClasses& c, const std::string& cls, const std::string& root) {
  std::optional<std::string> cur = cls;
  while (cur && *cur != root) {
    if (c.declared.at(*cur)) return true;
    cur = c.parent.at(*cur);
  }
  return false;
}

struct ClassWorld {
  PlainClasses plain;
  ClassTable table;
  std::vector<PlainInstance> plain_instances;
  std::vector<Instance> instances;
};

// A root, two or three children, and one to three grandchildren per child.
// The field "level" is declared on the root and randomly redeclared below;
// instances randomly carry a local value.
inline ClassWorld random_class_world(std::mt19937& rng, int instance_count) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  ClassWorld w;
  int next_value = 1;
  auto add = [&](const std::string& id, std::optional<std::string> parent, bool declare) {
    ClassDef def{id, id, parent, {}, {}, {}};
    std::optional<double> d;
    if (declare) {
      d = next_value++;
      def.fields.push_back(FieldDef{"level", DataType::Number, make_number(*d)});
    }
    w.plain.parent[id] = parent;
    w.plain.declared[id] = d;
    w.table = define_class(std::move(w.table), std::move(def));
  };
  add("Root", std::nullopt, true);
  int children = std::uniform_int_distribution<int>(2, 3)(rng);
  for (int i = 0; i < children; ++i) {
    std::string child = "Mid" + std::to_string(i);
    add(child, "Root", unit(rng) < 0.4);
    int grand = std::uniform_int_distribution<int>(1, 3)(rng);
    for (int j = 0; j < grand; ++j) add("Leaf" + std::to_string(i) + std::to_string(j), child, unit(rng) < 0.4);
  }
  std::vector<std::string> ids;
  for (const auto& [id, _] : w.plain.parent) ids.push_back(id);
  for (int i = 0; i < instance_count; ++i) {
    PlainInstance pi{"obj" + std::to_string(i), ids[std::uniform_int_distribution<std::size_t>(0, ids.size() - 1)(rng)],
                     std::nullopt};
    Instance inst{pi.id, pi.class_id, {}, std::nullopt};
    if (unit(rng) < 0.3) {
      pi.local = 100 + i;
      inst.local_fields["level"] = make_number(*pi.local);
    }
    w.plain_instances.push_back(pi);
    w.instances.push_back(inst);
  }
  return w;
}

}  // namespace oracle
