#pragma once

/// @file evaluator.hpp
/// @brief One full dataflow pass over a program against a world snapshot.
///
/// Nodes run in topological order, ties broken by ascending node id. Types are
/// checked on every pass against the actual runtime values. Failures never
/// throw: each becomes a Diagnostic attributed to the node that consumed the
/// offending value, the delivering tube is marked Error, and nodes downstream
/// of an errored node receive UpstreamError instead of a second root cause.
///
/// Node states after a pass:
///  - Ok: outputs are present.
///  - Error: a diagnostic is attached and there are no outputs.
///  - Quiet: an input came from an event handler that did not fire this pass.
///  - Dormant: the node has no tubes at all and required inputs, so it is a
///    spare part lying on the canvas and is not evaluated.
///
/// Entity and class nodes are world-backed: their outputs read the snapshot
/// and their inputs become writes applied by the next world step.

#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "nodehack/cycles.hpp"
#include "nodehack/graph.hpp"
#include "nodehack/oop.hpp"
#include "nodehack/value.hpp"
#include "nodehack/world.hpp"

namespace nodehack {

enum class DiagCode {
  FeedbackLoop,
  InvalidInputType,
  MissingInput,
  DivisionByZero,
  NonFiniteResult,
  UnknownFunction,
  UnknownMethod,
  ConstructorArityMismatch,
  UpstreamError,
  UnknownEntity,
  UnknownClass,
  WriteConflict,
};

inline std::string_view to_string(DiagCode c) {
  static constexpr std::string_view names[] = {
      "FeedbackLoop",    "InvalidInputType", "MissingInput",  "DivisionByZero",
      "NonFiniteResult", "UnknownFunction",  "UnknownMethod", "ConstructorArityMismatch",
      "UpstreamError",   "UnknownEntity",    "UnknownClass",  "WriteConflict"};
  return names[static_cast<int>(c)];
}

enum class Severity { Error, Warning };

struct Diagnostic {
  DiagCode code = DiagCode::MissingInput;
  std::string at_node;
  std::optional<std::string> at_port;
  std::string message;
  std::vector<Tube> tubes_marked;
  Severity severity = Severity::Error;
  bool operator==(const Diagnostic&) const = default;
};

enum class NodeState { Ok, Error, Quiet, Dormant };

inline std::string_view to_string(NodeState s) {
  static constexpr std::string_view names[] = {"ok", "error", "quiet", "dormant"};
  return names[static_cast<int>(s)];
}

struct EvalContext {
  const World& world;
  const NativeRegistry& natives = builtin_registry();
  std::vector<WorldEvent> events = {};  // pending events for this pass
};

struct EvalResult {
  std::map<PortRef, Value> outputs;
  std::vector<Diagnostic> diagnostics;
  std::vector<EntityWrite> actions;
  std::vector<ClassDefaultWrite> class_writes;
  std::vector<Instance> instances;  // created by constructor nodes
  std::map<Tube, TubeState> tube_states;
  std::vector<std::string> fired_events;
  std::map<std::string, NodeState> node_states;
  bool operator==(const EvalResult&) const = default;

  bool has_errors() const {
    return std::any_of(diagnostics.begin(), diagnostics.end(),
                       [](const Diagnostic& d) { return d.severity == Severity::Error; });
  }

  const Diagnostic* error_for(std::string_view node) const {
    for (const auto& d : diagnostics)
      if (d.at_node == node && d.severity == Severity::Error) return &d;
    return nullptr;
  }
};

namespace detail {

class Pass {
 public:
  Pass(const Program& program, const EvalContext& ctx) : program_(program), ctx_(ctx) {}

  EvalResult run() {
    for (const auto& t : program_.tubes) result_.tube_states[t] = TubeState::Normal;

    std::set<std::string> cyclic;
    for (const auto& cycle : detect_cycles(program_)) cyclic.insert(cycle.begin(), cycle.end());
    for (const auto& id : cyclic) {
      diag(DiagCode::FeedbackLoop, id, std::nullopt, "node is part of a feedback loop", {});
      state(id, NodeState::Error);
    }

    for (const auto& id : topological_order(cyclic)) eval_node(program_.nodes.at(id));
    for (const auto& [id, node] : program_.nodes)
      if (is_world_backed(node.kind) && result_.node_states[id] != NodeState::Error) collect_writes(node);

    for (const auto& d : result_.diagnostics)
      for (const auto& t : d.tubes_marked) result_.tube_states[t] = TubeState::Error;
    for (const auto& t : program_.tubes)
      if (result_.node_states[t.from.node] == NodeState::Error) result_.tube_states[t] = TubeState::Error;
    return std::move(result_);
  }

 private:
  struct Input {
    const PortSpec* spec = nullptr;
    const Tube* tube = nullptr;
    std::optional<Value> value;
  };

  std::vector<std::string> topological_order(const std::set<std::string>& cyclic) const {
    auto succ = dataflow_successors(program_);
    std::map<std::string, int> indegree;
    for (const auto& [id, _] : program_.nodes)
      if (!cyclic.count(id)) indegree[id] = 0;
    for (const auto& [from, outs] : succ) {
      if (cyclic.count(from)) continue;
      for (const auto& to : outs)
        if (!cyclic.count(to)) ++indegree[to];
    }
    std::set<std::string> ready;
    for (const auto& [id, d] : indegree)
      if (d == 0) ready.insert(id);
    std::vector<std::string> order;
    while (!ready.empty()) {
      std::string id = *ready.begin();
      ready.erase(ready.begin());
      order.push_back(id);
      for (const auto& to : succ[id])
        if (!cyclic.count(to) && --indegree[to] == 0) ready.insert(to);
    }
    return order;
  }

  void diag(DiagCode code, const std::string& node, std::optional<std::string> port, std::string message,
            std::vector<Tube> marked, Severity sev = Severity::Error) {
    result_.diagnostics.push_back(Diagnostic{code, node, std::move(port), std::move(message), std::move(marked), sev});
  }

  void state(const std::string& node, NodeState s) { result_.node_states[node] = s; }

  void set_output(const std::string& node, const std::string& port, Value v) {
    result_.outputs[PortRef{node, port}] = std::move(v);
  }

  void error(DiagCode code, const Node& node, std::optional<std::string> port, std::string message,
             const Tube* marked = nullptr) {
    std::vector<Tube> tubes;
    if (marked) tubes.push_back(*marked);
    diag(code, node.id, std::move(port), std::move(message), std::move(tubes));
    state(node.id, NodeState::Error);
    for (auto it = result_.outputs.begin(); it != result_.outputs.end();)
      it = it->first.node == node.id ? result_.outputs.erase(it) : std::next(it);
  }

  void type_error(const Node& node, const Input& in, std::string_view expected) {
    error(DiagCode::InvalidInputType, node, in.spec->name,
          "input '" + in.spec->name + "' expects " + std::string(expected) + ", got " +
              std::string(to_string(type_of(*in.value))),
          in.tube);
  }

  // Returns false when the node did not reach the kind-specific stage.
  bool gather(const Node& node, std::vector<Input>& inputs) {
    const Tube* upstream = nullptr;
    const PortSpec* missing = nullptr;
    bool quiet = false;
    for (const auto& p : node.ports) {
      if (p.direction != Direction::In) continue;
      Input in{&p, program_.incoming(PortRef{node.id, p.name}), std::nullopt};
      if (!in.tube) {
        if (p.required && !missing) missing = &p;
      } else {
        NodeState src = result_.node_states.count(in.tube->from.node) ? result_.node_states[in.tube->from.node]
                                                                     : NodeState::Quiet;
        if (src == NodeState::Error) {
          if (!upstream) upstream = in.tube;
        } else if (auto it = result_.outputs.find(in.tube->from); it != result_.outputs.end()) {
          in.value = it->second;
        } else {
          quiet = true;
        }
      }
      inputs.push_back(std::move(in));
    }
    if (upstream) {
      error(DiagCode::UpstreamError, node, upstream->to.port,
            "input '" + upstream->to.port + "' comes from errored node '" + upstream->from.node + "'");
      result_.diagnostics.back().tubes_marked.push_back(*upstream);
      return false;
    }
    if (missing) {
      error(DiagCode::MissingInput, node, missing->name, "required input '" + missing->name + "' is not connected");
      return false;
    }
    if (quiet) {
      state(node.id, NodeState::Quiet);
      return false;
    }
    return true;
  }

  static const Input* find_input(const std::vector<Input>& inputs, std::string_view name) {
    for (const auto& in : inputs)
      if (in.spec->name == name) return &in;
    return nullptr;
  }

  bool finite_or_error(const Node& node, const Value& v, const std::vector<const Tube*>& marked) {
    if (is_storable(v)) return true;
    std::vector<Tube> tubes;
    for (const Tube* t : marked)
      if (t) tubes.push_back(*t);
    diag(DiagCode::NonFiniteResult, node.id, std::nullopt, "result is not a finite number", std::move(tubes));
    state(node.id, NodeState::Error);
    return false;
  }

  void eval_node(const Node& node) {
    if (is_world_backed(node.kind)) {
      eval_world_reads(node);
      return;
    }
    bool has_required = std::any_of(node.ports.begin(), node.ports.end(),
                                    [](const PortSpec& p) { return p.direction == Direction::In && p.required; });
    if (has_required && !program_.has_tubes(node.id)) {
      state(node.id, NodeState::Dormant);
      return;
    }
    if (auto* ev = std::get_if<kind::EventHandler>(&node.kind)) {
      eval_event(node, *ev);
      return;
    }
    std::vector<Input> in;
    if (!gather(node, in)) return;
    state(node.id, NodeState::Ok);
    std::visit([&](const auto& k) { compute(node, k, in); }, node.kind);
  }

  void eval_world_reads(const Node& node) {
    if (auto* e = std::get_if<kind::Entity>(&node.kind)) {
      if (!ctx_.world.entities.count(e->entity)) {
        error(DiagCode::UnknownEntity, node, std::nullopt, "no entity '" + e->entity + "' in the world");
        return;
      }
      auto props = readable_properties(ctx_.world, e->entity);
      for (const auto& p : node.ports) {
        if (p.direction != Direction::Out) continue;
        if (p.name == "self") {
          set_output(node.id, p.name, EntityRef{e->entity});
          continue;
        }
        auto it = std::find_if(props.begin(), props.end(), [&](const auto& kv) { return kv.first == p.name; });
        if (it == props.end() || !p.accepts(type_of(it->second))) {
          error(DiagCode::UnknownEntity, node, p.name, "entity '" + e->entity + "' has no readable '" + p.name + "'");
          return;
        }
        set_output(node.id, p.name, it->second);
      }
    } else if (auto* c = std::get_if<kind::ClassNode>(&node.kind)) {
      if (!ctx_.world.objects.classes.count(c->class_id)) {
        error(DiagCode::UnknownClass, node, std::nullopt, "no class '" + c->class_id + "'");
        return;
      }
      set_output(node.id, "class", ClassRef{c->class_id});
    }
    state(node.id, NodeState::Ok);
  }

  void eval_event(const Node& node, const kind::EventHandler& h) {
    for (const auto& ev : ctx_.events) {
      if (ev.kind != h.event) continue;
      if (h.event != EventKind::OnTick && ev.entity != h.entity) continue;
      state(node.id, NodeState::Ok);
      set_output(node.id, "fired", Pulse{});
      if (h.event == EventKind::OnEnterColumn) {
        set_output(node.id, "column", make_number(ev.column));
        set_output(node.id, "color", ev.color);
      }
      result_.fired_events.push_back(node.id);
      return;
    }
    state(node.id, NodeState::Quiet);
  }

  void compute(const Node& node, const kind::Constant& c, const std::vector<Input>&) {
    set_output(node.id, "out", c.value);
  }

  void compute(const Node& node, const kind::Arithmetic& a, const std::vector<Input>& in) {
    const Input& lhs = *find_input(in, "a");
    const Input& rhs = *find_input(in, "b");
    for (const Input* x : {&lhs, &rhs})
      if (type_of(*x->value) != DataType::Number) return type_error(node, *x, "Number");
    double l = std::get<double>(*lhs.value), r = std::get<double>(*rhs.value);
    double out = 0;
    switch (a.op) {
      case ArithOp::Add: out = l + r; break;
      case ArithOp::Sub: out = l - r; break;
      case ArithOp::Mul: out = l * r; break;
      case ArithOp::Div:
        if (r == 0.0)
          return error(DiagCode::DivisionByZero, node, std::string("b"), "division by zero", rhs.tube);
        out = l / r;
        break;
    }
    Value v = make_number(out);
    if (finite_or_error(node, v, {lhs.tube, rhs.tube})) set_output(node.id, "out", v);
  }

  void compute(const Node& node, const kind::Logical& g, const std::vector<Input>& in) {
    const Input& lhs = *find_input(in, "a");
    const Input& rhs = *find_input(in, "b");
    for (const Input* x : {&lhs, &rhs})
      if (type_of(*x->value) != DataType::Boolean) return type_error(node, *x, "Boolean");
    bool l = std::get<bool>(*lhs.value), r = std::get<bool>(*rhs.value);
    bool out = g.op == LogicOp::And ? (l && r) : g.op == LogicOp::Or ? (l || r) : (l != r);
    set_output(node.id, "out", make_bool(out));
  }

  void compute(const Node& node, const kind::Not&, const std::vector<Input>& in) {
    const Input& x = *find_input(in, "in");
    if (type_of(*x.value) != DataType::Boolean) return type_error(node, x, "Boolean");
    set_output(node.id, "out", make_bool(!std::get<bool>(*x.value)));
  }

  void compute(const Node& node, const kind::Compare& c, const std::vector<Input>& in) {
    const Input& lhs = *find_input(in, "a");
    const Input& rhs = *find_input(in, "b");
    bool equality = c.op == CompareOp::Eq || c.op == CompareOp::Neq;
    if (!equality) {
      for (const Input* x : {&lhs, &rhs})
        if (type_of(*x->value) != DataType::Number) return type_error(node, *x, "Number");
      double l = std::get<double>(*lhs.value), r = std::get<double>(*rhs.value);
      bool out = c.op == CompareOp::Lt ? l < r : c.op == CompareOp::Leq ? l <= r : c.op == CompareOp::Gt ? l > r : l >= r;
      set_output(node.id, "out", make_bool(out));
      return;
    }
    auto comparable = [](DataType t) { return t == DataType::Number || t == DataType::Text || t == DataType::Color; };
    if (!comparable(type_of(*lhs.value))) return type_error(node, lhs, "Number, Text or Color");
    if (type_of(*rhs.value) != type_of(*lhs.value))
      return type_error(node, rhs, to_string(type_of(*lhs.value)));
    bool same = *lhs.value == *rhs.value;
    set_output(node.id, "out", make_bool(c.op == CompareOp::Eq ? same : !same));
  }

  void compute(const Node& node, const kind::Conditional&, const std::vector<Input>& in) {
    const Input& cond = *find_input(in, "cond");
    const Input& then_in = *find_input(in, "then");
    const Input& else_in = *find_input(in, "else");
    if (type_of(*cond.value) != DataType::Boolean) return type_error(node, cond, "Boolean");
    if (type_of(*else_in.value) != type_of(*then_in.value))
      return type_error(node, else_in, to_string(type_of(*then_in.value)));
    set_output(node.id, "out", std::get<bool>(*cond.value) ? *then_in.value : *else_in.value);
  }

  void compute(const Node&, const kind::EventHandler&, const std::vector<Input>&) {}
  void compute(const Node&, const kind::Entity&, const std::vector<Input>&) {}
  void compute(const Node&, const kind::ClassNode&, const std::vector<Input>&) {}

  // Checks args against declared params; returns false after reporting.
  bool check_args(const Node& node, const std::vector<Input>& in, const std::vector<Param>& params,
                  std::vector<Value>& args) {
    for (const auto& p : params) {
      const Input* x = find_input(in, p.name);
      if (!x) {
        error(DiagCode::ConstructorArityMismatch, node, p.name, "node has no input for parameter '" + p.name + "'");
        return false;
      }
      if (type_of(*x->value) != p.type) {
        type_error(node, *x, to_string(p.type));
        return false;
      }
      args.push_back(*x->value);
    }
    return true;
  }

  void publish(const Node& node, const std::vector<Param>& results, const NativeResult& r,
               const std::vector<Input>& in) {
    if (!r.error.empty()) return error(DiagCode::InvalidInputType, node, std::nullopt, r.error);
    if (r.values.size() != results.size())
      return error(DiagCode::UnknownFunction, node, std::nullopt, "native returned the wrong number of results");
    std::vector<const Tube*> tubes;
    for (const auto& x : in) tubes.push_back(x.tube);
    for (std::size_t i = 0; i < results.size(); ++i) {
      if (type_of(r.values[i]) != results[i].type)
        return error(DiagCode::InvalidInputType, node, std::nullopt, "native returned a mistyped result");
      if (!finite_or_error(node, r.values[i], tubes)) return;
    }
    for (std::size_t i = 0; i < results.size(); ++i) set_output(node.id, results[i].name, r.values[i]);
  }

  void compute(const Node& node, const kind::FunctionCall& f, const std::vector<Input>& in) {
    const FunctionDef* def = ctx_.natives.function(f.function);
    if (!def) return error(DiagCode::UnknownFunction, node, std::nullopt, "no function '" + f.function + "'");
    if (function_signature(*def) != node.ports)
      return error(DiagCode::UnknownFunction, node, std::nullopt, "node ports do not match function '" + f.function + "'");
    std::vector<Value> args;
    if (!check_args(node, in, def->params, args)) return;
    publish(node, def->results, def->impl(args), in);
  }

  const Instance* find_instance(const std::string& id) const {
    for (const auto& inst : result_.instances)
      if (inst.id == id) return &inst;
    auto it = ctx_.world.objects.instances.find(id);
    return it == ctx_.world.objects.instances.end() ? nullptr : &it->second;
  }

  void compute(const Node& node, const kind::MethodCall& m, const std::vector<Input>& in) {
    const auto& classes = ctx_.world.objects.classes;
    if (!classes.count(m.class_id)) return error(DiagCode::UnknownClass, node, std::nullopt, "no class '" + m.class_id + "'");
    const Input& target = *find_input(in, "target");
    const Instance* self = nullptr;
    if (auto* ir = std::get_if<InstanceRef>(&*target.value)) {
      self = find_instance(ir->id);
    } else if (auto* er = std::get_if<EntityRef>(&*target.value)) {
      if (const auto* robot = ctx_.world.get<Robot>(er->id); robot && robot->instance) self = find_instance(*robot->instance);
    } else {
      return type_error(node, target, "InstanceRef or EntityRef");
    }
    if (!self || !classes.count(self->class_id) || !is_subclass_of(classes, self->class_id, m.class_id))
      return error(DiagCode::InvalidInputType, node, std::string("target"),
                   "target is not an object of class '" + m.class_id + "'", target.tube);
    const MethodDef* def = nullptr;
    for (const ClassDef* c : class_chain(classes, self->class_id))
      if ((def = c->find_method(m.method))) break;
    if (!def) return error(DiagCode::UnknownMethod, node, std::nullopt, "class '" + self->class_id + "' has no method '" + m.method + "'");
    const MethodImpl* impl = ctx_.natives.method_impl(def->impl);
    if (!impl) return error(DiagCode::UnknownMethod, node, std::nullopt, "no native body '" + def->impl + "'");
    if (method_signature(*def) != node.ports)
      return error(DiagCode::UnknownMethod, node, std::nullopt, "node ports do not match method '" + m.method + "'");
    std::vector<Value> args;
    if (!check_args(node, in, def->params, args)) return;
    publish(node, def->results, (*impl)(MethodCallContext{classes, *self, args}), in);
  }

  void compute(const Node& node, const kind::ConstructorCall& c, const std::vector<Input>& in) {
    const auto& classes = ctx_.world.objects.classes;
    auto it = classes.find(c.class_id);
    if (it == classes.end()) return error(DiagCode::UnknownClass, node, std::nullopt, "no class '" + c.class_id + "'");
    if (in.size() != it->second.constructor_params.size())
      return error(DiagCode::ConstructorArityMismatch, node, std::nullopt,
                   "'" + c.class_id + "' takes " + std::to_string(it->second.constructor_params.size()) +
                       " argument(s), node has " + std::to_string(in.size()));
    std::vector<Value> args;
    if (!check_args(node, in, it->second.constructor_params, args)) return;
    Instance inst = instantiate(classes, c.class_id, args, "new:" + node.id);
    set_output(node.id, "out", InstanceRef{inst.id});
    result_.instances.push_back(std::move(inst));
  }

  void collect_writes(const Node& node) {
    for (const auto& p : node.ports) {
      if (p.direction != Direction::In) continue;
      const Tube* tube = program_.incoming(PortRef{node.id, p.name});
      if (!tube) continue;
      NodeState src = result_.node_states.count(tube->from.node) ? result_.node_states[tube->from.node] : NodeState::Quiet;
      if (src == NodeState::Error) {
        diag(DiagCode::UpstreamError, node.id, p.name,
             "input '" + p.name + "' comes from errored node '" + tube->from.node + "'", {*tube});
        continue;
      }
      auto it = result_.outputs.find(tube->from);
      if (it == result_.outputs.end()) continue;
      const Value& v = it->second;
      if (!p.accepts(type_of(v))) {
        diag(DiagCode::InvalidInputType, node.id, p.name,
             "input '" + p.name + "' expects " + std::string(to_string(*p.dtype)) + ", got " +
                 std::string(to_string(type_of(v))),
             {*tube});
        continue;
      }
      if (auto* e = std::get_if<kind::Entity>(&node.kind)) {
        record_write(node, result_.actions, EntityWrite{e->entity, p.name, v},
                     [](const EntityWrite& a, const EntityWrite& b) { return a.entity == b.entity && a.property == b.property; });
      } else if (auto* c = std::get_if<kind::ClassNode>(&node.kind)) {
        record_write(node, result_.class_writes, ClassDefaultWrite{c->class_id, p.name, v},
                     [](const ClassDefaultWrite& a, const ClassDefaultWrite& b) {
                       return a.class_id == b.class_id && a.field == b.field;
                     });
      }
    }
  }

  // Last writer in evaluation order wins; the overwrite is reported as a warning.
  template <typename W, typename Same>
  void record_write(const Node& node, std::vector<W>& writes, W w, Same same) {
    auto prev = std::find_if(writes.begin(), writes.end(), [&](const W& x) { return same(x, w); });
    if (prev != writes.end()) {
      writes.erase(prev);
      diag(DiagCode::WriteConflict, node.id, std::nullopt, "another node already wrote this property this tick; last write wins",
           {}, Severity::Warning);
    }
    writes.push_back(std::move(w));
  }

  const Program& program_;
  const EvalContext& ctx_;
  EvalResult result_;
};

}  // namespace detail

inline EvalResult evaluate(const Program& program, const EvalContext& ctx) { return detail::Pass(program, ctx).run(); }

inline EvalResult dispatch_event(const Program& program, const EvalContext& ctx, const WorldEvent& event) {
  EvalContext with_event{ctx.world, ctx.natives, {event}};
  return evaluate(program, with_event);
}

/// What the right-gun style inspection shows for one node.
struct Inspection {
  std::string node;
  std::string port;  // port that supplied `value`, if any
  std::optional<Value> value;
  std::optional<Diagnostic> diagnostic;
  NodeState state = NodeState::Ok;
};

/// Evaluates once and reports the node's output (first Out port unless
/// `port` is given) or its root diagnostic. No writes are applied.
inline Inspection inspect(const Program& program, const std::string& node_id, const EvalContext& ctx,
                          const std::string& port = {}) {
  const Node* node = program.find(node_id);
  if (!node) fail(ErrorCode::UnknownNode, "no node '" + node_id + "'");
  EvalResult r = evaluate(program, ctx);
  Inspection out{node_id, {}, std::nullopt, std::nullopt, r.node_states[node_id]};
  if (out.state == NodeState::Error) {
    out.diagnostic = *r.error_for(node_id);
    return out;
  }
  for (const auto& p : node->ports) {
    if (p.direction != Direction::Out || (!port.empty() && p.name != port)) continue;
    out.port = p.name;
    if (auto it = r.outputs.find(PortRef{node_id, p.name}); it != r.outputs.end()) out.value = it->second;
    return out;
  }
  if (!port.empty()) fail(ErrorCode::UnknownEndpoint, "node '" + node_id + "' has no output '" + port + "'");
  return out;
}

}  // namespace nodehack
