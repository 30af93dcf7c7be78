#include "ciot/engine.hpp"

#include <cmath>

#include "ciot/typecheck.hpp"

namespace ciot {

// -- expression evaluation ---------------------------------------------------

namespace {

[[noreturn]] void eval_error(const std::string& msg) { throw Error("E_EVAL", msg); }

bool compare(ExprOp op, const Value& a, const Value& b) {
  if (a.is_numeric() && b.is_numeric()) {
    if (a.is_int() && b.is_int()) {
      auto x = a.as_int(), y = b.as_int();
      switch (op) {
        case ExprOp::Eq: return x == y;
        case ExprOp::Ne: return x != y;
        case ExprOp::Lt: return x < y;
        case ExprOp::Le: return x <= y;
        case ExprOp::Gt: return x > y;
        case ExprOp::Ge: return x >= y;
        default: break;
      }
    }
    double x = a.widened(), y = b.widened();
    switch (op) {
      case ExprOp::Eq: return x == y;
      case ExprOp::Ne: return x != y;
      case ExprOp::Lt: return x < y;
      case ExprOp::Le: return x <= y;
      case ExprOp::Gt: return x > y;
      case ExprOp::Ge: return x >= y;
      default: break;
    }
  }
  if (op == ExprOp::Eq) return a == b;
  if (op == ExprOp::Ne) return !(a == b);
  eval_error("ordering comparison on non-numeric values");
}

std::int64_t wrap_add(std::int64_t a, std::int64_t b, bool subtract) {
  auto ua = static_cast<std::uint64_t>(a), ub = static_cast<std::uint64_t>(b);
  return static_cast<std::int64_t>(subtract ? ua - ub : ua + ub);
}

}  // namespace

Value evaluate(const Expr& e, const ValueLookup& lookup) {
  switch (e.op) {
    case ExprOp::Literal: return e.literal;
    case ExprOp::Property:
    case ExprOp::Payload: {
      auto name = e.dotted_name();
      auto v = lookup(name);
      if (!v) eval_error("unbound name '" + name + "'");
      return *v;
    }
    default: break;
  }
  // Strict evaluation: every operand is computed; expressions are pure.
  std::vector<Value> args;
  args.reserve(e.operands.size());
  for (const auto& operand : e.operands) args.push_back(evaluate(operand, lookup));

  switch (e.op) {
    case ExprOp::Not: return Value(!args[0].as_bool());
    case ExprOp::Neg:
      if (args[0].is_int()) return Value(wrap_add(0, args[0].as_int(), true));
      return Value(-args[0].as_float());
    case ExprOp::And: return Value(args[0].as_bool() && args[1].as_bool());
    case ExprOp::Or: return Value(args[0].as_bool() || args[1].as_bool());
    case ExprOp::Add:
    case ExprOp::Sub: {
      bool sub = e.op == ExprOp::Sub;
      if (args[0].is_int() && args[1].is_int()) return Value(wrap_add(args[0].as_int(), args[1].as_int(), sub));
      double x = args[0].widened(), y = args[1].widened();
      return Value(sub ? x - y : x + y);
    }
    default: return Value(compare(e.op, args[0], args[1]));
  }
}

bool eval_guard(const Expr& expr, const ValueLookup& lookup) {
  Value v = evaluate(expr, lookup);
  if (!v.is_bool()) eval_error("guard '" + to_source(expr) + "' is not boolean");
  return v.as_bool();
}

ValueLookup lookup_from_map(const std::map<std::string, Value, std::less<>>& values) {
  return [values](std::string_view name) -> std::optional<Value> {
    auto it = values.find(name);
    if (it == values.end()) return std::nullopt;
    return it->second;
  };
}

// -- runtime state queries ---------------------------------------------------

std::optional<std::size_t> RuntimeState::find_instance(std::string_view path) const {
  for (std::size_t i = 0; i < instances.size(); ++i)
    if (instances[i].path == path) return i;
  return std::nullopt;
}

std::string RuntimeState::state_name(std::size_t instance) const {
  const auto& inst = instances[instance];
  if (!inst.current_state) return {};
  return component_of(instance).machine->states[*inst.current_state].name;
}

const Value* RuntimeState::property(std::size_t instance, std::string_view name) const {
  auto idx = component_of(instance).find_property(name);
  return idx ? &instances[instance].properties[*idx] : nullptr;
}

bool RuntimeState::quiescent() const {
  for (const auto& inst : instances)
    if (!inst.inbox.empty()) return false;
  return true;
}

// -- execution ---------------------------------------------------------------

namespace {

Value coerce(Value v, PrimType to) {
  if (to == PrimType::Float && v.is_int()) return Value(static_cast<double>(v.as_int()));
  return v;
}

class Executor {
 public:
  explicit Executor(RuntimeState& rt) : rt_(rt), m_(*rt.model) {}

  void enter_initial(std::size_t i) {
    const auto& c = rt_.component_of(i);
    if (!c.machine) return;
    auto init = c.machine->initial();
    if (!init)
      throw Error("E_INSTANTIATE", "component '" + c.name + "' has no unique initial state");
    rt_.instances[i].current_state = *init;
    record(i, TraceKind::StateEntered, DetailBuilder().add("state", c.machine->states[*init].name).str());
    for (auto ev : c.machine->states[*init].entry) run_activity(i, ev, "entry");
    run_completions(i);
  }

  void deliver(std::size_t i) {
    auto& inst = rt_.instances[i];
    EventInstance ev = std::move(inst.inbox.front());
    inst.inbox.pop_front();
    const auto& c = rt_.component_of(i);
    const EventDef& e = c.events[ev.event];

    std::string from = "env";
    if (ev.source.instance) {
      from = rt_.instances[*ev.source.instance].path;
      if (ev.source.port)
        from += "." + rt_.component_of(*ev.source.instance).ports[*ev.source.port].name;
    }
    DetailBuilder d;
    d.add("event", e.name).add("enq", std::to_string(ev.enqueue_seq)).add("from", from);
    if (ev.payload) d.add("payload", format_value(Value(*ev.payload)));
    record(i, TraceKind::EventDelivered, d.str());

    const Record* payload = ev.payload ? &*ev.payload : nullptr;
    run_action(i, ev.event, payload, "delivery");

    if (!inst.current_state) return;
    const StateMachine& sm = *c.machine;
    for (const auto& t : sm.transitions) {
      if (t.source != *rt_.instances[i].current_state) continue;
      if (t.trigger && *t.trigger != ev.event) continue;
      if (!guard_holds(i, t, payload)) continue;
      fire(i, t);
      run_completions(i);
      break;
    }

    const auto& state = sm.states[*rt_.instances[i].current_state];
    for (auto ce : state.continuous) run_activity(i, ce, "continuous");
  }

 private:
  void record(std::size_t i, TraceKind kind, std::string detail) {
    rt_.trace.push_back(TraceRecord{rt_.trace.size(), rt_.clock_us, rt_.instances[i].path, kind,
                                    std::move(detail)});
  }

  ValueLookup scope(std::size_t i, const Record* payload) const {
    return [this, i, payload](std::string_view name) -> std::optional<Value> {
      if (name.substr(0, 8) == "payload.") {
        if (!payload) return std::nullopt;
        const Record* r = payload;
        std::string_view rest = name.substr(8);
        for (;;) {
          auto dot = rest.find('.');
          const Value* v = r->find(rest.substr(0, dot));
          if (!v) return std::nullopt;
          if (dot == std::string_view::npos) return *v;
          if (!v->is_record()) return std::nullopt;
          r = &v->as_record();
          rest = rest.substr(dot + 1);
        }
      }
      const Value* v = rt_.property(i, name);
      if (!v) return std::nullopt;
      return *v;
    };
  }

  bool guard_holds(std::size_t i, const TransitionDef& t, const Record* payload) {
    if (!t.guard) return true;
    bool result = eval_guard(*t.guard, scope(i, payload));
    const auto& sm = *rt_.component_of(i).machine;
    record(i, TraceKind::GuardEval,
           DetailBuilder()
               .add("from", sm.states[t.source].name)
               .add("to", sm.states[t.target].name)
               .add("guard", to_source(*t.guard))
               .add("result", result ? "true" : "false")
               .str());
    return result;
  }

  void fire(std::size_t i, const TransitionDef& t) {
    const auto& c = rt_.component_of(i);
    const auto& sm = *c.machine;
    record(i, TraceKind::Transition,
           DetailBuilder()
               .add("from", sm.states[t.source].name)
               .add("to", sm.states[t.target].name)
               .add("trigger", t.trigger ? c.events[*t.trigger].name : "none")
               .str());
    for (auto ev : sm.states[t.source].exit) run_activity(i, ev, "exit");
    record(i, TraceKind::StateExited, DetailBuilder().add("state", sm.states[t.source].name).str());
    rt_.instances[i].current_state = t.target;
    record(i, TraceKind::StateEntered, DetailBuilder().add("state", sm.states[t.target].name).str());
    for (auto ev : sm.states[t.target].entry) run_activity(i, ev, "entry");
  }

  /// Fires enabled triggerless transitions out of the current state until
  /// none is enabled or the chain limit is reached.
  void run_completions(std::size_t i) {
    const auto& sm = *rt_.component_of(i).machine;
    for (std::size_t n = 0;; ++n) {
      const TransitionDef* next = nullptr;
      for (const auto& t : sm.transitions) {
        if (t.source != *rt_.instances[i].current_state || t.trigger) continue;
        if (guard_holds(i, t, nullptr)) {
          next = &t;
          break;
        }
      }
      if (!next) return;
      if (n == kMaxCompletionChain) {
        ++rt_.completion_limit_hits;
        return;
      }
      fire(i, *next);
    }
  }

  void run_activity(std::size_t i, std::size_t event, const char* via) {
    run_action(i, event, nullptr, via);
  }

  void run_action(std::size_t i, std::size_t event, const Record* payload, const char* via) {
    const auto& c = rt_.component_of(i);
    const EventDef& e = c.events[event];
    const ActionDef& a = c.actions[e.action];

    std::optional<Record> outgoing;
    if (a.kind == ActionKind::SendPayload) outgoing = m_.zero_record(*a.payload);

    std::string changes;
    for (const auto& as : a.effects) {
      Value v = evaluate(as.value, scope(i, a.kind == ActionKind::SendPayload ? nullptr : payload));
      if (as.to_payload) {
        Record* r = &*outgoing;
        for (std::size_t k = 0; k + 1 < as.path.size(); ++k) r = &r->find(as.path[k])->as_record();
        Value* slot = r->find(as.path.back());
        *slot = coerce(std::move(v), *slot->prim_type());
      } else {
        auto idx = *c.find_property(as.path.front());
        Value& slot = rt_.instances[i].properties[idx];
        slot = coerce(std::move(v), c.properties[idx].type);
        changes += (changes.empty() ? "" : ",") + as.path.front() + "=" + format_value(slot);
      }
    }

    DetailBuilder d;
    d.add("action", a.name).add("type", to_string(a.kind)).add("event", e.name).add("via", via);
    if (!changes.empty()) d.add("set", "{" + changes + "}");
    record(i, TraceKind::Action, d.str());

    if (outgoing) send(i, e, std::move(*outgoing));
  }

  void send(std::size_t i, const EventDef& e, Record payload) {
    const auto& c = rt_.component_of(i);
    const std::size_t port = *e.port;
    DetailBuilder d;
    d.add("event", e.name).add("port", c.ports[port].name).add("payload", format_value(Value(payload)));

    const auto& route = rt_.routes[i][port];
    if (!route) {
      d.add("to", "none").add("error", "E_NO_ROUTE");
      record(i, TraceKind::PayloadSent, d.str());
      return;
    }
    const auto& peer = rt_.component_of(route->instance);
    std::string to = rt_.instances[route->instance].path + "." + peer.ports[route->port].name;
    std::optional<std::size_t> receiver;
    for (std::size_t k = 0; k < peer.events.size(); ++k) {
      const auto& pe = peer.events[k];
      if (pe.direction == EventDirection::Incoming && pe.port == route->port && pe.payload == e.payload) {
        receiver = k;
        break;
      }
    }
    d.add("to", to);
    if (!receiver) {
      d.add("error", "E_NO_ROUTE");
      record(i, TraceKind::PayloadSent, d.str());
      return;
    }
    EventInstance ev;
    ev.event = *receiver;
    ev.payload = std::move(payload);
    ev.source = EventSource{i, port};
    ev.enqueue_seq = rt_.next_enqueue_seq++;
    d.add("deliver", peer.events[*receiver].name).add("enq", std::to_string(ev.enqueue_seq));
    record(i, TraceKind::PayloadSent, d.str());
    rt_.instances[route->instance].inbox.push_back(std::move(ev));
  }

  RuntimeState& rt_;
  const Model& m_;
};

void build_instance(RuntimeState& rt, const std::string& path, std::size_t component,
                    std::optional<std::size_t> parent, const PropertyOverrides& overrides,
                    std::map<std::string, bool, std::less<>>& used, std::size_t depth) {
  const Model& m = *rt.model;
  if (depth > m.components.size())
    throw Error("E_INSTANTIATE", "recursive containment while instantiating '" + path + "'");
  const ComponentDef& c = m.components.at(component);
  std::size_t self = rt.instances.size();
  InstanceState inst;
  inst.path = path;
  inst.component = component;
  inst.parent = parent;
  for (const auto& p : c.properties) {
    Value v = p.initial;
    if (auto it = overrides.find(p.name); it != overrides.end()) {
      v = it->second;
      used[p.name] = true;
    }
    auto t = v.prim_type();
    if (!t || !assignable(*t, p.type))
      throw Error("E_INSTANTIATE", "value " + format_value(v) + " for property '" + path + "." + p.name +
                                       "' is not of type " + to_string(p.type));
    inst.properties.push_back(coerce(std::move(v), p.type));
  }
  rt.instances.push_back(std::move(inst));
  rt.routes.emplace_back(c.ports.size());
  if (parent) rt.instances[*parent].children.push_back(self);
  for (const auto& part : c.parts)
    build_instance(rt, path + "." + part.name, part.component, self, overrides, used, depth + 1);
}

}  // namespace

RuntimeState instantiate(std::shared_ptr<const Model> model, const PropertyOverrides& overrides) {
  RuntimeState rt;
  rt.model = std::move(model);
  std::map<std::string, bool, std::less<>> used;
  for (const auto& root : rt.model->instances)
    build_instance(rt, root.name, root.component, std::nullopt, overrides, used, 0);
  for (const auto& [name, value] : overrides)
    if (!used.count(name))
      throw Error("E_INSTANTIATE", "no instance declares a property named '" + name + "'");

  for (std::size_t i = 0; i < rt.instances.size(); ++i) {
    const auto& c = rt.component_of(i);
    for (const auto& conn : c.connectors) {
      auto resolve = [&](const Endpoint& e) {
        return Route{e.part ? rt.instances[i].children.at(*e.part) : i, e.port};
      };
      Route a = resolve(conn.a), b = resolve(conn.b);
      auto& ra = rt.routes[a.instance][a.port];
      auto& rb = rt.routes[b.instance][b.port];
      if (ra || rb)
        throw Error("E_INSTANTIATE", "port wired twice under '" + rt.instances[i].path + "'");
      ra = b;
      rb = a;
    }
  }

  Executor ex(rt);
  for (std::size_t i = 0; i < rt.instances.size(); ++i) ex.enter_initial(i);
  return rt;
}

RuntimeState instantiate(const Model& model, const PropertyOverrides& overrides) {
  return instantiate(std::make_shared<const Model>(model), overrides);
}

Record conform_payload(const Model& model, std::size_t type, const Record& payload) {
  const PayloadDef& def = model.payloads.at(type);
  if (!payload.type.empty() && payload.type != def.name)
    throw Error("E_TYPE", "payload of type '" + payload.type + "' where '" + def.name + "' is expected");
  if (payload.fields.size() != def.fields.size())
    throw Error("E_TYPE", "payload '" + def.name + "' has " + std::to_string(def.fields.size()) +
                              " fields, got " + std::to_string(payload.fields.size()));
  Record out;
  out.type = def.name;
  for (std::size_t k = 0; k < def.fields.size(); ++k) {
    const auto& f = def.fields[k];
    const auto& [name, value] = payload.fields[k];
    if (name != f.name)
      throw Error("E_TYPE", "payload '" + def.name + "' field " + std::to_string(k) + " is '" + f.name +
                                "', got '" + name + "'");
    if (f.type.is_payload()) {
      if (!value.is_record())
        throw Error("E_TYPE", "field '" + f.name + "' must be a " + model.type_name(f.type) + " record");
      out.fields.emplace_back(name, Value(conform_payload(model, f.type.payload, value.as_record())));
      continue;
    }
    auto t = value.prim_type();
    if (!t || !assignable(*t, f.type.prim_type()))
      throw Error("E_TYPE", "field '" + def.name + "." + f.name + "' is " + model.type_name(f.type) +
                                ", got " + format_value(value));
    out.fields.emplace_back(name, coerce(value, f.type.prim_type()));
  }
  return out;
}

void inject(RuntimeState& rt, std::string_view instance_path, std::optional<std::string_view> port,
            std::string_view event, std::optional<Record> payload) {
  auto i = rt.find_instance(instance_path);
  if (!i) throw Error("E_BAD_TARGET", "no instance '" + std::string(instance_path) + "'");
  const auto& c = rt.component_of(*i);
  auto ei = c.find_event(event);
  if (!ei)
    throw Error("E_BAD_TARGET", "component '" + c.name + "' has no event '" + std::string(event) + "'");
  const EventDef& e = c.events[*ei];
  if (e.direction == EventDirection::Outgoing)
    throw Error("E_BAD_TARGET", "event '" + e.name + "' is outgoing and cannot be injected");
  if (e.direction == EventDirection::Incoming) {
    if (!port || c.ports[*e.port].name != *port)
      throw Error("E_BAD_TARGET", "incoming event '" + e.name + "' is bound to port '" +
                                      c.ports[*e.port].name + "'");
  } else if (port) {
    throw Error("E_BAD_TARGET", "generic event '" + e.name + "' is not bound to a port");
  }

  EventInstance ev;
  ev.event = *ei;
  if (e.payload) {
    if (!payload) throw Error("E_TYPE", "event '" + e.name + "' needs a '" + rt.model->payloads[*e.payload].name + "' payload");
    ev.payload = conform_payload(*rt.model, *e.payload, *payload);
  } else if (payload) {
    throw Error("E_TYPE", "event '" + e.name + "' carries no payload");
  }
  ev.enqueue_seq = rt.next_enqueue_seq++;
  rt.instances[*i].inbox.push_back(std::move(ev));
}

bool step(RuntimeState& rt) {
  ++rt.step_counter;
  for (std::size_t i = 0; i < rt.instances.size(); ++i) {
    if (rt.instances[i].inbox.empty()) continue;
    Executor(rt).deliver(i);
    return true;
  }
  return false;
}

RunResult run_to_quiescence(RuntimeState& rt, std::size_t max_steps) {
  if (max_steps == 0) throw Error("E_ARG", "max_steps must be at least 1");
  RunResult r;
  while (r.steps < max_steps) {
    ++r.steps;
    if (!step(rt)) {
      r.quiescent = true;
      return r;
    }
  }
  r.quiescent = rt.quiescent();
  r.step_limit = !r.quiescent;
  return r;
}

}  // namespace ciot
