#include "ciot/validate.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>

#include "ciot/typecheck.hpp"

namespace ciot {

namespace {

class Validator {
 public:
  explicit Validator(const Model& m) : m_(m) {}

  std::vector<Diagnostic> run() {
    for (const auto& c : m_.components) check_initial_state(c);
    for (const auto& c : m_.components) check_ports_and_connectors(c);
    for (const auto& c : m_.components) check_event_action_kinds(c);
    for (const auto& c : m_.components) check_types(c);
    check_composition();
    for (const auto& c : m_.components) check_reachability(c);
    for (const auto& c : m_.components) check_incoming_payloads(c);
    return std::move(out_);
  }

 private:
  void report(const char* rule, Severity sev, std::string msg, SourceLoc loc) {
    out_.push_back(Diagnostic{rule, sev, std::move(msg), loc, m_.file});
  }
  void error(const char* rule, std::string msg, SourceLoc loc) {
    report(rule, Severity::Error, std::move(msg), loc);
  }

  const ComponentDef& component_at(const ComponentDef& owner, const Endpoint& e) const {
    return e.part ? m_.components[owner.parts[*e.part].component] : owner;
  }
  std::string endpoint_name(const ComponentDef& owner, const Endpoint& e) const {
    std::string inst = e.part ? owner.parts[*e.part].name : "self";
    return inst + "." + component_at(owner, e).ports[e.port].name;
  }
  const std::string& iface(std::size_t i) const { return m_.interfaces[i].name; }

  // R1
  void check_initial_state(const ComponentDef& c) {
    if (!c.machine) return;
    std::vector<const StateDef*> initials;
    for (const auto& s : c.machine->states)
      if (s.initial) initials.push_back(&s);
    if (initials.empty()) {
      error("R1", "state machine of '" + c.name + "' has no initial state", c.machine->loc);
    } else if (initials.size() > 1) {
      for (std::size_t i = 1; i < initials.size(); ++i)
        error("R1",
              "state machine of '" + c.name + "' has more than one initial state ('" +
                  initials[0]->name + "', '" + initials[i]->name + "')",
              initials[i]->loc);
    }
  }

  // R2
  void check_ports_and_connectors(const ComponentDef& c) {
    for (const auto& p : c.ports) {
      if (p.provided.empty() && p.required.empty())
        error("R2", "port '" + c.name + "." + p.name + "' neither provides nor requires an interface",
              p.loc);
      for (auto i : p.provided)
        if (std::find(p.required.begin(), p.required.end(), i) != p.required.end())
          error("R2", "port '" + c.name + "." + p.name + "' both provides and requires '" + iface(i) + "'",
                p.loc);
    }

    std::map<std::pair<std::optional<std::size_t>, std::size_t>, std::size_t> uses;
    for (const auto& conn : c.connectors) {
      for (const Endpoint* e : {&conn.a, &conn.b}) {
        if (++uses[{e->part, e->port}] == 2)
          error("R2",
                "port '" + endpoint_name(c, *e) + "' in '" + c.name +
                    "' is wired by more than one connector",
                conn.loc);
      }
      if (conn.a.part == conn.b.part && conn.a.port == conn.b.port) {
        error("R2", "connector joins '" + endpoint_name(c, conn.a) + "' to itself", conn.loc);
        continue;
      }
      check_requirements(c, conn, conn.a, conn.b);
      check_requirements(c, conn, conn.b, conn.a);
    }

    // A part's port may not be wired both from inside the part's own
    // definition and from the enclosing component.
    for (const auto& conn : c.connectors) {
      for (const Endpoint* e : {&conn.a, &conn.b}) {
        if (!e->part) continue;
        const ComponentDef& inner = component_at(c, *e);
        for (const auto& ic : inner.connectors) {
          for (const Endpoint* ie : {&ic.a, &ic.b}) {
            if (!ie->part && ie->port == e->port)
              error("R2",
                    "port '" + endpoint_name(c, *e) + "' is wired both inside '" + inner.name +
                        "' and in '" + c.name + "'",
                    conn.loc);
          }
        }
      }
    }
  }

  void check_requirements(const ComponentDef& owner, const Connector& conn, const Endpoint& from,
                          const Endpoint& to) {
    const PortDef& need = component_at(owner, from).ports[from.port];
    const PortDef& have = component_at(owner, to).ports[to.port];
    for (auto i : need.required) {
      if (std::find(have.provided.begin(), have.provided.end(), i) == have.provided.end())
        error("R2",
              "'" + endpoint_name(owner, from) + "' requires '" + iface(i) + "' but '" +
                  endpoint_name(owner, to) + "' does not provide it",
              conn.loc);
    }
  }

  // R3
  void check_event_action_kinds(const ComponentDef& c) {
    for (const auto& e : c.events) {
      const ActionDef& a = c.actions[e.action];
      const std::string ename = "event '" + c.name + "." + e.name + "'";
      if (e.direction != EventDirection::Generic && !e.port)
        error("R3", ename + " is " + to_string(e.direction) + " and must name a port", e.loc);
      if (e.direction == EventDirection::Generic && e.port)
        error("R3", ename + " is generic and must not name a port", e.loc);
      if (e.direction != EventDirection::Generic && !e.payload)
        error("R3", ename + " is " + to_string(e.direction) + " and must carry a payload type", e.loc);

      ActionKind expected = e.direction == EventDirection::Incoming   ? ActionKind::ReceivePayload
                            : e.direction == EventDirection::Outgoing ? ActionKind::SendPayload
                                                                      : ActionKind::Generic;
      if (a.kind != expected)
        error("R3",
              ename + " is " + to_string(e.direction) + " but binds " + to_string(a.kind) +
                  " action '" + a.name + "'",
              e.loc);
      if (e.port && a.port && *e.port != *a.port)
        error("R3", ename + " and its action '" + a.name + "' use different ports", e.loc);
      if (e.payload != a.payload)
        error("R3", ename + " and its action '" + a.name + "' carry different payload types", e.loc);
    }

    for (const auto& a : c.actions) {
      const std::string aname = "action '" + c.name + "." + a.name + "'";
      if (a.kind != ActionKind::Generic && !a.port)
        error("R3", aname + " is " + to_string(a.kind) + " and must name a port", a.loc);
      if (a.kind == ActionKind::Generic && a.port)
        error("R3", aname + " is generic and must not name a port", a.loc);
      if (a.kind == ActionKind::SendPayload && !a.payload)
        error("R3", aname + " sends and must name a payload type", a.loc);
      for (const auto& as : a.effects)
        if (as.to_payload && a.kind != ActionKind::SendPayload)
          error("R3", aname + " assigns payload fields but only send actions build payloads", as.loc);
    }

    if (!c.machine) return;
    for (const auto& s : c.machine->states) {
      for (const auto* list : {&s.entry, &s.exit, &s.continuous}) {
        for (auto ei : *list) {
          const EventDef& e = c.events[ei];
          bool ok = e.direction == EventDirection::Outgoing ||
                    (e.direction == EventDirection::Generic && !e.payload);
          if (!ok)
            error("R3",
                  "state '" + s.name + "' runs event '" + e.name +
                      "', which needs a delivered payload; only outgoing events and payload-free "
                      "generic events can run on entry, exit or continuously",
                  s.loc);
        }
      }
    }
  }

  // R4
  void check_types(const ComponentDef& c) {
    for (const auto& p : c.properties) {
      auto t = p.initial.prim_type();
      if (!t || !assignable(*t, p.type))
        error("R4",
              "property '" + c.name + "." + p.name + "' is " + to_string(p.type) +
                  " but its initial value is " + (t ? to_string(*t) : "a record"),
              p.loc);
    }

    for (const auto& a : c.actions) {
      // Send actions build a payload; their right-hand sides see only
      // properties. Others see the delivered payload, if any.
      auto rhs_payload = a.kind == ActionKind::SendPayload ? std::nullopt : a.payload;
      TypeScope rhs_scope = make_scope(m_, c, rhs_payload);
      TypeScope property_targets = make_scope(m_, c, std::nullopt);
      TypeScope payload_targets;
      if (a.kind == ActionKind::SendPayload && a.payload)
        payload_targets = make_scope(m_, ComponentDef{}, a.payload);
      for (const auto& as : a.effects) {
        if (as.to_payload && a.kind != ActionKind::SendPayload) continue;  // R3
        const TypeScope& targets = as.to_payload ? payload_targets : property_targets;
        std::string target = (as.to_payload ? "payload" : "");
        for (const auto& part : as.path) target += (target.empty() ? "" : ".") + part;
        auto it = targets.find(target);
        if (it == targets.end()) {
          error("R4", "action '" + c.name + "." + a.name + "' assigns unknown target '" + target + "'",
                as.loc);
          continue;
        }
        auto t = typecheck(as.value, rhs_scope);
        if (auto* d = std::get_if<Diagnostic>(&t)) {
          error("R4", "action '" + c.name + "." + a.name + "': " + d->code + ": " + d->message,
                d->loc.valid() ? d->loc : as.loc);
        } else if (!assignable(std::get<PrimType>(t), it->second)) {
          error("R4",
                "action '" + c.name + "." + a.name + "' assigns " + to_string(std::get<PrimType>(t)) +
                    " to '" + target + "' of type " + to_string(it->second),
                as.loc);
        }
      }
    }

    if (!c.machine) return;
    for (const auto& t : c.machine->transitions) {
      if (!t.guard) continue;
      std::optional<std::size_t> payload;
      if (t.trigger) payload = c.events[*t.trigger].payload;
      auto r = typecheck_guard(*t.guard, make_scope(m_, c, payload));
      if (auto* d = std::get_if<Diagnostic>(&r))
        error("R4",
              "guard of " + c.machine->states[t.source].name + " -> " + c.machine->states[t.target].name +
                  " in '" + c.name + "': " + d->code + ": " + d->message,
              d->loc.valid() ? d->loc : t.loc);
    }
  }

  // R5
  void check_composition() {
    for (const auto& c : m_.components) {
      if (c.kind != ComponentKind::IoTElement) continue;
      if (!c.parts.empty())
        error("R5", "IoTElement '" + c.name + "' cannot contain parts", c.parts.front().loc);
      if (!c.connectors.empty())
        error("R5", "IoTElement '" + c.name + "' cannot contain connectors", c.connectors.front().loc);
    }
    // Recursive containment: DFS over the part graph.
    std::vector<int> color(m_.components.size(), 0);
    std::set<std::size_t> reported;
    std::function<void(std::size_t)> visit = [&](std::size_t ci) {
      color[ci] = 1;
      for (const auto& p : m_.components[ci].parts) {
        if (color[p.component] == 1) {
          if (reported.insert(ci).second)
            error("R5",
                  "component '" + m_.components[ci].name + "' contains itself through part '" + p.name + "'",
                  p.loc);
        } else if (color[p.component] == 0) {
          visit(p.component);
        }
      }
      color[ci] = 2;
    };
    for (std::size_t i = 0; i < m_.components.size(); ++i)
      if (color[i] == 0) visit(i);
  }

  // R6
  void check_reachability(const ComponentDef& c) {
    if (!c.machine) return;
    auto init = c.machine->initial();
    if (!init) return;  // reported by R1
    std::vector<bool> seen(c.machine->states.size(), false);
    std::deque<std::size_t> queue{*init};
    seen[*init] = true;
    while (!queue.empty()) {
      auto s = queue.front();
      queue.pop_front();
      for (const auto& t : c.machine->transitions) {
        if (t.source == s && !seen[t.target]) {
          seen[t.target] = true;
          queue.push_back(t.target);
        }
      }
    }
    for (std::size_t i = 0; i < seen.size(); ++i)
      if (!seen[i])
        report("R6", Severity::Warning,
               "state '" + c.name + "." + c.machine->states[i].name + "' is unreachable from '" +
                   c.machine->states[*init].name + "'",
               c.machine->states[i].loc);
  }

  // R7
  bool port_carries(const PortDef& port, std::size_t payload) const {
    for (const auto* list : {&port.provided, &port.required})
      for (auto i : *list)
        for (const auto& op : m_.interfaces[i].operations)
          if (op.payload == payload) return true;
    return false;
  }

  void check_incoming_payloads(const ComponentDef& c) {
    for (const auto& e : c.events) {
      if (e.direction != EventDirection::Incoming || !e.port || !e.payload) continue;
      if (!port_carries(c.ports[*e.port], *e.payload))
        error("R7",
              "incoming event '" + c.name + "." + e.name + "' expects '" + m_.payloads[*e.payload].name +
                  "' but no interface of port '" + c.ports[*e.port].name + "' has an operation carrying it",
              e.loc);
    }
    for (const auto& conn : c.connectors) {
      check_peer_sends(c, conn, conn.a, conn.b);
      check_peer_sends(c, conn, conn.b, conn.a);
    }
  }

  void check_peer_sends(const ComponentDef& owner, const Connector& conn, const Endpoint& receiver,
                        const Endpoint& sender) {
    const ComponentDef& rc = component_at(owner, receiver);
    const ComponentDef& sc = component_at(owner, sender);
    for (const auto& e : rc.events) {
      if (e.direction != EventDirection::Incoming || e.port != receiver.port || !e.payload) continue;
      bool sent = std::any_of(sc.events.begin(), sc.events.end(), [&](const EventDef& o) {
        return o.direction == EventDirection::Outgoing && o.port == sender.port && o.payload == e.payload;
      });
      if (!sent)
        error("R7",
              "incoming event '" + rc.name + "." + e.name + "' on '" + endpoint_name(owner, receiver) +
                  "' expects '" + m_.payloads[*e.payload].name + "' but peer '" +
                  endpoint_name(owner, sender) + "' never sends it",
              conn.loc);
    }
  }

  const Model& m_;
  std::vector<Diagnostic> out_;
};

}  // namespace

std::vector<Diagnostic> validate(const Model& model) { return Validator(model).run(); }

}  // namespace ciot
