#include "ciot/resolve.hpp"

#include <functional>
#include <map>
#include <set>

namespace ciot {

namespace {

using dsl::Name;

class Resolver {
 public:
  explicit Resolver(const dsl::SourceAst& ast) : ast_(ast) { model_.file = ast.file; }

  Model run() {
    declare_top_level();
    resolve_payloads();
    check_payload_cycles();
    resolve_interfaces();
    for (std::size_t i = 0; i < ast_.components.size(); ++i) resolve_component(i);
    for (const auto& inst : ast_.instances) {
      InstanceDecl d;
      d.name = inst.name.text;
      d.loc = inst.name.span.begin;
      d.component = lookup(component_index_, inst.component, "component");
      model_.instances.push_back(std::move(d));
    }
    if (!errors_.empty()) {
      std::string msg = format_diagnostic(errors_.front());
      if (errors_.size() > 1) msg += " (and " + std::to_string(errors_.size() - 1) + " more)";
      throw Error(errors_.front().code, msg, errors_);
    }
    return std::move(model_);
  }

 private:
  using Index = std::map<std::string, std::size_t, std::less<>>;

  void report(const std::string& code, const std::string& msg, SourceLoc loc) {
    errors_.push_back(Diagnostic{code, Severity::Error, msg, loc, ast_.file});
  }

  /// Registers `name` in `index`, reporting E_DUPLICATE on a second
  /// definition (the first one stays bound).
  void declare(Index& index, const Name& name, std::size_t slot, const char* what) {
    if (!index.emplace(name.text, slot).second)
      report("E_DUPLICATE", std::string(what) + " '" + name.text + "' is defined more than once",
             name.span.begin);
  }

  std::size_t lookup(const Index& index, const Name& name, const char* what) {
    auto it = index.find(name.text);
    if (it != index.end()) return it->second;
    report("E_UNKNOWN_REF", std::string("unknown ") + what + " '" + name.text + "'", name.span.begin);
    return 0;
  }

  std::optional<std::size_t> lookup_opt(const Index& index, const std::optional<Name>& name,
                                        const char* what) {
    if (!name) return std::nullopt;
    return lookup(index, *name, what);
  }

  void declare_top_level() {
    for (std::size_t i = 0; i < ast_.payloads.size(); ++i)
      declare(payload_index_, ast_.payloads[i].name, i, "payload");
    for (std::size_t i = 0; i < ast_.interfaces.size(); ++i)
      declare(interface_index_, ast_.interfaces[i].name, i, "interface");
    for (std::size_t i = 0; i < ast_.components.size(); ++i)
      declare(component_index_, ast_.components[i].name, i, "component");
    Index instances;
    for (std::size_t i = 0; i < ast_.instances.size(); ++i)
      declare(instances, ast_.instances[i].name, i, "instance");
  }

  void resolve_payloads() {
    for (const auto& p : ast_.payloads) {
      PayloadDef def;
      def.name = p.name.text;
      def.loc = p.name.span.begin;
      Index fields;
      for (std::size_t i = 0; i < p.fields.size(); ++i) {
        const auto& f = p.fields[i];
        declare(fields, f.name, i, "payload field");
        PayloadField field;
        field.name = f.name.text;
        field.loc = f.name.span.begin;
        if (auto prim = prim_type_from_name(f.type.text))
          field.type = TypeRef::prim(*prim);
        else
          field.type = TypeRef::of_payload(lookup(payload_index_, f.type, "payload type"));
        def.fields.push_back(std::move(field));
      }
      model_.payloads.push_back(std::move(def));
    }
  }

  void check_payload_cycles() {
    // Colors: 0 unvisited, 1 on stack, 2 done.
    std::vector<int> color(model_.payloads.size(), 0);
    std::function<void(std::size_t)> visit = [&](std::size_t p) {
      color[p] = 1;
      for (const auto& f : model_.payloads[p].fields) {
        if (!f.type.is_payload()) continue;
        if (color[f.type.payload] == 1) {
          report("E_PAYLOAD_CYCLE",
                 "payload '" + model_.payloads[p].name + "' contains itself through field '" +
                     f.name + "'",
                 f.loc);
        } else if (color[f.type.payload] == 0) {
          visit(f.type.payload);
        }
      }
      color[p] = 2;
    };
    for (std::size_t p = 0; p < color.size(); ++p)
      if (color[p] == 0) visit(p);
  }

  void resolve_interfaces() {
    for (const auto& i : ast_.interfaces) {
      InterfaceDef def;
      def.name = i.name.text;
      def.loc = i.name.span.begin;
      Index ops;
      for (std::size_t k = 0; k < i.operations.size(); ++k) {
        const auto& op = i.operations[k];
        declare(ops, op.name, k, "operation");
        def.operations.push_back(OperationDef{op.name.text,
                                              lookup(payload_index_, op.payload, "payload type"),
                                              op.name.span.begin});
      }
      model_.interfaces.push_back(std::move(def));
    }
  }

  void resolve_component(std::size_t index) {
    const dsl::ComponentAst& c = ast_.components[index];
    owner_index_ = index;
    ComponentDef def;
    def.name = c.name.text;
    def.loc = c.name.span.begin;
    if (c.kind) {
      if (c.kind->text == "Board")
        def.kind = ComponentKind::Board;
      else if (c.kind->text == "VirtualEntity")
        def.kind = ComponentKind::VirtualEntity;
    }

    Index props, ports, parts, events, actions, states;
    for (std::size_t i = 0; i < c.properties.size(); ++i) declare(props, c.properties[i].name, i, "property");
    for (std::size_t i = 0; i < c.ports.size(); ++i) declare(ports, c.ports[i].name, i, "port");
    for (std::size_t i = 0; i < c.parts.size(); ++i) declare(parts, c.parts[i].name, i, "part");
    for (std::size_t i = 0; i < c.events.size(); ++i) declare(events, c.events[i].name, i, "event");
    for (std::size_t i = 0; i < c.actions.size(); ++i) declare(actions, c.actions[i].name, i, "action");
    if (c.machine)
      for (std::size_t i = 0; i < c.machine->states.size(); ++i)
        declare(states, c.machine->states[i].name, i, "state");

    for (const auto& p : c.properties) {
      PropertyDef prop;
      prop.name = p.name.text;
      prop.loc = p.name.span.begin;
      prop.initial = p.initial;
      if (auto prim = prim_type_from_name(p.type.text)) {
        prop.type = *prim;
        if (prop.type == PrimType::Float && prop.initial.is_int())
          prop.initial = Value(static_cast<double>(prop.initial.as_int()));
      } else {
        report("E_UNKNOWN_REF",
               "property type must be int, float, bool or string, not '" + p.type.text + "'",
               p.type.span.begin);
      }
      def.properties.push_back(std::move(prop));
    }

    for (const auto& p : c.ports) {
      PortDef port;
      port.name = p.name.text;
      port.loc = p.name.span.begin;
      for (const auto& n : p.provided) port.provided.push_back(lookup(interface_index_, n, "interface"));
      for (const auto& n : p.required) port.required.push_back(lookup(interface_index_, n, "interface"));
      def.ports.push_back(std::move(port));
    }

    for (const auto& p : c.parts)
      def.parts.push_back(InstanceDecl{p.name.text, lookup(component_index_, p.component, "component"),
                                       p.name.span.begin});

    for (const auto& conn : c.connectors) {
      Connector out;
      out.loc = conn.span.begin;
      out.a = resolve_endpoint(conn.a, def, ports, parts);
      out.b = resolve_endpoint(conn.b, def, ports, parts);
      def.connectors.push_back(out);
    }

    for (const auto& e : c.events) {
      EventDef ev;
      ev.name = e.name.text;
      ev.loc = e.name.span.begin;
      ev.direction = e.direction;
      ev.port = lookup_opt(ports, e.port, "port");
      ev.payload = lookup_opt(payload_index_, e.payload, "payload type");
      ev.action = lookup(actions, e.action, "action");
      def.events.push_back(std::move(ev));
    }

    for (const auto& a : c.actions) {
      ActionDef act;
      act.name = a.name.text;
      act.loc = a.name.span.begin;
      act.kind = a.kind;
      act.port = lookup_opt(ports, a.port, "port");
      act.payload = lookup_opt(payload_index_, a.payload, "payload type");
      for (const auto& as : a.effects) {
        Assignment out;
        out.to_payload = as.to_payload;
        for (const auto& n : as.path) out.path.push_back(n.text);
        out.value = as.value;
        out.loc = as.span.begin;
        act.effects.push_back(std::move(out));
      }
      def.actions.push_back(std::move(act));
    }

    if (c.machine) {
      StateMachine sm;
      sm.loc = c.machine->span.begin;
      for (const auto& s : c.machine->states) {
        StateDef st;
        st.name = s.name.text;
        st.loc = s.name.span.begin;
        st.initial = s.initial;
        for (const auto& n : s.entry) st.entry.push_back(lookup(events, n, "event"));
        for (const auto& n : s.exit) st.exit.push_back(lookup(events, n, "event"));
        for (const auto& n : s.continuous) st.continuous.push_back(lookup(events, n, "event"));
        sm.states.push_back(std::move(st));
      }
      for (const auto& t : c.machine->transitions) {
        TransitionDef tr;
        tr.loc = t.span.begin;
        tr.source = lookup(states, t.source, "state");
        tr.target = lookup(states, t.target, "state");
        tr.trigger = lookup_opt(events, t.trigger, "event");
        tr.guard = t.guard;
        sm.transitions.push_back(std::move(tr));
      }
      def.machine = std::move(sm);
    }

    model_.components.push_back(std::move(def));
  }

  Endpoint resolve_endpoint(const dsl::EndpointAst& e, const ComponentDef& owner, const Index& ports,
                            const Index& parts) {
    Endpoint out;
    out.loc = e.instance.span.begin;
    if (e.instance.text == "self") {
      out.port = lookup(ports, e.port, "port");
      return out;
    }
    out.part = lookup(parts, e.instance, "part");
    if (!parts.count(e.instance.text)) return out;
    const auto& part_decl = ast_.components.at(owner_index_).parts.at(*out.part);
    if (!component_index_.count(part_decl.component.text)) return out;
    // The part's component may not be resolved yet; look it up in the AST.
    const auto& part_ast = ast_.components.at(owner.parts[*out.part].component);
    for (std::size_t i = 0; i < part_ast.ports.size(); ++i) {
      if (part_ast.ports[i].name.text == e.port.text) {
        out.port = i;
        return out;
      }
    }
    report("E_UNKNOWN_REF",
           "unknown port '" + e.port.text + "' on part '" + e.instance.text + "' (" +
               part_ast.name.text + ")",
           e.port.span.begin);
    return out;
  }

  const dsl::SourceAst& ast_;
  Model model_;
  Index payload_index_, interface_index_, component_index_;
  std::size_t owner_index_ = 0;
  std::vector<Diagnostic> errors_;
};

}  // namespace

Model resolve(const dsl::SourceAst& ast) { return Resolver(ast).run(); }

}  // namespace ciot
