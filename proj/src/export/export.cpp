#include "ciot/export.hpp"

#include "ciot/dsl/parser.hpp"
#include "ciot/resolve.hpp"

namespace ciot {

std::string dot_quote(std::string_view text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out + '"';
}

// -- DOT ---------------------------------------------------------------------

DotGraph statemachine_to_dot(const Model& model, const ComponentDef& c) {
  (void)model;
  if (!c.machine) throw Error("E_NO_MACHINE", "component '" + c.name + "' has no state machine");
  const auto& sm = *c.machine;
  DotGraph g;
  std::string& out = g.text;
  out += "digraph " + dot_quote(c.name) + " {\n";
  out += "  rankdir=LR;\n";
  out += "  node [shape=box, style=rounded];\n";
  for (const auto& s : sm.states) {
    out += "  " + dot_quote(s.name);
    if (s.initial) out += " [style=\"rounded,bold\", xlabel=\"initial\"]";
    out += ";\n";
    ++g.nodes;
  }
  for (const auto& t : sm.transitions) {
    std::string label;
    if (t.trigger) label = c.events[*t.trigger].name;
    if (t.guard) label += (label.empty() ? "[" : " [") + to_source(*t.guard) + "]";
    out += "  " + dot_quote(sm.states[t.source].name) + " -> " + dot_quote(sm.states[t.target].name);
    if (!label.empty()) out += " [label=" + dot_quote(label) + "]";
    out += ";\n";
    ++g.edges;
  }
  out += "}\n";
  return g;
}

DotGraph statemachine_to_dot(const Model& model, std::string_view component) {
  auto idx = model.find_component(component);
  if (!idx) throw Error("E_UNKNOWN_REF", "unknown component '" + std::string(component) + "'");
  return statemachine_to_dot(model, model.components[*idx]);
}

namespace {

class StructureWriter {
 public:
  explicit StructureWriter(const Model& m) : m_(m) {}

  DotGraph run(std::size_t root) {
    g_.text += "digraph " + dot_quote(m_.components[root].name) + " {\n";
    g_.text += "  compound=true;\n";
    g_.text += "  node [shape=box, fontsize=10];\n";
    cluster(root, m_.components[root].name, m_.components[root].name, 1);
    for (const auto& e : edges_) g_.text += "  " + e + ";\n";
    g_.edges = edges_.size();
    g_.text += "}\n";
    return std::move(g_);
  }

 private:
  void cluster(std::size_t comp, const std::string& path, const std::string& label, int depth) {
    if (depth > static_cast<int>(m_.components.size()) + 1)
      throw Error("E_VALIDATE", "recursive containment below '" + path + "'");
    const ComponentDef& c = m_.components[comp];
    std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
    g_.text += pad + "subgraph " + dot_quote("cluster_" + path) + " {\n";
    g_.text += pad + "  label=" + dot_quote(label + " <<" + to_string(c.kind) + ">>") + ";\n";
    for (const auto& p : c.ports) {
      g_.text += pad + "  " + dot_quote(path + "." + p.name) + " [label=" + dot_quote(p.name) + ", shape=square];\n";
      ++g_.nodes;
    }
    for (const auto& part : c.parts)
      cluster(part.component, path + "." + part.name, part.name + " : " + m_.components[part.component].name,
              depth + 1);
    g_.text += pad + "}\n";
    for (const auto& conn : c.connectors) {
      auto node = [&](const Endpoint& e) {
        if (!e.part) return dot_quote(path + "." + c.ports[e.port].name);
        const auto& part = c.parts[*e.part];
        return dot_quote(path + "." + part.name + "." + m_.components[part.component].ports[e.port].name);
      };
      edges_.push_back(node(conn.a) + " -> " + node(conn.b) + " [dir=none]");
    }
  }

  const Model& m_;
  DotGraph g_;
  std::vector<std::string> edges_;
};

}  // namespace

DotGraph structure_to_dot(const Model& model, std::string_view root) {
  auto idx = model.find_component(root);
  if (!idx) throw Error("E_UNKNOWN_REF", "unknown component '" + std::string(root) + "'");
  return StructureWriter(model).run(*idx);
}

// -- interchange -------------------------------------------------------------

namespace {

std::string join_names(const std::vector<std::size_t>& idx, auto&& name_of) {
  std::string out;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (i) out += ", ";
    out += name_of(idx[i]);
  }
  return out;
}

std::string port_and_payload(const Model& m, const ComponentDef& c, const std::optional<std::size_t>& port,
                             const std::optional<std::size_t>& payload) {
  std::string out;
  if (port) out += " on " + c.ports[*port].name;
  if (payload) out += " (" + m.payloads[*payload].name + ")";
  return out;
}

void write_component(std::string& out, const Model& m, const ComponentDef& c) {
  out += "component " + c.name + " : " + to_string(c.kind) + " {\n";
  auto iface = [&](std::size_t i) { return m.interfaces[i].name; };
  for (const auto& p : c.properties)
    out += "  property " + p.name + ": " + to_string(p.type) + " = " + format_value(p.initial) + ";\n";
  for (const auto& p : c.ports) {
    out += "  port " + p.name;
    if (!p.provided.empty()) out += " provides " + join_names(p.provided, iface);
    if (!p.required.empty()) out += " requires " + join_names(p.required, iface);
    out += ";\n";
  }
  for (const auto& p : c.parts) out += "  part " + p.name + " : " + m.components[p.component].name + ";\n";
  for (const auto& conn : c.connectors) {
    auto ep = [&](const Endpoint& e) {
      if (!e.part) return "self." + c.ports[e.port].name;
      const auto& part = c.parts[*e.part];
      return part.name + "." + m.components[part.component].ports[e.port].name;
    };
    out += "  connect " + ep(conn.a) + " to " + ep(conn.b) + ";\n";
  }
  for (const auto& e : c.events)
    out += std::string("  ") + to_string(e.direction) + " event " + e.name +
           port_and_payload(m, c, e.port, e.payload) + " does " + c.actions[e.action].name + ";\n";
  for (const auto& a : c.actions) {
    out += std::string("  ") + to_string(a.kind) + " action " + a.name + port_and_payload(m, c, a.port, a.payload);
    if (a.effects.empty()) {
      out += ";\n";
      continue;
    }
    out += " {\n";
    for (const auto& as : a.effects) {
      std::string target = as.to_payload ? "payload" : "";
      for (const auto& seg : as.path) target += (target.empty() ? "" : ".") + seg;
      out += "    " + target + " = " + to_source(as.value) + ";\n";
    }
    out += "  }\n";
  }
  if (c.machine) {
    const auto& sm = *c.machine;
    auto ev = [&](std::size_t i) { return c.events[i].name; };
    out += "  statemachine {\n";
    for (const auto& s : sm.states) {
      out += std::string("    ") + (s.initial ? "initial " : "") + "state " + s.name;
      if (s.entry.empty() && s.exit.empty() && s.continuous.empty()) {
        out += ";\n";
        continue;
      }
      out += " {";
      if (!s.entry.empty()) out += " entry " + join_names(s.entry, ev) + ";";
      if (!s.exit.empty()) out += " exit " + join_names(s.exit, ev) + ";";
      if (!s.continuous.empty()) out += " continuous " + join_names(s.continuous, ev) + ";";
      out += " }\n";
    }
    for (const auto& t : sm.transitions) {
      out += "    transition " + sm.states[t.source].name + " -> " + sm.states[t.target].name;
      if (t.trigger) out += " when " + c.events[*t.trigger].name;
      if (t.guard) out += " [" + to_source(*t.guard) + "]";
      out += ";\n";
    }
    out += "  }\n";
  }
  out += "}\n";
}

}  // namespace

std::string export_model(const Model& m) {
  std::string out;
  auto section = [&out] {
    if (!out.empty()) out += '\n';
  };
  for (const auto& p : m.payloads) {
    section();
    out += "payload " + p.name + " {";
    for (std::size_t i = 0; i < p.fields.size(); ++i)
      out += std::string(i ? "; " : " ") + p.fields[i].name + ": " + m.type_name(p.fields[i].type);
    out += p.fields.empty() ? "}\n" : " }\n";
  }
  for (const auto& i : m.interfaces) {
    section();
    out += "interface " + i.name + " {";
    for (const auto& op : i.operations) out += " op " + op.name + "(" + m.payloads[op.payload].name + ");";
    out += i.operations.empty() ? "}\n" : " }\n";
  }
  for (const auto& c : m.components) {
    section();
    write_component(out, m, c);
  }
  if (!m.instances.empty()) section();
  for (const auto& inst : m.instances) out += "instance " + inst.name + " : " + m.components[inst.component].name + ";\n";
  return out;
}

Model import_model(std::string_view text, const std::string& file) {
  Model m = resolve(dsl::parse_source(text, file));
  m.file = file;
  return m;
}

}  // namespace ciot
