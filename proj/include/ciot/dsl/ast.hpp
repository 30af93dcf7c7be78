#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ciot/diagnostic.hpp"
#include "ciot/expr.hpp"
#include "ciot/model.hpp"
#include "ciot/value.hpp"

namespace ciot::dsl {

// Untyped syntax tree. Shape follows the metamodel; references are plain
// names and every node carries the span it was parsed from.

struct Name {
  std::string text;
  SourceSpan span;
};

struct FieldAst {
  Name name;
  Name type;  // "int" | "float" | "bool" | "string" | payload name
  SourceSpan span;
};

struct PayloadAst {
  Name name;
  std::vector<FieldAst> fields;
  SourceSpan span;
};

struct OperationAst {
  Name name;
  Name payload;
  SourceSpan span;
};

struct InterfaceAst {
  Name name;
  std::vector<OperationAst> operations;
  SourceSpan span;
};

struct PropertyAst {
  Name name;
  Name type;
  Value initial;
  SourceSpan span;
};

struct PortAst {
  Name name;
  std::vector<Name> provided;
  std::vector<Name> required;
  SourceSpan span;
};

struct PartAst {
  Name name;
  Name component;
  SourceSpan span;
};

struct EndpointAst {
  Name instance;  // "self" for the owner's own port
  Name port;
};

struct ConnectorAst {
  EndpointAst a;
  EndpointAst b;
  SourceSpan span;
};

struct EventAst {
  Name name;
  EventDirection direction = EventDirection::Generic;
  std::optional<Name> port;
  std::optional<Name> payload;
  Name action;
  SourceSpan span;
};

struct AssignmentAst {
  bool to_payload = false;
  std::vector<Name> path;
  Expr value;
  SourceSpan span;
};

struct ActionAst {
  Name name;
  ActionKind kind = ActionKind::Generic;
  std::optional<Name> port;
  std::optional<Name> payload;
  std::vector<AssignmentAst> effects;
  SourceSpan span;
};

struct StateAst {
  Name name;
  bool initial = false;
  std::vector<Name> entry;
  std::vector<Name> exit;
  std::vector<Name> continuous;
  SourceSpan span;
};

struct TransitionAst {
  Name source;
  Name target;
  std::optional<Name> trigger;
  std::optional<Expr> guard;
  SourceSpan span;
};

struct StateMachineAst {
  std::vector<StateAst> states;
  std::vector<TransitionAst> transitions;
  SourceSpan span;
};

struct ComponentAst {
  Name name;
  std::optional<Name> kind;  // defaults to IoTElement
  std::vector<PropertyAst> properties;
  std::vector<PortAst> ports;
  std::vector<PartAst> parts;
  std::vector<ConnectorAst> connectors;
  std::vector<EventAst> events;
  std::vector<ActionAst> actions;
  std::optional<StateMachineAst> machine;
  SourceSpan span;
};

struct InstanceAst {
  Name name;
  Name component;
  SourceSpan span;
};

struct SourceAst {
  std::string file;
  std::vector<PayloadAst> payloads;
  std::vector<InterfaceAst> interfaces;
  std::vector<ComponentAst> components;
  std::vector<InstanceAst> instances;

  std::size_t declaration_count() const {
    return payloads.size() + interfaces.size() + components.size() + instances.size();
  }
};

}  // namespace ciot::dsl
