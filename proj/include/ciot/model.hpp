#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ciot/diagnostic.hpp"
#include "ciot/expr.hpp"
#include "ciot/value.hpp"

namespace ciot {

// Resolved metamodel. Every cross reference is an index into the owning
// container (model-level for payloads/interfaces/components, component-level
// for ports/events/actions/states/parts). Names are kept alongside so the
// model can be printed back without a symbol table.

enum class ComponentKind { IoTElement, Board, VirtualEntity };
enum class EventDirection { Incoming, Outgoing, Generic };
enum class ActionKind { SendPayload, ReceivePayload, Generic };

const char* to_string(ComponentKind k);
const char* to_string(EventDirection d);
const char* to_string(ActionKind k);

struct TypeRef {
  enum class Kind { Int, Float, Bool, String, Payload };
  Kind kind = Kind::Int;
  std::size_t payload = 0;  // valid iff kind == Payload

  static TypeRef prim(PrimType t);
  static TypeRef of_payload(std::size_t index);
  bool is_payload() const { return kind == Kind::Payload; }
  PrimType prim_type() const;  // precondition: !is_payload()

  bool operator==(const TypeRef& o) const {
    return kind == o.kind && (kind != Kind::Payload || payload == o.payload);
  }
};

struct PayloadField {
  std::string name;
  TypeRef type;
  SourceLoc loc;
  bool operator==(const PayloadField&) const = default;
};

struct PayloadDef {
  std::string name;
  std::vector<PayloadField> fields;
  SourceLoc loc;
  bool operator==(const PayloadDef&) const = default;
};

struct OperationDef {
  std::string name;
  std::size_t payload = 0;
  SourceLoc loc;
  bool operator==(const OperationDef&) const = default;
};

struct InterfaceDef {
  std::string name;
  std::vector<OperationDef> operations;
  SourceLoc loc;
  bool operator==(const InterfaceDef&) const = default;
};

struct PropertyDef {
  std::string name;
  PrimType type = PrimType::Int;
  Value initial;
  SourceLoc loc;
  bool operator==(const PropertyDef&) const = default;
};

struct PortDef {
  std::string name;
  std::vector<std::size_t> provided;
  std::vector<std::size_t> required;
  SourceLoc loc;
  bool operator==(const PortDef&) const = default;
};

struct InstanceDecl {
  std::string name;
  std::size_t component = 0;
  SourceLoc loc;
  bool operator==(const InstanceDecl&) const = default;
};

/// One side of a connector. `part` is empty for the owning component's own
/// port (written `self.p`), otherwise an index into the owner's parts.
struct Endpoint {
  std::optional<std::size_t> part;
  std::size_t port = 0;
  SourceLoc loc;
  bool operator==(const Endpoint&) const = default;
};

struct Connector {
  Endpoint a;
  Endpoint b;
  SourceLoc loc;
  bool operator==(const Connector&) const = default;
};

struct EventDef {
  std::string name;
  EventDirection direction = EventDirection::Generic;
  std::optional<std::size_t> port;
  std::optional<std::size_t> payload;
  std::size_t action = 0;
  SourceLoc loc;
  bool operator==(const EventDef&) const = default;
};

/// `property = expr` or, in send actions, `payload.field = expr`.
struct Assignment {
  bool to_payload = false;
  std::vector<std::string> path;
  Expr value;
  SourceLoc loc;
  bool operator==(const Assignment&) const = default;
};

struct ActionDef {
  std::string name;
  ActionKind kind = ActionKind::Generic;
  std::optional<std::size_t> port;
  std::optional<std::size_t> payload;
  std::vector<Assignment> effects;
  SourceLoc loc;
  bool operator==(const ActionDef&) const = default;
};

struct StateDef {
  std::string name;
  bool initial = false;
  std::vector<std::size_t> entry;
  std::vector<std::size_t> exit;
  std::vector<std::size_t> continuous;
  SourceLoc loc;
  bool operator==(const StateDef&) const = default;
};

struct TransitionDef {
  std::size_t source = 0;
  std::size_t target = 0;
  std::optional<std::size_t> trigger;
  std::optional<Expr> guard;
  SourceLoc loc;
  bool operator==(const TransitionDef&) const = default;
};

struct StateMachine {
  std::vector<StateDef> states;
  std::vector<TransitionDef> transitions;
  SourceLoc loc;

  /// The unique initial state, or nullopt when there are zero or several.
  std::optional<std::size_t> initial() const;
  std::optional<std::size_t> find_state(std::string_view name) const;
  bool operator==(const StateMachine&) const = default;
};

struct ComponentDef {
  std::string name;
  ComponentKind kind = ComponentKind::IoTElement;
  std::vector<PropertyDef> properties;
  std::vector<PortDef> ports;
  std::vector<InstanceDecl> parts;
  std::vector<Connector> connectors;
  std::vector<EventDef> events;
  std::vector<ActionDef> actions;
  std::optional<StateMachine> machine;
  SourceLoc loc;

  std::optional<std::size_t> find_property(std::string_view name) const;
  std::optional<std::size_t> find_port(std::string_view name) const;
  std::optional<std::size_t> find_part(std::string_view name) const;
  std::optional<std::size_t> find_event(std::string_view name) const;
  std::optional<std::size_t> find_action(std::string_view name) const;
  bool operator==(const ComponentDef&) const = default;
};

struct Model {
  std::vector<PayloadDef> payloads;
  std::vector<InterfaceDef> interfaces;
  std::vector<ComponentDef> components;
  std::vector<InstanceDecl> instances;
  std::string file;  // origin, for diagnostics; not part of structure

  std::optional<std::size_t> find_payload(std::string_view name) const;
  std::optional<std::size_t> find_interface(std::string_view name) const;
  std::optional<std::size_t> find_component(std::string_view name) const;

  /// Printable name of a field type ("float", "SenseData").
  std::string type_name(const TypeRef& t) const;

  /// Default-valued record of the given payload type (nested payloads
  /// included).
  Record zero_record(std::size_t payload) const;

  bool operator==(const Model& o) const {
    return payloads == o.payloads && interfaces == o.interfaces &&
           components == o.components && instances == o.instances;
  }
};

}  // namespace ciot
