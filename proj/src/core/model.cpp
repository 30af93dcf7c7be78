#include "ciot/model.hpp"

#include <stdexcept>

namespace ciot {

const char* to_string(ComponentKind k) {
  switch (k) {
    case ComponentKind::IoTElement: return "IoTElement";
    case ComponentKind::Board: return "Board";
    case ComponentKind::VirtualEntity: return "VirtualEntity";
  }
  return "?";
}

const char* to_string(EventDirection d) {
  switch (d) {
    case EventDirection::Incoming: return "incoming";
    case EventDirection::Outgoing: return "outgoing";
    case EventDirection::Generic: return "generic";
  }
  return "?";
}

const char* to_string(ActionKind k) {
  switch (k) {
    case ActionKind::SendPayload: return "send";
    case ActionKind::ReceivePayload: return "receive";
    case ActionKind::Generic: return "generic";
  }
  return "?";
}

TypeRef TypeRef::prim(PrimType t) {
  switch (t) {
    case PrimType::Int: return {Kind::Int, 0};
    case PrimType::Float: return {Kind::Float, 0};
    case PrimType::Bool: return {Kind::Bool, 0};
    case PrimType::String: return {Kind::String, 0};
  }
  throw std::logic_error("bad PrimType");
}

TypeRef TypeRef::of_payload(std::size_t index) { return {Kind::Payload, index}; }

PrimType TypeRef::prim_type() const {
  switch (kind) {
    case Kind::Int: return PrimType::Int;
    case Kind::Float: return PrimType::Float;
    case Kind::Bool: return PrimType::Bool;
    case Kind::String: return PrimType::String;
    case Kind::Payload: break;
  }
  throw std::logic_error("TypeRef::prim_type on a payload type");
}

namespace {

template <typename Range>
std::optional<std::size_t> find_by_name(const Range& items, std::string_view name) {
  for (std::size_t i = 0; i < items.size(); ++i)
    if (items[i].name == name) return i;
  return std::nullopt;
}

}  // namespace

std::optional<std::size_t> StateMachine::initial() const {
  std::optional<std::size_t> found;
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (!states[i].initial) continue;
    if (found) return std::nullopt;
    found = i;
  }
  return found;
}

std::optional<std::size_t> StateMachine::find_state(std::string_view name) const {
  return find_by_name(states, name);
}

std::optional<std::size_t> ComponentDef::find_property(std::string_view n) const {
  return find_by_name(properties, n);
}
std::optional<std::size_t> ComponentDef::find_port(std::string_view n) const { return find_by_name(ports, n); }
std::optional<std::size_t> ComponentDef::find_part(std::string_view n) const { return find_by_name(parts, n); }
std::optional<std::size_t> ComponentDef::find_event(std::string_view n) const { return find_by_name(events, n); }
std::optional<std::size_t> ComponentDef::find_action(std::string_view n) const {
  return find_by_name(actions, n);
}

std::optional<std::size_t> Model::find_payload(std::string_view n) const { return find_by_name(payloads, n); }
std::optional<std::size_t> Model::find_interface(std::string_view n) const {
  return find_by_name(interfaces, n);
}
std::optional<std::size_t> Model::find_component(std::string_view n) const {
  return find_by_name(components, n);
}

std::string Model::type_name(const TypeRef& t) const {
  if (t.is_payload()) return payloads.at(t.payload).name;
  return to_string(t.prim_type());
}

Record Model::zero_record(std::size_t payload) const {
  const PayloadDef& def = payloads.at(payload);
  Record r;
  r.type = def.name;
  for (const auto& f : def.fields) {
    if (f.type.is_payload())
      r.fields.emplace_back(f.name, Value(zero_record(f.type.payload)));
    else
      r.fields.emplace_back(f.name, zero_value(f.type.prim_type()));
  }
  return r;
}

}  // namespace ciot
