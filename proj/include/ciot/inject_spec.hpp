#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "ciot/engine.hpp"

namespace ciot {

/// `inst.port.event{field=value,...}` split into its parts. The payload
/// record is untyped (empty type name) until conform_payload() checks it.
struct InjectSpec {
  std::string instance;
  std::optional<std::string> port;
  std::string event;
  std::optional<Record> payload;
};

/// Parses a spec against a runtime: the segment before the event names a
/// port when the instance has one by that name, otherwise the whole prefix
/// is the instance path and the event is generic. Values are DSL literals
/// or nested `{...}` records. Throws Error(E_USAGE) on malformed text and
/// Error(E_BAD_TARGET) when no instance matches.
InjectSpec parse_inject_spec(std::string_view text, const RuntimeState& rt);

/// parse_inject_spec() followed by inject().
void inject_spec(RuntimeState& rt, std::string_view text);

}  // namespace ciot
