#pragma once

#include <vector>

#include "ciot/diagnostic.hpp"
#include "ciot/model.hpp"

namespace ciot {

// Well-formedness rules checked by validate():
//   R1  state machine has exactly one initial state
//   R2  connector/port interface compatibility (required <-> provided,
//       one connector per port, port declares at least one interface)
//   R3  event/action kind consistency
//   R4  guards, effects and property initial values type-check
//   R5  composition: IoTElement is a leaf, no recursive containment
//   R6  state unreachable from the initial state (warning)
//   R7  incoming events match an interface operation on their port and,
//       when wired, an outgoing event of the peer
std::vector<Diagnostic> validate(const Model& model);

}  // namespace ciot
