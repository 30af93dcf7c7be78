#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ciot/expr.hpp"
#include "ciot/model.hpp"
#include "ciot/trace.hpp"
#include "ciot/value.hpp"

namespace ciot {

/// Where an event came from: a wired (instance, port), or the environment
/// when both are empty.
struct EventSource {
  std::optional<std::size_t> instance;
  std::optional<std::size_t> port;
};

struct EventInstance {
  std::size_t event = 0;  // index into the target component's events
  std::optional<Record> payload;
  EventSource source;
  std::uint64_t enqueue_seq = 0;
};

struct InstanceState {
  std::string path;  // dotted: "node.red"
  std::size_t component = 0;
  std::optional<std::size_t> parent;
  std::vector<std::size_t> children;  // in part declaration order
  std::optional<std::size_t> current_state;
  std::vector<Value> properties;  // parallel to ComponentDef::properties
  std::deque<EventInstance> inbox;
};

/// Peer of a wired port.
struct Route {
  std::size_t instance = 0;
  std::size_t port = 0;
};

/// Triggerless transitions chained after a state entry are capped so that a
/// cycle of always-true completion transitions terminates.
inline constexpr std::size_t kMaxCompletionChain = 16;

/// Complete execution state of one instantiated model. A value: copy it to
/// fork an execution, move it to another thread, never step it concurrently.
struct RuntimeState {
  std::shared_ptr<const Model> model;
  std::vector<InstanceState> instances;          // depth-first declaration order
  std::vector<std::vector<std::optional<Route>>> routes;  // [instance][port]
  std::int64_t clock_us = 0;
  std::uint64_t step_counter = 0;
  std::uint64_t rng_seed = 0;  // reserved
  std::uint64_t next_enqueue_seq = 0;
  std::uint64_t completion_limit_hits = 0;
  std::vector<TraceRecord> trace;

  const ComponentDef& component_of(std::size_t instance) const {
    return model->components[instances[instance].component];
  }
  std::optional<std::size_t> find_instance(std::string_view path) const;
  /// Name of the current state, or empty when the instance has no machine.
  std::string state_name(std::size_t instance) const;
  const Value* property(std::size_t instance, std::string_view name) const;
  bool quiescent() const;
};

/// Property values to replace declared initial values, applied to every
/// instance whose component declares a property of that name.
using PropertyOverrides = std::map<std::string, Value, std::less<>>;

/// Builds instances for the model's root instances (recursively through
/// parts), wires connector routes, enters every initial state and runs its
/// entry events. Throws Error(E_INSTANTIATE).
RuntimeState instantiate(std::shared_ptr<const Model> model, const PropertyOverrides& overrides = {});
RuntimeState instantiate(const Model& model, const PropertyOverrides& overrides = {});

/// Checks `payload` against payload type `type` (field names, order and
/// types; ints widen to float) and returns the normalised record. Throws
/// Error(E_TYPE).
Record conform_payload(const Model& model, std::size_t type, const Record& payload);

/// Queues an event for `instance_path`. Incoming events must name their
/// port; generic events (environment stimuli) must not. Throws
/// Error(E_BAD_TARGET) or Error(E_TYPE).
void inject(RuntimeState& rt, std::string_view instance_path, std::optional<std::string_view> port,
            std::string_view event, std::optional<Record> payload);

/// Delivers one event to the first instance (depth-first order) with a
/// non-empty inbox and runs it to completion. Returns false when every
/// inbox was empty.
bool step(RuntimeState& rt);

struct RunResult {
  std::size_t steps = 0;
  bool quiescent = false;
  bool step_limit = false;  // E_STEP_LIMIT
};

RunResult run_to_quiescence(RuntimeState& rt, std::size_t max_steps);

/// Resolves dotted names ("x", "payload.duration") to values.
using ValueLookup = std::function<std::optional<Value>(std::string_view)>;

/// Evaluates a type-checked expression. Throws Error(E_EVAL) on a missing
/// name.
Value evaluate(const Expr& expr, const ValueLookup& lookup);
bool eval_guard(const Expr& expr, const ValueLookup& lookup);

/// Lookup over a flat map, for tests and tools.
ValueLookup lookup_from_map(const std::map<std::string, Value, std::less<>>& values);

}  // namespace ciot
