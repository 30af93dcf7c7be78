#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "ciot/model.hpp"

namespace ciot {

/// DOT text plus the number of node and edge statements it contains.
struct DotGraph {
  std::string text;
  std::size_t nodes = 0;
  std::size_t edges = 0;
};

/// One node per state (the initial one drawn bold) and one edge per
/// transition labelled `trigger [guard]`. Throws Error(E_NO_MACHINE).
DotGraph statemachine_to_dot(const Model& model, const ComponentDef& component);
DotGraph statemachine_to_dot(const Model& model, std::string_view component);

/// Nested clusters for the root component and every part instance below
/// it, a node per port, and an undirected edge per connector. Throws
/// Error(E_UNKNOWN_REF) for an unknown root.
DotGraph structure_to_dot(const Model& model, std::string_view root);

/// Canonical DSL text of the model: payloads, interfaces, components and
/// instances in declaration order, one member per line.
std::string export_model(const Model& model);

/// Parses and resolves interchange text (no rule validation). Throws the
/// front-end errors, E_LEX / E_PARSE among them.
Model import_model(std::string_view text, const std::string& file = {});

/// `"text"` with DOT escaping of quotes and backslashes.
std::string dot_quote(std::string_view text);

}  // namespace ciot
