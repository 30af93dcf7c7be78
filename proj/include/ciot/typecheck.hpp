#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>

#include "ciot/diagnostic.hpp"
#include "ciot/expr.hpp"
#include "ciot/model.hpp"

namespace ciot {

/// Visible names and their types. Properties appear bare ("threshold"),
/// payload fields with their access path ("payload.duration").
using TypeScope = std::map<std::string, PrimType, std::less<>>;

/// Scope for expressions evaluated inside `component`, optionally with the
/// fields of payload type `payload` visible under `payload.`.
TypeScope make_scope(const Model& model, const ComponentDef& component,
                     std::optional<std::size_t> payload);

/// Type of `expr`, or a diagnostic (E_TYPE_MISMATCH / E_UNKNOWN_NAME) naming
/// the offending subexpression.
std::variant<PrimType, Diagnostic> typecheck(const Expr& expr, const TypeScope& scope);

/// As typecheck(), and additionally requires the result to be bool.
std::variant<PrimType, Diagnostic> typecheck_guard(const Expr& expr, const TypeScope& scope);

/// True when a value of type `from` may be stored where `to` is expected
/// (identity, or int widened to float).
bool assignable(PrimType from, PrimType to);

}  // namespace ciot
