#pragma once

#include <vector>

#include "ciot/diagnostic.hpp"
#include "ciot/dsl/ast.hpp"
#include "ciot/model.hpp"

namespace ciot {

/// Binds every name in `ast` to its definition. Collects all problems
/// (E_DUPLICATE, E_UNKNOWN_REF, E_PAYLOAD_CYCLE) before failing; on failure
/// throws Error whose code is the first problem's and whose diagnostics
/// list all of them.
Model resolve(const dsl::SourceAst& ast);

}  // namespace ciot
