#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ciot/dsl/ast.hpp"
#include "ciot/dsl/lexer.hpp"

namespace ciot::dsl {

/// Recursive-descent parser over a token list produced by tokenize().
/// Stops at the first syntax error and throws Error(E_PARSE) whose message
/// lists the set of tokens that would have been accepted.
SourceAst parse(const std::vector<Token>& tokens, const std::string& file = {});

/// tokenize + parse.
SourceAst parse_source(std::string_view source, const std::string& file = {});

/// Parses a standalone guard expression (used by tests and the CLI).
Expr parse_expression(std::string_view source);

}  // namespace ciot::dsl
