#pragma once

#include <string>
#include <vector>

#include "ciot/diagnostic.hpp"
#include "ciot/value.hpp"

namespace ciot {

enum class ExprOp {
  Literal,
  Property,  // bare name: a component property
  Payload,   // payload.<field>[.<field>...]
  Not,
  Neg,
  And,
  Or,
  Eq,
  Ne,
  Lt,
  Le,
  Gt,
  Ge,
  Add,
  Sub,
};

/// Expression tree used for transition guards and action effects.
/// Names are kept textual; typecheck binds them against a scope.
struct Expr {
  ExprOp op = ExprOp::Literal;
  Value literal;                   // Literal
  std::vector<std::string> path;   // Property: {name}; Payload: field chain
  std::vector<Expr> operands;      // unary: 1, binary: 2
  SourceLoc loc;

  static Expr make_literal(Value v, SourceLoc loc = {});
  static Expr make_property(std::string name, SourceLoc loc = {});
  static Expr make_payload(std::vector<std::string> fields, SourceLoc loc = {});
  static Expr make_unary(ExprOp op, Expr operand, SourceLoc loc = {});
  static Expr make_binary(ExprOp op, Expr lhs, Expr rhs, SourceLoc loc = {});

  /// Dotted name as it appears in scopes: "x" or "payload.duration".
  std::string dotted_name() const;

  bool operator==(const Expr&) const = default;
};

bool is_comparison(ExprOp op);
const char* op_symbol(ExprOp op);

/// Canonical infix rendering with the minimum parentheses needed to parse
/// back to the same tree.
std::string to_source(const Expr& e);

}  // namespace ciot
