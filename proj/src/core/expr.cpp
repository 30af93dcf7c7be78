#include "ciot/expr.hpp"

#include <cmath>
#include <stdexcept>

namespace ciot {

Expr Expr::make_literal(Value v, SourceLoc loc) {
  Expr e;
  e.op = ExprOp::Literal;
  e.literal = std::move(v);
  e.loc = loc;
  return e;
}

Expr Expr::make_property(std::string name, SourceLoc loc) {
  Expr e;
  e.op = ExprOp::Property;
  e.path = {std::move(name)};
  e.loc = loc;
  return e;
}

Expr Expr::make_payload(std::vector<std::string> fields, SourceLoc loc) {
  Expr e;
  e.op = ExprOp::Payload;
  e.path = std::move(fields);
  e.loc = loc;
  return e;
}

Expr Expr::make_unary(ExprOp op, Expr operand, SourceLoc loc) {
  Expr e;
  e.op = op;
  e.operands.push_back(std::move(operand));
  e.loc = loc;
  return e;
}

Expr Expr::make_binary(ExprOp op, Expr lhs, Expr rhs, SourceLoc loc) {
  Expr e;
  e.op = op;
  e.operands.push_back(std::move(lhs));
  e.operands.push_back(std::move(rhs));
  e.loc = loc;
  return e;
}

std::string Expr::dotted_name() const {
  std::string out = op == ExprOp::Payload ? "payload" : "";
  for (const auto& p : path) {
    if (!out.empty()) out += '.';
    out += p;
  }
  return out;
}

bool is_comparison(ExprOp op) {
  switch (op) {
    case ExprOp::Eq:
    case ExprOp::Ne:
    case ExprOp::Lt:
    case ExprOp::Le:
    case ExprOp::Gt:
    case ExprOp::Ge: return true;
    default: return false;
  }
}

const char* op_symbol(ExprOp op) {
  switch (op) {
    case ExprOp::Not: return "not";
    case ExprOp::Neg: return "-";
    case ExprOp::And: return "and";
    case ExprOp::Or: return "or";
    case ExprOp::Eq: return "==";
    case ExprOp::Ne: return "!=";
    case ExprOp::Lt: return "<";
    case ExprOp::Le: return "<=";
    case ExprOp::Gt: return ">";
    case ExprOp::Ge: return ">=";
    case ExprOp::Add: return "+";
    case ExprOp::Sub: return "-";
    default: return "";
  }
}

namespace {

// Binding strength, loosest first. Comparisons do not chain, so both of
// their operands must bind tighter than a comparison.
int precedence(ExprOp op) {
  switch (op) {
    case ExprOp::Or: return 1;
    case ExprOp::And: return 2;
    case ExprOp::Not: return 3;
    case ExprOp::Add:
    case ExprOp::Sub: return 5;
    case ExprOp::Neg: return 6;
    case ExprOp::Literal:
    case ExprOp::Property:
    case ExprOp::Payload: return 7;
    default: return 4;  // comparisons
  }
}

std::string render(const Expr& e, int min_prec) {
  const int prec = precedence(e.op);
  std::string out;
  switch (e.op) {
    case ExprOp::Literal: out = format_value(e.literal); break;
    case ExprOp::Property:
    case ExprOp::Payload: out = e.dotted_name(); break;
    case ExprOp::Not: out = "not " + render(e.operands[0], 3); break;
    case ExprOp::Neg: {
      std::string inner = render(e.operands[0], 6);
      out = (inner.front() == '-' ? "- " : "-") + inner;
      break;
    }
    case ExprOp::Or:
    case ExprOp::And:
    case ExprOp::Add:
    case ExprOp::Sub:
      out = render(e.operands[0], prec) + ' ' + op_symbol(e.op) + ' ' +
            render(e.operands[1], prec + 1);
      break;
    default:
      out = render(e.operands[0], 5) + ' ' + op_symbol(e.op) + ' ' + render(e.operands[1], 5);
      break;
  }
  // Negative numeric literals are printed in parentheses; they re-parse as
  // negation of a literal, which evaluates identically.
  bool negative_literal = e.op == ExprOp::Literal &&
                          ((e.literal.is_int() && e.literal.as_int() < 0) ||
                           (e.literal.is_float() && std::signbit(e.literal.as_float())));
  if (prec < min_prec || (negative_literal && min_prec > 1)) return '(' + out + ')';
  return out;
}

}  // namespace

std::string to_source(const Expr& e) { return render(e, 0); }

}  // namespace ciot
