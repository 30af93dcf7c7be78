#include "ciot/typecheck.hpp"

namespace ciot {

namespace {

void add_payload_fields(const Model& model, std::size_t payload, const std::string& prefix,
                        TypeScope& scope) {
  for (const auto& f : model.payloads.at(payload).fields) {
    std::string name = prefix + "." + f.name;
    if (f.type.is_payload())
      add_payload_fields(model, f.type.payload, name, scope);
    else
      scope.emplace(std::move(name), f.type.prim_type());
  }
}

bool is_numeric(PrimType t) { return t == PrimType::Int || t == PrimType::Float; }

Diagnostic mismatch(const Expr& e, const std::string& why) {
  return Diagnostic{"E_TYPE_MISMATCH", Severity::Error,
                    "in '" + to_source(e) + "': " + why, e.loc, {}};
}

std::string tname(PrimType t) { return to_string(t); }

}  // namespace

TypeScope make_scope(const Model& model, const ComponentDef& component,
                     std::optional<std::size_t> payload) {
  TypeScope scope;
  for (const auto& p : component.properties) scope.emplace(p.name, p.type);
  if (payload) add_payload_fields(model, *payload, "payload", scope);
  return scope;
}

bool assignable(PrimType from, PrimType to) {
  return from == to || (from == PrimType::Int && to == PrimType::Float);
}

std::variant<PrimType, Diagnostic> typecheck(const Expr& e, const TypeScope& scope) {
  switch (e.op) {
    case ExprOp::Literal: {
      if (auto t = e.literal.prim_type()) return *t;
      return mismatch(e, "record literals are not expressions");
    }
    case ExprOp::Property:
    case ExprOp::Payload: {
      std::string name = e.dotted_name();
      auto it = scope.find(name);
      if (it == scope.end())
        return Diagnostic{"E_UNKNOWN_NAME", Severity::Error, "unknown name '" + name + "'", e.loc, {}};
      return it->second;
    }
    default: break;
  }

  std::vector<PrimType> types;
  for (const auto& operand : e.operands) {
    auto t = typecheck(operand, scope);
    if (auto* d = std::get_if<Diagnostic>(&t)) return *d;
    types.push_back(std::get<PrimType>(t));
  }

  switch (e.op) {
    case ExprOp::Not:
      if (types[0] != PrimType::Bool) return mismatch(e, "'not' needs bool, got " + tname(types[0]));
      return PrimType::Bool;
    case ExprOp::Neg:
      if (!is_numeric(types[0])) return mismatch(e, "'-' needs a number, got " + tname(types[0]));
      return types[0];
    case ExprOp::And:
    case ExprOp::Or:
      if (types[0] != PrimType::Bool || types[1] != PrimType::Bool)
        return mismatch(e, std::string("'") + op_symbol(e.op) + "' needs bool operands, got " +
                               tname(types[0]) + " and " + tname(types[1]));
      return PrimType::Bool;
    case ExprOp::Eq:
    case ExprOp::Ne:
      if (types[0] != types[1] && !(is_numeric(types[0]) && is_numeric(types[1])))
        return mismatch(e, "cannot compare " + tname(types[0]) + " with " + tname(types[1]));
      return PrimType::Bool;
    case ExprOp::Lt:
    case ExprOp::Le:
    case ExprOp::Gt:
    case ExprOp::Ge:
      if (!is_numeric(types[0]) || !is_numeric(types[1]))
        return mismatch(e, "ordering needs numbers, got " + tname(types[0]) + " and " + tname(types[1]));
      return PrimType::Bool;
    case ExprOp::Add:
    case ExprOp::Sub:
      if (!is_numeric(types[0]) || !is_numeric(types[1]))
        return mismatch(e, "arithmetic needs numbers, got " + tname(types[0]) + " and " + tname(types[1]));
      return types[0] == PrimType::Int && types[1] == PrimType::Int ? PrimType::Int : PrimType::Float;
    default: break;
  }
  return mismatch(e, "malformed expression");
}

std::variant<PrimType, Diagnostic> typecheck_guard(const Expr& expr, const TypeScope& scope) {
  auto t = typecheck(expr, scope);
  if (auto* ty = std::get_if<PrimType>(&t); ty && *ty != PrimType::Bool)
    return mismatch(expr, "guard must be bool, got " + tname(*ty));
  return t;
}

}  // namespace ciot
