#include "ciot/value.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace ciot {

const char* to_string(PrimType t) {
  switch (t) {
    case PrimType::Int: return "int";
    case PrimType::Float: return "float";
    case PrimType::Bool: return "bool";
    case PrimType::String: return "string";
  }
  return "?";
}

std::optional<PrimType> prim_type_from_name(std::string_view name) {
  if (name == "int") return PrimType::Int;
  if (name == "float") return PrimType::Float;
  if (name == "bool") return PrimType::Bool;
  if (name == "string") return PrimType::String;
  return std::nullopt;
}

const Value* Record::find(std::string_view field) const {
  for (const auto& [name, value] : fields)
    if (name == field) return &value;
  return nullptr;
}

Value* Record::find(std::string_view field) {
  for (auto& [name, value] : fields)
    if (name == field) return &value;
  return nullptr;
}

bool Record::operator==(const Record& other) const {
  return type == other.type && fields == other.fields;
}

std::optional<PrimType> Value::prim_type() const {
  switch (data.index()) {
    case 0: return PrimType::Int;
    case 1: return PrimType::Float;
    case 2: return PrimType::Bool;
    case 3: return PrimType::String;
    default: return std::nullopt;
  }
}

Value zero_value(PrimType t) {
  switch (t) {
    case PrimType::Int: return Value(std::int64_t{0});
    case PrimType::Float: return Value(0.0);
    case PrimType::Bool: return Value(false);
    case PrimType::String: return Value(std::string());
  }
  throw std::logic_error("bad PrimType");
}

std::string format_float(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, ptr);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

std::string quote_string(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

std::string format_value(const Value& v) {
  struct Visitor {
    std::string operator()(std::int64_t i) const { return std::to_string(i); }
    std::string operator()(double d) const { return format_float(d); }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(const std::string& s) const { return quote_string(s); }
    std::string operator()(const Record& r) const {
      std::string out = "{";
      for (std::size_t i = 0; i < r.fields.size(); ++i) {
        if (i) out += ',';
        out += r.fields[i].first + '=' + format_value(r.fields[i].second);
      }
      return out + '}';
    }
  };
  return std::visit(Visitor{}, v.data);
}

}  // namespace ciot
