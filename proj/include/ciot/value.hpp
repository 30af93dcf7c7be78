#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ciot {

enum class PrimType { Int, Float, Bool, String };

const char* to_string(PrimType t);
std::optional<PrimType> prim_type_from_name(std::string_view name);

struct Value;

/// A payload instance. Fields are kept in declaration order of the payload
/// type and carry their names so records are self-describing in traces.
struct Record {
  std::string type;
  std::vector<std::pair<std::string, Value>> fields;

  const Value* find(std::string_view field) const;
  Value* find(std::string_view field);
  bool operator==(const Record& other) const;
};

struct Value {
  std::variant<std::int64_t, double, bool, std::string, Record> data;

  Value() : data(std::int64_t{0}) {}
  Value(std::int64_t v) : data(v) {}
  Value(int v) : data(std::int64_t{v}) {}
  Value(double v) : data(v) {}
  Value(bool v) : data(v) {}
  Value(std::string v) : data(std::move(v)) {}
  Value(const char* v) : data(std::string(v)) {}
  Value(Record r) : data(std::move(r)) {}

  bool is_int() const { return std::holds_alternative<std::int64_t>(data); }
  bool is_float() const { return std::holds_alternative<double>(data); }
  bool is_bool() const { return std::holds_alternative<bool>(data); }
  bool is_string() const { return std::holds_alternative<std::string>(data); }
  bool is_record() const { return std::holds_alternative<Record>(data); }
  bool is_numeric() const { return is_int() || is_float(); }

  std::int64_t as_int() const { return std::get<std::int64_t>(data); }
  double as_float() const { return std::get<double>(data); }
  bool as_bool() const { return std::get<bool>(data); }
  const std::string& as_string() const { return std::get<std::string>(data); }
  const Record& as_record() const { return std::get<Record>(data); }
  Record& as_record() { return std::get<Record>(data); }

  /// Numeric value widened to double. Precondition: is_numeric().
  double widened() const { return is_int() ? static_cast<double>(as_int()) : as_float(); }

  /// Primitive type of the value; nullopt for records.
  std::optional<PrimType> prim_type() const;

  bool operator==(const Value& other) const { return data == other.data; }
};

Value zero_value(PrimType t);

/// Canonical text: integers in decimal, floats in shortest round-trip form
/// always containing '.' or an exponent, strings double-quoted with C
/// escapes, records as `{a=1,b="x"}`.
std::string format_value(const Value& v);
std::string format_float(double v);
std::string quote_string(std::string_view s);

}  // namespace ciot
