#pragma once

// Structural values carried by warehouse and source objects: scalars,
// composite records, lists and object references.

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace twq {

class Value;
using List = std::vector<Value>;

/// Reference to another object by key.
struct Ref {
  std::string key;
  friend bool operator==(const Ref&, const Ref&) = default;
  friend auto operator<=>(const Ref&, const Ref&) = default;
};

/// Attribute record with unique names, kept in declaration order.
class Record {
 public:
  using Field = std::pair<std::string, Value>;

  Record() = default;
  Record(std::initializer_list<Field> fields);

  const std::vector<Field>& fields() const { return fields_; }
  bool empty() const;
  std::size_t size() const;

  /// Exact name first, then case/accent-insensitive.
  const Value* find(std::string_view name) const;
  Value* find(std::string_view name);
  bool has(std::string_view name) const { return find(name) != nullptr; }

  /// Replaces an existing field (exact name) or appends.
  void set(std::string name, Value value);

  friend bool operator==(const Record& a, const Record& b);

 private:
  std::vector<Field> fields_;
};

enum class ValueKind { null, boolean, integer, decimal, string, list, record, ref };

class Value {
 public:
  Value() = default;
  Value(bool b) : v_(b) {}
  Value(int i) : v_(static_cast<std::int64_t>(i)) {}
  Value(std::int64_t i) : v_(i) {}
  Value(double d) : v_(d) {}
  Value(const char* s) : v_(std::string(s)) {}
  Value(std::string s) : v_(std::move(s)) {}
  Value(List l) : v_(std::move(l)) {}
  Value(Record r) : v_(std::move(r)) {}
  Value(Ref r) : v_(std::move(r)) {}

  ValueKind kind() const { return static_cast<ValueKind>(v_.index()); }
  bool is_null() const { return kind() == ValueKind::null; }
  bool is_numeric() const { return kind() == ValueKind::integer || kind() == ValueKind::decimal; }

  bool as_bool() const;
  std::int64_t as_int() const;
  /// Integer or decimal, widened.
  double as_double() const;
  const std::string& as_string() const;
  const List& as_list() const;
  const Record& as_record() const;
  Record& as_record();
  const Ref& as_ref() const;

  /// Compact debug form: {poids=80, tension={min=10, max=16}}.
  std::string to_string() const;

  /// Structural equality; integer 80 and decimal 80.0 are different values.
  friend bool operator==(const Value& a, const Value& b) { return a.v_ == b.v_; }

 private:
  std::variant<std::monostate, bool, std::int64_t, double, std::string, List, Record, Ref> v_;
};

inline bool Record::empty() const { return fields_.empty(); }
inline std::size_t Record::size() const { return fields_.size(); }

std::string_view value_kind_name(ValueKind k);

/// Comparison used by predicates: numbers compare across integer/decimal,
/// strings lexicographically, booleans and references by equality only.
/// Returns nullopt when the operands are not comparable with each other.
std::optional<std::partial_ordering> compare_values(const Value& a, const Value& b);

/// Deterministic total order over all values (kind first), for sorting.
bool total_less(const Value& a, const Value& b);
bool total_less(const Record& a, const Record& b);

}  // namespace twq
