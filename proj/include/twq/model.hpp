#pragma once

// Warehouse data model: states, warehouse objects, warehouse classes with
// their temporal and archive filters, environments, configuration rules and
// the schema that ties them together.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "twq/chrono.hpp"
#include "twq/diagnostic.hpp"
#include "twq/expr.hpp"
#include "twq/mapping.hpp"
#include "twq/value.hpp"

namespace twq {

struct Oid {
  std::string value;
  friend bool operator==(const Oid&, const Oid&) = default;
  friend auto operator<=>(const Oid&, const Oid&) = default;
};

enum class Role { current, past, archive };
std::string_view role_name(Role r);

/// A structural value together with the domain over which it was current.
struct State {
  Record value;
  TemporalDomain domain;
  Role role = Role::past;
  Oid owner;
  /// Current states extend to "now"; their domain stops at the last refresh.
  bool open_end = false;
  /// Archive states only: per-attribute aggregation support, so a later
  /// archival pass can re-aggregate into the same state.
  Record support;

  friend bool operator==(const State&, const State&) = default;
};

/// Value equality of states: structural value and domain.
inline bool same_state_value(const State& a, const State& b) {
  return a.value == b.value && a.domain == b.domain;
}

// ---------------------------------------------------------------------------
// Filters

enum class AggKind { avg, sum, count, max, min };
/// Strong: one archive state per archival. Moderate (the *_t functions): one
/// archive state per block of the filter's grain.
enum class AggMode { strong, moderate };

struct AggregationFn {
  AggKind kind = AggKind::avg;
  AggMode mode = AggMode::strong;
  friend bool operator==(const AggregationFn&, const AggregationFn&) = default;
};

std::string_view agg_kind_name(AggKind k);
/// "avg", "t_avg"; accepts the "avg_t" spelling too.
std::optional<AggregationFn> parse_aggregation(std::string_view name);
std::string aggregation_name(AggregationFn fn);

/// `(attribute, fn(source))`
struct AggregateEntry {
  std::string attribute;
  AggregationFn fn;
  std::string source;
  friend bool operator==(const AggregateEntry&, const AggregateEntry&) = default;
};

/// `(property, source)`; a source written as `name()` is an operation.
struct TemporalEntry {
  std::string property;
  std::string source;
  bool function_backed = false;
  friend bool operator==(const TemporalEntry&, const TemporalEntry&) = default;
};

struct TemporalFilter {
  std::vector<TemporalEntry> entries;
  bool empty() const { return entries.empty(); }
  friend bool operator==(const TemporalFilter&, const TemporalFilter&) = default;
};

struct ArchiveFilter {
  std::vector<AggregateEntry> entries;
  /// `by month(6)`
  std::optional<Duration> grain;
  bool empty() const { return entries.empty(); }
  bool moderate() const;
  friend bool operator==(const ArchiveFilter&, const ArchiveFilter&) = default;
};

// ---------------------------------------------------------------------------
// Declarations

struct TypeSpec {
  enum class Kind { string, integer, boolean, decimal, date, list, structure };
  Kind kind = Kind::string;
  std::string struct_name;
  std::vector<std::pair<std::string, TypeSpec>> fields;
  std::vector<TypeSpec> element;  // exactly one for lists

  static TypeSpec scalar(Kind k) { return TypeSpec{k, {}, {}, {}}; }
  static TypeSpec list_of(TypeSpec e) { return TypeSpec{Kind::list, {}, {}, {std::move(e)}}; }

  /// Printable declaration: "Integer", "List<String>", "Struct T {Integer min, Integer max}".
  std::string to_string() const;
  friend bool operator==(const TypeSpec&, const TypeSpec&) = default;
};

/// Checks a value against a declared type. Integers are accepted where
/// decimals are declared, and strings holding a day where dates are.
bool value_conforms(const Value& v, const TypeSpec& t);

struct AttributeDecl {
  std::string name;
  TypeSpec type;
  friend bool operator==(const AttributeDecl&, const AttributeDecl&) = default;
};

struct RelationshipDecl {
  std::string target;
  std::string name;
  std::string inverse_class;
  std::string inverse_name;
  friend bool operator==(const RelationshipDecl&, const RelationshipDecl&) = default;
};

/// Declared signature only; behavior is not stored.
struct OperationDecl {
  TypeSpec result;
  std::string name;
  friend bool operator==(const OperationDecl&, const OperationDecl&) = default;
};

/// A class of the source catalog.
struct SourceClass {
  std::string name;
  std::vector<AttributeDecl> attributes;
  std::vector<RelationshipDecl> relationships;
  std::vector<OperationDecl> operations;
  friend bool operator==(const SourceClass&, const SourceClass&) = default;
};

struct WarehouseClass {
  std::string name;
  std::vector<std::string> super_names;
  std::vector<AttributeDecl> attributes;
  std::vector<OperationDecl> operations;
  MappingPtr mapping;  // null: the source class of the same name
  TemporalFilter temporal_filter;
  ArchiveFilter archive_filter;

  const AttributeDecl* find_attribute(std::string_view name) const;
  friend bool operator==(const WarehouseClass& a, const WarehouseClass& b);
};

/// `select T from P in PATIENT, T in P.PastStates() where ...`
struct SelectionQuery {
  std::string result_var;
  std::string object_var;
  std::string class_name;
  std::string state_var;
  std::string accessor = "PastStates";
  ExprPtr where;  // may be null
  friend bool operator==(const SelectionQuery& a, const SelectionQuery& b);
};

/// Event-condition-action rule; the only event is refresh and the only
/// action archives the selected past states.
struct ConfigRule {
  std::string name;
  std::string environment;
  std::string event = "refresh";
  std::variant<ExprPtr, SelectionQuery> condition;
  std::string action_target;
  std::string action = "archive";
  friend bool operator==(const ConfigRule& a, const ConfigRule& b);
};

struct Environment {
  std::string name;
  std::vector<std::string> classes;
  std::vector<ConfigRule> rules;
  friend bool operator==(const Environment&, const Environment&) = default;
};

struct ConfigEntry {
  std::string key;
  Value value;
  friend bool operator==(const ConfigEntry&, const ConfigEntry&) = default;
};

struct WarehouseSchema {
  std::string name = "warehouse";
  std::vector<SourceClass> sources;
  std::vector<WarehouseClass> classes;
  std::vector<Environment> environments;
  std::vector<ConfigEntry> config;

  /// Case/accent-insensitive lookups, exact match preferred.
  const WarehouseClass* find_class(std::string_view name) const;
  const SourceClass* find_source(std::string_view name) const;
  const Environment* find_environment(std::string_view name) const;

  friend bool operator==(const WarehouseSchema&, const WarehouseSchema&) = default;
};

/// Every violated schema invariant, one diagnostic each. Notes (such as
/// unsupported inheritance) do not count as violations.
Diagnostics validate_schema(const WarehouseSchema& s);

/// Restricts a full class value to the structure of past states (temporal
/// filter) or archive states (archive filter). Throws MissingAttribute.
Record state_structural_projection(const WarehouseClass& c, const Record& v, Role role);

// ---------------------------------------------------------------------------
// Warehouse contents

/// (oid, current state, past states, archive states).
struct WarehouseObject {
  Oid oid;
  std::string class_name;
  std::vector<std::string> source_key;
  Record current;
  Instant since;
  bool active = true;
  std::vector<State> past;
  std::vector<State> archive;

  /// The current state with its domain closed at `as_of` (or at `since`).
  State current_state(std::optional<Instant> as_of) const;

  friend bool operator==(const WarehouseObject&, const WarehouseObject&) = default;
};

struct Firing {
  std::string rule;
  Oid oid;
  std::size_t states = 0;
  Instant at;
  friend bool operator==(const Firing&, const Firing&) = default;
};

struct Warehouse {
  WarehouseSchema schema;
  std::vector<WarehouseObject> objects;
  std::optional<Instant> last_refresh;
  std::vector<Firing> journal;
  std::int64_t next_oid = 1;

  const WarehouseObject* find(const Oid& oid) const;
  WarehouseObject* find(const Oid& oid);
  const WarehouseObject* find_by_key(std::string_view class_name, const std::vector<std::string>& key) const;
  /// Objects of a class (matched like find_class), in creation order.
  std::vector<const WarehouseObject*> extension(std::string_view class_name) const;

  friend bool operator==(const Warehouse&, const Warehouse&) = default;
};

}  // namespace twq
