#pragma once

// Source snapshots and evaluation of construction (mapping) expressions.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "twq/diagnostic.hpp"
#include "twq/mapping.hpp"
#include "twq/model.hpp"

namespace twq {

struct SourceObject {
  std::string source_class;
  std::string key;
  Record attributes;
  /// name -> Ref, or List of Ref for multi-valued relationships.
  Record relationships;
  friend bool operator==(const SourceObject&, const SourceObject&) = default;
};

struct SourceSnapshot {
  std::optional<Instant> timestamp;
  std::vector<SourceObject> objects;

  /// Throws DuplicateSourceObject or UnresolvedReference.
  void validate() const;
};

/// One JSON object per line: {"class", "key", "attributes", "relationships"},
/// plus an optional {"timestamp": "2000-07"} line.
/// Blank lines and lines starting with '#' are skipped. Throws FormatError.
SourceSnapshot parse_snapshot(std::string_view jsonl);
SourceSnapshot load_snapshot(const std::string& path);

struct MappedRow {
  /// Source keys of the objects that produced the row, in binding order.
  std::vector<std::string> key;
  Record value;
  friend bool operator==(const MappedRow&, const MappedRow&) = default;
};

/// Evaluates the expression tree bottom-up. With a catalog, sources missing
/// from it raise UnknownSourceClass; without one they simply match nothing.
std::vector<MappedRow> evaluate_mapping(const MappingExpr& m, const SourceSnapshot& s,
                                        const std::vector<SourceClass>* catalog = nullptr);

Diagnostics validate_mapping(const MappingExpr& m, const std::vector<SourceClass>& catalog);

/// The rows of a warehouse class, reduced to its declared attributes in
/// declaration order and type-checked. Throws MissingAttribute, TypeMismatch.
std::vector<MappedRow> extract_class(const WarehouseSchema& schema, const WarehouseClass& c,
                                     const SourceSnapshot& s);

}  // namespace twq
