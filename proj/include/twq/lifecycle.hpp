#pragma once

// Historization and archival: refresh demotes changed current values into
// past states; configuration rules select past states and archive them.

#include <string>
#include <vector>

#include "twq/extraction.hpp"
#include "twq/model.hpp"

namespace twq {

struct RefreshReport {
  Instant at;
  std::size_t created = 0;
  std::size_t updated = 0;      // non-temporal attributes overwritten
  std::size_t demoted = 0;      // current values turned into past states
  std::size_t deactivated = 0;  // objects missing from the snapshot
  std::size_t archived = 0;     // past states consumed by archival
  std::vector<Firing> firings;
  std::vector<std::string> rule_errors;

  std::string to_string() const;
};

/// Refreshes every class from the snapshot at instant `t`. All or nothing:
/// on error the warehouse is left untouched. Rule failures are reported, not
/// thrown. Throws NonMonotonicTimestamp, MixedUnits, TypeMismatch,
/// MissingAttribute, MappingError and snapshot validation errors.
RefreshReport refresh(Warehouse& w, const SourceSnapshot& s, Instant t);

/// Merges value-equal states into one state over the union of their domains,
/// sorted by first grain. Throws OverlapDetected when two different values
/// claim the same grain.
std::vector<State> coalesce(std::vector<State> past);

/// Fires the refresh rules of one environment. A failing rule leaves the
/// warehouse as it was before that rule and is reported in `errors`.
std::vector<Firing> apply_rules(Warehouse& w, const Environment& env, Instant t,
                                std::vector<std::string>* errors = nullptr);

/// The past states a rule condition selects, per object, in extension order.
std::vector<std::pair<Oid, std::vector<State>>> select_for_rule(const Warehouse& w, const Environment& env,
                                                                const ConfigRule& rule);

/// Summarizes `selected` into archive states per the class's archive filter
/// and removes them from the past states. Throws NoArchiveFilter,
/// SelectionNotPast, BlockCollision.
WarehouseObject archive_states(const WarehouseClass& c, const WarehouseObject& obj,
                               const std::vector<State>& selected);

}  // namespace twq
