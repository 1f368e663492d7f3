#pragma once

// Running aggregates over attribute values. Composite values aggregate
// componentwise; `count` counts contributions.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "twq/model.hpp"
#include "twq/value.hpp"

namespace twq {

class Accumulator {
 public:
  explicit Accumulator(AggKind kind = AggKind::avg) : kind_(kind) {}

  AggKind kind() const { return kind_; }
  std::int64_t contributions() const { return elems_; }

  /// Null values count as contributions for `count` only. Throws TypeMismatch
  /// when the value cannot be aggregated by this kind.
  void add(const Value& v);
  void merge(const Accumulator& other);

  /// avg yields a decimal; sum of integers stays an integer; count an integer.
  /// Null when nothing numeric was added.
  Value result() const;

  /// Everything needed to resume aggregation later: a record holding the
  /// running count, sum, min and max (recursively for composites).
  Value support() const;
  static Accumulator from_support(AggKind kind, const Value& support);

  friend bool operator==(const Accumulator&, const Accumulator&) = default;

 private:
  AggKind kind_;
  std::int64_t elems_ = 0;
  std::int64_t numeric_ = 0;
  bool all_int_ = true;
  std::int64_t isum_ = 0;
  double dsum_ = 0.0;
  Value min_;
  Value max_;
  bool composite_ = false;
  std::vector<std::pair<std::string, Accumulator>> fields_;
};

/// Aggregates `values` with a fresh accumulator.
Value aggregate_values(AggKind kind, const std::vector<Value>& values);

}  // namespace twq
