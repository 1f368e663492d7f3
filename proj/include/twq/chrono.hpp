#pragma once

// Discrete calendar time: units, instants (grains), closed intervals and
// multi-interval temporal domains, with the Allen relations generalized to
// domains.

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "twq/error.hpp"

namespace twq {

/// Built-in calendar units, from finest to coarsest.
enum class Unit : std::uint8_t { day, month, quarter, semester, year };

std::string_view unit_name(Unit u);

/// Accepts the English names and the French ones used in queries
/// ("jour", "mois", "trimestre", "semestre", "année"/"annee").
std::optional<Unit> parse_unit(std::string_view name);

/// Strict finer-than order: day < month < quarter < semester < year.
bool finer_than(Unit a, Unit b);

/// Every built-in unit pair is ordered; kept as a named check for units added later.
bool comparable(Unit a, Unit b);

/// One grain of a unit. The coordinate is a grain number: months since year 0
/// for months, quarters since year 0 for quarters, and so on; days count from
/// 1970-01-01.
class Instant {
 public:
  Instant() = default;
  Instant(Unit unit, std::int64_t index) : unit_(unit), index_(index) {}

  static Instant day(int year, unsigned month, unsigned day);
  static Instant month(int year, unsigned month);
  static Instant quarter(int year, unsigned quarter);
  static Instant semester(int year, unsigned semester);
  static Instant year(int year);

  /// "YYYY-MM-DD", "YYYY-MM", "YYYY-Qn", "YYYY-Sn" or "YYYY".
  static Instant parse(std::string_view text);

  Unit unit() const { return unit_; }
  std::int64_t index() const { return index_; }

  Instant shifted(std::int64_t grains) const { return {unit_, index_ + grains}; }
  Instant next() const { return shifted(1); }
  Instant prev() const { return shifted(-1); }

  /// Calendar year containing the grain.
  int calendar_year() const;

  std::string to_string() const;

  // Orders by unit first; only same-unit comparisons carry calendar meaning.
  friend bool operator==(const Instant&, const Instant&) = default;
  friend auto operator<=>(const Instant&, const Instant&) = default;

 private:
  Unit unit_ = Unit::month;
  std::int64_t index_ = 0;
};

/// Closed interval of grains; singletons (start == end) are legal.
class Interval {
 public:
  Interval(Instant start, Instant end);
  static Interval single(Instant i) { return Interval(i, i); }

  Instant start() const { return start_; }
  Instant end() const { return end_; }
  Unit unit() const { return start_.unit(); }
  std::int64_t first() const { return start_.index(); }
  std::int64_t last() const { return end_.index(); }
  std::int64_t length() const { return last() - first() + 1; }
  bool contains(Instant i) const;

  /// "[2000-07,2000-09]"
  std::string to_string() const;

  friend bool operator==(const Interval&, const Interval&) = default;

 private:
  Instant start_;
  Instant end_;
};

/// Ordered set of disjoint, non-adjacent, same-unit intervals. Always held in
/// normal form; an empty domain has no unit.
class TemporalDomain {
 public:
  TemporalDomain() = default;
  explicit TemporalDomain(Interval interval);

  /// Sorts and merges overlapping or adjacent intervals. Throws MixedUnits.
  static TemporalDomain normalize(std::span<const Interval> raw);

  /// Parses "<[a,b];[c,d]>" (also accepts "<>" for the empty domain).
  static TemporalDomain parse(std::string_view text);

  const std::vector<Interval>& intervals() const { return intervals_; }
  bool empty() const { return intervals_.empty(); }
  std::optional<Unit> unit() const { return unit_; }

  /// First and last grain. Throw EmptyDomain.
  Instant first() const;
  Instant last() const;

  std::int64_t grain_count() const;
  bool covers(Instant i) const;
  bool intersects(const TemporalDomain& other) const;

  std::string to_string() const;

  friend bool operator==(const TemporalDomain&, const TemporalDomain&) = default;

 private:
  std::optional<Unit> unit_;
  std::vector<Interval> intervals_;
};

TemporalDomain normalize(std::span<const Interval> raw);

// Grain-set algebra. Operands must share a unit unless one side is empty.
TemporalDomain domain_union(const TemporalDomain& x, const TemporalDomain& y);
TemporalDomain domain_intersect(const TemporalDomain& x, const TemporalDomain& y);
TemporalDomain domain_difference(const TemporalDomain& x, const TemporalDomain& y);

/// True iff every grain of y is a grain of x (inclusive containment).
bool contains(const TemporalDomain& x, const TemporalDomain& y);

enum class AllenRelation : std::uint8_t {
  Precedes,
  Follows,
  Meets,
  IsMeeted,
  Overlaps,
  IsOverlaped,
  During,
  IsDuring,
  Starts,
  IsStarted,
  Ends,
  IsFinished,
  Equals,
};

inline constexpr AllenRelation kAllenRelations[] = {
    AllenRelation::Precedes, AllenRelation::Follows,     AllenRelation::Meets,
    AllenRelation::IsMeeted, AllenRelation::Overlaps,    AllenRelation::IsOverlaped,
    AllenRelation::During,   AllenRelation::IsDuring,    AllenRelation::Starts,
    AllenRelation::IsStarted, AllenRelation::Ends,       AllenRelation::IsFinished,
    AllenRelation::Equals,
};

AllenRelation reciprocal(AllenRelation rel);
std::string_view relation_name(AllenRelation rel);
std::optional<AllenRelation> parse_relation(std::string_view name);

/// Domain-generalized Allen relation, with strict comparisons:
///   Precedes  last(X) < first(Y)
///   Meets     last(X) = first(Y)
///   Overlaps  some Xi, Yj with start(Xi) < start(Yj) < end(Xi) < end(Yj)
///   During    every Xi has a Yj with start(Yj) < start(Xi) and end(Xi) < end(Yj)
///   Starts    first(X) = first(Y)
///   Ends      last(X) = last(Y)
///   Equals    same intervals
/// The other six swap operands. Throws EmptyDomain and MixedUnits.
bool allen_relate(const TemporalDomain& x, const TemporalDomain& y, AllenRelation rel);

/// Coarsening returns the enclosing grain of the target unit as a singleton;
/// refining returns the span of target grains covering the instant.
Interval convert_grain(Instant i, Unit target);

/// Every grain of the domain re-expressed at the target unit.
TemporalDomain convert_domain(const TemporalDomain& d, Unit target);

struct Duration {
  std::int64_t count = 1;
  Unit unit = Unit::month;

  Duration() = default;
  Duration(std::int64_t count, Unit unit);

  friend bool operator==(const Duration&, const Duration&) = default;
};

std::int64_t floor_div(std::int64_t a, std::int64_t b);

}  // namespace twq
