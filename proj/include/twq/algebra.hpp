#pragma once

// Query algebra over object sets, state sets and series: classical set and
// relational operators, state access, temporal restriction, temporal joins,
// temporal grouping and the analytic series operators.

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "twq/expr.hpp"
#include "twq/model.hpp"

namespace twq {

/// A warehouse object as seen by a query: its identity plus a (possibly
/// projected) copy of its current value.
struct ObjectItem {
  Oid oid;
  std::string class_name;
  Record value;
  const WarehouseObject* object = nullptr;

  friend bool operator==(const ObjectItem& a, const ObjectItem& b) {
    return a.oid == b.oid && a.class_name == b.class_name && a.value == b.value;
  }
};

/// Joined pair. Fields are prefixed "left." / "right."; state sides keep
/// their domains.
struct Tuple {
  Record value;
  std::optional<TemporalDomain> left_domain;
  std::optional<TemporalDomain> right_domain;
  friend bool operator==(const Tuple&, const Tuple&) = default;
};

/// Result element of the temporal groupings: a window and the structural
/// values of the states intersecting it.
struct Group {
  Interval window;
  std::vector<Record> members;
  friend bool operator==(const Group&, const Group&) = default;
};

struct ObjectSet { std::vector<ObjectItem> items; friend bool operator==(const ObjectSet&, const ObjectSet&) = default; };
struct StateSet { std::vector<State> states; friend bool operator==(const StateSet&, const StateSet&) = default; };
struct ObjectSetSet { std::vector<ObjectSet> sets; friend bool operator==(const ObjectSetSet&, const ObjectSetSet&) = default; };
struct StateSetSet { std::vector<StateSet> sets; friend bool operator==(const StateSetSet&, const StateSetSet&) = default; };
struct TupleSet { std::vector<Tuple> tuples; friend bool operator==(const TupleSet&, const TupleSet&) = default; };
struct GroupSet { std::vector<Group> groups; friend bool operator==(const GroupSet&, const GroupSet&) = default; };
/// Chronologically ordered states with single-interval domains.
struct Series { std::vector<State> states; friend bool operator==(const Series&, const Series&) = default; };

enum class Kind { object_set, state_set, object_set_set, state_set_set, tuple_set, group_set, series, value };
std::string_view kind_name(Kind k);

using Collection = std::variant<ObjectSet, StateSet, ObjectSetSet, StateSetSet, TupleSet, GroupSet, Series, Record>;
Kind kind_of(const Collection& c);

/// Aggregation spec of the analytic operators: `{(poids, avg(poids))}`.
using AggSpec = std::vector<AggregateEntry>;

// ---------------------------------------------------------------------------
// Classical operators

enum class SetOp { union_, intersect, difference };
enum class Equality { value, identity };

/// Value equality compares structural values (and domains for states);
/// identity compares oids and is defined for object sets only.
Collection set_combine(SetOp op, Equality eq, const Collection& a, const Collection& b);

Collection flatten(const Collection& a);
Collection dup_elim(const Collection& a);
Collection empty_elim(const Collection& a);

/// Element range variable `var`. For states `var.domT` is the domain.
Collection select(const Collection& a, const std::string& var, const Expr& predicate);

/// `alias : path`; an empty alias takes the last field name of the path.
/// Paths naming the domain are accepted and ignored: domains are always kept.
struct ProjectItem {
  std::string alias;
  Path path;
  friend bool operator==(const ProjectItem&, const ProjectItem&) = default;
};
Collection project(const Collection& a, const std::string& var, const std::vector<ProjectItem>& items);

Collection join(const Collection& a, const std::string& a_var, const Collection& b, const std::string& b_var,
                const Expr* predicate);

/// Groups elements equal on every other attribute (and domain, for states)
/// and collects the `attribute` values into a list.
Collection nest(const Collection& a, const std::string& attribute);
Collection unnest(const Collection& a, const std::string& attribute);

// ---------------------------------------------------------------------------
// State access

/// The current state of each object, its domain closed at `as_of`.
StateSet current(const ObjectSet& objs, std::optional<Instant> as_of);
StateSetSet past(const ObjectSet& objs);
StateSetSet archive(const ObjectSet& objs);

// ---------------------------------------------------------------------------
// Temporal operators

/// States whose domain D satisfies `op(D, window)`. Object sets contribute
/// the archive, past and current states of each object.
StateSet state_restrict(const Collection& e, const TemporalDomain& window, TemporalOp op,
                        std::optional<Instant> as_of);

/// Pairs with a non-empty common domain satisfying the predicate; the result
/// domain is the intersection (ijoin) or the union (ujoin) of the pair's domains.
StateSet ijoin(const StateSet& e1, const std::string& v1, const StateSet& e2, const std::string& v2,
               const Expr* predicate);
StateSet ujoin(const StateSet& e1, const std::string& v1, const StateSet& e2, const std::string& v2,
               const Expr* predicate);

GroupSet ugroup(const StateSet& e, Unit u);
GroupSet dgroup(const StateSet& e, Duration d);

// ---------------------------------------------------------------------------
// Series and analytic operators

Series make_serie(const StateSet& e);

/// Strong entries count each series element once; moderate (t_*) entries
/// weight elements by the number of grains they cover.
Record agreg(const Series& sr, const AggSpec& spec);
Series acum(const Series& sr, const AggSpec& spec);
Series amove(const Series& sr, const AggSpec& spec, Duration d);
Series scale_up(const Series& sr, Unit coarser, const AggSpec& spec);
Series scale_down(const Series& sr, Unit finer, const AggSpec& spec);

}  // namespace twq
