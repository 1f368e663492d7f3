#include "twq/algebra.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "twq/aggregate.hpp"
#include "twq/names.hpp"

namespace twq {

std::string_view kind_name(Kind k) {
  switch (k) {
    case Kind::object_set: return "ObjectSet";
    case Kind::state_set: return "StateSet";
    case Kind::object_set_set: return "ObjectSetSet";
    case Kind::state_set_set: return "StateSetSet";
    case Kind::tuple_set: return "TupleSet";
    case Kind::group_set: return "GroupSet";
    case Kind::series: return "Series";
    case Kind::value: return "Value";
  }
  return "?";
}

Kind kind_of(const Collection& c) { return static_cast<Kind>(c.index()); }

namespace {

Error kind_error(std::string_view op, const Collection& c) {
  return Error(ErrorCode::KindMismatch,
               std::string(op) + " is not defined on " + std::string(kind_name(kind_of(c))));
}

// Field lookup that also accepts the dotted names produced by joins:
// `t.left.poids` finds the field "left.poids".
const Value& lookup(const Record& root, const Path& p, std::size_t from) {
  const Record* rec = &root;
  for (std::size_t i = from; i < p.steps.size(); ++i) {
    const auto* name = std::get_if<std::string>(&p.steps[i]);
    if (!name) throw Error(ErrorCode::PredicateTypeError, "index applied to a record in " + p.to_string());
    const Value* v = rec->find(*name);
    std::size_t used = i;
    if (!v) {
      std::string dotted = *name;
      for (std::size_t j = i + 1; j < p.steps.size() && !v; ++j) {
        const auto* next = std::get_if<std::string>(&p.steps[j]);
        if (!next) break;
        dotted += "." + *next;
        if ((v = rec->find(dotted))) used = j;
      }
    }
    if (!v) throw Error(ErrorCode::UnknownAttribute, "no attribute '" + *name + "' in " + p.to_string());
    if (used + 1 == p.steps.size()) return *v;
    if (v->kind() != ValueKind::record) return follow_steps(*v, p.steps, used + 1, p);
    rec = &v->as_record();
    i = used;
  }
  throw Error(ErrorCode::PredicateTypeError, "path names a whole element: " + p.to_string());
}

Operand resolve_element(const State& s, const Path& p) {
  if (p.steps.empty()) throw Error(ErrorCode::PredicateTypeError, "state variable used as a value: " + p.var);
  if (p.names_domain() && p.steps.size() == 1) return s.domain;
  return lookup(s.value, p, 0);
}

Operand resolve_element(const ObjectItem& o, const Path& p) {
  if (p.steps.empty()) return Value(Ref{o.oid.value});
  if (p.names_domain() && p.steps.size() == 1) {
    throw Error(ErrorCode::PredicateTypeError, "objects have no domain: " + p.to_string());
  }
  return lookup(o.value, p, 0);
}

Operand resolve_element(const Tuple& t, const Path& p) {
  if (p.steps.empty()) throw Error(ErrorCode::PredicateTypeError, "tuple variable used as a value: " + p.var);
  if (p.steps.size() == 2 && p.names_domain()) {
    const auto* side = std::get_if<std::string>(&p.steps.front());
    if (side && fold_identifier(*side) == "left" && t.left_domain) return *t.left_domain;
    if (side && fold_identifier(*side) == "right" && t.right_domain) return *t.right_domain;
  }
  return lookup(t.value, p, 0);
}

template <typename T>
Resolver bind_one(const std::string& var, const T& element) {
  return [&var, &element](const Path& p) -> Operand {
    if (!same_identifier(p.var, var)) throw Error(ErrorCode::UnboundVariable, p.var);
    return resolve_element(element, p);
  };
}

template <typename A, typename B>
Resolver bind_two(const std::string& va, const A& a, const std::string& vb, const B& b) {
  return [&](const Path& p) -> Operand {
    if (same_identifier(p.var, va)) return resolve_element(a, p);
    if (same_identifier(p.var, vb)) return resolve_element(b, p);
    throw Error(ErrorCode::UnboundVariable, p.var);
  };
}

bool value_equal(const ObjectItem& a, const ObjectItem& b) { return a.value == b.value; }
bool value_equal(const State& a, const State& b) { return same_state_value(a, b); }
bool value_equal(const Tuple& a, const Tuple& b) { return a == b; }

template <typename T, typename Eq>
std::vector<T> combine(SetOp op, const std::vector<T>& a, const std::vector<T>& b, Eq eq) {
  auto in = [&](const std::vector<T>& xs, const T& x) {
    return std::any_of(xs.begin(), xs.end(), [&](const T& y) { return eq(x, y); });
  };
  std::vector<T> out;
  for (const auto& x : a) {
    if (in(out, x)) continue;
    const bool in_b = in(b, x);
    if (op == SetOp::union_ || (op == SetOp::intersect && in_b) || (op == SetOp::difference && !in_b)) {
      out.push_back(x);
    }
  }
  if (op == SetOp::union_) {
    for (const auto& x : b) {
      if (!in(out, x)) out.push_back(x);
    }
  }
  return out;
}

template <typename T>
std::vector<T> distinct(const std::vector<T>& xs, bool by_value) {
  std::vector<T> out;
  for (const auto& x : xs) {
    const bool dup = std::any_of(out.begin(), out.end(), [&](const T& y) { return by_value ? value_equal(x, y) : x == y; });
    if (!dup) out.push_back(x);
  }
  return out;
}

std::string field_name(const ProjectItem& item) {
  if (!item.alias.empty()) return item.alias;
  for (auto it = item.path.steps.rbegin(); it != item.path.steps.rend(); ++it) {
    if (const auto* n = std::get_if<std::string>(&*it)) return *n;
  }
  return item.path.var;
}

template <typename T>
Record project_value(const T& element, const std::string& var, const std::vector<ProjectItem>& items) {
  Record out;
  for (const auto& item : items) {
    if (!same_identifier(item.path.var, var)) throw Error(ErrorCode::UnboundVariable, item.path.var);
    if (item.path.names_domain()) continue;
    if (item.path.steps.empty()) throw Error(ErrorCode::PredicateTypeError, "cannot project the element itself");
    const Operand o = resolve_element(element, item.path);
    const auto* v = std::get_if<Value>(&o);
    if (!v) continue;
    const std::string name = field_name(item);
    const bool clash =
        std::any_of(out.fields().begin(), out.fields().end(), [&](const auto& f) { return f.first == name; });
    if (clash) {
      throw Error(ErrorCode::AttributeNameClash, "projection produces '" + name + "' twice");
    }
    out.set(name, *v);
  }
  return out;
}

Record prefixed(const Record& left, const Record& right) {
  Record out;
  for (const auto& [n, v] : left.fields()) out.set("left." + n, v);
  for (const auto& [n, v] : right.fields()) out.set("right." + n, v);
  return out;
}

Record without(const Record& r, const std::string& attribute) {
  Record out;
  for (const auto& [n, v] : r.fields()) {
    if (!same_identifier(n, attribute)) out.set(n, v);
  }
  return out;
}

template <typename T, typename KeyEq>
std::vector<T> nest_items(const std::vector<T>& xs, const std::string& attribute, KeyEq same_key) {
  std::vector<T> out;
  for (const auto& x : xs) {
    const Value* v = x.value.find(attribute);
    if (!v) throw Error(ErrorCode::UnknownAttribute, "no attribute '" + attribute + "' to nest");
    auto it = std::find_if(out.begin(), out.end(), [&](const T& y) { return same_key(x, y); });
    if (it == out.end()) {
      T head = x;
      *head.value.find(attribute) = Value(List{*v});
      out.push_back(std::move(head));
    } else {
      Value* list = it->value.find(attribute);
      List items = list->as_list();
      items.push_back(*v);
      *list = Value(std::move(items));
    }
  }
  return out;
}

template <typename T>
std::vector<T> unnest_items(const std::vector<T>& xs, const std::string& attribute) {
  std::vector<T> out;
  for (const auto& x : xs) {
    const Value* v = x.value.find(attribute);
    if (!v) throw Error(ErrorCode::UnknownAttribute, "no attribute '" + attribute + "' to unnest");
    if (v->kind() != ValueKind::list) throw Error(ErrorCode::TypeMismatch, "UnNest on a non-list attribute " + attribute);
    for (const auto& e : v->as_list()) {
      T copy = x;
      *copy.value.find(attribute) = e;
      out.push_back(std::move(copy));
    }
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Classical operators

Collection set_combine(SetOp op, Equality eq, const Collection& a, const Collection& b) {
  if (a.index() != b.index()) {
    throw Error(ErrorCode::KindMismatch, "set operation between " + std::string(kind_name(kind_of(a))) + " and " +
                                             std::string(kind_name(kind_of(b))));
  }
  if (const auto* x = std::get_if<ObjectSet>(&a)) {
    const auto& y = std::get<ObjectSet>(b);
    if (eq == Equality::identity) {
      return ObjectSet{combine(op, x->items, y.items, [](const ObjectItem& p, const ObjectItem& q) { return p.oid == q.oid; })};
    }
    return ObjectSet{combine(op, x->items, y.items, [](const ObjectItem& p, const ObjectItem& q) { return value_equal(p, q); })};
  }
  if (eq == Equality::identity) {
    throw Error(ErrorCode::IdentityOnStates, "identity set operations apply to object sets only");
  }
  if (const auto* x = std::get_if<StateSet>(&a)) {
    const auto& y = std::get<StateSet>(b);
    return StateSet{combine(op, x->states, y.states, [](const State& p, const State& q) { return value_equal(p, q); })};
  }
  if (const auto* x = std::get_if<TupleSet>(&a)) {
    const auto& y = std::get<TupleSet>(b);
    return TupleSet{combine(op, x->tuples, y.tuples, [](const Tuple& p, const Tuple& q) { return p == q; })};
  }
  throw kind_error("set operation", a);
}

Collection flatten(const Collection& a) {
  if (const auto* x = std::get_if<StateSetSet>(&a)) {
    std::vector<State> all;
    for (const auto& s : x->sets) all.insert(all.end(), s.states.begin(), s.states.end());
    return StateSet{distinct(all, false)};
  }
  if (const auto* x = std::get_if<ObjectSetSet>(&a)) {
    std::vector<ObjectItem> all;
    for (const auto& s : x->sets) all.insert(all.end(), s.items.begin(), s.items.end());
    return ObjectSet{distinct(all, false)};
  }
  throw kind_error("Flatten", a);
}

Collection dup_elim(const Collection& a) {
  if (const auto* x = std::get_if<StateSet>(&a)) return StateSet{distinct(x->states, true)};
  if (const auto* x = std::get_if<ObjectSet>(&a)) return ObjectSet{distinct(x->items, true)};
  if (const auto* x = std::get_if<TupleSet>(&a)) return TupleSet{distinct(x->tuples, true)};
  throw kind_error("DupElim", a);
}

Collection empty_elim(const Collection& a) {
  if (const auto* x = std::get_if<StateSetSet>(&a)) {
    StateSetSet out;
    for (const auto& s : x->sets) {
      if (!s.states.empty()) out.sets.push_back(s);
    }
    return out;
  }
  if (const auto* x = std::get_if<ObjectSetSet>(&a)) {
    ObjectSetSet out;
    for (const auto& s : x->sets) {
      if (!s.items.empty()) out.sets.push_back(s);
    }
    return out;
  }
  throw kind_error("EmptyElim", a);
}

Collection select(const Collection& a, const std::string& var, const Expr& predicate) {
  auto keep = [&](const auto& xs) {
    std::remove_cvref_t<decltype(xs)> out;
    for (const auto& x : xs) {
      if (evaluate_predicate(predicate, bind_one(var, x))) out.push_back(x);
    }
    return out;
  };
  if (const auto* x = std::get_if<ObjectSet>(&a)) return ObjectSet{keep(x->items)};
  if (const auto* x = std::get_if<StateSet>(&a)) return StateSet{keep(x->states)};
  if (const auto* x = std::get_if<TupleSet>(&a)) return TupleSet{keep(x->tuples)};
  throw kind_error("Select", a);
}

Collection project(const Collection& a, const std::string& var, const std::vector<ProjectItem>& items) {
  auto apply = [&](const auto& xs) {
    std::remove_cvref_t<decltype(xs)> out;
    for (const auto& x : xs) {
      auto copy = x;
      copy.value = project_value(x, var, items);
      out.push_back(std::move(copy));
    }
    return out;
  };
  if (const auto* x = std::get_if<ObjectSet>(&a)) return ObjectSet{apply(x->items)};
  if (const auto* x = std::get_if<StateSet>(&a)) return StateSet{apply(x->states)};
  if (const auto* x = std::get_if<TupleSet>(&a)) {
    TupleSet out = TupleSet{apply(x->tuples)};
    const bool keeps_left = std::any_of(items.begin(), items.end(), [](const ProjectItem& i) {
      return !i.path.steps.empty() && std::holds_alternative<std::string>(i.path.steps.front()) &&
             fold_identifier(std::get<std::string>(i.path.steps.front())) == "left";
    });
    const bool keeps_right = std::any_of(items.begin(), items.end(), [](const ProjectItem& i) {
      return !i.path.steps.empty() && std::holds_alternative<std::string>(i.path.steps.front()) &&
             fold_identifier(std::get<std::string>(i.path.steps.front())) == "right";
    });
    for (auto& t : out.tuples) {
      if (!keeps_left) t.left_domain.reset();
      if (!keeps_right) t.right_domain.reset();
    }
    return out;
  }
  throw kind_error("Project", a);
}

Collection join(const Collection& a, const std::string& a_var, const Collection& b, const std::string& b_var,
                const Expr* predicate) {
  TupleSet out;
  auto pairs = [&](const auto& xs, const auto& ys) {
    for (const auto& x : xs) {
      for (const auto& y : ys) {
        if (predicate && !evaluate_predicate(*predicate, bind_two(a_var, x, b_var, y))) continue;
        Tuple t;
        if constexpr (std::is_same_v<std::decay_t<decltype(x)>, ObjectItem>) {
          Record l = x.value;
          l.set("oid", Value(Ref{x.oid.value}));
          Record r = y.value;
          r.set("oid", Value(Ref{y.oid.value}));
          t.value = prefixed(l, r);
        } else {
          t.value = prefixed(x.value, y.value);
          t.left_domain = x.domain;
          t.right_domain = y.domain;
        }
        out.tuples.push_back(std::move(t));
      }
    }
  };
  if (a.index() != b.index()) {
    throw Error(ErrorCode::KindMismatch, "Join between " + std::string(kind_name(kind_of(a))) + " and " +
                                             std::string(kind_name(kind_of(b))));
  }
  if (const auto* x = std::get_if<ObjectSet>(&a)) {
    pairs(x->items, std::get<ObjectSet>(b).items);
  } else if (const auto* x = std::get_if<StateSet>(&a)) {
    pairs(x->states, std::get<StateSet>(b).states);
  } else {
    throw kind_error("Join", a);
  }
  return out;
}

Collection nest(const Collection& a, const std::string& attribute) {
  if (const auto* x = std::get_if<ObjectSet>(&a)) {
    return ObjectSet{nest_items(x->items, attribute, [&](const ObjectItem& p, const ObjectItem& q) {
      return without(p.value, attribute) == without(q.value, attribute);
    })};
  }
  if (const auto* x = std::get_if<StateSet>(&a)) {
    return StateSet{nest_items(x->states, attribute, [&](const State& p, const State& q) {
      return p.domain == q.domain && without(p.value, attribute) == without(q.value, attribute);
    })};
  }
  throw kind_error("Nest", a);
}

Collection unnest(const Collection& a, const std::string& attribute) {
  if (const auto* x = std::get_if<ObjectSet>(&a)) return ObjectSet{unnest_items(x->items, attribute)};
  if (const auto* x = std::get_if<StateSet>(&a)) return StateSet{unnest_items(x->states, attribute)};
  throw kind_error("UnNest", a);
}

// ---------------------------------------------------------------------------
// State access

namespace {

const WarehouseObject& object_of(const ObjectItem& item) {
  if (!item.object) throw Error(ErrorCode::KindMismatch, "object " + item.oid.value + " has no stored states");
  return *item.object;
}

}  // namespace

StateSet current(const ObjectSet& objs, std::optional<Instant> as_of) {
  StateSet out;
  for (const auto& item : objs.items) out.states.push_back(object_of(item).current_state(as_of));
  return out;
}

StateSetSet past(const ObjectSet& objs) {
  StateSetSet out;
  for (const auto& item : objs.items) out.sets.push_back(StateSet{object_of(item).past});
  return out;
}

StateSetSet archive(const ObjectSet& objs) {
  StateSetSet out;
  for (const auto& item : objs.items) out.sets.push_back(StateSet{object_of(item).archive});
  return out;
}

// ---------------------------------------------------------------------------
// Temporal operators

StateSet state_restrict(const Collection& e, const TemporalDomain& window, TemporalOp op,
                        std::optional<Instant> as_of) {
  std::vector<State> candidates;
  if (const auto* x = std::get_if<ObjectSet>(&e)) {
    for (const auto& item : x->items) {
      const WarehouseObject& o = object_of(item);
      candidates.insert(candidates.end(), o.archive.begin(), o.archive.end());
      candidates.insert(candidates.end(), o.past.begin(), o.past.end());
      candidates.push_back(o.current_state(as_of));
    }
  } else if (const auto* x = std::get_if<StateSet>(&e)) {
    candidates = x->states;
  } else if (const auto* x = std::get_if<StateSetSet>(&e)) {
    for (const auto& s : x->sets) candidates.insert(candidates.end(), s.states.begin(), s.states.end());
  } else if (const auto* x = std::get_if<Series>(&e)) {
    candidates = x->states;
  } else {
    throw kind_error("State", e);
  }
  StateSet out;
  for (auto& s : candidates) {
    if (s.domain.empty()) continue;
    if (s.domain.unit() != window.unit()) {
      throw Error(ErrorCode::MixedUnits, "state domain " + s.domain.to_string() + " against window " + window.to_string());
    }
    if (op.test(s.domain, window)) out.states.push_back(std::move(s));
  }
  return out;
}

namespace {

std::vector<State> group_by_value(std::vector<State> produced) {
  std::vector<State> out;
  for (auto& s : produced) {
    auto it = std::find_if(out.begin(), out.end(), [&](const State& o) { return o.value == s.value; });
    if (it == out.end()) {
      out.push_back(std::move(s));
    } else {
      it->domain = domain_union(it->domain, s.domain);
    }
  }
  std::sort(out.begin(), out.end(), [](const State& a, const State& b) {
    if (a.domain.first() != b.domain.first()) return a.domain.first() < b.domain.first();
    return total_less(a.value, b.value);
  });
  return out;
}

StateSet temporal_join(const StateSet& e1, const std::string& v1, const StateSet& e2, const std::string& v2,
                       const Expr* predicate, bool by_union) {
  std::vector<State> produced;
  for (const auto& a : e1.states) {
    for (const auto& b : e2.states) {
      TemporalDomain common = domain_intersect(a.domain, b.domain);
      if (common.empty()) continue;
      if (predicate && !evaluate_predicate(*predicate, bind_two(v1, a, v2, b))) continue;
      State s;
      s.role = Role::past;
      s.value = prefixed(a.value, b.value);
      s.domain = by_union ? domain_union(a.domain, b.domain) : std::move(common);
      produced.push_back(std::move(s));
    }
  }
  return StateSet{group_by_value(std::move(produced))};
}

Unit set_unit(const StateSet& e) {
  std::optional<Unit> u;
  for (const auto& s : e.states) {
    if (s.domain.empty()) continue;
    if (u && *u != *s.domain.unit()) throw Error(ErrorCode::MixedUnits, "states of different units");
    u = s.domain.unit();
  }
  if (!u) throw Error(ErrorCode::EmptyDomain, "no state has a domain");
  return *u;
}

}  // namespace

StateSet ijoin(const StateSet& e1, const std::string& v1, const StateSet& e2, const std::string& v2,
               const Expr* predicate) {
  return temporal_join(e1, v1, e2, v2, predicate, false);
}

StateSet ujoin(const StateSet& e1, const std::string& v1, const StateSet& e2, const std::string& v2,
               const Expr* predicate) {
  return temporal_join(e1, v1, e2, v2, predicate, true);
}

GroupSet ugroup(const StateSet& e, Unit u) {
  GroupSet out;
  if (e.states.empty()) return out;
  const Unit base = set_unit(e);
  if (!finer_than(base, u)) {
    throw Error(ErrorCode::NotCoarser, std::string(unit_name(u)) + " is not coarser than " + std::string(unit_name(base)));
  }
  std::map<std::int64_t, std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < e.states.size(); ++i) {
    for (const auto& iv : e.states[i].domain.intervals()) {
      const std::int64_t lo = convert_grain(iv.start(), u).first();
      const std::int64_t hi = convert_grain(iv.end(), u).first();
      for (std::int64_t g = lo; g <= hi; ++g) {
        auto& m = members[g];
        if (m.empty() || m.back() != i) m.push_back(i);
      }
    }
  }
  for (const auto& [g, idx] : members) {
    Group grp{Interval::single(Instant(u, g)), {}};
    for (auto i : idx) grp.members.push_back(e.states[i].value);
    out.groups.push_back(std::move(grp));
  }
  return out;
}

GroupSet dgroup(const StateSet& e, Duration d) {
  GroupSet out;
  if (e.states.empty()) return out;
  const Unit base = set_unit(e);
  if (base != d.unit) {
    throw Error(ErrorCode::MixedUnits, "duration in " + std::string(unit_name(d.unit)) + " over states in " +
                                           std::string(unit_name(base)));
  }
  std::int64_t origin = INT64_MAX;
  for (const auto& s : e.states) {
    if (!s.domain.empty()) origin = std::min(origin, s.domain.first().index());
  }
  std::map<std::int64_t, std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < e.states.size(); ++i) {
    for (const auto& iv : e.states[i].domain.intervals()) {
      const std::int64_t lo = floor_div(iv.first() - origin, d.count);
      const std::int64_t hi = floor_div(iv.last() - origin, d.count);
      for (std::int64_t w = lo; w <= hi; ++w) {
        auto& m = members[w];
        if (m.empty() || m.back() != i) m.push_back(i);
      }
    }
  }
  for (const auto& [w, idx] : members) {
    const Instant start(base, origin + w * d.count);
    Group grp{Interval(start, start.shifted(d.count - 1)), {}};
    for (auto i : idx) grp.members.push_back(e.states[i].value);
    out.groups.push_back(std::move(grp));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Series

Series make_serie(const StateSet& e) {
  Series sr;
  for (const auto& s : e.states) {
    for (const auto& iv : s.domain.intervals()) {
      State piece = s;
      piece.domain = TemporalDomain(iv);
      piece.open_end = false;
      sr.states.push_back(std::move(piece));
    }
  }
  if (sr.states.empty()) return sr;
  set_unit(StateSet{sr.states});
  std::stable_sort(sr.states.begin(), sr.states.end(),
                   [](const State& a, const State& b) { return a.domain.first() < b.domain.first(); });
  for (std::size_t i = 1; i < sr.states.size(); ++i) {
    if (sr.states[i - 1].domain.last() >= sr.states[i].domain.first()) {
      throw Error(ErrorCode::OverlappingStates, sr.states[i - 1].domain.to_string() + " and " +
                                                    sr.states[i].domain.to_string() + " share grains");
    }
  }
  return sr;
}

namespace {

void require_elements(const Series& sr, std::string_view op) {
  if (sr.states.empty()) throw Error(ErrorCode::EmptySeries, std::string(op) + " over an empty series");
}

const Value& source_of(const State& s, const AggregateEntry& e) {
  const Value* v = s.value.find(e.source);
  if (!v) throw Error(ErrorCode::UnknownAttribute, "series element has no attribute '" + e.source + "'");
  return *v;
}

// Aggregates the given elements; `grains(i)` is the number of grains element
// i contributes, used by the moderate (grain-weighted) functions.
template <typename Grains>
Record aggregate_elements(const Series& sr, const std::vector<std::size_t>& idx, const AggSpec& spec, Grains grains) {
  Record out;
  for (const auto& e : spec) {
    Accumulator acc(e.fn.kind);
    for (auto i : idx) {
      const Value& v = source_of(sr.states[i], e);
      const std::int64_t times = e.fn.mode == AggMode::moderate ? grains(i) : 1;
      for (std::int64_t k = 0; k < times; ++k) acc.add(v);
    }
    out.set(e.attribute, acc.result());
  }
  return out;
}

std::int64_t overlap(const Interval& iv, std::int64_t lo, std::int64_t hi) {
  return std::max<std::int64_t>(0, std::min(iv.last(), hi) - std::max(iv.first(), lo) + 1);
}

State series_element(Record value, Interval iv) {
  State s;
  s.value = std::move(value);
  s.domain = TemporalDomain(iv);
  s.role = Role::past;
  return s;
}

const Interval& span(const State& s) { return s.domain.intervals().front(); }

}  // namespace

Record agreg(const Series& sr, const AggSpec& spec) {
  require_elements(sr, "Agreg");
  std::vector<std::size_t> all(sr.states.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return aggregate_elements(sr, all, spec, [&](std::size_t i) { return span(sr.states[i]).length(); });
}

Series acum(const Series& sr, const AggSpec& spec) {
  require_elements(sr, "ACum");
  const Instant origin = sr.states.front().domain.first();
  const std::int64_t last = sr.states.back().domain.last().index();
  Series out;
  for (std::int64_t g = origin.index(); g <= last; ++g) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < sr.states.size(); ++i) {
      if (span(sr.states[i]).first() <= g) idx.push_back(i);
    }
    Record v = aggregate_elements(sr, idx, spec,
                                  [&](std::size_t i) { return overlap(span(sr.states[i]), origin.index(), g); });
    out.states.push_back(series_element(std::move(v), Interval(origin, Instant(origin.unit(), g))));
  }
  return out;
}

Series amove(const Series& sr, const AggSpec& spec, Duration d) {
  require_elements(sr, "AMove");
  const Instant origin = sr.states.front().domain.first();
  if (origin.unit() != d.unit) {
    throw Error(ErrorCode::MixedUnits, "duration in " + std::string(unit_name(d.unit)) + " over a series in " +
                                           std::string(unit_name(origin.unit())));
  }
  const std::int64_t last = sr.states.back().domain.last().index();
  Series out;
  for (std::int64_t lo = origin.index(); lo <= last; lo += d.count) {
    const std::int64_t hi = lo + d.count - 1;
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < sr.states.size(); ++i) {
      if (overlap(span(sr.states[i]), lo, hi) > 0) idx.push_back(i);
    }
    if (idx.empty()) continue;
    Record v = aggregate_elements(sr, idx, spec, [&](std::size_t i) { return overlap(span(sr.states[i]), lo, hi); });
    out.states.push_back(series_element(std::move(v), Interval(Instant(origin.unit(), lo), Instant(origin.unit(), hi))));
  }
  return out;
}

Series scale_up(const Series& sr, Unit coarser, const AggSpec& spec) {
  require_elements(sr, "ScaleUp");
  const Unit base = sr.states.front().domain.first().unit();
  if (!finer_than(base, coarser)) {
    throw Error(ErrorCode::NotCoarser, std::string(unit_name(coarser)) + " is not coarser than " +
                                           std::string(unit_name(base)));
  }
  std::map<std::int64_t, std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < sr.states.size(); ++i) {
    const Interval& iv = span(sr.states[i]);
    const std::int64_t lo = convert_grain(iv.start(), coarser).first();
    const std::int64_t hi = convert_grain(iv.end(), coarser).first();
    for (std::int64_t g = lo; g <= hi; ++g) members[g].push_back(i);
  }
  Series out;
  for (const auto& [g, idx] : members) {
    const Interval fine = convert_grain(Instant(coarser, g), base);
    Record v = aggregate_elements(sr, idx, spec,
                                  [&](std::size_t i) { return overlap(span(sr.states[i]), fine.first(), fine.last()); });
    out.states.push_back(series_element(std::move(v), Interval::single(Instant(coarser, g))));
  }
  return out;
}

Series scale_down(const Series& sr, Unit finer, const AggSpec&) {
  require_elements(sr, "ScaleDown");
  const Unit base = sr.states.front().domain.first().unit();
  if (!finer_than(finer, base)) {
    throw Error(ErrorCode::NotFiner, std::string(unit_name(finer)) + " is not finer than " + std::string(unit_name(base)));
  }
  Series out;
  for (const auto& s : sr.states) {
    const Interval& iv = span(s);
    const Interval fine(convert_grain(iv.start(), finer).start(), convert_grain(iv.end(), finer).end());
    if (!out.states.empty()) {
      State& prev = out.states.back();
      if (prev.value == s.value && span(prev).last() + 1 == fine.first()) {
        prev.domain = TemporalDomain(Interval(span(prev).start(), fine.end()));
        continue;
      }
    }
    out.states.push_back(series_element(s.value, fine));
  }
  return out;
}

}  // namespace twq
