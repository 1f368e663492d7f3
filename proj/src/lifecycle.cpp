#include "twq/lifecycle.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "twq/aggregate.hpp"
#include "twq/names.hpp"

namespace twq {

std::string RefreshReport::to_string() const {
  std::ostringstream out;
  out << "refresh " << at.to_string() << "\n"
      << "  created      " << created << "\n"
      << "  updated      " << updated << "\n"
      << "  demoted      " << demoted << "\n"
      << "  deactivated  " << deactivated << "\n"
      << "  archived     " << archived << "\n";
  for (const auto& f : firings) {
    out << "  fired " << f.rule << " on " << f.oid.value << " (" << f.states << " state"
        << (f.states == 1 ? "" : "s") << ")\n";
  }
  for (const auto& e : rule_errors) out << "  rule error: " << e << "\n";
  return out.str();
}

namespace {

bool state_order(const State& a, const State& b) {
  if (a.domain.empty() || b.domain.empty()) return !a.domain.empty() < !b.domain.empty();
  if (a.domain.first() != b.domain.first()) return a.domain.first() < b.domain.first();
  return total_less(a.value, b.value);
}

}  // namespace

std::vector<State> coalesce(std::vector<State> past) {
  std::vector<State> merged;
  for (auto& s : past) {
    auto it = std::find_if(merged.begin(), merged.end(), [&](const State& m) { return m.value == s.value; });
    if (it == merged.end()) {
      merged.push_back(std::move(s));
    } else {
      it->domain = domain_union(it->domain, s.domain);
    }
  }
  for (std::size_t i = 0; i < merged.size(); ++i) {
    for (std::size_t j = i + 1; j < merged.size(); ++j) {
      if (!domain_intersect(merged[i].domain, merged[j].domain).empty()) {
        throw Error(ErrorCode::OverlapDetected, Value(merged[i].value).to_string() + " and " + Value(merged[j].value).to_string() +
                                                    " share grains of " + merged[i].domain.to_string());
      }
    }
  }
  std::sort(merged.begin(), merged.end(), state_order);
  return merged;
}

RefreshReport refresh(Warehouse& w, const SourceSnapshot& s, Instant t) {
  if (w.last_refresh) {
    if (w.last_refresh->unit() != t.unit()) {
      throw Error(ErrorCode::MixedUnits, "refresh at " + t.to_string() + " but the store refreshes by " +
                                             std::string(unit_name(w.last_refresh->unit())));
    }
    if (t <= *w.last_refresh) {
      throw Error(ErrorCode::NonMonotonicTimestamp,
                  t.to_string() + " is not after the last refresh " + w.last_refresh->to_string());
    }
  }
  s.validate();

  Warehouse next = w;
  RefreshReport report;
  report.at = t;

  for (const auto& c : next.schema.classes) {
    std::vector<MappedRow> rows;
    try {
      rows = extract_class(next.schema, c, s);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::TypeMismatch || e.code() == ErrorCode::MissingAttribute ||
          e.code() == ErrorCode::MappingError) {
        throw;
      }
      throw Error(ErrorCode::MappingError, c.name + ": " + e.what());
    }
    std::sort(rows.begin(), rows.end(), [](const MappedRow& a, const MappedRow& b) { return a.key < b.key; });

    std::map<std::vector<std::string>, const MappedRow*> by_key;
    for (const auto& r : rows) by_key.emplace(r.key, &r);

    for (auto& o : next.objects) {
      if (o.class_name != c.name) continue;
      const auto it = by_key.find(o.source_key);
      if (it == by_key.end()) {
        if (o.active) ++report.deactivated;
        o.active = false;
        continue;
      }
      o.active = true;
      const Record& fresh = it->second->value;
      const Record old_temporal = state_structural_projection(c, o.current, Role::past);
      const Record new_temporal = state_structural_projection(c, fresh, Role::past);
      if (!c.temporal_filter.empty() && old_temporal != new_temporal) {
        State demoted;
        demoted.value = old_temporal;
        demoted.domain = TemporalDomain(Interval(o.since, t.prev()));
        demoted.role = Role::past;
        demoted.owner = o.oid;
        o.past.push_back(std::move(demoted));
        o.past = coalesce(std::move(o.past));
        o.current = fresh;
        o.since = t;
        ++report.demoted;
      } else if (o.current != fresh) {
        o.current = fresh;
        ++report.updated;
      }
      by_key.erase(it);
    }

    for (const auto& r : rows) {
      if (!by_key.count(r.key)) continue;
      WarehouseObject o;
      o.oid = Oid{"OID" + std::to_string(next.next_oid++)};
      o.class_name = c.name;
      o.source_key = r.key;
      o.current = r.value;
      o.since = t;
      next.objects.push_back(std::move(o));
      ++report.created;
    }
  }
  next.last_refresh = t;

  for (const auto& env : next.schema.environments) {
    auto fired = apply_rules(next, env, t, &report.rule_errors);
    for (const auto& f : fired) report.archived += f.states;
    report.firings.insert(report.firings.end(), fired.begin(), fired.end());
  }
  next.journal.insert(next.journal.end(), report.firings.begin(), report.firings.end());

  w = std::move(next);
  return report;
}

// ---------------------------------------------------------------------------
// Rules

namespace {

Operand resolve_in_rule(const Path& p, const SelectionQuery& q, const WarehouseObject& o, const State& s) {
  if (same_identifier(p.var, q.state_var)) {
    if (p.names_domain() && p.steps.size() == 1) return s.domain;
    if (p.steps.empty()) throw Error(ErrorCode::PredicateTypeError, "state variable used as a value: " + p.var);
    return follow_steps(Value(s.value), p.steps, 0, p);
  }
  if (same_identifier(p.var, q.object_var)) {
    if (p.steps.empty()) return Value(Ref{o.oid.value});
    return follow_steps(Value(o.current), p.steps, 0, p);
  }
  throw Error(ErrorCode::UnboundVariable, p.var);
}

}  // namespace

std::vector<std::pair<Oid, std::vector<State>>> select_for_rule(const Warehouse& w, const Environment& env,
                                                                const ConfigRule& rule) {
  std::vector<std::pair<Oid, std::vector<State>>> out;
  if (const auto* q = std::get_if<SelectionQuery>(&rule.condition)) {
    const WarehouseClass* c = w.schema.find_class(q->class_name);
    if (!c) throw Error(ErrorCode::UnknownClass, q->class_name);
    if (fold_identifier(q->accessor) != "paststates") {
      throw Error(ErrorCode::SelectionNotPast, "rule " + rule.name + " selects " + q->accessor + "()");
    }
    for (const auto* o : w.extension(c->name)) {
      std::vector<State> picked;
      for (const auto& s : o->past) {
        const bool keep = !q->where || evaluate_predicate(*q->where, [&](const Path& p) {
          return resolve_in_rule(p, *q, *o, s);
        });
        if (keep) picked.push_back(s);
      }
      if (!picked.empty()) out.emplace_back(o->oid, std::move(picked));
    }
    return out;
  }
  const auto& cond = std::get<ExprPtr>(rule.condition);
  const bool fire = !cond || evaluate_predicate(*cond, [](const Path& p) -> Operand {
    throw Error(ErrorCode::UnboundVariable, p.var);
  });
  if (!fire) return out;
  for (const auto& name : env.classes) {
    for (const auto* o : w.extension(name)) {
      if (!o->past.empty()) out.emplace_back(o->oid, o->past);
    }
  }
  return out;
}

std::vector<Firing> apply_rules(Warehouse& w, const Environment& env, Instant t, std::vector<std::string>* errors) {
  std::vector<Firing> firings;
  for (const auto& rule : env.rules) {
    if (rule.event != "refresh") continue;
    const std::vector<WarehouseObject> saved = w.objects;
    std::vector<Firing> fired;
    try {
      if (rule.action != "archive") throw Error(ErrorCode::UnsupportedAction, rule.action);
      for (auto& [oid, states] : select_for_rule(w, env, rule)) {
        WarehouseObject* o = w.find(oid);
        const WarehouseClass* c = w.schema.find_class(o->class_name);
        *o = archive_states(*c, *o, states);
        fired.push_back(Firing{rule.name, oid, states.size(), t});
      }
    } catch (const Error& e) {
      w.objects = saved;
      if (errors) {
        errors->push_back(std::string(error_code_name(ErrorCode::RuleEvaluationError)) + ": rule " + rule.name +
                          ": " + e.what());
      }
      continue;
    }
    firings.insert(firings.end(), fired.begin(), fired.end());
  }
  return firings;
}

// ---------------------------------------------------------------------------
// Archival

namespace {

struct Block {
  std::vector<Interval> grains;
  std::vector<Accumulator> accs;
};

std::int64_t block_of(Instant grain, const Duration& d) {
  Instant coarse = grain;
  if (grain.unit() != d.unit) {
    if (finer_than(d.unit, grain.unit())) {
      throw Error(ErrorCode::NotCoarser, "archive grain " + std::string(unit_name(d.unit)) + " is finer than " +
                                             std::string(unit_name(grain.unit())));
    }
    coarse = convert_grain(grain, d.unit).start();
  }
  return floor_div(coarse.index(), d.count);
}

const Value& archived_source(const WarehouseClass& c, const AggregateEntry& e, const State& s) {
  const Value* v = s.value.find(e.source);
  if (!v) v = s.value.find(e.attribute);
  if (!v) throw Error(ErrorCode::MissingAttribute, c.name + ": past state lacks " + e.source);
  return *v;
}

State make_archive(const WarehouseClass& c, const Oid& owner, TemporalDomain domain,
                   const std::vector<Accumulator>& accs) {
  State a;
  a.role = Role::archive;
  a.owner = owner;
  a.domain = std::move(domain);
  for (std::size_t i = 0; i < accs.size(); ++i) {
    a.value.set(c.archive_filter.entries[i].attribute, accs[i].result());
    a.support.set(c.archive_filter.entries[i].attribute, accs[i].support());
  }
  return a;
}

std::vector<Accumulator> accumulators_of(const WarehouseClass& c, const State& archived) {
  std::vector<Accumulator> accs;
  for (const auto& e : c.archive_filter.entries) {
    const Value* sup = archived.support.find(e.attribute);
    if (!sup) {
      throw Error(ErrorCode::BlockCollision, "archive state " + archived.domain.to_string() +
                                                 " has no aggregation support to merge into");
    }
    accs.push_back(Accumulator::from_support(e.fn.kind, *sup));
  }
  return accs;
}

void merge_into(const WarehouseClass& c, std::vector<State>& archive, std::size_t index, State fresh) {
  State& old = archive[index];
  if (old.domain.intersects(fresh.domain)) {
    throw Error(ErrorCode::OverlapDetected, "archive grains " + fresh.domain.to_string() + " archived twice");
  }
  std::vector<Accumulator> accs = accumulators_of(c, old);
  const std::vector<Accumulator> more = accumulators_of(c, fresh);
  for (std::size_t i = 0; i < accs.size(); ++i) accs[i].merge(more[i]);
  old = make_archive(c, old.owner, domain_union(old.domain, fresh.domain), accs);
}

}  // namespace

WarehouseObject archive_states(const WarehouseClass& c, const WarehouseObject& obj,
                               const std::vector<State>& selected) {
  if (c.archive_filter.empty()) throw Error(ErrorCode::NoArchiveFilter, c.name);
  WarehouseObject out = obj;
  if (selected.empty()) return out;

  for (const auto& s : selected) {
    auto it = std::find_if(out.past.begin(), out.past.end(), [&](const State& p) { return same_state_value(p, s); });
    if (it == out.past.end()) {
      throw Error(ErrorCode::SelectionNotPast, obj.oid.value + ": " + s.domain.to_string() + " is not a past state");
    }
    out.past.erase(it);
  }

  const auto& entries = c.archive_filter.entries;
  auto fresh_accs = [&] {
    std::vector<Accumulator> accs;
    for (const auto& e : entries) accs.emplace_back(e.fn.kind);
    return accs;
  };

  std::vector<State> produced;
  if (!c.archive_filter.moderate()) {
    std::vector<Accumulator> accs = fresh_accs();
    TemporalDomain domain;
    for (const auto& s : selected) {
      for (std::size_t i = 0; i < entries.size(); ++i) accs[i].add(archived_source(c, entries[i], s));
      domain = domain_union(domain, s.domain);
    }
    State a = make_archive(c, obj.oid, std::move(domain), accs);
    if (out.archive.empty()) {
      out.archive.push_back(std::move(a));
    } else {
      merge_into(c, out.archive, 0, std::move(a));
    }
    return out;
  }

  const Duration grain = *c.archive_filter.grain;
  std::map<std::int64_t, Block> blocks;
  for (const auto& s : selected) {
    for (const auto& iv : s.domain.intervals()) {
      for (std::int64_t g = iv.first(); g <= iv.last(); ++g) {
        const Instant at(iv.unit(), g);
        Block& b = blocks[block_of(at, grain)];
        if (b.accs.empty()) b.accs = fresh_accs();
        b.grains.push_back(Interval::single(at));
        for (std::size_t i = 0; i < entries.size(); ++i) b.accs[i].add(archived_source(c, entries[i], s));
      }
    }
  }
  for (auto& [id, b] : blocks) {
    State a = make_archive(c, obj.oid, TemporalDomain::normalize(b.grains), b.accs);
    auto existing = std::find_if(out.archive.begin(), out.archive.end(), [&](const State& old) {
      return !old.domain.empty() && block_of(old.domain.first(), grain) == id;
    });
    if (existing == out.archive.end()) {
      out.archive.push_back(std::move(a));
    } else {
      merge_into(c, out.archive, static_cast<std::size_t>(existing - out.archive.begin()), std::move(a));
    }
  }
  std::sort(out.archive.begin(), out.archive.end(), state_order);
  return out;
}

}  // namespace twq
