#include "twq/model.hpp"

#include <algorithm>
#include <set>

#include "twq/extraction.hpp"
#include "twq/names.hpp"

namespace twq {

std::string_view role_name(Role r) {
  switch (r) {
    case Role::current: return "current";
    case Role::past: return "past";
    case Role::archive: return "archive";
  }
  return "?";
}

std::string_view agg_kind_name(AggKind k) {
  switch (k) {
    case AggKind::avg: return "avg";
    case AggKind::sum: return "sum";
    case AggKind::count: return "count";
    case AggKind::max: return "max";
    case AggKind::min: return "min";
  }
  return "?";
}

std::optional<AggregationFn> parse_aggregation(std::string_view name) {
  std::string n = fold_identifier(name);
  AggMode mode = AggMode::strong;
  if (n.size() > 2 && n.rfind("t_", 0) == 0) {
    mode = AggMode::moderate;
    n = n.substr(2);
  } else if (n.size() > 2 && n.compare(n.size() - 2, 2, "_t") == 0) {
    mode = AggMode::moderate;
    n.resize(n.size() - 2);
  }
  for (AggKind k : {AggKind::avg, AggKind::sum, AggKind::count, AggKind::max, AggKind::min}) {
    if (n == agg_kind_name(k)) return AggregationFn{k, mode};
  }
  return std::nullopt;
}

std::string aggregation_name(AggregationFn fn) {
  return (fn.mode == AggMode::moderate ? "t_" : "") + std::string(agg_kind_name(fn.kind));
}

bool ArchiveFilter::moderate() const {
  return std::any_of(entries.begin(), entries.end(),
                     [](const AggregateEntry& e) { return e.fn.mode == AggMode::moderate; });
}

std::string TypeSpec::to_string() const {
  switch (kind) {
    case Kind::string: return "String";
    case Kind::integer: return "Integer";
    case Kind::boolean: return "Boolean";
    case Kind::decimal: return "Decimal";
    case Kind::date: return "Date";
    case Kind::list: return "List<" + element.front().to_string() + ">";
    case Kind::structure: {
      std::string s = "Struct " + struct_name + " {";
      for (std::size_t i = 0; i < fields.size(); ++i) {
        s += (i ? ", " : "") + fields[i].second.to_string() + " " + fields[i].first;
      }
      return s + "}";
    }
  }
  return "?";
}

bool value_conforms(const Value& v, const TypeSpec& t) {
  if (v.is_null()) return true;
  switch (t.kind) {
    case TypeSpec::Kind::string: return v.kind() == ValueKind::string;
    case TypeSpec::Kind::integer: return v.kind() == ValueKind::integer;
    case TypeSpec::Kind::boolean: return v.kind() == ValueKind::boolean;
    case TypeSpec::Kind::decimal: return v.is_numeric();
    case TypeSpec::Kind::date:
      if (v.kind() != ValueKind::string) return false;
      try {
        Instant::parse(v.as_string());
        return true;
      } catch (const Error&) {
        return false;
      }
    case TypeSpec::Kind::list:
      if (v.kind() != ValueKind::list) return false;
      return std::all_of(v.as_list().begin(), v.as_list().end(),
                         [&](const Value& e) { return value_conforms(e, t.element.front()); });
    case TypeSpec::Kind::structure: {
      if (v.kind() != ValueKind::record) return false;
      const Record& r = v.as_record();
      if (r.size() != t.fields.size()) return false;
      for (const auto& [name, type] : t.fields) {
        const Value* f = r.find(name);
        if (!f || !value_conforms(*f, type)) return false;
      }
      return true;
    }
  }
  return false;
}

const AttributeDecl* WarehouseClass::find_attribute(std::string_view n) const {
  for (const auto& a : attributes) {
    if (a.name == n) return &a;
  }
  for (const auto& a : attributes) {
    if (same_identifier(a.name, n)) return &a;
  }
  return nullptr;
}

bool operator==(const WarehouseClass& a, const WarehouseClass& b) {
  return a.name == b.name && a.super_names == b.super_names && a.attributes == b.attributes &&
         a.operations == b.operations && same_mapping(a.mapping, b.mapping) &&
         a.temporal_filter == b.temporal_filter && a.archive_filter == b.archive_filter;
}

bool operator==(const SelectionQuery& a, const SelectionQuery& b) {
  return a.result_var == b.result_var && a.object_var == b.object_var && a.class_name == b.class_name &&
         a.state_var == b.state_var && a.accessor == b.accessor && same_expr(a.where, b.where);
}

bool operator==(const ConfigRule& a, const ConfigRule& b) {
  if (a.name != b.name || a.environment != b.environment || a.event != b.event ||
      a.action_target != b.action_target || a.action != b.action ||
      a.condition.index() != b.condition.index()) {
    return false;
  }
  if (const auto* e = std::get_if<ExprPtr>(&a.condition)) return same_expr(*e, std::get<ExprPtr>(b.condition));
  return std::get<SelectionQuery>(a.condition) == std::get<SelectionQuery>(b.condition);
}

namespace {

template <typename T>
const T* find_named(const std::vector<T>& items, std::string_view name) {
  for (const auto& i : items) {
    if (i.name == name) return &i;
  }
  for (const auto& i : items) {
    if (same_identifier(i.name, name)) return &i;
  }
  return nullptr;
}

}  // namespace

const WarehouseClass* WarehouseSchema::find_class(std::string_view n) const { return find_named(classes, n); }
const SourceClass* WarehouseSchema::find_source(std::string_view n) const { return find_named(sources, n); }
const Environment* WarehouseSchema::find_environment(std::string_view n) const {
  return find_named(environments, n);
}

// ---------------------------------------------------------------------------
// Validation

namespace {

struct Collector {
  Diagnostics out;
  void error(std::string location, std::string message) {
    out.push_back({Diagnostic::Severity::error, std::move(message), std::move(location)});
  }
  void note(std::string location, std::string message) {
    out.push_back({Diagnostic::Severity::note, std::move(message), std::move(location)});
  }
};

bool aggregatable(AggKind k, const TypeSpec& t) {
  if (k == AggKind::count) return true;
  switch (t.kind) {
    case TypeSpec::Kind::integer:
    case TypeSpec::Kind::decimal: return true;
    case TypeSpec::Kind::string:
    case TypeSpec::Kind::date: return k == AggKind::min || k == AggKind::max;
    case TypeSpec::Kind::structure:
      return std::all_of(t.fields.begin(), t.fields.end(),
                         [&](const auto& f) { return aggregatable(k, f.second); });
    default: return false;
  }
}

void validate_class(const WarehouseSchema& s, const WarehouseClass& c, Collector& diag) {
  const std::string where = "class " + c.name;

  std::set<std::string> attr_names;
  for (const auto& a : c.attributes) {
    if (!attr_names.insert(fold_identifier(a.name)).second) {
      diag.error(where, "duplicate attribute '" + a.name + "'");
    }
  }
  for (const auto& super : c.super_names) {
    diag.note(where, "superclass '" + super + "' is recorded but inheritance is not interpreted");
  }

  std::set<std::string> temporal;
  for (const auto& e : c.temporal_filter.entries) {
    const std::string loc = where + " / temporal filter / " + e.property;
    if (!temporal.insert(fold_identifier(e.property)).second) {
      diag.error(loc, "duplicate temporal property");
    }
    if (e.function_backed) {
      diag.error(loc, "operation-backed temporal properties are not supported");
    } else if (!c.find_attribute(e.source)) {
      diag.error(loc, "temporal property source '" + e.source + "' is not a declared attribute");
    }
  }

  const ArchiveFilter& af = c.archive_filter;
  bool any_strong = false;
  bool any_moderate = false;
  std::set<std::string> archived;
  for (const auto& e : af.entries) {
    const std::string loc = where + " / archive filter / " + e.attribute;
    (e.fn.mode == AggMode::moderate ? any_moderate : any_strong) = true;
    if (!archived.insert(fold_identifier(e.attribute)).second) diag.error(loc, "duplicate archived attribute");
    if (!temporal.count(fold_identifier(e.attribute))) {
      diag.error(loc, "archived attribute not temporal");
      continue;
    }
    if (!temporal.count(fold_identifier(e.source))) {
      diag.error(loc, "aggregated source '" + e.source + "' is not a temporal property");
      continue;
    }
    std::string source_attr = e.source;
    for (const auto& t : c.temporal_filter.entries) {
      if (same_identifier(t.property, e.source)) source_attr = t.source;
    }
    if (const auto* decl = c.find_attribute(source_attr); decl && !aggregatable(e.fn.kind, decl->type)) {
      diag.error(loc, std::string(agg_kind_name(e.fn.kind)) + " cannot aggregate " + decl->type.to_string());
    }
  }
  if (any_strong && any_moderate) diag.error(where + " / archive filter", "mixes strong and moderate aggregation");
  if (any_moderate && !af.grain) diag.error(where + " / archive filter", "moderate aggregation requires a grain");
  if (!any_moderate && af.grain) diag.error(where + " / archive filter", "grain given without moderate aggregation");

  if (!s.sources.empty()) {
    if (c.mapping) {
      for (auto d : validate_mapping(*c.mapping, s.sources)) {
        d.location = where + " / mapping" + (d.location.empty() ? "" : " / " + d.location);
        diag.out.push_back(std::move(d));
      }
      if (const auto* project = std::get_if<MappingExpr::Project>(&c.mapping->node)) {
        for (const auto& item : project->items) {
          if (!c.find_attribute(item.target)) {
            diag.error(where + " / mapping", "projection target '" + item.target + "' is not a class attribute");
          }
        }
        for (const auto& a : c.attributes) {
          const bool produced = std::any_of(project->items.begin(), project->items.end(),
                                            [&](const Projection& p) { return same_identifier(p.target, a.name); });
          if (!produced) diag.error(where + " / mapping", "attribute '" + a.name + "' is not produced");
        }
      }
    } else if (!s.find_source(c.name)) {
      diag.error(where, "no mapping and no source class of the same name");
    }
  }
}

void validate_rule(const WarehouseSchema& s, const Environment& env, const ConfigRule& r, Collector& diag) {
  const std::string where = "rule " + r.name;
  if (r.event != "refresh") diag.error(where, "unsupported event '" + r.event + "'");
  if (r.action != "archive") diag.error(where, "unsupported action '" + r.action + "'");

  std::vector<const WarehouseClass*> targets;
  if (const auto* q = std::get_if<SelectionQuery>(&r.condition)) {
    const WarehouseClass* c = s.find_class(q->class_name);
    const bool in_env = c && std::any_of(env.classes.begin(), env.classes.end(),
                                         [&](const std::string& n) { return same_identifier(n, c->name); });
    if (!c) {
      diag.error(where, "unknown class '" + q->class_name + "'");
    } else if (!in_env) {
      diag.error(where, "class '" + q->class_name + "' is not in environment " + env.name);
    } else {
      targets.push_back(c);
    }
    if (fold_identifier(q->accessor) != "paststates") {
      diag.error(where, "selection must range over PastStates(), not " + q->accessor + "()");
    }
    if (q->result_var != q->state_var) diag.error(where, "selected variable must be the state variable");
    if (r.action_target != q->result_var) {
      diag.error(where, "action applies to '" + r.action_target + "' but the query selects '" + q->result_var + "'");
    }
    if (q->where) {
      for_each_path(*q->where, [&](const Path& p) {
        if (p.var != q->object_var && p.var != q->state_var) {
          diag.error(where, "unbound variable '" + p.var + "'");
        }
      });
    }
  } else {
    for (const auto& name : env.classes) {
      if (const auto* c = s.find_class(name)) targets.push_back(c);
    }
  }
  for (const auto* c : targets) {
    if (c->archive_filter.empty()) diag.error(where, "archives class " + c->name + " which has no archive filter");
  }
}

}  // namespace

Diagnostics validate_schema(const WarehouseSchema& s) {
  Collector diag;

  std::set<std::string> names;
  for (const auto& c : s.classes) {
    if (!names.insert(fold_identifier(c.name)).second) diag.error("class " + c.name, "duplicate class name");
  }
  std::set<std::string> source_names;
  for (const auto& c : s.sources) {
    if (!source_names.insert(fold_identifier(c.name)).second) {
      diag.error("source " + c.name, "duplicate source class name");
    }
  }
  for (const auto& c : s.classes) validate_class(s, c, diag);

  std::set<std::string> env_names;
  std::set<std::string> claimed;
  for (const auto& env : s.environments) {
    const std::string where = "environment " + env.name;
    if (!env_names.insert(fold_identifier(env.name)).second) diag.error(where, "duplicate environment name");
    if (env.classes.empty()) diag.error(where, "environment has no classes");
    for (const auto& name : env.classes) {
      const WarehouseClass* c = s.find_class(name);
      if (!c) {
        diag.error(where, "unknown class '" + name + "'");
      } else if (!claimed.insert(fold_identifier(c->name)).second) {
        diag.error(where, "class '" + name + "' already belongs to another environment");
      }
    }
    for (const auto& r : env.rules) validate_rule(s, env, r, diag);
  }
  return diag.out;
}

Record state_structural_projection(const WarehouseClass& c, const Record& v, Role role) {
  Record out;
  if (role == Role::archive) {
    for (const auto& e : c.archive_filter.entries) {
      const Value* f = v.find(e.source);
      if (!f) f = v.find(e.attribute);
      if (!f) throw Error(ErrorCode::MissingAttribute, c.name + ": no value for archived attribute " + e.attribute);
      out.set(e.attribute, *f);
    }
    return out;
  }
  if (role == Role::current) return v;
  for (const auto& e : c.temporal_filter.entries) {
    if (e.function_backed) {
      throw Error(ErrorCode::MissingAttribute, c.name + ": operation-backed property " + e.property);
    }
    const Value* f = v.find(e.source);
    if (!f) f = v.find(e.property);
    if (!f) throw Error(ErrorCode::MissingAttribute, c.name + ": no value for temporal property " + e.property);
    out.set(e.property, *f);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Warehouse

State WarehouseObject::current_state(std::optional<Instant> as_of) const {
  State s;
  s.value = current;
  s.role = Role::current;
  s.owner = oid;
  s.open_end = true;
  Instant end = since;
  if (as_of && as_of->unit() == since.unit() && as_of->index() > since.index()) end = *as_of;
  s.domain = TemporalDomain(Interval(since, end));
  return s;
}

const WarehouseObject* Warehouse::find(const Oid& oid) const {
  for (const auto& o : objects) {
    if (o.oid == oid) return &o;
  }
  return nullptr;
}

WarehouseObject* Warehouse::find(const Oid& oid) {
  return const_cast<WarehouseObject*>(static_cast<const Warehouse*>(this)->find(oid));
}

const WarehouseObject* Warehouse::find_by_key(std::string_view class_name,
                                              const std::vector<std::string>& key) const {
  for (const auto& o : objects) {
    if (o.class_name == class_name && o.source_key == key) return &o;
  }
  return nullptr;
}

std::vector<const WarehouseObject*> Warehouse::extension(std::string_view class_name) const {
  std::vector<const WarehouseObject*> out;
  const WarehouseClass* c = schema.find_class(class_name);
  if (!c) return out;
  for (const auto& o : objects) {
    if (o.class_name == c->name) out.push_back(&o);
  }
  return out;
}

}  // namespace twq
