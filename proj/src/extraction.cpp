#include "twq/extraction.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <memory>
#include <set>
#include <sstream>

#include "twq/json_io.hpp"
#include "twq/names.hpp"

namespace twq {

void SourceSnapshot::validate() const {
  std::set<std::pair<std::string, std::string>> seen;
  std::set<std::string> keys;
  for (const auto& o : objects) {
    if (!seen.emplace(fold_identifier(o.source_class), o.key).second) {
      throw Error(ErrorCode::DuplicateSourceObject, o.source_class + " " + o.key + " appears twice");
    }
    keys.insert(o.key);
  }
  for (const auto& o : objects) {
    for (const auto& [name, target] : o.relationships.fields()) {
      auto check = [&](const Value& v) {
        if (v.kind() != ValueKind::ref) {
          throw Error(ErrorCode::FormatError, o.key + "." + name + ": relationship values must be keys");
        }
        if (!keys.count(v.as_ref().key)) {
          throw Error(ErrorCode::UnresolvedReference,
                      o.source_class + " " + o.key + "." + name + " -> " + v.as_ref().key);
        }
      };
      if (target.kind() == ValueKind::list) {
        for (const auto& v : target.as_list()) check(v);
      } else if (!target.is_null()) {
        check(target);
      }
    }
  }
}

namespace {

std::string key_text(const Json& j, std::size_t line) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer() || j.is_number_unsigned()) return j.dump();
  throw Error(ErrorCode::FormatError, "line " + std::to_string(line) + ": key must be a string or an integer");
}

}  // namespace

SourceSnapshot parse_snapshot(std::string_view jsonl) {
  SourceSnapshot snap;
  std::istringstream in{std::string(jsonl)};
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::FormatError, "line " + std::to_string(number) + ": " + e.what());
    }
    if (j.is_object() && j.contains("timestamp") && !j.contains("class")) {
      if (!j["timestamp"].is_string()) throw Error(ErrorCode::FormatError, "line " + std::to_string(number) + ": bad timestamp");
      snap.timestamp = Instant::parse(j["timestamp"].get<std::string>());
      continue;
    }
    if (!j.is_object() || !j.contains("class") || !j["class"].is_string() || !j.contains("key")) {
      throw Error(ErrorCode::FormatError, "line " + std::to_string(number) + ": needs \"class\" and \"key\"");
    }
    SourceObject o;
    o.source_class = j["class"].get<std::string>();
    o.key = key_text(j["key"], number);
    if (j.contains("attributes")) o.attributes = record_from_json(j["attributes"]);
    if (j.contains("relationships")) {
      const Json& rel = j["relationships"];
      if (!rel.is_object()) throw Error(ErrorCode::FormatError, "line " + std::to_string(number) + ": bad relationships");
      for (const auto& [name, target] : rel.items()) {
        if (target.is_array()) {
          List refs;
          for (const auto& t : target) refs.emplace_back(Ref{key_text(t, number)});
          o.relationships.set(name, Value(std::move(refs)));
        } else if (target.is_null()) {
          o.relationships.set(name, Value());
        } else {
          o.relationships.set(name, Value(Ref{key_text(target, number)}));
        }
      }
    }
    snap.objects.push_back(std::move(o));
  }
  return snap;
}

SourceSnapshot load_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read snapshot " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_snapshot(buf.str());
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

using ObjectPtr = std::shared_ptr<const SourceObject>;

struct Binding {
  std::string name;
  ObjectPtr object;
};

struct Row {
  std::vector<std::string> key;
  std::vector<Binding> bound;
  std::vector<std::string> tuples;
};

class MappingEvaluator {
 public:
  MappingEvaluator(const SourceSnapshot& s, const std::vector<SourceClass>* catalog)
      : snapshot_(s), catalog_(catalog) {
    for (const auto& o : s.objects) objects_.push_back(std::make_shared<SourceObject>(o));
  }

  std::vector<Row> eval(const MappingExpr& m) {
    std::vector<Row> rows = std::visit([&](const auto& n) { return eval_node(m, n); }, m.node);
    if (!m.alias.empty() && !std::holds_alternative<MappingExpr::Source>(m.node)) {
      for (auto& r : rows) r.tuples.push_back(m.alias);
    }
    return rows;
  }

  static Record row_value(const Row& r) {
    if (r.bound.size() == 1) return r.bound.front().object->attributes;
    Record out;
    for (const auto& b : r.bound) {
      for (const auto& [name, value] : b.object->attributes.fields()) {
        if (!out.has(name)) out.set(name, value);
      }
    }
    return out;
  }

 private:
  std::vector<Row> eval_node(const MappingExpr& m, const MappingExpr::Source& n) {
    if (catalog_) {
      const bool known = std::any_of(catalog_->begin(), catalog_->end(),
                                     [&](const SourceClass& c) { return same_identifier(c.name, n.class_name); });
      if (!known) throw Error(ErrorCode::UnknownSourceClass, n.class_name);
    }
    std::vector<Row> rows;
    const std::string name = m.alias.empty() ? n.class_name : m.alias;
    for (const auto& o : objects_) {
      if (same_identifier(o->source_class, n.class_name)) rows.push_back(Row{{o->key}, {{name, o}}, {}});
    }
    return rows;
  }

  std::vector<Row> eval_node(const MappingExpr&, const MappingExpr::Select& n) {
    std::vector<Row> out;
    for (auto& r : eval(*n.input)) {
      if (!n.predicate || evaluate_predicate(*n.predicate, resolver(r))) out.push_back(std::move(r));
    }
    return out;
  }

  std::vector<Row> eval_node(const MappingExpr&, const MappingExpr::Join& n) {
    const std::vector<Row> left = eval(*n.left);
    const std::vector<Row> right = eval(*n.right);
    std::vector<Row> out;
    for (const auto& l : left) {
      for (const auto& r : right) {
        Row row = l;
        row.key.insert(row.key.end(), r.key.begin(), r.key.end());
        row.bound.insert(row.bound.end(), r.bound.begin(), r.bound.end());
        row.tuples.insert(row.tuples.end(), r.tuples.begin(), r.tuples.end());
        if (!n.predicate || evaluate_predicate(*n.predicate, resolver(row))) out.push_back(std::move(row));
      }
    }
    return out;
  }

  std::vector<Row> eval_node(const MappingExpr& m, const MappingExpr::Project& n) {
    std::vector<Row> out;
    for (auto& r : eval(*n.input)) {
      const Resolver resolve = resolver(r);
      auto obj = std::make_shared<SourceObject>();
      obj->source_class = "PROJECT";
      obj->key = r.key.empty() ? std::string() : r.key.front();
      for (const auto& item : n.items) {
        const Operand o = resolve(item.path);
        const auto* v = std::get_if<Value>(&o);
        if (!v) throw Error(ErrorCode::PredicateTypeError, "projection of a domain: " + item.path.to_string());
        obj->attributes.set(item.target, *v);
      }
      out.push_back(Row{r.key, {{m.alias, obj}}, {}});
    }
    return out;
  }

  std::vector<Row> eval_node(const MappingExpr&, const MappingExpr::Combine& n) {
    std::vector<Row> left = eval(*n.left);
    const std::vector<Row> right = eval(*n.right);
    std::set<std::vector<std::string>> right_keys;
    for (const auto& r : right) right_keys.insert(r.key);
    std::vector<Row> out;
    switch (n.op) {
      case MappingSetOp::union_: {
        std::set<std::vector<std::string>> left_keys;
        for (auto& l : left) {
          left_keys.insert(l.key);
          out.push_back(std::move(l));
        }
        for (const auto& r : right) {
          if (left_keys.insert(r.key).second) out.push_back(r);
        }
        break;
      }
      case MappingSetOp::intersect:
        for (auto& l : left) {
          if (right_keys.count(l.key)) out.push_back(std::move(l));
        }
        break;
      case MappingSetOp::difference:
        for (auto& l : left) {
          if (!right_keys.count(l.key)) out.push_back(std::move(l));
        }
        break;
    }
    return out;
  }

  static const Binding* find_binding(const Row& r, std::string_view name) {
    for (const auto& b : r.bound) {
      if (b.name == name) return &b;
    }
    for (const auto& b : r.bound) {
      if (same_identifier(b.name, name)) return &b;
    }
    return nullptr;
  }

  static Value object_path(const SourceObject& o, const Path& p, std::size_t from) {
    if (from >= p.steps.size()) return Value(Ref{o.key});
    const auto* name = std::get_if<std::string>(&p.steps[from]);
    if (!name) throw Error(ErrorCode::PredicateTypeError, "index applied to an object in " + p.to_string());
    if (const Value* v = o.attributes.find(*name)) return follow_steps(*v, p.steps, from + 1, p);
    if (const Value* v = o.relationships.find(*name)) {
      if (from + 1 < p.steps.size()) {
        throw Error(ErrorCode::PredicateTypeError, "paths through relationships are limited to one hop: " + p.to_string());
      }
      return *v;
    }
    throw Error(ErrorCode::UnknownAttribute, "no attribute '" + *name + "' in " + o.source_class);
  }

  Resolver resolver(const Row& r) const {
    return [&r](const Path& p) -> Operand {
      if (const Binding* b = find_binding(r, p.var)) return object_path(*b->object, p, 0);
      const bool tuple = std::any_of(r.tuples.begin(), r.tuples.end(),
                                     [&](const std::string& t) { return same_identifier(t, p.var); });
      if (!tuple) throw Error(ErrorCode::UnboundVariable, p.var);
      if (p.steps.empty()) throw Error(ErrorCode::PredicateTypeError, "tuple variable used as a value: " + p.var);
      const auto* first = std::get_if<std::string>(&p.steps.front());
      if (!first) throw Error(ErrorCode::PredicateTypeError, "index applied to a tuple in " + p.to_string());
      if (const Binding* b = find_binding(r, *first)) return object_path(*b->object, p, 1);
      for (const auto& b : r.bound) {
        if (b.object->attributes.has(*first) || b.object->relationships.has(*first)) {
          return object_path(*b.object, p, 0);
        }
      }
      throw Error(ErrorCode::UnknownAttribute, "no attribute '" + *first + "' in " + p.var);
    };
  }

  const SourceSnapshot& snapshot_;
  const std::vector<SourceClass>* catalog_;
  std::vector<ObjectPtr> objects_;
};

}  // namespace

std::vector<MappedRow> evaluate_mapping(const MappingExpr& m, const SourceSnapshot& s,
                                        const std::vector<SourceClass>* catalog) {
  MappingEvaluator ev(s, catalog);
  std::vector<MappedRow> out;
  for (const auto& r : ev.eval(m)) out.push_back(MappedRow{r.key, MappingEvaluator::row_value(r)});
  return out;
}

// ---------------------------------------------------------------------------
// Validation

namespace {

enum class Shape { attribute, relationship, object, invalid };

struct Scope {
  struct Var {
    std::string name;
    const SourceClass* cls = nullptr;   // source-bound variable
    std::vector<std::string> projected;  // projection output
  };
  std::vector<Var> vars;
  std::vector<std::string> tuples;
};

class MappingValidator {
 public:
  explicit MappingValidator(const std::vector<SourceClass>& catalog) : catalog_(catalog) {}

  Scope walk(const MappingExpr& m) {
    Scope s = std::visit([&](const auto& n) { return walk_node(m, n); }, m.node);
    if (!m.alias.empty() && !std::holds_alternative<MappingExpr::Source>(m.node)) s.tuples.push_back(m.alias);
    return s;
  }

  Diagnostics diagnostics;

 private:
  void error(std::string message) { diagnostics.push_back({Diagnostic::Severity::error, std::move(message), {}}); }

  const SourceClass* find_source(std::string_view name) const {
    for (const auto& c : catalog_) {
      if (same_identifier(c.name, name)) return &c;
    }
    return nullptr;
  }

  Scope walk_node(const MappingExpr& m, const MappingExpr::Source& n) {
    Scope s;
    const SourceClass* c = find_source(n.class_name);
    if (!c) error("unknown source class '" + n.class_name + "'");
    s.vars.push_back({m.alias.empty() ? n.class_name : m.alias, c, {}});
    return s;
  }

  Scope walk_node(const MappingExpr&, const MappingExpr::Select& n) {
    Scope s = walk(*n.input);
    if (n.predicate) check_predicate(*n.predicate, s);
    return s;
  }

  Scope walk_node(const MappingExpr&, const MappingExpr::Join& n) {
    Scope s = walk(*n.left);
    Scope r = walk(*n.right);
    s.vars.insert(s.vars.end(), r.vars.begin(), r.vars.end());
    s.tuples.insert(s.tuples.end(), r.tuples.begin(), r.tuples.end());
    if (n.predicate) check_predicate(*n.predicate, s);
    return s;
  }

  Scope walk_node(const MappingExpr& m, const MappingExpr::Project& n) {
    Scope in = walk(*n.input);
    Scope out;
    Scope::Var v{m.alias, nullptr, {}};
    std::set<std::string> targets;
    for (const auto& item : n.items) {
      if (!targets.insert(fold_identifier(item.target)).second) error("duplicate projection target '" + item.target + "'");
      if (classify(item.path, in) == Shape::object) error("projection of an object: " + item.path.to_string());
      v.projected.push_back(item.target);
    }
    out.vars.push_back(std::move(v));
    return out;
  }

  Scope walk_node(const MappingExpr&, const MappingExpr::Combine& n) {
    Scope l = walk(*n.left);
    walk(*n.right);
    return l;
  }

  Shape member(const Scope::Var& v, const Path& p, std::size_t from) {
    if (from >= p.steps.size()) return Shape::object;
    const auto* name = std::get_if<std::string>(&p.steps[from]);
    if (!name) {
      error("index applied to an object in " + p.to_string());
      return Shape::invalid;
    }
    if (!v.cls) {
      if (!v.projected.empty() || v.name.empty()) {
        const bool ok = std::any_of(v.projected.begin(), v.projected.end(),
                                    [&](const std::string& t) { return same_identifier(t, *name); });
        if (!ok) {
          error("unknown attribute '" + *name + "' in " + p.to_string());
          return Shape::invalid;
        }
      }
      return Shape::attribute;
    }
    for (const auto& a : v.cls->attributes) {
      if (same_identifier(a.name, *name)) return Shape::attribute;
    }
    for (const auto& r : v.cls->relationships) {
      if (same_identifier(r.name, *name)) {
        if (from + 1 < p.steps.size()) {
          error("path through relationship longer than one hop: " + p.to_string());
          return Shape::invalid;
        }
        return Shape::relationship;
      }
    }
    error("unknown attribute '" + *name + "' of source class " + v.cls->name);
    return Shape::invalid;
  }

  static const Scope::Var* find_var(const Scope& s, std::string_view name) {
    for (const auto& v : s.vars) {
      if (same_identifier(v.name, name)) return &v;
    }
    return nullptr;
  }

  bool has_member(const Scope::Var& v, std::string_view name) const {
    if (!v.cls) {
      return std::any_of(v.projected.begin(), v.projected.end(),
                         [&](const std::string& t) { return same_identifier(t, name); });
    }
    return std::any_of(v.cls->attributes.begin(), v.cls->attributes.end(),
                       [&](const AttributeDecl& a) { return same_identifier(a.name, name); }) ||
           std::any_of(v.cls->relationships.begin(), v.cls->relationships.end(),
                       [&](const RelationshipDecl& r) { return same_identifier(r.name, name); });
  }

  Shape classify(const Path& p, const Scope& s) {
    if (const auto* v = find_var(s, p.var)) return member(*v, p, 0);
    const bool tuple = std::any_of(s.tuples.begin(), s.tuples.end(),
                                   [&](const std::string& t) { return same_identifier(t, p.var); });
    if (!tuple) {
      error("unbound variable '" + p.var + "'");
      return Shape::invalid;
    }
    if (p.steps.empty()) {
      error("tuple variable used as a value: " + p.var);
      return Shape::invalid;
    }
    const auto* first = std::get_if<std::string>(&p.steps.front());
    if (!first) {
      error("index applied to a tuple in " + p.to_string());
      return Shape::invalid;
    }
    if (const auto* v = find_var(s, *first)) return member(*v, p, 1);
    for (const auto& v : s.vars) {
      if ((v.cls || !v.projected.empty()) && has_member(v, *first)) return member(v, p, 0);
    }
    error("unknown attribute '" + *first + "' in " + p.to_string());
    return Shape::invalid;
  }

  Shape operand_shape(const Expr& e, const Scope& s) {
    if (const auto* p = std::get_if<Expr::PathRef>(&e.node)) return classify(p->path, s);
    check_predicate(e, s);
    return Shape::attribute;
  }

  void check_predicate(const Expr& e, const Scope& s) {
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Expr::Compare>) {
            const Shape l = operand_shape(*x.lhs, s);
            const Shape r = operand_shape(*x.rhs, s);
            if (l == Shape::invalid || r == Shape::invalid) return;
            const bool l_ref = l != Shape::attribute;
            const bool r_ref = r != Shape::attribute;
            if (l_ref != r_ref) {
              error("comparison of an attribute with a relationship or object: " +
                    std::string(cmp_op_text(x.op)) + " in predicate");
            }
          } else if constexpr (std::is_same_v<T, Expr::Logical>) {
            for (const auto& o : x.operands) check_predicate(*o, s);
          } else if constexpr (std::is_same_v<T, Expr::Not>) {
            check_predicate(*x.operand, s);
          } else if constexpr (std::is_same_v<T, Expr::Temporal>) {
            error("temporal tests are not available in mapping predicates");
          } else if constexpr (std::is_same_v<T, Expr::PathRef>) {
            classify(x.path, s);
          }
        },
        e.node);
  }

  const std::vector<SourceClass>& catalog_;
};

}  // namespace

Diagnostics validate_mapping(const MappingExpr& m, const std::vector<SourceClass>& catalog) {
  MappingValidator v(catalog);
  v.walk(m);
  return v.diagnostics;
}

std::vector<MappedRow> extract_class(const WarehouseSchema& schema, const WarehouseClass& c,
                                     const SourceSnapshot& s) {
  const std::vector<SourceClass>* catalog = schema.sources.empty() ? nullptr : &schema.sources;
  MappingPtr m = c.mapping ? c.mapping : mapping_source("", c.name);
  std::vector<MappedRow> rows = evaluate_mapping(*m, s, catalog);
  if (c.attributes.empty()) return rows;

  std::set<std::vector<std::string>> keys;
  for (auto& row : rows) {
    if (!keys.insert(row.key).second) {
      throw Error(ErrorCode::MappingError, c.name + ": two rows share the source key of " + row.key.front());
    }
    Record out;
    for (const auto& a : c.attributes) {
      const Value* v = row.value.find(a.name);
      if (!v) throw Error(ErrorCode::MissingAttribute, c.name + "." + a.name + " is not produced by the mapping");
      if (!value_conforms(*v, a.type)) {
        throw Error(ErrorCode::TypeMismatch, c.name + "." + a.name + ": " + v->to_string() + " is not a " +
                                                 a.type.to_string());
      }
      out.set(a.name, *v);
    }
    row.value = std::move(out);
  }
  return rows;
}

}  // namespace twq
