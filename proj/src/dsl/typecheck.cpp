#include "twq/dsl/typecheck.hpp"

#include <algorithm>

#include "twq/names.hpp"

namespace twq::dsl {

namespace {

using Fields = std::optional<std::vector<std::string>>;

// What is statically known about a node's result.
struct Shape {
  std::optional<Kind> kind;
  Fields fields;                          // element attribute names, when known
  const WarehouseClass* cls = nullptr;    // object sets drawn from one class
};

Fields class_fields(const WarehouseClass& c) {
  std::vector<std::string> out;
  for (const auto& a : c.attributes) out.push_back(a.name);
  return out;
}

Fields past_fields(const WarehouseClass& c) {
  std::vector<std::string> out;
  for (const auto& e : c.temporal_filter.entries) out.push_back(e.property);
  return out;
}

Fields archive_fields(const WarehouseClass& c) {
  std::vector<std::string> out;
  for (const auto& e : c.archive_filter.entries) out.push_back(e.attribute);
  return out;
}

Fields spec_fields(const AggSpec& spec) {
  std::vector<std::string> out;
  for (const auto& e : spec) out.push_back(e.attribute);
  return out;
}

bool has_field(const std::vector<std::string>& fields, std::string_view name) {
  return std::any_of(fields.begin(), fields.end(), [&](const std::string& f) { return same_identifier(f, name); });
}

Fields intersect(const Fields& a, const Fields& b) {
  if (!a || !b) return std::nullopt;
  std::vector<std::string> out;
  for (const auto& f : *a) {
    if (has_field(*b, f)) out.push_back(f);
  }
  return out;
}

Fields prefixed(const Fields& l, const Fields& r, bool with_oid) {
  if (!l || !r) return std::nullopt;
  std::vector<std::string> out;
  for (const auto& f : *l) out.push_back("left." + f);
  if (with_oid) out.push_back("left.oid");
  for (const auto& f : *r) out.push_back("right." + f);
  if (with_oid) out.push_back("right.oid");
  return out;
}

std::string kind_text(const std::optional<Kind>& k) { return k ? std::string(kind_name(*k)) : "unknown"; }

class Checker {
 public:
  Checker(const WarehouseSchema& schema, TypeReport& report) : schema_(schema), report_(report) {}

  void script(const QueryScript& s) {
    for (const auto& [name, q] : s.bindings) {
      Shape sh = node(*q);
      bound_.insert_or_assign(fold_identifier(name), sh);
    }
    report_.result = node(*s.result).kind;
  }

 private:
  void error(const QueryNode& n, const std::string& msg) {
    report_.diagnostics.push_back({Diagnostic::Severity::error, msg, "line " + n.pos.to_string()});
  }

  bool expect(const QueryNode& n, const Shape& in, std::initializer_list<Kind> allowed) {
    if (!in.kind) return false;
    if (std::find(allowed.begin(), allowed.end(), *in.kind) != allowed.end()) return true;
    std::string want;
    for (Kind k : allowed) want += (want.empty() ? "" : " or ") + std::string(kind_name(k));
    error(n, std::string(op_name(n.op)) + " expects " + want + ", got " + kind_text(in.kind));
    return false;
  }

  // Checks that `p` starts with a variable in scope and names known fields.
  void path(const QueryNode& n, const Path& p, const std::vector<std::pair<std::string, Shape>>& scope) {
    const Shape* sh = nullptr;
    for (const auto& [v, s] : scope) {
      if (!v.empty() && same_identifier(v, p.var)) sh = &s;
    }
    if (!sh) {
      error(n, "unbound variable " + p.var + " in " + p.to_string());
      return;
    }
    if (p.steps.empty() || !sh->fields) return;
    const bool states = sh->kind == Kind::state_set || sh->kind == Kind::series;
    if (states && p.names_domain() && p.steps.size() == 1) return;
    if (sh->kind == Kind::tuple_set && p.names_domain() && p.steps.size() == 2) return;
    std::string dotted;
    for (const auto& step : p.steps) {
      const auto* name = std::get_if<std::string>(&step);
      if (!name) break;
      dotted += (dotted.empty() ? "" : ".") + *name;
      if (has_field(*sh->fields, dotted)) return;
    }
    error(n, "UnknownAttribute: " + p.to_string());
  }

  void predicate(const QueryNode& n, const Expr& e, const std::vector<std::pair<std::string, Shape>>& scope) {
    for_each_path(e, [&](const Path& p) { path(n, p, scope); });
  }

  void spec(const QueryNode& n, const Shape& in) {
    for (const auto& e : n.spec) {
      if (in.fields && !has_field(*in.fields, e.source)) error(n, "UnknownAttribute: " + e.source);
    }
  }

  Shape record(const QueryNode& n, Shape s) {
    if (s.kind) report_.kinds[&n] = *s.kind;
    return s;
  }

  Shape node(const QueryNode& n) {
    std::vector<Shape> in;
    for (const auto& c : n.children) in.push_back(node(*c));
    auto var = [&](std::size_t i) { return child_var(n, i); };

    switch (n.op) {
      case QueryOp::Ref: {
        auto it = bound_.find(fold_identifier(n.name));
        if (it != bound_.end()) return record(n, it->second);
        if (const WarehouseClass* c = schema_.find_class(n.name)) {
          return record(n, Shape{Kind::object_set, class_fields(*c), c});
        }
        error(n, "UnknownClass: " + n.name);
        return {};
      }
      case QueryOp::VUnion: case QueryOp::VIntersect: case QueryOp::VDifference: {
        if (!expect(n, in[0], {Kind::object_set, Kind::state_set, Kind::tuple_set})) return {};
        if (in[1].kind && in[1].kind != in[0].kind) {
          error(n, std::string(op_name(n.op)) + " expects two operands of the same kind, got " + kind_text(in[0].kind) +
                       " and " + kind_text(in[1].kind));
          return {};
        }
        Shape out = in[0];
        if (in[1].cls != in[0].cls) out.cls = nullptr;
        return record(n, out);
      }
      case QueryOp::IUnion: case QueryOp::IIntersect: case QueryOp::IDifference: {
        if (!expect(n, in[0], {Kind::object_set}) || !expect(n, in[1], {Kind::object_set})) return {};
        Shape out = in[0];
        if (in[1].cls != in[0].cls) out.cls = nullptr;
        return record(n, out);
      }
      case QueryOp::Flatten:
        if (!expect(n, in[0], {Kind::state_set_set, Kind::object_set_set})) return {};
        return record(n, Shape{*in[0].kind == Kind::state_set_set ? Kind::state_set : Kind::object_set, in[0].fields, nullptr});
      case QueryOp::DupElim:
        if (!expect(n, in[0], {Kind::object_set, Kind::state_set, Kind::tuple_set})) return {};
        return record(n, in[0]);
      case QueryOp::EmptyElim:
        if (!expect(n, in[0], {Kind::state_set_set, Kind::object_set_set})) return {};
        return record(n, in[0]);
      case QueryOp::Select:
        if (!expect(n, in[0], {Kind::object_set, Kind::state_set, Kind::tuple_set})) return {};
        predicate(n, *n.predicate, {{var(0), in[0]}});
        return record(n, in[0]);
      case QueryOp::Project: {
        if (!expect(n, in[0], {Kind::object_set, Kind::state_set, Kind::tuple_set})) return {};
        std::vector<std::string> names;
        for (const auto& item : n.items) {
          path(n, item.path, {{var(0), in[0]}});
          if (item.path.names_domain()) continue;
          std::string name = item.alias;
          if (name.empty()) {
            for (auto it = item.path.steps.rbegin(); it != item.path.steps.rend() && name.empty(); ++it) {
              if (const auto* s = std::get_if<std::string>(&*it)) name = *s;
            }
          }
          if (std::find(names.begin(), names.end(), name) != names.end()) {
            error(n, "AttributeNameClash: projection produces '" + name + "' twice");
          }
          names.push_back(name);
        }
        return record(n, Shape{in[0].kind, names, in[0].cls});
      }
      case QueryOp::Join: {
        if (!expect(n, in[0], {Kind::object_set, Kind::state_set})) return {};
        if (in[1].kind != in[0].kind) {
          error(n, "Join expects two operands of the same kind, got " + kind_text(in[0].kind) + " and " +
                       kind_text(in[1].kind));
          return {};
        }
        if (n.predicate) predicate(n, *n.predicate, {{var(0), in[0]}, {var(1), in[1]}});
        return record(n, Shape{Kind::tuple_set, prefixed(in[0].fields, in[1].fields, *in[0].kind == Kind::object_set), nullptr});
      }
      case QueryOp::Nest: case QueryOp::UnNest:
        if (!expect(n, in[0], {Kind::object_set, Kind::state_set})) return {};
        if (in[0].fields && !has_field(*in[0].fields, n.name)) error(n, "UnknownAttribute: " + n.name);
        return record(n, in[0]);
      case QueryOp::Current:
        if (!expect(n, in[0], {Kind::object_set})) return {};
        return record(n, Shape{Kind::state_set, in[0].cls ? class_fields(*in[0].cls) : Fields{}, nullptr});
      case QueryOp::Past:
        if (!expect(n, in[0], {Kind::object_set})) return {};
        return record(n, Shape{Kind::state_set_set, in[0].cls ? past_fields(*in[0].cls) : Fields{}, nullptr});
      case QueryOp::Archive:
        if (!expect(n, in[0], {Kind::object_set})) return {};
        return record(n, Shape{Kind::state_set_set, in[0].cls ? archive_fields(*in[0].cls) : Fields{}, nullptr});
      case QueryOp::State: {
        if (!expect(n, in[0], {Kind::object_set, Kind::state_set, Kind::state_set_set, Kind::series})) return {};
        Fields f = in[0].fields;
        if (*in[0].kind == Kind::object_set) {
          f = std::nullopt;
          if (const WarehouseClass* c = in[0].cls) {
            f = intersect(class_fields(*c), past_fields(*c));
            if (!c->archive_filter.empty()) f = intersect(f, archive_fields(*c));
          }
        }
        return record(n, Shape{Kind::state_set, f, nullptr});
      }
      case QueryOp::IJoin: case QueryOp::UJoin:
        if (!expect(n, in[0], {Kind::state_set}) || !expect(n, in[1], {Kind::state_set})) return {};
        if (n.predicate) predicate(n, *n.predicate, {{var(0), in[0]}, {var(1), in[1]}});
        return record(n, Shape{Kind::state_set, prefixed(in[0].fields, in[1].fields, false), nullptr});
      case QueryOp::UGroup: case QueryOp::DGroup:
        if (!expect(n, in[0], {Kind::state_set})) return {};
        return record(n, Shape{Kind::group_set, std::nullopt, nullptr});
      case QueryOp::MakeSerie:
        if (!expect(n, in[0], {Kind::state_set})) return {};
        return record(n, Shape{Kind::series, in[0].fields, nullptr});
      case QueryOp::Agreg:
        if (!expect(n, in[0], {Kind::series})) return {};
        spec(n, in[0]);
        return record(n, Shape{Kind::value, spec_fields(n.spec), nullptr});
      case QueryOp::ACum: case QueryOp::AMove: case QueryOp::ScaleUp:
        if (!expect(n, in[0], {Kind::series})) return {};
        spec(n, in[0]);
        return record(n, Shape{Kind::series, spec_fields(n.spec), nullptr});
      case QueryOp::ScaleDown:
        if (!expect(n, in[0], {Kind::series})) return {};
        spec(n, in[0]);
        return record(n, Shape{Kind::series, in[0].fields, nullptr});
    }
    return {};
  }

  const WarehouseSchema& schema_;
  TypeReport& report_;
  std::map<std::string, Shape> bound_;
};

}  // namespace

TypeReport typecheck(const QueryScript& script, const WarehouseSchema& schema) {
  TypeReport report;
  Checker(schema, report).script(script);
  return report;
}

}  // namespace twq::dsl
