#include "twq/dsl/printer.hpp"

#include <cmath>
#include <cstdio>

#include "twq/dsl/parser.hpp"

namespace twq::dsl {

namespace {

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out + "\"";
}

std::string print_double(double d) {
  if (!std::isfinite(d)) throw Error(ErrorCode::TypeMismatch, "non-finite number has no literal form");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", d);
  std::string s = buf;
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += sep;
    out += parts[i];
  }
  return out;
}

std::string print_date(const DateLiteral& d) {
  std::string s = "Date(" + quote(format_dated(d.instant, d.format));
  if (!d.format.empty()) s += ", " + quote(d.format);
  return s + ")";
}

std::string print_window(const WindowLiteral& w) {
  std::string s = "DomT(" + quote(format_dated(w.from, w.format)) + ", " + quote(format_dated(w.until, w.format));
  if (!w.format.empty()) s += ", " + quote(w.format);
  return s + ")";
}

bool atomic(const Expr& e) {
  return std::holds_alternative<Expr::Literal>(e.node) || std::holds_alternative<Expr::PathRef>(e.node) ||
         std::holds_alternative<Expr::Date>(e.node) || std::holds_alternative<Expr::Window>(e.node) ||
         std::holds_alternative<Expr::Temporal>(e.node);
}

std::string operand(const Expr& e) {
  return atomic(e) ? print_expr(e) : "(" + print_expr(e) + ")";
}

std::string spec_text(const AggSpec& spec) {
  std::vector<std::string> parts;
  for (const auto& e : spec) parts.push_back("(" + e.attribute + ", " + aggregation_name(e.fn) + "(" + e.source + "))");
  return "{" + join(parts, ", ") + "}";
}

std::string duration_text(const Duration& d) {
  return "Duration(" + std::to_string(d.count) + ", " + std::string(unit_name(d.unit)) + ")";
}

std::string child_text(const QueryNode& n, std::size_t i) {
  std::string s;
  if (i < n.vars.size() && !n.vars[i].empty()) s = n.vars[i] + " ";
  return s + print_query(n.children[i]);
}

std::string members_text(const std::vector<AttributeDecl>& attrs, const std::vector<RelationshipDecl>* rels,
                         const std::vector<OperationDecl>& ops) {
  std::string out = "{\n";
  for (const auto& a : attrs) out += "  attribute " + a.type.to_string() + " " + a.name + ";\n";
  if (rels) {
    for (const auto& r : *rels) {
      out += "  relationship " + r.target + " " + r.name;
      if (!r.inverse_class.empty()) out += " inverse " + r.inverse_class + "::" + r.inverse_name;
      out += ";\n";
    }
  }
  for (const auto& o : ops) out += "  " + o.result.to_string() + " " + o.name + "();\n";
  return out + "}";
}

}  // namespace

std::string print_literal(const Value& v) {
  switch (v.kind()) {
    case ValueKind::null: return "null";
    case ValueKind::boolean: return v.as_bool() ? "true" : "false";
    case ValueKind::integer: return std::to_string(v.as_int());
    case ValueKind::decimal: return print_double(v.as_double());
    case ValueKind::string: return quote(v.as_string());
    default: throw Error(ErrorCode::TypeMismatch, "a " + std::string(value_kind_name(v.kind())) + " has no literal form");
  }
}

std::string print_expr(const Expr& e) {
  return std::visit(
      [](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Expr::Literal>) {
          return print_literal(n.value);
        } else if constexpr (std::is_same_v<T, Expr::PathRef>) {
          return n.path.to_string();
        } else if constexpr (std::is_same_v<T, Expr::Date>) {
          return print_date(n.literal);
        } else if constexpr (std::is_same_v<T, Expr::Window>) {
          return print_window(n.literal);
        } else if constexpr (std::is_same_v<T, Expr::Compare>) {
          return operand(*n.lhs) + " " + std::string(cmp_op_text(n.op)) + " " + operand(*n.rhs);
        } else if constexpr (std::is_same_v<T, Expr::Logical>) {
          std::vector<std::string> parts;
          for (const auto& o : n.operands) {
            const bool wrap = std::holds_alternative<Expr::Logical>(o->node);
            parts.push_back(wrap ? "(" + print_expr(*o) + ")" : print_expr(*o));
          }
          return join(parts, n.conjunction ? " and " : " or ");
        } else if constexpr (std::is_same_v<T, Expr::Not>) {
          const bool wrap = std::holds_alternative<Expr::Logical>(n.operand->node);
          return wrap ? "not (" + print_expr(*n.operand) + ")" : "not " + print_expr(*n.operand);
        } else {
          return std::string(n.op.name()) + "(" + print_expr(*n.lhs) + ", " + print_expr(*n.rhs) + ")";
        }
      },
      e.node);
}

std::string print_mapping(const MappingExpr& m) {
  std::string prefix = m.alias.empty() ? "" : m.alias + " ";
  return prefix + std::visit(
                      [](const auto& n) -> std::string {
                        using T = std::decay_t<decltype(n)>;
                        if constexpr (std::is_same_v<T, MappingExpr::Source>) {
                          return n.class_name;
                        } else if constexpr (std::is_same_v<T, MappingExpr::Select>) {
                          std::string s = "SELECT(" + print_mapping(*n.input);
                          if (n.predicate) s += ", " + print_expr(*n.predicate);
                          return s + ")";
                        } else if constexpr (std::is_same_v<T, MappingExpr::Join>) {
                          std::string s = "JOIN(" + print_mapping(*n.left) + ", " + print_mapping(*n.right);
                          if (n.predicate) s += ", " + print_expr(*n.predicate);
                          return s + ")";
                        } else if constexpr (std::is_same_v<T, MappingExpr::Project>) {
                          std::vector<std::string> items;
                          for (const auto& p : n.items) items.push_back(p.target + ": " + p.path.to_string());
                          return "PROJECT(" + print_mapping(*n.input) + ", {" + join(items, ", ") + "})";
                        } else {
                          std::string op(mapping_set_op_name(n.op));
                          for (auto& c : op) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
                          return op + "(" + print_mapping(*n.left) + ", " + print_mapping(*n.right) + ")";
                        }
                      },
                      m.node);
}

std::string print_query(const QueryPtr& qp) {
  const QueryNode& n = *qp;
  if (n.op == QueryOp::Ref) return n.name;
  std::vector<std::string> args;
  for (std::size_t i = 0; i < n.children.size(); ++i) args.push_back(child_text(n, i));
  switch (n.op) {
    case QueryOp::Select:
      args.push_back(print_expr(*n.predicate));
      break;
    case QueryOp::Join: case QueryOp::IJoin: case QueryOp::UJoin:
      if (n.predicate) args.push_back(print_expr(*n.predicate));
      break;
    case QueryOp::Project: {
      std::vector<std::string> items;
      for (const auto& it : n.items) {
        items.push_back(it.alias.empty() ? it.path.to_string() : it.alias + ": " + it.path.to_string());
      }
      args.push_back("{" + join(items, ", ") + "}");
      break;
    }
    case QueryOp::Nest: case QueryOp::UnNest:
      args.push_back(n.name);
      break;
    case QueryOp::State:
      args.push_back(print_expr(*n.window));
      args.emplace_back(n.relation.name());
      break;
    case QueryOp::UGroup:
      args.emplace_back(unit_name(n.unit));
      break;
    case QueryOp::DGroup:
      args.push_back(duration_text(n.duration));
      break;
    case QueryOp::Agreg: case QueryOp::ACum:
      args.push_back(spec_text(n.spec));
      break;
    case QueryOp::AMove:
      args.push_back(spec_text(n.spec));
      args.push_back(duration_text(n.duration));
      break;
    case QueryOp::ScaleUp: case QueryOp::ScaleDown:
      args.emplace_back(unit_name(n.unit));
      args.push_back(spec_text(n.spec));
      break;
    default:
      break;
  }
  return std::string(op_name(n.op)) + "(" + join(args, ", ") + ")";
}

std::string print_script(const QueryScript& s) {
  std::string out;
  for (const auto& [name, q] : s.bindings) out += name + " = " + print_query(q) + ";\n";
  return out + print_query(s.result);
}

std::string print_rule(const ConfigRule& r) {
  std::string out = "rule " + r.name + " on " + r.environment + " when self.refresh() if ";
  if (const auto* q = std::get_if<SelectionQuery>(&r.condition)) {
    out += "select " + q->result_var + " from " + q->object_var + " in " + q->class_name + ", " + q->state_var +
           " in " + q->object_var + "." + q->accessor + "()";
    if (q->where) out += " where " + print_expr(*q->where);
  } else {
    out += print_expr(*std::get<ExprPtr>(r.condition));
  }
  return out + " then " + r.action_target + ".archive();";
}

std::string print_schema(const WarehouseSchema& s) {
  std::string out = "schema " + s.name + ";\n";
  for (const auto& c : s.config) out += "config " + c.key + " = " + print_literal(c.value) + ";\n";
  for (const auto& src : s.sources) {
    out += "\nsource interface " + src.name + " " + members_text(src.attributes, &src.relationships, src.operations) +
           ";\n";
  }
  for (const auto& c : s.classes) {
    out += "\ninterface " + c.name;
    if (!c.super_names.empty()) out += " : " + join(c.super_names, ", ");
    out += " " + members_text(c.attributes, nullptr, c.operations);
    std::vector<std::string> clauses;
    if (c.mapping) clauses.push_back("mapping " + print_mapping(*c.mapping));
    if (!c.temporal_filter.empty()) {
      std::vector<std::string> entries;
      for (const auto& e : c.temporal_filter.entries) {
        entries.push_back("(" + e.property + ", " + e.source + (e.function_backed ? "()" : "") + ")");
      }
      clauses.push_back("temporal filter {" + join(entries, ", ") + "}");
    }
    if (!c.archive_filter.empty() || c.archive_filter.grain) {
      std::string a = "archive filter " + spec_text(c.archive_filter.entries);
      if (const auto& g = c.archive_filter.grain) {
        a += " by " + std::string(unit_name(g->unit)) + "(" + std::to_string(g->count) + ")";
      }
      clauses.push_back(a);
    }
    if (!clauses.empty()) out += " with\n  " + join(clauses, ",\n  ");
    out += ";\n";
  }
  for (const auto& e : s.environments) {
    out += "\nenvironment " + e.name + " { " + join(e.classes, ", ") + " };\n";
    for (const auto& r : e.rules) out += print_rule(r) + "\n";
  }
  return out;
}

}  // namespace twq::dsl
