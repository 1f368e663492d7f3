#include "twq/expr.hpp"

#include "twq/names.hpp"

namespace twq {

bool Path::names_domain() const {
  if (steps.empty()) return false;
  const auto* last = std::get_if<std::string>(&steps.back());
  return last && fold_identifier(*last) == "domt";
}

std::string Path::to_string() const {
  std::string s = var;
  for (const auto& step : steps) {
    if (const auto* name = std::get_if<std::string>(&step)) {
      s += "." + *name;
    } else {
      s += "[" + std::to_string(std::get<std::int64_t>(step)) + "]";
    }
  }
  return s;
}

std::string_view cmp_op_text(CmpOp op) {
  switch (op) {
    case CmpOp::eq: return "=";
    case CmpOp::ne: return "!=";
    case CmpOp::lt: return "<";
    case CmpOp::le: return "<=";
    case CmpOp::gt: return ">";
    case CmpOp::ge: return ">=";
  }
  return "?";
}

std::string_view TemporalOp::name() const {
  switch (kind) {
    case Kind::within: return "during";
    case Kind::encloses: return "contains";
    case Kind::allen: return relation_name(relation);
  }
  return "?";
}

bool TemporalOp::test(const TemporalDomain& x, const TemporalDomain& y) const {
  switch (kind) {
    case Kind::within: return !x.empty() && contains(y, x);
    case Kind::encloses: return !y.empty() && contains(x, y);
    case Kind::allen: return allen_relate(x, y, relation);
  }
  return false;
}

std::optional<TemporalOp> parse_temporal_op(std::string_view name) {
  const std::string n = fold_identifier(name);
  if (n == "during") return TemporalOp::within_op();
  if (n == "contains") return TemporalOp::encloses_op();
  if (auto r = parse_relation(name)) return TemporalOp::allen(*r);
  return std::nullopt;
}

TemporalDomain WindowLiteral::domain() const {
  if (from.unit() != until.unit()) throw Error(ErrorCode::MixedUnits, "DomT bounds of different units");
  if (until.index() <= from.index()) {
    throw Error(ErrorCode::InvalidInterval, "DomT window ends before it starts");
  }
  return TemporalDomain(Interval(from, until.prev()));
}

ExprPtr make_literal(Value v) { return std::make_shared<Expr>(Expr{Expr::Literal{std::move(v)}}); }
ExprPtr make_path(Path p) { return std::make_shared<Expr>(Expr{Expr::PathRef{std::move(p)}}); }
ExprPtr make_date(DateLiteral d) { return std::make_shared<Expr>(Expr{Expr::Date{std::move(d)}}); }
ExprPtr make_window(WindowLiteral w) { return std::make_shared<Expr>(Expr{Expr::Window{std::move(w)}}); }
ExprPtr make_compare(CmpOp op, ExprPtr lhs, ExprPtr rhs) {
  return std::make_shared<Expr>(Expr{Expr::Compare{op, std::move(lhs), std::move(rhs)}});
}
ExprPtr make_logical(bool conjunction, std::vector<ExprPtr> operands) {
  return std::make_shared<Expr>(Expr{Expr::Logical{conjunction, std::move(operands)}});
}
ExprPtr make_not(ExprPtr operand) { return std::make_shared<Expr>(Expr{Expr::Not{std::move(operand)}}); }
ExprPtr make_temporal(TemporalOp op, ExprPtr lhs, ExprPtr rhs) {
  return std::make_shared<Expr>(Expr{Expr::Temporal{op, std::move(lhs), std::move(rhs)}});
}

bool same_expr(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return !a && !b;
  if (a->node.index() != b->node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b->node);
        if constexpr (std::is_same_v<T, Expr::Literal>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<T, Expr::PathRef>) {
          return x.path == y.path;
        } else if constexpr (std::is_same_v<T, Expr::Date> || std::is_same_v<T, Expr::Window>) {
          return x.literal == y.literal;
        } else if constexpr (std::is_same_v<T, Expr::Compare>) {
          return x.op == y.op && same_expr(x.lhs, y.lhs) && same_expr(x.rhs, y.rhs);
        } else if constexpr (std::is_same_v<T, Expr::Logical>) {
          if (x.conjunction != y.conjunction || x.operands.size() != y.operands.size()) return false;
          for (std::size_t i = 0; i < x.operands.size(); ++i) {
            if (!same_expr(x.operands[i], y.operands[i])) return false;
          }
          return true;
        } else if constexpr (std::is_same_v<T, Expr::Not>) {
          return same_expr(x.operand, y.operand);
        } else {
          return x.op == y.op && same_expr(x.lhs, y.lhs) && same_expr(x.rhs, y.rhs);
        }
      },
      a->node);
}

void for_each_path(const Expr& e, const std::function<void(const Path&)>& fn) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Expr::PathRef>) {
          fn(x.path);
        } else if constexpr (std::is_same_v<T, Expr::Compare> || std::is_same_v<T, Expr::Temporal>) {
          for_each_path(*x.lhs, fn);
          for_each_path(*x.rhs, fn);
        } else if constexpr (std::is_same_v<T, Expr::Logical>) {
          for (const auto& o : x.operands) for_each_path(*o, fn);
        } else if constexpr (std::is_same_v<T, Expr::Not>) {
          for_each_path(*x.operand, fn);
        }
      },
      e.node);
}

const Value& follow_steps(const Value& root, const std::vector<Path::Step>& steps, std::size_t from,
                          const Path& whole) {
  const Value* cur = &root;
  for (std::size_t i = from; i < steps.size(); ++i) {
    if (const auto* name = std::get_if<std::string>(&steps[i])) {
      const Value* next = cur->kind() == ValueKind::record ? cur->as_record().find(*name) : nullptr;
      if (!next) throw Error(ErrorCode::UnknownAttribute, "no attribute '" + *name + "' in " + whole.to_string());
      cur = next;
    } else {
      const auto idx = std::get<std::int64_t>(steps[i]);
      if (cur->kind() != ValueKind::list) {
        throw Error(ErrorCode::PredicateTypeError, "index applied to a non-list in " + whole.to_string());
      }
      const auto& l = cur->as_list();
      if (idx < 0 || static_cast<std::size_t>(idx) >= l.size()) {
        throw Error(ErrorCode::UnknownAttribute, "index out of range in " + whole.to_string());
      }
      cur = &l[static_cast<std::size_t>(idx)];
    }
  }
  return *cur;
}

namespace {

const TemporalDomain& as_domain(const Operand& o, const char* where) {
  if (const auto* d = std::get_if<TemporalDomain>(&o)) return *d;
  throw Error(ErrorCode::PredicateTypeError, std::string(where) + " expects temporal domains");
}

bool compare_operands(CmpOp op, const Operand& a, const Operand& b) {
  const auto* da = std::get_if<TemporalDomain>(&a);
  const auto* db = std::get_if<TemporalDomain>(&b);
  if (da || db) {
    if (!(da && db) || (op != CmpOp::eq && op != CmpOp::ne)) {
      throw Error(ErrorCode::PredicateTypeError, "domains only compare for (in)equality with domains");
    }
    return (*da == *db) == (op == CmpOp::eq);
  }
  const Value& va = std::get<Value>(a);
  const Value& vb = std::get<Value>(b);
  const auto ord = compare_values(va, vb);
  if (!ord) {
    throw Error(ErrorCode::PredicateTypeError, "cannot compare " + std::string(value_kind_name(va.kind())) +
                                                   " with " + std::string(value_kind_name(vb.kind())));
  }
  const bool ordered = *ord != std::partial_ordering::unordered;
  switch (op) {
    case CmpOp::eq: return *ord == std::partial_ordering::equivalent;
    case CmpOp::ne: return *ord != std::partial_ordering::equivalent;
    default: break;
  }
  if (!ordered || va.kind() == ValueKind::boolean || va.kind() == ValueKind::ref) {
    throw Error(ErrorCode::PredicateTypeError, "ordering comparison on " + std::string(value_kind_name(va.kind())));
  }
  switch (op) {
    case CmpOp::lt: return *ord == std::partial_ordering::less;
    case CmpOp::le: return *ord != std::partial_ordering::greater;
    case CmpOp::gt: return *ord == std::partial_ordering::greater;
    case CmpOp::ge: return *ord != std::partial_ordering::less;
    default: return false;
  }
}

}  // namespace

Operand evaluate_operand(const Expr& e, const Resolver& resolve) {
  return std::visit(
      [&](const auto& x) -> Operand {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Expr::Literal>) {
          return x.value;
        } else if constexpr (std::is_same_v<T, Expr::PathRef>) {
          return resolve(x.path);
        } else if constexpr (std::is_same_v<T, Expr::Date> || std::is_same_v<T, Expr::Window>) {
          return x.literal.domain();
        } else {
          return Value(evaluate_predicate(e, resolve));
        }
      },
      e.node);
}

bool evaluate_predicate(const Expr& e, const Resolver& resolve) {
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Expr::Compare>) {
          return compare_operands(x.op, evaluate_operand(*x.lhs, resolve), evaluate_operand(*x.rhs, resolve));
        } else if constexpr (std::is_same_v<T, Expr::Logical>) {
          for (const auto& o : x.operands) {
            const bool v = evaluate_predicate(*o, resolve);
            if (x.conjunction && !v) return false;
            if (!x.conjunction && v) return true;
          }
          return x.conjunction;
        } else if constexpr (std::is_same_v<T, Expr::Not>) {
          return !evaluate_predicate(*x.operand, resolve);
        } else if constexpr (std::is_same_v<T, Expr::Temporal>) {
          const Operand l = evaluate_operand(*x.lhs, resolve);
          const Operand r = evaluate_operand(*x.rhs, resolve);
          return x.op.test(as_domain(l, "temporal test"), as_domain(r, "temporal test"));
        } else {
          const Operand o = evaluate_operand(e, resolve);
          const auto* v = std::get_if<Value>(&o);
          if (!v || v->kind() != ValueKind::boolean) {
            throw Error(ErrorCode::PredicateTypeError, "predicate is not boolean");
          }
          return v->as_bool();
        }
      },
      e.node);
}

}  // namespace twq
