#pragma once

// Predicate expressions shared by mapping functions, algebra queries and
// configuration-rule conditions.

#include <functional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "twq/chrono.hpp"
#include "twq/value.hpp"

namespace twq {

/// `var.attr.field[0]`. A path whose last step is `domT` names the temporal
/// domain of a state.
struct Path {
  using Step = std::variant<std::string, std::int64_t>;

  std::string var;
  std::vector<Step> steps;

  bool names_domain() const;
  std::string to_string() const;

  friend bool operator==(const Path&, const Path&) = default;
};

enum class CmpOp { eq, ne, lt, le, gt, ge };
std::string_view cmp_op_text(CmpOp op);

/// Temporal test between two domains. `within` is inclusive containment of the
/// left domain in the right one (surface name `during`); `encloses` is the
/// converse (`contains`). Everything else is a strict Allen relation.
struct TemporalOp {
  enum class Kind { allen, within, encloses };
  Kind kind = Kind::within;
  AllenRelation relation = AllenRelation::Equals;

  static TemporalOp allen(AllenRelation r) { return {Kind::allen, r}; }
  static TemporalOp within_op() { return {Kind::within, AllenRelation::Equals}; }
  static TemporalOp encloses_op() { return {Kind::encloses, AllenRelation::Equals}; }

  std::string_view name() const;
  bool test(const TemporalDomain& x, const TemporalDomain& y) const;

  friend bool operator==(const TemporalOp& a, const TemporalOp& b) {
    return a.kind == b.kind && (a.kind != Kind::allen || a.relation == b.relation);
  }
};

/// `during`, `contains` or an Allen relation name.
std::optional<TemporalOp> parse_temporal_op(std::string_view name);

/// `Date('07-2000', 'mm-aaaa')`: a single grain. `format` is kept for printing.
struct DateLiteral {
  Instant instant;
  std::string format;
  TemporalDomain domain() const { return TemporalDomain(Interval::single(instant)); }
  friend bool operator==(const DateLiteral&, const DateLiteral&) = default;
};

/// `DomT('07-2000', '01-2001', 'mm-aaaa')`: the half-open window [from, until),
/// i.e. the closed interval from .. until-1 grain.
struct WindowLiteral {
  Instant from;
  Instant until;
  std::string format;
  TemporalDomain domain() const;
  friend bool operator==(const WindowLiteral&, const WindowLiteral&) = default;
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  struct Literal { Value value; };
  struct PathRef { Path path; };
  struct Date { DateLiteral literal; };
  struct Window { WindowLiteral literal; };
  struct Compare { CmpOp op; ExprPtr lhs, rhs; };
  struct Logical {
    bool conjunction = true;
    std::vector<ExprPtr> operands;
  };
  struct Not { ExprPtr operand; };
  struct Temporal { TemporalOp op; ExprPtr lhs, rhs; };

  std::variant<Literal, PathRef, Date, Window, Compare, Logical, Not, Temporal> node;
};

ExprPtr make_literal(Value v);
ExprPtr make_path(Path p);
ExprPtr make_date(DateLiteral d);
ExprPtr make_window(WindowLiteral w);
ExprPtr make_compare(CmpOp op, ExprPtr lhs, ExprPtr rhs);
ExprPtr make_logical(bool conjunction, std::vector<ExprPtr> operands);
ExprPtr make_not(ExprPtr operand);
ExprPtr make_temporal(TemporalOp op, ExprPtr lhs, ExprPtr rhs);

/// Deep structural equality; null pointers compare equal to each other.
bool same_expr(const ExprPtr& a, const ExprPtr& b);

/// Calls `fn` on every path in the expression.
void for_each_path(const Expr& e, const std::function<void(const Path&)>& fn);

using Operand = std::variant<Value, TemporalDomain>;

/// Supplies the value (or domain) a path denotes in the current binding.
using Resolver = std::function<Operand(const Path&)>;

Operand evaluate_operand(const Expr& e, const Resolver& resolve);
bool evaluate_predicate(const Expr& e, const Resolver& resolve);

/// Follows `steps[from..]` inside a value: field names (case/accent
/// insensitive) and list positions. Throws UnknownAttribute.
const Value& follow_steps(const Value& root, const std::vector<Path::Step>& steps, std::size_t from,
                          const Path& whole);

}  // namespace twq
