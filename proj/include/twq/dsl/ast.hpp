#pragma once

// Query syntax tree: one node type carrying the operator and its operands.

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "twq/algebra.hpp"
#include "twq/dsl/lexer.hpp"
#include "twq/expr.hpp"

namespace twq::dsl {

enum class QueryOp {
  Ref,  // class extent or a name bound earlier in the script
  VUnion, VIntersect, VDifference,
  IUnion, IIntersect, IDifference,
  Flatten, DupElim, EmptyElim,
  Select, Project, Join, Nest, UnNest,
  Current, Past, Archive,
  State, IJoin, UJoin, UGroup, DGroup,
  MakeSerie, Agreg, ACum, AMove, ScaleUp, ScaleDown,
};

std::string_view op_name(QueryOp op);
std::optional<QueryOp> parse_op_name(std::string_view name);

struct QueryNode;
using QueryPtr = std::shared_ptr<const QueryNode>;

struct QueryNode {
  QueryOp op = QueryOp::Ref;
  /// Ref: the referenced name. Nest/UnNest: the attribute.
  std::string name;
  std::vector<QueryPtr> children;
  /// Range variable per child; empty when none was written.
  std::vector<std::string> vars;
  ExprPtr predicate;               // Select, Join, IJoin, UJoin (may be null for joins)
  std::vector<ProjectItem> items;  // Project
  ExprPtr window;                  // State: a Date or DomT literal
  TemporalOp relation;             // State
  Unit unit = Unit::month;         // UGroup, ScaleUp, ScaleDown
  Duration duration;               // DGroup, AMove
  AggSpec spec;                    // Agreg, ACum, AMove, ScaleUp, ScaleDown
  SourcePos pos;                   // not part of equality
};

/// `Name = query;` bindings followed by the result query.
struct QueryScript {
  std::vector<std::pair<std::string, QueryPtr>> bindings;
  QueryPtr result;
};

bool same_query(const QueryPtr& a, const QueryPtr& b);
bool same_script(const QueryScript& a, const QueryScript& b);

/// The variable a child is addressed by: its explicit range variable, or the
/// referenced name for a bare reference.
std::string child_var(const QueryNode& n, std::size_t i);

}  // namespace twq::dsl
