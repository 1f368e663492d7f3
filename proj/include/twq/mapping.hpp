#pragma once

// Construction (mapping) expressions: the structuring, population and set
// functions that build a warehouse class from the source.

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "twq/expr.hpp"

namespace twq {

struct MappingExpr;
using MappingPtr = std::shared_ptr<const MappingExpr>;

enum class MappingSetOp { union_, intersect, difference };

/// `target : pp.path`
struct Projection {
  std::string target;
  Path path;
  friend bool operator==(const Projection&, const Projection&) = default;
};

struct MappingExpr {
  struct Source { std::string class_name; };
  struct Select { MappingPtr input; ExprPtr predicate; };
  struct Join { MappingPtr left, right; ExprPtr predicate; };
  struct Project { MappingPtr input; std::vector<Projection> items; };
  struct Combine { MappingSetOp op; MappingPtr left, right; };

  /// Range variable naming this node's rows (`p Personnes`, `pp JOIN(...)`);
  /// empty when unnamed. An unnamed source is addressed by its class name.
  std::string alias;
  std::variant<Source, Select, Join, Project, Combine> node;
};

MappingPtr mapping_source(std::string alias, std::string class_name);
MappingPtr mapping_select(std::string alias, MappingPtr input, ExprPtr predicate);
MappingPtr mapping_join(std::string alias, MappingPtr left, MappingPtr right, ExprPtr predicate);
MappingPtr mapping_project(std::string alias, MappingPtr input, std::vector<Projection> items);
MappingPtr mapping_combine(std::string alias, MappingSetOp op, MappingPtr left, MappingPtr right);

bool same_mapping(const MappingPtr& a, const MappingPtr& b);

std::string_view mapping_set_op_name(MappingSetOp op);

}  // namespace twq
