#pragma once

// Canonical text for every parsed form. Printing and re-parsing yields an
// equal tree.

#include <string>

#include "twq/dsl/ast.hpp"
#include "twq/mapping.hpp"
#include "twq/model.hpp"

namespace twq::dsl {

std::string print_schema(const WarehouseSchema& s);
std::string print_rule(const ConfigRule& r);
std::string print_query(const QueryPtr& q);
std::string print_script(const QueryScript& s);
std::string print_expr(const Expr& e);
std::string print_mapping(const MappingExpr& m);

/// Scalar literal as written in source text ("quoted", 1.5, -3, true, null).
std::string print_literal(const Value& v);

}  // namespace twq::dsl
