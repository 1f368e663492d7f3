#pragma once

// Static checking of query scripts: operand kinds, variable binding and,
// where the element structure is known, attribute names.

#include <map>
#include <optional>

#include "twq/diagnostic.hpp"
#include "twq/dsl/ast.hpp"
#include "twq/model.hpp"

namespace twq::dsl {

struct TypeReport {
  Diagnostics diagnostics;
  std::optional<Kind> result;
  std::map<const QueryNode*, Kind> kinds;

  bool ok() const { return !has_errors(diagnostics); }
};

TypeReport typecheck(const QueryScript& script, const WarehouseSchema& schema);

}  // namespace twq::dsl
