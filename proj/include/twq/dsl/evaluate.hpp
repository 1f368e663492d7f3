#pragma once

// Bottom-up evaluation of query scripts against a warehouse.

#include "twq/algebra.hpp"
#include "twq/dsl/ast.hpp"
#include "twq/model.hpp"

namespace twq::dsl {

/// Class names denote the whole extension of the class (inactive objects
/// included); current states are closed at the warehouse's last refresh.
/// Errors keep their code and name the failing operator and its position.
Collection evaluate(const QueryScript& script, const Warehouse& w);

}  // namespace twq::dsl
