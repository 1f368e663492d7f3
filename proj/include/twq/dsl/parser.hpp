#pragma once

// Parsers for the schema DDL (classes, source interfaces, environments,
// rules), configuration rules, construction expressions and queries.
// All of them throw SyntaxError carrying "line:column".

#include <string>
#include <string_view>

#include "twq/dsl/ast.hpp"
#include "twq/mapping.hpp"
#include "twq/model.hpp"

namespace twq::dsl {

WarehouseSchema parse_ddl(std::string_view text);

/// Also throws UnsupportedEvent / UnsupportedAction.
ConfigRule parse_rule(std::string_view text);

QueryScript parse_query(std::string_view text);
ExprPtr parse_predicate(std::string_view text);
MappingPtr parse_mapping(std::string_view text);

/// Date text in a pattern such as 'mm-aaaa', 'jj-mm-aaaa', 'aaaa', 'aaaa-mm'
/// (English 'yyyy'/'dd' also accepted). An empty pattern means the ISO forms
/// of Instant::parse. The pattern's finest field decides the unit.
Instant parse_dated(std::string_view text, std::string_view pattern);
std::string format_dated(Instant i, std::string_view pattern);

}  // namespace twq::dsl
