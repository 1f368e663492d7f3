#pragma once

// Text output of query results and object histories: the bracketed
// paper-style notation or JSON.

#include <string>

#include "twq/algebra.hpp"
#include "twq/json_io.hpp"
#include "twq/model.hpp"

namespace twq {

enum class OutputStyle { paper, json };

/// One decimal, truncated toward zero, comma separator: 79.666 -> "79,6",
/// 79.0 -> "79".
std::string paper_number(double x);
std::string paper_value(const Value& v);
/// "<[07-2000;07-2000] ; [09-2000;10-2000]>". Days print as dd-mm-yyyy,
/// months as mm-yyyy, coarser grains as the months they span.
std::string paper_domain(const TemporalDomain& d);
std::string paper_state(const State& s);

std::string render_paper(const Collection& c);
Json render_json(const Collection& c);
std::string render(const Collection& c, OutputStyle style);

/// Header, current value, past and archive states of one object.
std::string render_object(const WarehouseObject& o, OutputStyle style);

}  // namespace twq
