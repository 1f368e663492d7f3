#pragma once

// Conversions between values and JSON documents, shared by snapshot files,
// the store and the JSON query output.

#include "json.hpp"
#include "twq/chrono.hpp"
#include "twq/value.hpp"

namespace twq {

using Json = nlohmann::ordered_json;

/// Records become objects (field order kept), references `{"$ref": key}`.
Json value_to_json(const Value& v);
Json record_to_json(const Record& r);

/// Inverse of value_to_json. Integral JSON numbers become integers. Throws FormatError.
Value value_from_json(const Json& j);
Record record_from_json(const Json& j);

}  // namespace twq
