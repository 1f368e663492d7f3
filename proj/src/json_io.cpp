#include "twq/json_io.hpp"

namespace twq {

Json record_to_json(const Record& r) {
  Json out = Json::object();
  for (const auto& [name, value] : r.fields()) out[name] = value_to_json(value);
  return out;
}

Json value_to_json(const Value& v) {
  switch (v.kind()) {
    case ValueKind::null: return nullptr;
    case ValueKind::boolean: return v.as_bool();
    case ValueKind::integer: return v.as_int();
    case ValueKind::decimal: return v.as_double();
    case ValueKind::string: return v.as_string();
    case ValueKind::list: {
      Json out = Json::array();
      for (const auto& e : v.as_list()) out.push_back(value_to_json(e));
      return out;
    }
    case ValueKind::record: return record_to_json(v.as_record());
    case ValueKind::ref: return Json{{"$ref", v.as_ref().key}};
  }
  return nullptr;
}

Record record_from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::FormatError, "expected a JSON object, got " + j.dump());
  Record r;
  for (const auto& [name, value] : j.items()) r.set(name, value_from_json(value));
  return r;
}

Value value_from_json(const Json& j) {
  switch (j.type()) {
    case Json::value_t::null: return Value();
    case Json::value_t::boolean: return Value(j.get<bool>());
    case Json::value_t::number_integer: return Value(j.get<std::int64_t>());
    case Json::value_t::number_unsigned: return Value(static_cast<std::int64_t>(j.get<std::uint64_t>()));
    case Json::value_t::number_float: return Value(j.get<double>());
    case Json::value_t::string: return Value(j.get<std::string>());
    case Json::value_t::array: {
      List l;
      for (const auto& e : j) l.push_back(value_from_json(e));
      return Value(std::move(l));
    }
    case Json::value_t::object:
      if (j.size() == 1 && j.contains("$ref")) {
        if (!j["$ref"].is_string()) throw Error(ErrorCode::FormatError, "$ref must be a string");
        return Value(Ref{j["$ref"].get<std::string>()});
      }
      return Value(record_from_json(j));
    default: throw Error(ErrorCode::FormatError, "unsupported JSON value " + j.dump());
  }
}

}  // namespace twq
