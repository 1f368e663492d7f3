#include "twq/value.hpp"

#include <charconv>

#include "twq/error.hpp"
#include "twq/names.hpp"

namespace twq {

namespace {

Error kind_error(ValueKind have, std::string_view want) {
  return Error(ErrorCode::TypeMismatch,
               "expected " + std::string(want) + ", got " + std::string(value_kind_name(have)));
}

std::string number_text(double d) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, d);
  return std::string(buf, ptr);
}

}  // namespace

Record::Record(std::initializer_list<Field> fields) {
  for (const auto& f : fields) set(f.first, f.second);
}

const Value* Record::find(std::string_view name) const {
  for (const auto& f : fields_) {
    if (f.first == name) return &f.second;
  }
  const std::string folded = fold_identifier(name);
  for (const auto& f : fields_) {
    if (fold_identifier(f.first) == folded) return &f.second;
  }
  return nullptr;
}

Value* Record::find(std::string_view name) {
  return const_cast<Value*>(static_cast<const Record*>(this)->find(name));
}

void Record::set(std::string name, Value value) {
  for (auto& f : fields_) {
    if (f.first == name) {
      f.second = std::move(value);
      return;
    }
  }
  fields_.emplace_back(std::move(name), std::move(value));
}

bool operator==(const Record& a, const Record& b) { return a.fields_ == b.fields_; }

bool Value::as_bool() const {
  if (auto* p = std::get_if<bool>(&v_)) return *p;
  throw kind_error(kind(), "boolean");
}

std::int64_t Value::as_int() const {
  if (auto* p = std::get_if<std::int64_t>(&v_)) return *p;
  throw kind_error(kind(), "integer");
}

double Value::as_double() const {
  if (auto* p = std::get_if<std::int64_t>(&v_)) return static_cast<double>(*p);
  if (auto* p = std::get_if<double>(&v_)) return *p;
  throw kind_error(kind(), "number");
}

const std::string& Value::as_string() const {
  if (auto* p = std::get_if<std::string>(&v_)) return *p;
  throw kind_error(kind(), "string");
}

const List& Value::as_list() const {
  if (auto* p = std::get_if<List>(&v_)) return *p;
  throw kind_error(kind(), "list");
}

const Record& Value::as_record() const {
  if (auto* p = std::get_if<Record>(&v_)) return *p;
  throw kind_error(kind(), "record");
}

Record& Value::as_record() {
  if (auto* p = std::get_if<Record>(&v_)) return *p;
  throw kind_error(kind(), "record");
}

const Ref& Value::as_ref() const {
  if (auto* p = std::get_if<Ref>(&v_)) return *p;
  throw kind_error(kind(), "reference");
}

std::string Value::to_string() const {
  switch (kind()) {
    case ValueKind::null: return "null";
    case ValueKind::boolean: return as_bool() ? "true" : "false";
    case ValueKind::integer: return std::to_string(as_int());
    case ValueKind::decimal: return number_text(as_double());
    case ValueKind::string: return "\"" + as_string() + "\"";
    case ValueKind::ref: return "&" + as_ref().key;
    case ValueKind::list: {
      std::string s = "[";
      const auto& l = as_list();
      for (std::size_t i = 0; i < l.size(); ++i) s += (i ? ", " : "") + l[i].to_string();
      return s + "]";
    }
    case ValueKind::record: {
      std::string s = "{";
      const auto& r = as_record().fields();
      for (std::size_t i = 0; i < r.size(); ++i) {
        s += (i ? ", " : "") + r[i].first + "=" + r[i].second.to_string();
      }
      return s + "}";
    }
  }
  return "?";
}

std::string_view value_kind_name(ValueKind k) {
  switch (k) {
    case ValueKind::null: return "null";
    case ValueKind::boolean: return "boolean";
    case ValueKind::integer: return "integer";
    case ValueKind::decimal: return "decimal";
    case ValueKind::string: return "string";
    case ValueKind::list: return "list";
    case ValueKind::record: return "record";
    case ValueKind::ref: return "reference";
  }
  return "?";
}

std::optional<std::partial_ordering> compare_values(const Value& a, const Value& b) {
  if (a.is_numeric() && b.is_numeric()) {
    if (a.kind() == ValueKind::integer && b.kind() == ValueKind::integer) {
      return a.as_int() <=> b.as_int();
    }
    return a.as_double() <=> b.as_double();
  }
  if (a.kind() != b.kind()) return std::nullopt;
  switch (a.kind()) {
    case ValueKind::string: return a.as_string() <=> b.as_string();
    case ValueKind::null: return std::partial_ordering::equivalent;
    case ValueKind::boolean:
    case ValueKind::ref:
    case ValueKind::list:
    case ValueKind::record:
      return a == b ? std::partial_ordering::equivalent : std::partial_ordering::unordered;
    default: return std::nullopt;
  }
}

bool total_less(const Record& a, const Record& b) {
  const auto& fa = a.fields();
  const auto& fb = b.fields();
  for (std::size_t i = 0; i < fa.size() && i < fb.size(); ++i) {
    if (fa[i].first != fb[i].first) return fa[i].first < fb[i].first;
    if (total_less(fa[i].second, fb[i].second)) return true;
    if (total_less(fb[i].second, fa[i].second)) return false;
  }
  return fa.size() < fb.size();
}

bool total_less(const Value& a, const Value& b) {
  if (a.kind() != b.kind()) return a.kind() < b.kind();
  switch (a.kind()) {
    case ValueKind::null: return false;
    case ValueKind::boolean: return a.as_bool() < b.as_bool();
    case ValueKind::integer: return a.as_int() < b.as_int();
    case ValueKind::decimal: return a.as_double() < b.as_double();
    case ValueKind::string: return a.as_string() < b.as_string();
    case ValueKind::ref: return a.as_ref() < b.as_ref();
    case ValueKind::list: {
      const auto& la = a.as_list();
      const auto& lb = b.as_list();
      for (std::size_t i = 0; i < la.size() && i < lb.size(); ++i) {
        if (total_less(la[i], lb[i])) return true;
        if (total_less(lb[i], la[i])) return false;
      }
      return la.size() < lb.size();
    }
    case ValueKind::record: return total_less(a.as_record(), b.as_record());
  }
  return false;
}

}  // namespace twq
