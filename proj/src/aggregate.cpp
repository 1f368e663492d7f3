#include "twq/aggregate.hpp"

#include <algorithm>

namespace twq {

namespace {

bool ordered_less(const Value& a, const Value& b) {
  const auto c = compare_values(a, b);
  if (!c || *c == std::partial_ordering::unordered) {
    throw Error(ErrorCode::TypeMismatch, "cannot order " + a.to_string() + " and " + b.to_string());
  }
  return *c == std::partial_ordering::less;
}

}  // namespace

void Accumulator::add(const Value& v) {
  ++elems_;
  if (v.is_null()) return;
  if (v.kind() == ValueKind::record) {
    if (!composite_ && numeric_ > 0) throw Error(ErrorCode::TypeMismatch, "mixing scalar and composite values");
    composite_ = true;
    for (const auto& [name, field] : v.as_record().fields()) {
      auto it = std::find_if(fields_.begin(), fields_.end(), [&](const auto& f) { return f.first == name; });
      if (it == fields_.end()) {
        fields_.emplace_back(name, Accumulator(kind_));
        it = std::prev(fields_.end());
      }
      it->second.add(field);
    }
    return;
  }
  if (composite_) throw Error(ErrorCode::TypeMismatch, "mixing scalar and composite values");
  if (kind_ == AggKind::count) {
    ++numeric_;
    return;
  }
  if (v.is_numeric()) {
    if (v.kind() == ValueKind::integer) {
      isum_ += v.as_int();
    } else {
      all_int_ = false;
    }
    dsum_ += v.as_double();
  } else if (kind_ == AggKind::avg || kind_ == AggKind::sum ||
             (v.kind() != ValueKind::string)) {
    throw Error(ErrorCode::TypeMismatch,
                std::string(agg_kind_name(kind_)) + " cannot aggregate " + std::string(value_kind_name(v.kind())));
  }
  if (numeric_ == 0 || ordered_less(v, min_)) min_ = v;
  if (numeric_ == 0 || ordered_less(max_, v)) max_ = v;
  ++numeric_;
}

void Accumulator::merge(const Accumulator& other) {
  if (other.elems_ == 0) return;
  if (elems_ == 0) {
    *this = other;
    return;
  }
  if ((composite_ && other.numeric_ > 0) || (other.composite_ && numeric_ > 0)) {
    throw Error(ErrorCode::TypeMismatch, "mixing scalar and composite values");
  }
  elems_ += other.elems_;
  composite_ = composite_ || other.composite_;
  for (const auto& [name, acc] : other.fields_) {
    auto it = std::find_if(fields_.begin(), fields_.end(), [&](const auto& f) { return f.first == name; });
    if (it == fields_.end()) {
      fields_.emplace_back(name, acc);
    } else {
      it->second.merge(acc);
    }
  }
  if (other.numeric_ == 0) return;
  if (kind_ != AggKind::count) {
    if (numeric_ == 0 || ordered_less(other.min_, min_)) min_ = other.min_;
    if (numeric_ == 0 || ordered_less(max_, other.max_)) max_ = other.max_;
  }
  numeric_ += other.numeric_;
  all_int_ = all_int_ && other.all_int_;
  isum_ += other.isum_;
  dsum_ += other.dsum_;
}

Value Accumulator::result() const {
  if (kind_ == AggKind::count) return Value(elems_);
  if (composite_) {
    Record r;
    for (const auto& [name, acc] : fields_) r.set(name, acc.result());
    return Value(std::move(r));
  }
  if (numeric_ == 0) return Value();
  switch (kind_) {
    case AggKind::avg: return Value(dsum_ / static_cast<double>(numeric_));
    case AggKind::sum: return all_int_ ? Value(isum_) : Value(dsum_);
    case AggKind::min: return min_;
    case AggKind::max: return max_;
    case AggKind::count: break;
  }
  return Value();
}

Value Accumulator::support() const {
  Record r;
  r.set("elems", Value(elems_));
  if (composite_) {
    Record fields;
    for (const auto& [name, acc] : fields_) fields.set(name, acc.support());
    r.set("fields", Value(std::move(fields)));
    return Value(std::move(r));
  }
  r.set("n", Value(numeric_));
  if (numeric_ > 0 && kind_ != AggKind::count) {
    r.set("sum", all_int_ ? Value(isum_) : Value(dsum_));
    r.set("min", min_);
    r.set("max", max_);
  }
  return Value(std::move(r));
}

Accumulator Accumulator::from_support(AggKind kind, const Value& support) {
  if (support.kind() != ValueKind::record) throw Error(ErrorCode::FormatError, "aggregation support must be a record");
  const Record& r = support.as_record();
  auto integer = [&](const char* name) {
    const Value* v = r.find(name);
    if (!v || v->kind() != ValueKind::integer) {
      throw Error(ErrorCode::FormatError, std::string("aggregation support lacks '") + name + "'");
    }
    return v->as_int();
  };
  Accumulator acc(kind);
  acc.elems_ = integer("elems");
  if (const Value* fields = r.find("fields")) {
    acc.composite_ = true;
    for (const auto& [name, sub] : fields->as_record().fields()) acc.fields_.emplace_back(name, from_support(kind, sub));
    return acc;
  }
  acc.numeric_ = integer("n");
  if (acc.numeric_ > 0 && kind != AggKind::count) {
    const Value* sum = r.find("sum");
    const Value* min = r.find("min");
    const Value* max = r.find("max");
    if (!sum || !min || !max) throw Error(ErrorCode::FormatError, "incomplete aggregation support");
    if (sum->kind() == ValueKind::integer) {
      acc.isum_ = sum->as_int();
      acc.dsum_ = static_cast<double>(acc.isum_);
    } else if (sum->kind() == ValueKind::decimal) {
      acc.all_int_ = false;
      acc.dsum_ = sum->as_double();
    }
    acc.min_ = *min;
    acc.max_ = *max;
  }
  return acc;
}

Value aggregate_values(AggKind kind, const std::vector<Value>& values) {
  Accumulator acc(kind);
  for (const auto& v : values) acc.add(v);
  return acc.result();
}

}  // namespace twq
