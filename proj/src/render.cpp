#include "twq/render.hpp"

#include <cmath>
#include <cstdio>

namespace twq {

namespace {

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += sep;
    out += parts[i];
  }
  return out;
}

std::string two(unsigned v) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "%02u", v % 100);
  return buf;
}

// Month grains index months since year 0.
std::string month_text(std::int64_t index) {
  const std::int64_t year = floor_div(index, 12);
  const auto month = static_cast<unsigned>(index - year * 12 + 1);
  return two(month) + "-" + std::to_string(year);
}

std::string day_text(Instant d) {
  const std::string iso = d.to_string();  // YYYY-MM-DD
  const auto a = iso.rfind('-');
  const auto b = iso.rfind('-', a - 1);
  return iso.substr(a + 1) + "-" + iso.substr(b + 1, a - b - 1) + "-" + iso.substr(0, b);
}

std::string grain_text(Instant i) {
  return i.unit() == Unit::day ? day_text(i) : month_text(convert_grain(i, Unit::month).first());
}

std::string interval_text(const Interval& iv) {
  if (iv.unit() == Unit::day) return "[" + day_text(iv.start()) + ";" + day_text(iv.end()) + "]";
  const std::int64_t lo = convert_grain(iv.start(), Unit::month).first();
  const std::int64_t hi = convert_grain(iv.end(), Unit::month).last();
  return "[" + month_text(lo) + ";" + month_text(hi) + "]";
}

std::string record_fields(const Record& r) {
  std::vector<std::string> parts;
  for (const auto& [n, v] : r.fields()) parts.push_back(n + "=" + paper_value(v));
  return join(parts, " ; ");
}

std::string bracket(std::vector<std::string> fields) {
  std::erase(fields, std::string());
  return "[" + join(fields, " ; ") + "]";
}

std::string element(const ObjectItem& o) {
  return bracket({"oid=" + o.oid.value, record_fields(o.value)});
}

std::string element(const State& s) { return paper_state(s); }

std::string element(const Tuple& t) {
  return bracket({record_fields(t.value), t.left_domain ? "left.domT=" + paper_domain(*t.left_domain) : "",
                  t.right_domain ? "right.domT=" + paper_domain(*t.right_domain) : ""});
}

std::string element(const Group& g) {
  std::vector<std::string> members;
  for (const auto& m : g.members) members.push_back("[" + record_fields(m) + "]");
  return "(" + paper_domain(TemporalDomain(g.window)) + " : {" + join(members, " ; ") + "})";
}

template <typename T>
std::string block(const std::vector<T>& xs, char open, char close) {
  std::vector<std::string> parts;
  for (const auto& x : xs) parts.push_back(element(x));
  return std::string(1, open) + join(parts, " ;\n") + std::string(1, close);
}

Json json_state(const State& s) {
  Json j = Json::object();
  j["value"] = record_to_json(s.value);
  j["domain"] = s.domain.to_string();
  return j;
}

Json json_states(const std::vector<State>& xs) {
  Json a = Json::array();
  for (const auto& s : xs) a.push_back(json_state(s));
  return a;
}

Json json_objects(const std::vector<ObjectItem>& xs) {
  Json a = Json::array();
  for (const auto& o : xs) {
    Json j = Json::object();
    j["oid"] = o.oid.value;
    j["class"] = o.class_name;
    j["value"] = record_to_json(o.value);
    a.push_back(std::move(j));
  }
  return a;
}

}  // namespace

std::string paper_number(double x) {
  const auto tenths = static_cast<long long>(std::trunc(x * 10 + std::copysign(1e-9, x)));
  const long long whole = tenths / 10;
  const long long frac = std::llabs(tenths % 10);
  std::string out = (tenths < 0 && whole == 0 ? "-" : "") + std::to_string(whole);
  if (frac != 0) out += "," + std::to_string(frac);
  return out;
}

std::string paper_value(const Value& v) {
  switch (v.kind()) {
    case ValueKind::null: return "null";
    case ValueKind::boolean: return v.as_bool() ? "true" : "false";
    case ValueKind::integer: return std::to_string(v.as_int());
    case ValueKind::decimal: return paper_number(v.as_double());
    case ValueKind::string: return "\"" + v.as_string() + "\"";
    case ValueKind::list: {
      std::vector<std::string> parts;
      for (const auto& e : v.as_list()) parts.push_back(paper_value(e));
      return "{" + join(parts, " ; ") + "}";
    }
    case ValueKind::record: return "[" + record_fields(v.as_record()) + "]";
    case ValueKind::ref: return v.as_ref().key;
  }
  return "?";
}

std::string paper_domain(const TemporalDomain& d) {
  std::vector<std::string> parts;
  for (const auto& iv : d.intervals()) parts.push_back(interval_text(iv));
  return "<" + join(parts, " ; ") + ">";
}

std::string paper_state(const State& s) {
  return bracket({record_fields(s.value), "domT=" + paper_domain(s.domain)});
}

std::string render_paper(const Collection& c) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, ObjectSet>) {
          return block(x.items, '{', '}');
        } else if constexpr (std::is_same_v<T, StateSet>) {
          return block(x.states, '{', '}');
        } else if constexpr (std::is_same_v<T, Series>) {
          return block(x.states, '<', '>');
        } else if constexpr (std::is_same_v<T, TupleSet>) {
          return block(x.tuples, '{', '}');
        } else if constexpr (std::is_same_v<T, GroupSet>) {
          return block(x.groups, '{', '}');
        } else if constexpr (std::is_same_v<T, ObjectSetSet>) {
          std::vector<std::string> parts;
          for (const auto& s : x.sets) parts.push_back(block(s.items, '{', '}'));
          return "{" + join(parts, " ;\n") + "}";
        } else if constexpr (std::is_same_v<T, StateSetSet>) {
          std::vector<std::string> parts;
          for (const auto& s : x.sets) parts.push_back(block(s.states, '{', '}'));
          return "{" + join(parts, " ;\n") + "}";
        } else {
          return "[" + record_fields(x) + "]";
        }
      },
      c);
}

Json render_json(const Collection& c) {
  Json out = Json::object();
  out["kind"] = std::string(kind_name(kind_of(c)));
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, ObjectSet>) {
          out["elements"] = json_objects(x.items);
        } else if constexpr (std::is_same_v<T, StateSet> || std::is_same_v<T, Series>) {
          out["elements"] = json_states(x.states);
        } else if constexpr (std::is_same_v<T, TupleSet>) {
          Json a = Json::array();
          for (const auto& t : x.tuples) {
            Json j = Json::object();
            j["value"] = record_to_json(t.value);
            if (t.left_domain) j["left_domain"] = t.left_domain->to_string();
            if (t.right_domain) j["right_domain"] = t.right_domain->to_string();
            a.push_back(std::move(j));
          }
          out["elements"] = std::move(a);
        } else if constexpr (std::is_same_v<T, GroupSet>) {
          Json a = Json::array();
          for (const auto& g : x.groups) {
            Json j = Json::object();
            j["window"] = g.window.to_string();
            Json m = Json::array();
            for (const auto& r : g.members) m.push_back(record_to_json(r));
            j["members"] = std::move(m);
            a.push_back(std::move(j));
          }
          out["elements"] = std::move(a);
        } else if constexpr (std::is_same_v<T, ObjectSetSet>) {
          Json a = Json::array();
          for (const auto& s : x.sets) a.push_back(json_objects(s.items));
          out["sets"] = std::move(a);
        } else if constexpr (std::is_same_v<T, StateSetSet>) {
          Json a = Json::array();
          for (const auto& s : x.sets) a.push_back(json_states(s.states));
          out["sets"] = std::move(a);
        } else {
          out["value"] = record_to_json(x);
        }
      },
      c);
  return out;
}

std::string render(const Collection& c, OutputStyle style) {
  return style == OutputStyle::paper ? render_paper(c) : render_json(c).dump(2);
}

std::string render_object(const WarehouseObject& o, OutputStyle style) {
  if (style == OutputStyle::json) {
    Json j = Json::object();
    j["oid"] = o.oid.value;
    j["class"] = o.class_name;
    j["key"] = o.source_key;
    j["active"] = o.active;
    j["since"] = o.since.to_string();
    j["current"] = record_to_json(o.current);
    j["past"] = json_states(o.past);
    j["archive"] = json_states(o.archive);
    return j.dump(2);
  }
  std::string out = o.oid.value + " " + o.class_name + " key=[" + join(o.source_key, ",") + "] " +
                    (o.active ? "active" : "inactive") + ", current since " + grain_text(o.since) + "\n";
  out += "current: [" + record_fields(o.current) + "]\n";
  out += "past:\n" + block(o.past, '{', '}') + "\n";
  out += "archive:\n" + block(o.archive, '{', '}') + "\n";
  return out;
}

}  // namespace twq
