#include "twq/chrono.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cstdio>

#include "twq/names.hpp"

namespace twq {

namespace {

namespace cr = std::chrono;

int rank(Unit u) { return static_cast<int>(u); }

// Months per grain for the month-aligned units; 0 for day.
std::int64_t months_per_grain(Unit u) {
  switch (u) {
    case Unit::day: return 0;
    case Unit::month: return 1;
    case Unit::quarter: return 3;
    case Unit::semester: return 6;
    case Unit::year: return 12;
  }
  return 0;
}

cr::sys_days month_start(std::int64_t month_index) {
  const std::int64_t y = floor_div(month_index, 12);
  const auto m = static_cast<unsigned>(month_index - y * 12 + 1);
  return cr::sys_days{cr::year{static_cast<int>(y)} / cr::month{m} / cr::day{1}};
}

cr::sys_days first_day(Instant i) {
  if (i.unit() == Unit::day) return cr::sys_days{cr::days{i.index()}};
  return month_start(i.index() * months_per_grain(i.unit()));
}

cr::sys_days last_day(Instant i) {
  if (i.unit() == Unit::day) return first_day(i);
  return month_start((i.index() + 1) * months_per_grain(i.unit())) - cr::days{1};
}

std::int64_t grain_containing(Unit target, cr::sys_days d) {
  if (target == Unit::day) return d.time_since_epoch().count();
  const cr::year_month_day ymd{d};
  const std::int64_t mi =
      static_cast<std::int64_t>(static_cast<int>(ymd.year())) * 12 + static_cast<unsigned>(ymd.month()) - 1;
  return floor_div(mi, months_per_grain(target));
}

Error bad_instant(std::string_view text) {
  return Error(ErrorCode::InvalidInstant, "cannot parse instant '" + std::string(text) + "'");
}

int parse_int(std::string_view s, std::string_view whole) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) throw bad_instant(whole);
  return value;
}

void require_unit(const TemporalDomain& x, const TemporalDomain& y, const char* op) {
  if (x.unit() && y.unit() && *x.unit() != *y.unit()) {
    throw Error(ErrorCode::MixedUnits, std::string(op) + ": " + std::string(unit_name(*x.unit())) +
                                           " vs " + std::string(unit_name(*y.unit())));
  }
}

}  // namespace

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::string_view unit_name(Unit u) {
  switch (u) {
    case Unit::day: return "day";
    case Unit::month: return "month";
    case Unit::quarter: return "quarter";
    case Unit::semester: return "semester";
    case Unit::year: return "year";
  }
  return "?";
}

std::optional<Unit> parse_unit(std::string_view name) {
  const std::string n = fold_identifier(name);
  if (n == "day" || n == "jour") return Unit::day;
  if (n == "month" || n == "mois") return Unit::month;
  if (n == "quarter" || n == "trimestre") return Unit::quarter;
  if (n == "semester" || n == "semestre") return Unit::semester;
  if (n == "year" || n == "annee" || n == "an") return Unit::year;
  return std::nullopt;
}

bool finer_than(Unit a, Unit b) { return rank(a) < rank(b); }

bool comparable(Unit, Unit) { return true; }

// ---------------------------------------------------------------------------
// Instant

Instant Instant::day(int year, unsigned month, unsigned day) {
  const cr::year_month_day ymd{cr::year{year}, cr::month{month}, cr::day{day}};
  if (!ymd.ok()) throw Error(ErrorCode::InvalidInstant, "invalid calendar day");
  return {Unit::day, cr::sys_days{ymd}.time_since_epoch().count()};
}

Instant Instant::month(int year, unsigned month) {
  if (month < 1 || month > 12) throw Error(ErrorCode::InvalidInstant, "month out of range");
  return {Unit::month, static_cast<std::int64_t>(year) * 12 + month - 1};
}

Instant Instant::quarter(int year, unsigned quarter) {
  if (quarter < 1 || quarter > 4) throw Error(ErrorCode::InvalidInstant, "quarter out of range");
  return {Unit::quarter, static_cast<std::int64_t>(year) * 4 + quarter - 1};
}

Instant Instant::semester(int year, unsigned semester) {
  if (semester < 1 || semester > 2) throw Error(ErrorCode::InvalidInstant, "semester out of range");
  return {Unit::semester, static_cast<std::int64_t>(year) * 2 + semester - 1};
}

Instant Instant::year(int year) { return {Unit::year, year}; }

Instant Instant::parse(std::string_view text) {
  std::string_view t = text;
  while (!t.empty() && std::isspace(static_cast<unsigned char>(t.front()))) t.remove_prefix(1);
  while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) t.remove_suffix(1);
  if (t.size() < 4) throw bad_instant(text);
  const int y = parse_int(t.substr(0, 4), text);
  if (t.size() == 4) return year(y);
  if (t[4] != '-') throw bad_instant(text);
  std::string_view rest = t.substr(5);
  if (rest.size() == 2 && (rest[0] == 'Q' || rest[0] == 'q')) {
    return quarter(y, static_cast<unsigned>(parse_int(rest.substr(1), text)));
  }
  if (rest.size() == 2 && (rest[0] == 'S' || rest[0] == 's')) {
    return semester(y, static_cast<unsigned>(parse_int(rest.substr(1), text)));
  }
  if (rest.size() == 2) return month(y, static_cast<unsigned>(parse_int(rest, text)));
  if (rest.size() == 5 && rest[2] == '-') {
    return day(y, static_cast<unsigned>(parse_int(rest.substr(0, 2), text)),
               static_cast<unsigned>(parse_int(rest.substr(3, 2), text)));
  }
  throw bad_instant(text);
}

int Instant::calendar_year() const {
  return static_cast<int>(cr::year_month_day{first_day(*this)}.year());
}

std::string Instant::to_string() const {
  char buf[64];
  switch (unit_) {
    case Unit::day: {
      const cr::year_month_day ymd{first_day(*this)};
      std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                    static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
      break;
    }
    case Unit::month: {
      const std::int64_t y = floor_div(index_, 12);
      std::snprintf(buf, sizeof buf, "%04lld-%02lld", static_cast<long long>(y),
                    static_cast<long long>(index_ - y * 12 + 1));
      break;
    }
    case Unit::quarter: {
      const std::int64_t y = floor_div(index_, 4);
      std::snprintf(buf, sizeof buf, "%04lld-Q%lld", static_cast<long long>(y),
                    static_cast<long long>(index_ - y * 4 + 1));
      break;
    }
    case Unit::semester: {
      const std::int64_t y = floor_div(index_, 2);
      std::snprintf(buf, sizeof buf, "%04lld-S%lld", static_cast<long long>(y),
                    static_cast<long long>(index_ - y * 2 + 1));
      break;
    }
    case Unit::year:
      std::snprintf(buf, sizeof buf, "%04lld", static_cast<long long>(index_));
      break;
  }
  return buf;
}

// ---------------------------------------------------------------------------
// Interval

Interval::Interval(Instant start, Instant end) : start_(start), end_(end) {
  if (start.unit() != end.unit()) {
    throw Error(ErrorCode::MixedUnits, "interval bounds " + start.to_string() + " and " + end.to_string());
  }
  if (end.index() < start.index()) {
    throw Error(ErrorCode::InvalidInterval, "interval end before start: [" + start.to_string() + "," +
                                                end.to_string() + "]");
  }
}

bool Interval::contains(Instant i) const {
  return i.unit() == unit() && i.index() >= first() && i.index() <= last();
}

std::string Interval::to_string() const {
  return "[" + start_.to_string() + "," + end_.to_string() + "]";
}

// ---------------------------------------------------------------------------
// TemporalDomain

TemporalDomain::TemporalDomain(Interval interval) : unit_(interval.unit()), intervals_{interval} {}

TemporalDomain TemporalDomain::normalize(std::span<const Interval> raw) {
  TemporalDomain out;
  if (raw.empty()) return out;
  const Unit u = raw.front().unit();
  for (const auto& i : raw) {
    if (i.unit() != u) throw Error(ErrorCode::MixedUnits, "normalize: intervals of different units");
  }
  std::vector<Interval> sorted(raw.begin(), raw.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const Interval& a, const Interval& b) { return a.first() < b.first(); });
  out.unit_ = u;
  for (const auto& i : sorted) {
    if (!out.intervals_.empty() && i.first() <= out.intervals_.back().last() + 1) {
      Interval& back = out.intervals_.back();
      if (i.last() > back.last()) back = Interval(back.start(), i.end());
    } else {
      out.intervals_.push_back(i);
    }
  }
  return out;
}

TemporalDomain TemporalDomain::parse(std::string_view text) {
  auto fail = [&] {
    return Error(ErrorCode::InvalidInstant, "cannot parse domain '" + std::string(text) + "'");
  };
  std::string compact;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) compact.push_back(c);
  }
  if (compact.size() < 2 || compact.front() != '<' || compact.back() != '>') throw fail();
  std::string_view body(compact);
  body = body.substr(1, body.size() - 2);
  std::vector<Interval> raw;
  while (!body.empty()) {
    if (body.front() != '[') throw fail();
    const auto close = body.find(']');
    if (close == std::string_view::npos) throw fail();
    std::string_view inner = body.substr(1, close - 1);
    const auto sep = inner.find_first_of(",;");
    if (sep == std::string_view::npos) throw fail();
    raw.emplace_back(Instant::parse(inner.substr(0, sep)), Instant::parse(inner.substr(sep + 1)));
    body.remove_prefix(close + 1);
    if (!body.empty()) {
      if (body.front() != ';') throw fail();
      body.remove_prefix(1);
    }
  }
  return normalize(raw);
}

Instant TemporalDomain::first() const {
  if (empty()) throw Error(ErrorCode::EmptyDomain, "first() of an empty domain");
  return intervals_.front().start();
}

Instant TemporalDomain::last() const {
  if (empty()) throw Error(ErrorCode::EmptyDomain, "last() of an empty domain");
  return intervals_.back().end();
}

std::int64_t TemporalDomain::grain_count() const {
  std::int64_t n = 0;
  for (const auto& i : intervals_) n += i.length();
  return n;
}

bool TemporalDomain::covers(Instant i) const {
  if (!unit_ || i.unit() != *unit_) return false;
  auto it = std::upper_bound(intervals_.begin(), intervals_.end(), i.index(),
                             [](std::int64_t v, const Interval& iv) { return v < iv.first(); });
  return it != intervals_.begin() && std::prev(it)->last() >= i.index();
}

bool TemporalDomain::intersects(const TemporalDomain& other) const {
  return !domain_intersect(*this, other).empty();
}

std::string TemporalDomain::to_string() const {
  std::string s = "<";
  for (std::size_t k = 0; k < intervals_.size(); ++k) {
    if (k) s += ";";
    s += intervals_[k].to_string();
  }
  return s + ">";
}

TemporalDomain normalize(std::span<const Interval> raw) { return TemporalDomain::normalize(raw); }

// ---------------------------------------------------------------------------
// Set algebra

TemporalDomain domain_union(const TemporalDomain& x, const TemporalDomain& y) {
  require_unit(x, y, "union");
  std::vector<Interval> all(x.intervals());
  all.insert(all.end(), y.intervals().begin(), y.intervals().end());
  return normalize(all);
}

TemporalDomain domain_intersect(const TemporalDomain& x, const TemporalDomain& y) {
  require_unit(x, y, "intersect");
  std::vector<Interval> out;
  const auto& a = x.intervals();
  const auto& b = y.intervals();
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const std::int64_t lo = std::max(a[i].first(), b[j].first());
    const std::int64_t hi = std::min(a[i].last(), b[j].last());
    if (lo <= hi) out.emplace_back(Instant(a[i].unit(), lo), Instant(a[i].unit(), hi));
    if (a[i].last() < b[j].last()) ++i; else ++j;
  }
  return normalize(out);
}

TemporalDomain domain_difference(const TemporalDomain& x, const TemporalDomain& y) {
  require_unit(x, y, "difference");
  std::vector<Interval> out;
  const auto& b = y.intervals();
  std::size_t j = 0;
  for (const auto& iv : x.intervals()) {
    std::int64_t cursor = iv.first();
    while (j < b.size() && b[j].last() < cursor) ++j;
    std::size_t k = j;
    while (k < b.size() && b[k].first() <= iv.last()) {
      if (b[k].first() > cursor) {
        out.emplace_back(Instant(iv.unit(), cursor), Instant(iv.unit(), b[k].first() - 1));
      }
      cursor = std::max(cursor, b[k].last() + 1);
      ++k;
    }
    if (cursor <= iv.last()) out.emplace_back(Instant(iv.unit(), cursor), iv.end());
  }
  return normalize(out);
}

bool contains(const TemporalDomain& x, const TemporalDomain& y) {
  require_unit(x, y, "contains");
  return domain_difference(y, x).empty();
}

// ---------------------------------------------------------------------------
// Allen relations

AllenRelation reciprocal(AllenRelation rel) {
  switch (rel) {
    case AllenRelation::Precedes: return AllenRelation::Follows;
    case AllenRelation::Follows: return AllenRelation::Precedes;
    case AllenRelation::Meets: return AllenRelation::IsMeeted;
    case AllenRelation::IsMeeted: return AllenRelation::Meets;
    case AllenRelation::Overlaps: return AllenRelation::IsOverlaped;
    case AllenRelation::IsOverlaped: return AllenRelation::Overlaps;
    case AllenRelation::During: return AllenRelation::IsDuring;
    case AllenRelation::IsDuring: return AllenRelation::During;
    case AllenRelation::Starts: return AllenRelation::IsStarted;
    case AllenRelation::IsStarted: return AllenRelation::Starts;
    case AllenRelation::Ends: return AllenRelation::IsFinished;
    case AllenRelation::IsFinished: return AllenRelation::Ends;
    case AllenRelation::Equals: return AllenRelation::Equals;
  }
  return rel;
}

std::string_view relation_name(AllenRelation rel) {
  switch (rel) {
    case AllenRelation::Precedes: return "precedes";
    case AllenRelation::Follows: return "follows";
    case AllenRelation::Meets: return "meets";
    case AllenRelation::IsMeeted: return "ismeeted";
    case AllenRelation::Overlaps: return "overlaps";
    case AllenRelation::IsOverlaped: return "isoverlaped";
    case AllenRelation::During: return "strict_during";
    case AllenRelation::IsDuring: return "isduring";
    case AllenRelation::Starts: return "starts";
    case AllenRelation::IsStarted: return "isstarted";
    case AllenRelation::Ends: return "ends";
    case AllenRelation::IsFinished: return "isfinished";
    case AllenRelation::Equals: return "equals";
  }
  return "?";
}

std::optional<AllenRelation> parse_relation(std::string_view name) {
  std::string n;
  for (char c : fold_identifier(name)) {
    if (c != '_') n.push_back(c);
  }
  for (AllenRelation r : kAllenRelations) {
    std::string candidate;
    for (char c : relation_name(r)) {
      if (c != '_') candidate.push_back(c);
    }
    if (n == candidate) return r;
  }
  if (n == "isoverlapped") return AllenRelation::IsOverlaped;
  if (n == "ismet") return AllenRelation::IsMeeted;
  return std::nullopt;
}

namespace {

// Last interval of `ys` whose start is strictly below `bound`, or nullptr.
const Interval* last_starting_before(const std::vector<Interval>& ys, std::int64_t bound) {
  auto it = std::lower_bound(ys.begin(), ys.end(), bound,
                             [](const Interval& iv, std::int64_t v) { return iv.first() < v; });
  return it == ys.begin() ? nullptr : &*std::prev(it);
}

bool overlaps(const TemporalDomain& x, const TemporalDomain& y) {
  // For each Xi only the last Yj starting inside (start(Xi), end(Xi)) can end
  // after end(Xi): the Yj are disjoint and sorted.
  for (const auto& xi : x.intervals()) {
    const Interval* yj = last_starting_before(y.intervals(), xi.last());
    if (yj && yj->first() > xi.first() && yj->last() > xi.last()) return true;
  }
  return false;
}

bool during(const TemporalDomain& x, const TemporalDomain& y) {
  // The only candidate enclosing Xi is the last Yj starting strictly before it.
  for (const auto& xi : x.intervals()) {
    const Interval* yj = last_starting_before(y.intervals(), xi.first());
    if (!yj || !(xi.last() < yj->last())) return false;
  }
  return true;
}

bool forward(const TemporalDomain& x, const TemporalDomain& y, AllenRelation rel) {
  switch (rel) {
    case AllenRelation::Precedes: return x.last().index() < y.first().index();
    case AllenRelation::Meets: return x.last().index() == y.first().index();
    case AllenRelation::Overlaps: return overlaps(x, y);
    case AllenRelation::During: return during(x, y);
    case AllenRelation::Starts: return x.first().index() == y.first().index();
    case AllenRelation::Ends: return x.last().index() == y.last().index();
    case AllenRelation::Equals: return x.intervals() == y.intervals();
    default: return forward(y, x, reciprocal(rel));
  }
}

}  // namespace

bool allen_relate(const TemporalDomain& x, const TemporalDomain& y, AllenRelation rel) {
  if (x.empty() || y.empty()) throw Error(ErrorCode::EmptyDomain, "Allen relation on an empty domain");
  require_unit(x, y, relation_name(rel).data());
  return forward(x, y, rel);
}

// ---------------------------------------------------------------------------
// Grain conversion

Interval convert_grain(Instant i, Unit target) {
  if (!comparable(i.unit(), target)) {
    throw Error(ErrorCode::IncomparableUnits,
                std::string(unit_name(i.unit())) + " and " + std::string(unit_name(target)));
  }
  if (i.unit() == target) return Interval::single(i);
  if (finer_than(i.unit(), target)) {
    return Interval::single(Instant(target, grain_containing(target, first_day(i))));
  }
  return Interval(Instant(target, grain_containing(target, first_day(i))),
                  Instant(target, grain_containing(target, last_day(i))));
}

TemporalDomain convert_domain(const TemporalDomain& d, Unit target) {
  std::vector<Interval> out;
  for (const auto& iv : d.intervals()) {
    const Interval a = convert_grain(iv.start(), target);
    const Interval b = convert_grain(iv.end(), target);
    out.emplace_back(a.start(), b.end());
  }
  return normalize(out);
}

Duration::Duration(std::int64_t c, Unit u) : count(c), unit(u) {
  if (c < 1) throw Error(ErrorCode::InvalidInterval, "duration count must be >= 1");
}

}  // namespace twq
