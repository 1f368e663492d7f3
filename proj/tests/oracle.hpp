#pragma once

// Reference implementations that work grain by grain on plain sets and maps,
// used to cross-check the engine.

#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "twq/chrono.hpp"

namespace twq::oracle {

using Grains = std::set<std::int64_t>;

inline Grains grains(const TemporalDomain& d) {
  Grains out;
  for (const auto& iv : d.intervals()) {
    for (std::int64_t g = iv.first(); g <= iv.last(); ++g) out.insert(g);
  }
  return out;
}

struct Run {
  std::int64_t first;
  std::int64_t last;
  bool operator==(const Run&) const = default;
};

/// Maximal runs of consecutive grains.
inline std::vector<Run> runs(const Grains& g) {
  std::vector<Run> out;
  for (auto x : g) {
    if (!out.empty() && out.back().last + 1 == x) {
      out.back().last = x;
    } else {
      out.push_back({x, x});
    }
  }
  return out;
}

inline TemporalDomain domain_of(const Grains& g, Unit u) {
  std::vector<Interval> ivs;
  for (const auto& r : runs(g)) ivs.emplace_back(Instant(u, r.first), Instant(u, r.last));
  return TemporalDomain::normalize(ivs);
}

// ---------------------------------------------------------------------------
// Allen relations evaluated literally from the definitions table, on runs.

inline bool allen_forward(const std::vector<Run>& x, const std::vector<Run>& y, int which) {
  switch (which) {
    case 0: return x.back().last < y.front().first;                     // precedes
    case 1: return x.back().last == y.front().first;                    // meets
    case 2:                                                             // overlaps
      for (const auto& a : x) {
        for (const auto& b : y) {
          if (a.first < b.first && b.first < a.last && a.last < b.last) return true;
        }
      }
      return false;
    case 3:                                                             // during
      for (const auto& a : x) {
        bool inside = false;
        for (const auto& b : y) inside = inside || (a.first > b.first && a.last < b.last);
        if (!inside) return false;
      }
      return true;
    case 4: return x.front().first == y.front().first;                  // starts
    case 5: return x.back().last == y.back().last;                      // ends
    default: return x == y;                                             // equals
  }
}

inline bool allen(const Grains& gx, const Grains& gy, AllenRelation r) {
  const auto x = runs(gx);
  const auto y = runs(gy);
  switch (r) {
    case AllenRelation::Precedes: return allen_forward(x, y, 0);
    case AllenRelation::Follows: return allen_forward(y, x, 0);
    case AllenRelation::Meets: return allen_forward(x, y, 1);
    case AllenRelation::IsMeeted: return allen_forward(y, x, 1);
    case AllenRelation::Overlaps: return allen_forward(x, y, 2);
    case AllenRelation::IsOverlaped: return allen_forward(y, x, 2);
    case AllenRelation::During: return allen_forward(x, y, 3);
    case AllenRelation::IsDuring: return allen_forward(y, x, 3);
    case AllenRelation::Starts: return allen_forward(x, y, 4);
    case AllenRelation::IsStarted: return allen_forward(y, x, 4);
    case AllenRelation::Ends: return allen_forward(x, y, 5);
    case AllenRelation::IsFinished: return allen_forward(y, x, 5);
    case AllenRelation::Equals: return allen_forward(x, y, 6);
  }
  return false;
}

/// Every non-empty subset of an n-grain universe, as grain sets.
inline std::vector<Grains> all_domains(int n, std::int64_t origin) {
  std::vector<Grains> out;
  for (int mask = 1; mask < (1 << n); ++mask) {
    Grains g;
    for (int i = 0; i < n; ++i) {
      if (mask & (1 << i)) g.insert(origin + i);
    }
    out.push_back(std::move(g));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Object histories: one value per month.

/// month index -> poids for one object; missing months mean "no snapshot row".
using History = std::map<std::int64_t, std::int64_t>;

/// Grains that end up in past states after replaying the history: everything
/// before the final run of equal values (the current state).
inline History past_part(const History& h) {
  History out;
  if (h.empty()) return out;
  auto it = h.end();
  --it;
  const std::int64_t current = it->second;
  std::int64_t cut = it->first;
  while (it != h.begin()) {
    auto prev = std::prev(it);
    if (prev->second != current || prev->first + 1 != it->first) break;
    cut = prev->first;
    it = prev;
  }
  for (const auto& [g, v] : h) {
    if (g < cut) out.emplace(g, v);
  }
  return out;
}

/// Past states as the engine should hold them: one per distinct value, over
/// every grain with that value.
inline std::map<std::int64_t, Grains> states_by_value(const History& past) {
  std::map<std::int64_t, Grains> out;
  for (const auto& [g, v] : past) out[v].insert(g);
  return out;
}

/// Series elements: maximal runs of consecutive grains holding one value.
struct Element {
  std::int64_t value;
  std::int64_t first;
  std::int64_t last;
};

inline std::vector<Element> series_elements(const History& past) {
  std::vector<Element> out;
  for (const auto& [g, v] : past) {
    if (!out.empty() && out.back().value == v && out.back().last + 1 == g) {
      out.back().last = g;
    } else {
      out.push_back({v, g, g});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Aggregation over grains.

enum class Fn { avg, sum, count, max, min };

inline double combine(Fn fn, const std::vector<std::int64_t>& xs) {
  double acc = fn == Fn::max ? -1e300 : fn == Fn::min ? 1e300 : 0;
  for (auto x : xs) {
    switch (fn) {
      case Fn::avg: case Fn::sum: acc += static_cast<double>(x); break;
      case Fn::count: acc += 1; break;
      case Fn::max: acc = std::max(acc, static_cast<double>(x)); break;
      case Fn::min: acc = std::min(acc, static_cast<double>(x)); break;
    }
  }
  if (fn == Fn::avg) acc /= static_cast<double>(xs.size());
  return acc;
}

/// Values contributing to a window [lo, hi]: one per touching element
/// (strong) or one per covered grain (moderate).
inline std::vector<std::int64_t> window_values(const std::vector<Element>& els, std::int64_t lo, std::int64_t hi,
                                               bool moderate) {
  std::vector<std::int64_t> out;
  for (const auto& e : els) {
    const std::int64_t a = std::max(lo, e.first);
    const std::int64_t b = std::min(hi, e.last);
    if (a > b) continue;
    if (moderate) {
      for (std::int64_t g = a; g <= b; ++g) out.push_back(e.value);
    } else {
      out.push_back(e.value);
    }
  }
  return out;
}

struct Point {
  double value;
  std::int64_t first;
  std::int64_t last;
};

inline std::vector<Point> acum(const std::vector<Element>& els, Fn fn, bool moderate) {
  std::vector<Point> out;
  const std::int64_t origin = els.front().first;
  for (std::int64_t g = origin; g <= els.back().last; ++g) {
    out.push_back({combine(fn, window_values(els, origin, g, moderate)), origin, g});
  }
  return out;
}

inline std::vector<Point> amove(const std::vector<Element>& els, Fn fn, bool moderate, std::int64_t d) {
  std::vector<Point> out;
  const std::int64_t origin = els.front().first;
  for (std::int64_t lo = origin; lo <= els.back().last; lo += d) {
    const auto xs = window_values(els, lo, lo + d - 1, moderate);
    if (!xs.empty()) out.push_back({combine(fn, xs), lo, lo + d - 1});
  }
  return out;
}

/// Month series re-expressed by blocks of `months_per` months (3 = quarters).
inline std::vector<Point> scale_up(const std::vector<Element>& els, Fn fn, bool moderate, std::int64_t months_per) {
  std::vector<Point> out;
  auto block = [&](std::int64_t g) { return g >= 0 ? g / months_per : (g - months_per + 1) / months_per; };
  for (std::int64_t b = block(els.front().first); b <= block(els.back().last); ++b) {
    const auto xs = window_values(els, b * months_per, b * months_per + months_per - 1, moderate);
    if (!xs.empty()) out.push_back({combine(fn, xs), b, b});
  }
  return out;
}

}  // namespace twq::oracle
