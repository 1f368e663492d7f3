#pragma once

// Grammar-driven random generators for predicates, construction expressions,
// queries, rules and whole schemas. Every tree they build is printable.

#include <random>
#include <string>
#include <vector>

#include "twq/dsl/ast.hpp"
#include "twq/mapping.hpp"
#include "twq/model.hpp"

namespace twq::fuzz {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::int64_t range(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng_);
  }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }
  template <typename T>
  const T& pick(const std::vector<T>& xs) {
    return xs[static_cast<std::size_t>(range(0, static_cast<std::int64_t>(xs.size()) - 1))];
  }

  std::string ident() {
    static const std::vector<std::string> names = {
        "p",      "pp",    "q",        "x1",    "poids",  "tension", "prénom", "urée", "hématocrite",
        "nom",    "Patient", "PATIENT", "Évolution", "val_2", "_tmp", "min",  "max",  "Personnes",
        "T",      "P",     "grain",    "élève", "cœur",   "zeta",    "Alpha",  "b9"};
    return pick(names);
  }

  std::string text() {
    static const std::vector<std::string> pieces = {"Dupond", "Michel", "é", "\"", "\\", "'", "«", "»", " ", "\n",
                                                    "\t",     "x",      "日本", "",  "a b", "//", "/*"};
    std::string s;
    for (auto n = range(0, 4); n > 0; --n) s += pick(pieces);
    return s;
  }

  Value scalar() {
    switch (range(0, 6)) {
      case 0: return Value();
      case 1: return Value(coin());
      case 2: return Value(range(-1000000, 1000000));
      case 3: return Value(std::uniform_real_distribution<double>(-1e6, 1e6)(rng_));
      case 4: return Value(static_cast<double>(range(-40, 40)) / 8.0);
      case 5: return Value(std::ldexp(std::uniform_real_distribution<double>(0.5, 1)(rng_), static_cast<int>(range(-300, 300))));
      default: return Value(text());
    }
  }

  Path path() {
    Path p;
    p.var = ident();
    for (auto n = range(0, 3); n > 0; --n) {
      if (coin(0.8)) {
        p.steps.emplace_back(coin(0.1) ? std::string("domT") : ident());
      } else {
        p.steps.emplace_back(range(0, 5));
      }
    }
    return p;
  }

  Instant instant(Unit u) {
    switch (u) {
      case Unit::day: return Instant::day(static_cast<int>(range(1990, 2030)), static_cast<unsigned>(range(1, 12)),
                                          static_cast<unsigned>(range(1, 28)));
      case Unit::month: return Instant::month(static_cast<int>(range(1990, 2030)), static_cast<unsigned>(range(1, 12)));
      case Unit::quarter: return Instant::quarter(static_cast<int>(range(1990, 2030)), static_cast<unsigned>(range(1, 4)));
      case Unit::semester: return Instant::semester(static_cast<int>(range(1990, 2030)), static_cast<unsigned>(range(1, 2)));
      case Unit::year: return Instant::year(static_cast<int>(range(1990, 2030)));
    }
    return {};
  }

  // A unit together with a date pattern able to write its grains.
  std::pair<Unit, std::string> dated_unit() {
    const Unit u = static_cast<Unit>(range(0, 4));
    std::vector<std::string> formats = {""};
    if (u == Unit::day) formats = {"", "jj-mm-aaaa", "aaaa-mm-jj", "dd/mm/yyyy"};
    if (u == Unit::month) formats = {"", "mm-aaaa", "aaaa-mm", "mm.yyyy"};
    if (u == Unit::year) formats = {"", "aaaa"};
    return {u, pick(formats)};
  }

  DateLiteral date() {
    auto [u, fmt] = dated_unit();
    return DateLiteral{instant(u), fmt};
  }

  WindowLiteral window() {
    auto [u, fmt] = dated_unit();
    const Instant from = instant(u);
    return WindowLiteral{from, from.shifted(range(1, 30)), fmt};
  }

  TemporalOp temporal_op() {
    switch (range(0, 14)) {
      case 13: return TemporalOp::within_op();
      case 14: return TemporalOp::encloses_op();
      default: return TemporalOp::allen(kAllenRelations[range(0, 12)]);
    }
  }

  ExprPtr expr(int depth = 3) {
    const auto choice = depth <= 0 ? range(0, 3) : range(0, 7);
    switch (choice) {
      case 0: return make_literal(scalar());
      case 1: return make_path(path());
      case 2: return make_date(date());
      case 3: return make_window(window());
      case 4: return make_compare(static_cast<CmpOp>(range(0, 5)), expr(depth - 1), expr(depth - 1));
      case 5: {
        std::vector<ExprPtr> ops;
        for (auto n = range(2, 4); n > 0; --n) ops.push_back(expr(depth - 1));
        return make_logical(coin(), std::move(ops));
      }
      case 6: return make_not(expr(depth - 1));
      default: return make_temporal(temporal_op(), expr(depth - 1), expr(depth - 1));
    }
  }

  MappingPtr mapping(int depth = 3) {
    const std::string alias = coin(0.4) ? ident() : "";
    const auto choice = depth <= 0 ? 0 : range(0, 4);
    switch (choice) {
      case 0: return mapping_source(alias, ident());
      case 1: return mapping_select(alias, mapping(depth - 1), coin() ? expr(2) : nullptr);
      case 2: return mapping_join(alias, mapping(depth - 1), mapping(depth - 1), coin() ? expr(2) : nullptr);
      case 3: {
        std::vector<Projection> items;
        for (auto n = range(1, 4); n > 0; --n) items.push_back({ident(), path()});
        return mapping_project(alias, mapping(depth - 1), std::move(items));
      }
      default:
        return mapping_combine(alias, static_cast<MappingSetOp>(range(0, 2)), mapping(depth - 1), mapping(depth - 1));
    }
  }

  AggregationFn aggregation() {
    return AggregationFn{static_cast<AggKind>(range(0, 4)), coin() ? AggMode::strong : AggMode::moderate};
  }

  std::vector<AggregateEntry> spec() {
    std::vector<AggregateEntry> out;
    for (auto n = range(0, 3); n > 0; --n) out.push_back({ident(), aggregation(), ident()});
    return out;
  }

  Duration duration() { return Duration(range(1, 24), static_cast<Unit>(range(0, 4))); }

  dsl::QueryPtr query(int depth = 4) {
    using dsl::QueryOp;
    auto n = std::make_shared<dsl::QueryNode>();
    if (depth <= 0 || coin(0.15)) {
      n->op = QueryOp::Ref;
      n->name = ident();
      return n;
    }
    n->op = static_cast<QueryOp>(range(1, static_cast<std::int64_t>(QueryOp::ScaleDown)));
    auto child = [&] {
      n->vars.push_back(coin() ? ident() : "");
      n->children.push_back(query(depth - 1));
    };
    switch (n->op) {
      case QueryOp::VUnion: case QueryOp::VIntersect: case QueryOp::VDifference:
      case QueryOp::IUnion: case QueryOp::IIntersect: case QueryOp::IDifference:
        child();
        child();
        break;
      case QueryOp::Join: case QueryOp::IJoin: case QueryOp::UJoin:
        child();
        child();
        if (coin()) n->predicate = expr(2);
        break;
      case QueryOp::Select:
        child();
        n->predicate = expr(2);
        break;
      case QueryOp::Project:
        child();
        for (auto k = range(1, 3); k > 0; --k) n->items.push_back({coin() ? ident() : "", path()});
        break;
      case QueryOp::Nest: case QueryOp::UnNest:
        child();
        n->name = ident();
        break;
      case QueryOp::State:
        child();
        n->window = coin() ? make_date(date()) : make_window(window());
        n->relation = temporal_op();
        break;
      case QueryOp::UGroup:
        child();
        n->unit = static_cast<Unit>(range(0, 4));
        break;
      case QueryOp::DGroup:
        child();
        n->duration = duration();
        break;
      case QueryOp::Agreg: case QueryOp::ACum:
        child();
        n->spec = spec();
        break;
      case QueryOp::AMove:
        child();
        n->spec = spec();
        n->duration = duration();
        break;
      case QueryOp::ScaleUp: case QueryOp::ScaleDown:
        child();
        n->unit = static_cast<Unit>(range(0, 4));
        n->spec = spec();
        break;
      default:
        child();
        break;
    }
    return n;
  }

  dsl::QueryScript script() {
    dsl::QueryScript s;
    for (auto n = range(0, 2); n > 0; --n) s.bindings.emplace_back(ident(), query(3));
    s.result = query();
    return s;
  }

  TypeSpec type(int depth = 2) {
    const auto choice = depth <= 0 ? range(0, 4) : range(0, 6);
    if (choice <= 4) return TypeSpec::scalar(static_cast<TypeSpec::Kind>(choice));
    if (choice == 5) return TypeSpec::list_of(type(depth - 1));
    TypeSpec s = TypeSpec::scalar(TypeSpec::Kind::structure);
    s.struct_name = ident();
    for (auto n = range(1, 3); n > 0; --n) s.fields.emplace_back(ident(), type(depth - 1));
    return s;
  }

  ConfigRule rule(const std::string& env) {
    ConfigRule r;
    r.name = ident();
    r.environment = env;
    if (coin()) {
      SelectionQuery q;
      q.result_var = ident();
      q.object_var = ident();
      q.class_name = ident();
      q.state_var = ident();
      q.accessor = coin() ? "PastStates" : ident();
      if (coin(0.7)) q.where = expr(2);
      r.condition = std::move(q);
    } else {
      r.condition = expr(2);
    }
    r.action_target = ident();
    return r;
  }

  WarehouseSchema schema() {
    WarehouseSchema s;
    s.name = ident();
    for (auto n = range(0, 2); n > 0; --n) s.config.push_back({ident(), scalar()});
    for (auto n = range(0, 2); n > 0; --n) {
      SourceClass c;
      c.name = ident();
      for (auto k = range(0, 3); k > 0; --k) c.attributes.push_back({ident(), type()});
      for (auto k = range(0, 2); k > 0; --k) {
        RelationshipDecl r;
        r.target = coin() ? ident() : "Set<" + ident() + ">";
        r.name = ident();
        if (coin()) {
          r.inverse_class = ident();
          r.inverse_name = ident();
        }
        c.relationships.push_back(std::move(r));
      }
      for (auto k = range(0, 1); k > 0; --k) c.operations.push_back({type(), ident()});
      s.sources.push_back(std::move(c));
    }
    for (auto n = range(0, 3); n > 0; --n) {
      WarehouseClass c;
      c.name = ident();
      for (auto k = range(0, 2); k > 0; --k) c.super_names.push_back(ident());
      for (auto k = range(0, 4); k > 0; --k) c.attributes.push_back({ident(), type()});
      for (auto k = range(0, 1); k > 0; --k) c.operations.push_back({type(), ident()});
      if (coin()) c.mapping = mapping();
      for (auto k = range(0, 3); k > 0; --k) c.temporal_filter.entries.push_back({ident(), ident(), coin(0.2)});
      c.archive_filter.entries = spec();
      if (coin(0.4)) c.archive_filter.grain = duration();
      s.classes.push_back(std::move(c));
    }
    for (auto n = range(0, 2); n > 0; --n) {
      Environment e;
      e.name = ident() + std::to_string(n);
      for (auto k = range(0, 3); k > 0; --k) e.classes.push_back(ident());
      for (auto k = range(0, 2); k > 0; --k) e.rules.push_back(rule(e.name));
      s.environments.push_back(std::move(e));
    }
    return s;
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace twq::fuzz
