#include "twq/dsl/parser.hpp"

#include <charconv>
#include <map>

#include "twq/names.hpp"

namespace twq::dsl {

// ---------------------------------------------------------------------------
// Dates

namespace {

enum class Field { year, month, day };

std::vector<std::string> split_date(std::string_view s) {
  std::vector<std::string> parts(1);
  for (char c : s) {
    if (c == '-' || c == '/' || c == '.') {
      parts.emplace_back();
    } else {
      parts.back() += c;
    }
  }
  return parts;
}

std::vector<Field> pattern_fields(std::string_view pattern) {
  std::vector<Field> out;
  for (const auto& part : split_date(fold_identifier(pattern))) {
    if (part == "aaaa" || part == "yyyy") {
      out.push_back(Field::year);
    } else if (part == "mm") {
      out.push_back(Field::month);
    } else if (part == "jj" || part == "dd") {
      out.push_back(Field::day);
    } else {
      throw Error(ErrorCode::SyntaxError, "unknown date pattern '" + std::string(pattern) + "'");
    }
  }
  return out;
}

}  // namespace

Instant parse_dated(std::string_view text, std::string_view pattern) {
  if (pattern.empty()) return Instant::parse(text);
  const auto fields = pattern_fields(pattern);
  const auto parts = split_date(text);
  if (parts.size() != fields.size()) {
    throw Error(ErrorCode::InvalidInstant, "'" + std::string(text) + "' does not match '" + std::string(pattern) + "'");
  }
  int year = 0;
  unsigned month = 0;
  unsigned day = 0;
  bool has_month = false;
  bool has_day = false;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    int v = 0;
    const auto& p = parts[i];
    auto [ptr, ec] = std::from_chars(p.data(), p.data() + p.size(), v);
    if (ec != std::errc() || ptr != p.data() + p.size() || p.empty()) {
      throw Error(ErrorCode::InvalidInstant, "'" + std::string(text) + "' does not match '" + std::string(pattern) + "'");
    }
    switch (fields[i]) {
      case Field::year: year = v; break;
      case Field::month: month = static_cast<unsigned>(v); has_month = true; break;
      case Field::day: day = static_cast<unsigned>(v); has_day = true; break;
    }
  }
  if (has_day) return Instant::day(year, month, day);
  if (has_month) return Instant::month(year, month);
  return Instant::year(year);
}

std::string format_dated(Instant i, std::string_view pattern) {
  if (pattern.empty()) return i.to_string();
  const std::string iso = i.to_string();
  const auto fields = pattern_fields(pattern);
  const auto iso_parts = split_date(iso);
  std::string out;
  std::size_t sep = 0;
  const std::string folded = fold_identifier(pattern);
  for (std::size_t k = 0; k < fields.size(); ++k) {
    if (k > 0) {
      sep = folded.find_first_of("-/.", sep);
      out += folded[sep++];
    }
    const std::size_t idx = fields[k] == Field::year ? 0 : fields[k] == Field::month ? 1 : 2;
    if (idx >= iso_parts.size()) {
      throw Error(ErrorCode::InvalidInstant, iso + " cannot be written as '" + std::string(pattern) + "'");
    }
    out += iso_parts[idx];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(tokenize(text)) {}

  // -- token helpers --------------------------------------------------------

  const Token& peek(std::size_t k = 0) const { return toks_[std::min(i_ + k, toks_.size() - 1)]; }
  bool is(Tok k, std::size_t ahead = 0) const { return peek(ahead).kind == k; }
  bool is_word(std::string_view w, std::size_t ahead = 0) const {
    return is(Tok::identifier, ahead) && fold_identifier(peek(ahead).text) == w;
  }
  const Token& take() { return toks_[i_ < toks_.size() - 1 ? i_++ : i_]; }

  bool accept(Tok k) {
    if (!is(k)) return false;
    take();
    return true;
  }
  bool accept_word(std::string_view w) {
    if (!is_word(w)) return false;
    take();
    return true;
  }

  [[noreturn]] void fail(const std::string& what) const {
    const Token& t = peek();
    std::string found = t.kind == Tok::end ? "end of input" : "'" + t.text + "'";
    throw Error(ErrorCode::SyntaxError, t.pos.to_string() + ": " + what + ", found " + found);
  }

  const Token& expect(Tok k, std::string_view what = {}) {
    if (!is(k)) fail("expected " + std::string(what.empty() ? token_name(k) : what));
    return take();
  }
  void expect_word(std::string_view w) {
    if (!accept_word(w)) fail("expected '" + std::string(w) + "'");
  }
  std::string identifier(std::string_view what = "identifier") { return expect(Tok::identifier, what).text; }

  void finish() {
    if (!is(Tok::end)) fail("expected end of input");
  }

  // -- literals -------------------------------------------------------------

  Value number_literal(bool negative) {
    const Token& t = take();
    if (t.kind == Tok::integer) {
      std::int64_t v = 0;
      auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
      if (ec != std::errc()) {
        throw Error(ErrorCode::SyntaxError, t.pos.to_string() + ": integer out of range");
      }
      return Value(negative ? -v : v);
    }
    const double d = std::stod(t.text);
    return Value(negative ? -d : d);
  }

  std::optional<Value> scalar_literal() {
    if (is(Tok::string)) return Value(take().text);
    if (is(Tok::integer) || is(Tok::decimal)) return number_literal(false);
    if (is(Tok::minus) && (is(Tok::integer, 1) || is(Tok::decimal, 1))) {
      take();
      return number_literal(true);
    }
    if (is(Tok::identifier) && !is(Tok::dot, 1) && !is(Tok::lbracket, 1) && !is(Tok::lparen, 1)) {
      if (is_word("true")) return take(), Value(true);
      if (is_word("false")) return take(), Value(false);
      if (is_word("null")) return take(), Value();
    }
    return std::nullopt;
  }

  // -- predicates -----------------------------------------------------------

  ExprPtr expression() {
    std::vector<ExprPtr> ops{conjunction()};
    while (accept(Tok::or_) || accept_word("or")) ops.push_back(conjunction());
    return ops.size() == 1 ? ops.front() : make_logical(false, std::move(ops));
  }

  ExprPtr conjunction() {
    std::vector<ExprPtr> ops{negation()};
    while (accept(Tok::and_) || accept_word("and")) ops.push_back(negation());
    return ops.size() == 1 ? ops.front() : make_logical(true, std::move(ops));
  }

  ExprPtr negation() {
    if (accept(Tok::not_) || (is_word("not") && !is(Tok::dot, 1) && accept_word("not"))) return make_not(negation());
    return comparison();
  }

  ExprPtr comparison() {
    ExprPtr lhs = operand();
    std::optional<CmpOp> op;
    switch (peek().kind) {
      case Tok::eq: op = CmpOp::eq; break;
      case Tok::ne: op = CmpOp::ne; break;
      case Tok::lt: op = CmpOp::lt; break;
      case Tok::le: op = CmpOp::le; break;
      case Tok::gt: op = CmpOp::gt; break;
      case Tok::ge: op = CmpOp::ge; break;
      default: break;
    }
    if (!op) return lhs;
    take();
    return make_compare(*op, lhs, operand());
  }

  ExprPtr operand() {
    if (accept(Tok::lparen)) {
      ExprPtr e = expression();
      expect(Tok::rparen);
      return e;
    }
    if (auto v = scalar_literal()) return make_literal(std::move(*v));
    if (!is(Tok::identifier)) fail("expected an operand");
    if (is(Tok::lparen, 1)) {
      if (is_word("date")) return make_date(date_literal());
      if (is_word("domt")) return make_window(window_literal());
      if (auto op = parse_temporal_op(peek().text)) {
        take();
        expect(Tok::lparen);
        ExprPtr a = expression();
        expect(Tok::comma);
        ExprPtr b = expression();
        expect(Tok::rparen);
        return make_temporal(*op, a, b);
      }
      fail("unknown function '" + peek().text + "'");
    }
    return make_path(path());
  }

  Path path() {
    Path p;
    p.var = identifier("variable");
    for (;;) {
      if (accept(Tok::dot)) {
        p.steps.emplace_back(identifier("attribute name"));
      } else if (accept(Tok::lbracket)) {
        const Token& t = expect(Tok::integer, "list index");
        p.steps.emplace_back(std::stoll(t.text));
        expect(Tok::rbracket);
      } else {
        return p;
      }
    }
  }

  DateLiteral date_literal() {
    take();
    expect(Tok::lparen);
    const Token text = expect(Tok::string, "date string");
    std::string pattern;
    if (accept(Tok::comma)) pattern = expect(Tok::string, "date pattern").text;
    expect(Tok::rparen);
    return DateLiteral{dated(text, pattern), pattern};
  }

  WindowLiteral window_literal() {
    take();
    expect(Tok::lparen);
    const Token from = expect(Tok::string, "date string");
    expect(Tok::comma);
    const Token until = expect(Tok::string, "date string");
    std::string pattern;
    if (accept(Tok::comma)) pattern = expect(Tok::string, "date pattern").text;
    expect(Tok::rparen);
    WindowLiteral w{dated(from, pattern), dated(until, pattern), pattern};
    try {
      w.domain();
    } catch (const Error& e) {
      throw Error(ErrorCode::SyntaxError, from.pos.to_string() + ": " + e.what());
    }
    return w;
  }

  Instant dated(const Token& t, const std::string& pattern) {
    try {
      return parse_dated(t.text, pattern);
    } catch (const Error& e) {
      throw Error(ErrorCode::SyntaxError, t.pos.to_string() + ": " + e.what());
    }
  }

  // -- shared pieces --------------------------------------------------------

  Unit unit() {
    const Token& t = take();
    if (t.kind != Tok::identifier && t.kind != Tok::string) {
      --i_;
      fail("expected a temporal unit");
    }
    auto u = parse_unit(t.text);
    if (!u) throw Error(ErrorCode::SyntaxError, t.pos.to_string() + ": unknown temporal unit '" + t.text + "'");
    return *u;
  }

  std::int64_t positive_integer() {
    const Token& t = expect(Tok::integer, "a positive integer");
    const std::int64_t v = std::stoll(t.text);
    if (v < 1) throw Error(ErrorCode::SyntaxError, t.pos.to_string() + ": count must be at least 1");
    return v;
  }

  Duration duration() {
    expect_word("duration");
    expect(Tok::lparen);
    const std::int64_t n = positive_integer();
    expect(Tok::comma);
    const Unit u = unit();
    expect(Tok::rparen);
    return Duration(n, u);
  }

  AggregationFn aggregation() {
    const Token& t = expect(Tok::identifier, "aggregation function");
    auto fn = parse_aggregation(t.text);
    if (!fn) throw Error(ErrorCode::SyntaxError, t.pos.to_string() + ": unknown aggregation '" + t.text + "'");
    return *fn;
  }

  // `{(attr, fn(source)), ...}`
  std::vector<AggregateEntry> aggregate_entries() {
    std::vector<AggregateEntry> out;
    expect(Tok::lbrace);
    if (accept(Tok::rbrace)) return out;
    do {
      expect(Tok::lparen);
      AggregateEntry e;
      e.attribute = identifier("attribute");
      expect(Tok::comma);
      e.fn = aggregation();
      expect(Tok::lparen);
      e.source = identifier("attribute");
      expect(Tok::rparen);
      expect(Tok::rparen);
      out.push_back(std::move(e));
    } while (accept(Tok::comma));
    expect(Tok::rbrace);
    return out;
  }

  // -- queries --------------------------------------------------------------

  QueryScript script() {
    QueryScript s;
    while (is(Tok::identifier) && is(Tok::eq, 1)) {
      std::string name = take().text;
      take();
      s.bindings.emplace_back(std::move(name), query());
      expect(Tok::semicolon);
    }
    s.result = query();
    accept(Tok::semicolon);
    finish();
    return s;
  }

  QueryPtr query() {
    if (accept(Tok::lparen)) {
      QueryPtr q = query();
      expect(Tok::rparen);
      return q;
    }
    const Token& head = expect(Tok::identifier, "a query");
    auto node = std::make_shared<QueryNode>();
    node->pos = head.pos;
    const auto op = is(Tok::lparen) ? parse_op_name(head.text) : std::nullopt;
    if (!op) {
      if (is(Tok::lparen)) {
        throw Error(ErrorCode::SyntaxError, head.pos.to_string() + ": unknown operator '" + head.text + "'");
      }
      node->op = QueryOp::Ref;
      node->name = head.text;
      return node;
    }
    node->op = *op;
    expect(Tok::lparen);
    switch (*op) {
      case QueryOp::VUnion: case QueryOp::VIntersect: case QueryOp::VDifference:
      case QueryOp::IUnion: case QueryOp::IIntersect: case QueryOp::IDifference:
        child(*node);
        expect(Tok::comma);
        child(*node);
        break;
      case QueryOp::Flatten: case QueryOp::DupElim: case QueryOp::EmptyElim: case QueryOp::Current:
      case QueryOp::Past: case QueryOp::Archive: case QueryOp::MakeSerie:
        child(*node);
        break;
      case QueryOp::Select:
        child(*node);
        expect(Tok::comma);
        node->predicate = expression();
        break;
      case QueryOp::Project:
        child(*node);
        expect(Tok::comma);
        project_items(*node);
        break;
      case QueryOp::Join: case QueryOp::IJoin: case QueryOp::UJoin:
        child(*node);
        expect(Tok::comma);
        child(*node);
        if (accept(Tok::comma)) node->predicate = expression();
        break;
      case QueryOp::Nest: case QueryOp::UnNest:
        child(*node);
        expect(Tok::comma);
        node->name = identifier("attribute");
        break;
      case QueryOp::State: {
        child(*node);
        expect(Tok::comma);
        if (!is_word("date") && !is_word("domt")) fail("expected Date(...) or DomT(...)");
        node->window = is_word("date") ? make_date(date_literal()) : make_window(window_literal());
        expect(Tok::comma);
        const Token& rel = expect(Tok::identifier, "a temporal relation");
        auto r = parse_temporal_op(rel.text);
        if (!r) throw Error(ErrorCode::SyntaxError, rel.pos.to_string() + ": unknown temporal relation '" + rel.text + "'");
        node->relation = *r;
        break;
      }
      case QueryOp::UGroup:
        child(*node);
        expect(Tok::comma);
        node->unit = unit();
        break;
      case QueryOp::DGroup:
        child(*node);
        expect(Tok::comma);
        node->duration = duration();
        break;
      case QueryOp::Agreg: case QueryOp::ACum:
        child(*node);
        expect(Tok::comma);
        node->spec = aggregate_entries();
        break;
      case QueryOp::AMove:
        child(*node);
        expect(Tok::comma);
        node->spec = aggregate_entries();
        expect(Tok::comma);
        node->duration = duration();
        break;
      case QueryOp::ScaleUp: case QueryOp::ScaleDown:
        child(*node);
        expect(Tok::comma);
        node->unit = unit();
        expect(Tok::comma);
        node->spec = aggregate_entries();
        break;
      case QueryOp::Ref: break;
    }
    expect(Tok::rparen);
    return node;
  }

  void child(QueryNode& n) {
    std::string var;
    if (is(Tok::identifier) && (is(Tok::identifier, 1) || is(Tok::lparen, 1)) && is(Tok::identifier, 1)) {
      var = take().text;
    }
    n.vars.push_back(std::move(var));
    n.children.push_back(query());
  }

  void project_items(QueryNode& n) {
    expect(Tok::lbrace);
    do {
      ProjectItem item;
      if (is(Tok::identifier) && is(Tok::colon, 1)) {
        item.alias = take().text;
        take();
      }
      item.path = path();
      n.items.push_back(std::move(item));
    } while (accept(Tok::comma));
    expect(Tok::rbrace);
  }

  // -- mappings -------------------------------------------------------------

  static std::optional<std::string> mapping_keyword(const Token& t) {
    if (t.kind != Tok::identifier) return std::nullopt;
    const std::string w = fold_identifier(t.text);
    for (const char* k : {"project", "join", "select", "union", "intersect", "difference", "source"}) {
      if (w == k) return w;
    }
    return std::nullopt;
  }

  MappingPtr mapping() {
    std::string alias;
    if (is(Tok::identifier) && is(Tok::identifier, 1)) alias = take().text;
    const Token& head = expect(Tok::identifier, "a construction expression");
    const auto kw = is(Tok::lparen) ? mapping_keyword(head) : std::nullopt;
    if (!kw) {
      if (is(Tok::lparen)) {
        throw Error(ErrorCode::SyntaxError, head.pos.to_string() + ": unknown construction function '" + head.text + "'");
      }
      return mapping_source(alias, head.text);
    }
    expect(Tok::lparen);
    MappingPtr out;
    if (*kw == "source") {
      out = mapping_source(alias, identifier("source class"));
    } else if (*kw == "project") {
      MappingPtr input = mapping();
      expect(Tok::comma);
      expect(Tok::lbrace);
      std::vector<Projection> items;
      do {
        Projection p;
        p.target = identifier("attribute");
        expect(Tok::colon);
        p.path = path();
        items.push_back(std::move(p));
      } while (accept(Tok::comma));
      expect(Tok::rbrace);
      out = mapping_project(alias, input, std::move(items));
    } else if (*kw == "join") {
      MappingPtr l = mapping();
      expect(Tok::comma);
      MappingPtr r = mapping();
      ExprPtr pred;
      if (accept(Tok::comma)) pred = expression();
      out = mapping_join(alias, l, r, pred);
    } else if (*kw == "select") {
      MappingPtr input = mapping();
      ExprPtr pred;
      if (accept(Tok::comma)) pred = expression();
      out = mapping_select(alias, input, pred);
    } else {
      const MappingSetOp op = *kw == "union" ? MappingSetOp::union_
                              : *kw == "intersect" ? MappingSetOp::intersect
                                                   : MappingSetOp::difference;
      MappingPtr l = mapping();
      expect(Tok::comma);
      MappingPtr r = mapping();
      out = mapping_combine(alias, op, l, r);
    }
    expect(Tok::rparen);
    return out;
  }

  // -- DDL ------------------------------------------------------------------

  TypeSpec type() {
    const Token& t = expect(Tok::identifier, "a type");
    const std::string w = fold_identifier(t.text);
    if (w == "string" || w == "char") return TypeSpec::scalar(TypeSpec::Kind::string);
    if (w == "integer" || w == "int" || w == "long" || w == "short") return TypeSpec::scalar(TypeSpec::Kind::integer);
    if (w == "boolean" || w == "bool") return TypeSpec::scalar(TypeSpec::Kind::boolean);
    if (w == "decimal" || w == "float" || w == "double" || w == "real") {
      return TypeSpec::scalar(TypeSpec::Kind::decimal);
    }
    if (w == "date") return TypeSpec::scalar(TypeSpec::Kind::date);
    if (w == "list" || w == "set" || w == "bag") {
      expect(Tok::lt);
      TypeSpec e = type();
      expect(Tok::gt);
      return TypeSpec::list_of(std::move(e));
    }
    if (w == "struct") {
      TypeSpec s = TypeSpec::scalar(TypeSpec::Kind::structure);
      s.struct_name = identifier("struct name");
      expect(Tok::lbrace);
      do {
        TypeSpec ft = type();
        s.fields.emplace_back(identifier("field name"), std::move(ft));
      } while (accept(Tok::comma));
      expect(Tok::rbrace);
      return s;
    }
    throw Error(ErrorCode::SyntaxError, t.pos.to_string() + ": unknown type '" + t.text + "'");
  }

  std::string relationship_target() {
    std::string target = identifier("a class name");
    if (accept(Tok::lt)) {
      target += "<" + identifier("a class name") + ">";
      expect(Tok::gt);
    }
    return target;
  }

  template <typename Decl>
  void members(Decl& d, bool allow_relationships) {
    expect(Tok::lbrace);
    while (!accept(Tok::rbrace)) {
      if (accept_word("attribute")) {
        AttributeDecl a;
        a.type = type();
        a.name = identifier("attribute name");
        d.attributes.push_back(std::move(a));
      } else if (is_word("relationship")) {
        const Token& kw = take();
        RelationshipDecl r;
        r.target = relationship_target();
        r.name = identifier("relationship name");
        if (accept_word("inverse")) {
          r.inverse_class = identifier("a class name");
          expect(Tok::scope);
          r.inverse_name = identifier("relationship name");
        }
        if constexpr (requires { d.relationships; }) {
          d.relationships.push_back(std::move(r));
        } else {
          (void)allow_relationships;
          throw Error(ErrorCode::SyntaxError, kw.pos.to_string() + ": relationships belong to source interfaces");
        }
      } else {
        OperationDecl op;
        op.result = type();
        op.name = identifier("operation name");
        expect(Tok::lparen);
        expect(Tok::rparen);
        d.operations.push_back(std::move(op));
      }
      expect(Tok::semicolon);
    }
  }

  SourceClass source_interface() {
    SourceClass c;
    c.name = identifier("interface name");
    members(c, true);
    accept(Tok::semicolon);
    return c;
  }

  WarehouseClass warehouse_interface() {
    WarehouseClass c;
    c.name = identifier("interface name");
    if (accept(Tok::colon)) {
      do c.super_names.push_back(identifier("superclass name"));
      while (accept(Tok::comma));
    }
    members(c, false);
    if (accept_word("with")) {
      do {
        if (accept_word("mapping")) {
          c.mapping = mapping();
        } else if (accept_word("temporal")) {
          expect_word("filter");
          expect(Tok::lbrace);
          if (!accept(Tok::rbrace)) {
            do {
              expect(Tok::lparen);
              TemporalEntry e;
              e.property = identifier("property name");
              expect(Tok::comma);
              e.source = identifier("attribute or operation");
              if (accept(Tok::lparen)) {
                expect(Tok::rparen);
                e.function_backed = true;
              }
              expect(Tok::rparen);
              c.temporal_filter.entries.push_back(std::move(e));
            } while (accept(Tok::comma));
            expect(Tok::rbrace);
          }
        } else if (accept_word("archive")) {
          expect_word("filter");
          c.archive_filter.entries = aggregate_entries();
          if (accept_word("by")) {
            const Unit u = unit();
            expect(Tok::lparen);
            const std::int64_t n = positive_integer();
            expect(Tok::rparen);
            c.archive_filter.grain = Duration(n, u);
          }
        } else {
          fail("expected 'mapping', 'temporal filter' or 'archive filter'");
        }
      } while (accept(Tok::comma));
    }
    accept(Tok::semicolon);
    return c;
  }

  Environment environment() {
    Environment e;
    e.name = identifier("environment name");
    expect(Tok::lbrace);
    if (!is(Tok::rbrace)) {
      do e.classes.push_back(identifier("class name"));
      while (accept(Tok::comma));
    }
    expect(Tok::rbrace);
    accept(Tok::semicolon);
    return e;
  }

  ConfigRule rule() {
    expect_word("rule");
    ConfigRule r;
    r.name = identifier("rule name");
    expect_word("on");
    r.environment = identifier("environment name");
    expect_word("when");
    const Token& ev_start = peek();
    std::string event = identifier("event");
    while (accept(Tok::dot)) event = identifier("event");
    if (accept(Tok::lparen)) expect(Tok::rparen);
    if (fold_identifier(event) != "refresh") {
      throw Error(ErrorCode::UnsupportedEvent, ev_start.pos.to_string() + ": only refresh events are supported, not '" + event + "'");
    }
    r.event = "refresh";
    expect_word("if");
    if (accept_word("select")) {
      SelectionQuery q;
      q.result_var = identifier("selected variable");
      expect_word("from");
      q.object_var = identifier("object variable");
      expect_word("in");
      q.class_name = identifier("class name");
      expect(Tok::comma);
      q.state_var = identifier("state variable");
      expect_word("in");
      const std::string owner = identifier("object variable");
      if (owner != q.object_var) {
        throw Error(ErrorCode::SyntaxError, peek().pos.to_string() + ": states must range over " + q.object_var);
      }
      expect(Tok::dot);
      q.accessor = identifier("state accessor");
      expect(Tok::lparen);
      expect(Tok::rparen);
      if (accept_word("where")) q.where = expression();
      r.condition = std::move(q);
    } else {
      r.condition = expression();
    }
    expect_word("then");
    const Token& act_start = peek();
    r.action_target = identifier("action target");
    expect(Tok::dot);
    const std::string action = identifier("action");
    expect(Tok::lparen);
    expect(Tok::rparen);
    if (fold_identifier(action) != "archive") {
      throw Error(ErrorCode::UnsupportedAction, act_start.pos.to_string() + ": only archive actions are supported, not '" + action + "'");
    }
    r.action = "archive";
    accept(Tok::semicolon);
    return r;
  }

  WarehouseSchema document() {
    WarehouseSchema s;
    std::vector<std::pair<ConfigRule, SourcePos>> rules;
    while (!is(Tok::end)) {
      if (accept_word("schema")) {
        s.name = identifier("schema name");
        expect(Tok::semicolon);
      } else if (accept_word("config")) {
        ConfigEntry e;
        e.key = identifier("setting name");
        expect(Tok::eq);
        auto v = scalar_literal();
        if (!v) fail("expected a literal");
        e.value = std::move(*v);
        expect(Tok::semicolon);
        s.config.push_back(std::move(e));
      } else if (accept_word("source")) {
        expect_word("interface");
        s.sources.push_back(source_interface());
      } else if (accept_word("interface")) {
        s.classes.push_back(warehouse_interface());
      } else if (accept_word("environment")) {
        s.environments.push_back(environment());
      } else if (is_word("rule")) {
        const SourcePos pos = peek().pos;
        rules.emplace_back(rule(), pos);
      } else {
        fail("expected a declaration");
      }
    }
    for (auto& [r, pos] : rules) {
      auto it = std::find_if(s.environments.begin(), s.environments.end(),
                             [&](const Environment& e) { return same_identifier(e.name, r.environment); });
      if (it == s.environments.end()) {
        throw Error(ErrorCode::SyntaxError, pos.to_string() + ": rule " + r.name + " names unknown environment " +
                                                r.environment);
      }
      it->rules.push_back(std::move(r));
    }
    return s;
  }

 private:
  std::vector<Token> toks_;
  std::size_t i_ = 0;
};

}  // namespace

WarehouseSchema parse_ddl(std::string_view text) {
  Parser p(text);
  return p.document();
}

ConfigRule parse_rule(std::string_view text) {
  Parser p(text);
  ConfigRule r = p.rule();
  p.finish();
  return r;
}

QueryScript parse_query(std::string_view text) {
  Parser p(text);
  return p.script();
}

ExprPtr parse_predicate(std::string_view text) {
  Parser p(text);
  ExprPtr e = p.expression();
  p.finish();
  return e;
}

MappingPtr parse_mapping(std::string_view text) {
  Parser p(text);
  MappingPtr m = p.mapping();
  p.finish();
  return m;
}

}  // namespace twq::dsl
