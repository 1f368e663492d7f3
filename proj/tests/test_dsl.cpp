#include <gtest/gtest.h>

#include "fuzz.hpp"
#include "support.hpp"
#include "twq/dsl/printer.hpp"

using namespace twq;
using namespace twq::test;
using namespace twq::dsl;

namespace {

std::string syntax_error(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SyntaxError) << e.what();
    return e.what();
  }
  ADD_FAILURE() << "no error raised";
  return {};
}

std::vector<Tok> kinds(std::string_view text) {
  std::vector<Tok> out;
  for (const auto& t : tokenize(text)) out.push_back(t.kind);
  return out;
}

std::string first_diagnostic(const std::string& query) {
  const TypeReport r = typecheck(parse_query(query), patient_schema());
  return r.diagnostics.empty() ? std::string() : r.diagnostics.front().to_string();
}

}  // namespace

TEST(Lexer, GuillemetsAndTheEqualsQuirk) {
  const auto ts = tokenize("p.nom =<«Dupond» ^ p.prénom = 'Michel'");
  ASSERT_EQ(ts.size(), 12u);
  EXPECT_EQ(ts[3].kind, Tok::eq);
  EXPECT_EQ(ts[4].kind, Tok::string);
  EXPECT_EQ(ts[4].text, "Dupond");
  EXPECT_EQ(ts[5].kind, Tok::and_);
  EXPECT_EQ(ts[8].text, "prénom");
  EXPECT_EQ(ts[10].text, "Michel");
  EXPECT_EQ(kinds("a <= b"), (std::vector<Tok>{Tok::identifier, Tok::le, Tok::identifier, Tok::end}));
  EXPECT_EQ(kinds("a < b"), (std::vector<Tok>{Tok::identifier, Tok::lt, Tok::identifier, Tok::end}));
}

TEST(Lexer, NumbersCommentsAndPositions) {
  const auto ts = tokenize("// header\n  x1 /* c */ 12 3.5 -4\n\"a\\\"b\"");
  ASSERT_EQ(ts.size(), 7u);
  EXPECT_EQ(ts[0].pos.line, 2);
  EXPECT_EQ(ts[0].pos.column, 3);
  EXPECT_EQ(ts[1].kind, Tok::integer);
  EXPECT_EQ(ts[2].kind, Tok::decimal);
  EXPECT_EQ(ts[3].kind, Tok::minus);
  EXPECT_EQ(ts[5].text, "a\"b");
  EXPECT_EQ(ts[5].pos.line, 3);
  EXPECT_EQ(kinds("P::q"), (std::vector<Tok>{Tok::identifier, Tok::scope, Tok::identifier, Tok::end}));
}

TEST(Lexer, ErrorsCarryLineAndColumn) {
  EXPECT_NE(syntax_error([] { tokenize("a\n  'open"); }).find("2:3"), std::string::npos);
  EXPECT_NE(syntax_error([] { tokenize("a /* never closed"); }).find("1:3"), std::string::npos);
  EXPECT_NE(syntax_error([] { tokenize("a $ b"); }).find("1:3"), std::string::npos);
}

TEST(Parser, DataQueriesParse) {
  for (const char* f : {"state", "serie", "agreg", "acum", "amove", "scaleup"}) {
    const QueryScript q = parse_query(slurp(data_path(std::string("queries/") + f + ".twq")));
    ASSERT_TRUE(q.result) << f;
  }
  const QueryScript s = parse_query(slurp(data_path("queries/state.twq")));
  EXPECT_EQ(s.result->op, QueryOp::State);
  EXPECT_EQ(s.result->relation, TemporalOp::within_op());
  const auto* w = std::get_if<Expr::Window>(&s.result->window->node);
  ASSERT_NE(w, nullptr);
  EXPECT_EQ(w->literal.from, Instant::month(2000, 7));
  EXPECT_EQ(w->literal.until, Instant::month(2001, 1));
  EXPECT_EQ(w->literal.domain(), months({{"2000-07", "2000-12"}}));
  const QueryScript a = parse_query(slurp(data_path("queries/amove.twq")));
  ASSERT_EQ(a.bindings.size(), 1u);
  EXPECT_EQ(a.bindings[0].first, "SR");
  EXPECT_EQ(a.result->duration, Duration(2, Unit::month));
  EXPECT_EQ(parse_query(slurp(data_path("queries/scaleup.twq"))).result->unit, Unit::quarter);
}

TEST(Parser, KeywordsAreCaseInsensitive) {
  const QueryScript a = parse_query("select(p PATIENT, p.poids > 1 AND p.poids < 3 Or NOT p.nom = 'x')");
  const QueryScript b = parse_query("Select(p PATIENT, p.poids > 1 and p.poids < 3 or not p.nom = 'x')");
  EXPECT_TRUE(same_script(a, b));
}

TEST(Parser, PrecedenceOfLogicalOperators) {
  const ExprPtr e = parse_predicate("a.x = 1 or a.y = 2 and not a.z = 3");
  const auto* top = std::get_if<Expr::Logical>(&e->node);
  ASSERT_NE(top, nullptr);
  EXPECT_FALSE(top->conjunction);
  ASSERT_EQ(top->operands.size(), 2u);
  const auto* rhs = std::get_if<Expr::Logical>(&top->operands[1]->node);
  ASSERT_NE(rhs, nullptr);
  EXPECT_TRUE(rhs->conjunction);
  EXPECT_TRUE(std::holds_alternative<Expr::Not>(rhs->operands[1]->node));
}

TEST(Parser, DatesInSeveralPatterns) {
  EXPECT_EQ(parse_dated("07-2000", "mm-aaaa"), Instant::month(2000, 7));
  EXPECT_EQ(parse_dated("14-07-2000", "jj-mm-aaaa"), Instant::day(2000, 7, 14));
  EXPECT_EQ(parse_dated("2000/07", "yyyy/mm"), Instant::month(2000, 7));
  EXPECT_EQ(parse_dated("2000", "aaaa"), Instant::year(2000));
  EXPECT_EQ(parse_dated("2000-Q3", ""), Instant::quarter(2000, 3));
  EXPECT_EQ(format_dated(Instant::day(2000, 7, 4), "jj-mm-aaaa"), "04-07-2000");
  EXPECT_EQ(format_dated(Instant::month(2000, 7), "mm-aaaa"), "07-2000");
  EXPECT_THROW(parse_dated("2000-07", "mm-aaaa"), Error);
  syntax_error([] { parse_dated("07-2000", "zz"); });
}

TEST(Parser, PositionedErrors) {
  EXPECT_NE(syntax_error([] { parse_query("Select(p Patient, p.nom = )"); }).find("1:27"), std::string::npos);
  EXPECT_NE(syntax_error([] { parse_query("Frobnicate(Patient)"); }).find("unknown operator"), std::string::npos);
  EXPECT_NE(syntax_error([] { parse_query("State(Patient,\n  DomT('01-2000', '2000-02', 'mm-aaaa'), during)"); })
                .find("2:"),
            std::string::npos);
  syntax_error([] { parse_query("DGroup(Patient, Duration(0, month))"); });
  syntax_error([] { parse_query("UGroup(Patient, fortnight)"); });
  syntax_error([] { parse_query("ACum(SR, {(poids, median(poids))})"); });
  syntax_error([] { parse_query("State(Patient, Date('07-2000', 'mm-aaaa'), touches)"); });
  syntax_error([] { parse_query("Patient Patient"); });
  syntax_error([] { parse_query("DomT('01-2001', '01-2000', 'mm-aaaa')"); });
}

TEST(Parser, WindowEndpointsMustShareAUnit) {
  try {
    parse_query("State(Patient, DomT('2000-07', '2001', ''), during)");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SyntaxError);
    EXPECT_NE(std::string(e.what()).find("MixedUnits"), std::string::npos);
  }
}

TEST(Parser, RulesAndUnsupportedEventsOrActions) {
  const ConfigRule r = parse_rule(
      "rule r1 on Evolution when self.refresh() "
      "if select T from P in PATIENT, T in P.PastStates() where T.poids > 80 then T.archive();");
  EXPECT_EQ(r.name, "r1");
  EXPECT_EQ(r.environment, "Evolution");
  const auto& q = std::get<SelectionQuery>(r.condition);
  EXPECT_EQ(q.class_name, "PATIENT");
  EXPECT_EQ(q.state_var, "T");
  try {
    parse_rule("rule r on E when self.insert() if true then T.archive();");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnsupportedEvent);
  }
  try {
    parse_rule("rule r on E when self.refresh() if true then T.delete();");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnsupportedAction);
  }
}

TEST(Parser, DdlRejectsRulesForUnknownEnvironments) {
  std::string ddl = slurp(data_path("patient.ddl"));
  ddl.replace(ddl.find("rule critere_archive on Evolution"), 33, "rule critere_archive on Nowhere");
  EXPECT_NE(syntax_error([&] { parse_ddl(ddl); }).find("Nowhere"), std::string::npos);
}

TEST(Parser, PatientSchemaShape) {
  const WarehouseSchema s = patient_schema();
  EXPECT_EQ(s.name, "Hopital");
  ASSERT_EQ(s.sources.size(), 2u);
  EXPECT_EQ(s.sources[0].relationships[0].inverse_name, "patient");
  EXPECT_EQ(s.sources[0].operations[0].name, "age");
  const WarehouseClass& c = s.classes[0];
  EXPECT_EQ(c.attributes.size(), 7u);
  EXPECT_EQ(c.attributes[3].type.to_string(), "Struct T_tension {Integer min, Integer max}");
  EXPECT_EQ(c.temporal_filter.entries.size(), 2u);
  ASSERT_TRUE(c.archive_filter.grain.has_value());
  EXPECT_EQ(*c.archive_filter.grain, Duration(6, Unit::month));
  EXPECT_TRUE(c.archive_filter.moderate());
  ASSERT_EQ(s.environments[0].rules.size(), 1u);
}

TEST(Printer, PatientSchemaRoundTrips) {
  const WarehouseSchema s = patient_schema();
  const std::string text = print_schema(s);
  EXPECT_EQ(parse_ddl(text), s);
  EXPECT_EQ(print_schema(parse_ddl(text)), text);
}

TEST(Printer, LiteralsRoundTrip) {
  for (const Value& v : {Value(), Value(true), Value(-3), Value(0.1), Value(80.0), Value(-1e-300), Value("a\"b\\c\n"),
                         Value("«»")}) {
    const ExprPtr e = parse_predicate("x.a = " + print_literal(v));
    const auto& cmp = std::get<Expr::Compare>(e->node);
    EXPECT_EQ(std::get<Expr::Literal>(cmp.rhs->node).value, v) << print_literal(v);
  }
}

TEST(Printer, FuzzedTreesRoundTrip) {
  fuzz::Gen gen(99);
  for (int i = 0; i < 300; ++i) {
    const ExprPtr e = gen.expr(4);
    ASSERT_TRUE(same_expr(parse_predicate(print_expr(*e)), e)) << print_expr(*e);
    const MappingPtr m = gen.mapping();
    ASSERT_TRUE(same_mapping(parse_mapping(print_mapping(*m)), m)) << print_mapping(*m);
    const QueryScript q = gen.script();
    const std::string qt = print_script(q);
    ASSERT_TRUE(same_script(parse_query(qt), q)) << qt;
    EXPECT_EQ(print_script(parse_query(qt)), qt);
    const ConfigRule r = gen.rule("Env");
    ASSERT_EQ(parse_rule(print_rule(r)), r) << print_rule(r);
  }
  for (int i = 0; i < 100; ++i) {
    const WarehouseSchema s = gen.schema();
    ASSERT_EQ(parse_ddl(print_schema(s)), s) << print_schema(s);
  }
}

TEST(Typecheck, DataQueriesAreWellTyped) {
  const WarehouseSchema s = patient_schema();
  const std::pair<const char*, Kind> expected[] = {{"state", Kind::state_set}, {"serie", Kind::series},
                                                   {"agreg", Kind::value},     {"acum", Kind::series},
                                                   {"amove", Kind::series},    {"scaleup", Kind::series}};
  for (const auto& [f, kind] : expected) {
    const TypeReport r = typecheck(parse_query(slurp(data_path(std::string("queries/") + f + ".twq"))), s);
    EXPECT_TRUE(r.ok()) << f << ": " << (r.diagnostics.empty() ? "" : r.diagnostics[0].to_string());
    EXPECT_EQ(r.result, kind) << f;
  }
}

TEST(Typecheck, Diagnostics) {
  EXPECT_NE(first_diagnostic("Flatten(Patient)").find("Flatten expects"), std::string::npos);
  EXPECT_NE(first_diagnostic("Flatten(Patient)").find("line 1:1"), std::string::npos);
  EXPECT_NE(first_diagnostic("Select(p Patient, q.nom = 'x')").find("unbound variable q"), std::string::npos);
  EXPECT_NE(first_diagnostic("Select(p Patient, p.taille = 1)").find("UnknownAttribute"), std::string::npos);
  EXPECT_NE(first_diagnostic("Nobody").find("UnknownClass"), std::string::npos);
  EXPECT_NE(first_diagnostic("Project(p Patient, {p.nom, nom: p.poids})").find("AttributeNameClash"), std::string::npos);
  EXPECT_NE(first_diagnostic("VUnion(Patient, Current(Patient))").find("same kind"), std::string::npos);
  EXPECT_NE(first_diagnostic("Agreg(Flatten(Past(Patient)), {(poids, avg(poids))})").find("Agreg expects Series, got StateSet"),
            std::string::npos);
  EXPECT_NE(first_diagnostic("Select(s Flatten(Past(Patient)), s.nom = 'x')").find("UnknownAttribute"), std::string::npos);
  EXPECT_TRUE(first_diagnostic("Select(s Flatten(Past(Patient)), s.tension.min > 9)").empty());
  EXPECT_TRUE(first_diagnostic("X = Past(Patient);\nFlatten(X)").empty());
  EXPECT_NE(first_diagnostic("X = Past(Patient);\nFlatten(Y)").find("UnknownClass: Y"), std::string::npos);
}

// Type-directed generation over the patient schema: every query it builds is
// well-typed, and evaluating it may only fail for dynamic reasons.
class TypedGen {
 public:
  explicit TypedGen(std::uint64_t seed) : rng_(seed) {}

  std::string objects(int d) {
    switch (d <= 0 ? 0 : pick(0, 3)) {
      case 0: return "Patient";
      case 1: return "Select(p " + objects(d - 1) + ", p.poids " + cmp() + " " + std::to_string(pick(74, 81)) + ")";
      case 2: return std::string(pick(0, 1) ? "VUnion(" : "IIntersect(") + objects(d - 1) + ", " + objects(d - 1) + ")";
      default: return "DupElim(" + objects(d - 1) + ")";
    }
  }

  std::string states(int d) {
    switch (d <= 0 ? pick(0, 1) : pick(0, 5)) {
      case 0: return "Flatten(Past(" + objects(d - 1) + "))";
      case 1: return "State(" + objects(d - 1) + ", " + window() + ", " + relation() + ")";
      case 2: return "Select(s " + states(d - 1) + ", s.poids " + cmp() + " " + std::to_string(pick(74, 81)) + ")";
      case 3: return std::string(pick(0, 1) ? "VDifference(" : "VUnion(") + states(d - 1) + ", " + states(d - 1) + ")";
      case 4: return "Project(s " + states(d - 1) + ", {s.poids, s.domT})";
      default: return "State(" + states(d - 1) + ", " + window() + ", " + relation() + ")";
    }
  }

  std::string series(int d) {
    const std::string base = "MakeSerie(Project(s " + states(d - 1) + ", {s.poids, s.domT}))";
    switch (d <= 0 ? 0 : pick(0, 3)) {
      case 0: return base;
      case 1: return "ACum(" + series(d - 1) + ", " + spec() + ")";
      case 2: return "AMove(" + series(d - 1) + ", " + spec() + ", Duration(" + std::to_string(pick(1, 4)) + ", month))";
      default: return "ScaleUp(" + series(d - 1) + ", " + (pick(0, 1) ? "quarter" : "year") + ", " + spec() + ")";
    }
  }

  std::string any(int d) {
    switch (pick(0, 6)) {
      case 0: return objects(d);
      case 1: return states(d);
      case 2: return series(d);
      case 3: return "Agreg(" + series(d) + ", " + spec() + ")";
      case 4: return "UGroup(" + states(d) + ", " + (pick(0, 1) ? "quarter" : "semester") + ")";
      case 5: return "IJoin(a " + states(d) + ", b " + states(d) + ", a.poids " + cmp() + " b.poids)";
      default: return "Join(a " + objects(d) + ", b " + objects(d) + ")";
    }
  }

 private:
  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  std::string cmp() { return std::vector<std::string>{"=", "<>", "<", "<=", ">", ">="}[pick(0, 5)]; }
  std::string relation() {
    return std::vector<std::string>{"during", "contains", "overlaps", "precedes", "starts", "equals", "isduring"}[pick(0, 6)];
  }
  std::string window() {
    const int a = pick(6, 12);
    const int b = a + pick(1, 6);
    auto m = [](int k) { return (k <= 12 ? "2000-" : "2001-") + std::string(((k - 1) % 12 + 1) < 10 ? "0" : "") +
                                std::to_string((k - 1) % 12 + 1); };
    return "DomT('" + m(a) + "', '" + m(b) + "', '')";
  }
  std::string spec() {
    const char* fns[] = {"avg", "sum", "count", "max", "min", "t_avg", "t_sum"};
    return std::string("{(poids, ") + fns[pick(0, 6)] + "(poids))}";
  }

  std::mt19937_64 rng_;
};

TEST(Typecheck, WellTypedQueriesDoNotFailStatically) {
  const Warehouse w = dupond();
  TypedGen gen(5);
  int evaluated = 0;
  for (int i = 0; i < 400; ++i) {
    const std::string text = gen.any(3);
    const QueryScript q = parse_query(text);
    const TypeReport r = typecheck(q, w.schema);
    ASSERT_TRUE(r.ok()) << text << "\n" << r.diagnostics.front().to_string();
    try {
      const Collection c = evaluate(q, w);
      EXPECT_EQ(kind_of(c), r.result) << text;
      ++evaluated;
    } catch (const Error& e) {
      const ErrorCode code = e.code();
      EXPECT_TRUE(code == ErrorCode::EmptySeries || code == ErrorCode::OverlappingStates || code == ErrorCode::MixedUnits ||
                  code == ErrorCode::NotCoarser)
          << text << "\n" << e.what();
    }
  }
  EXPECT_GT(evaluated, 200);
}

TEST(Evaluate, RuntimeErrorsNameTheOperator) {
  const Warehouse w = dupond();
  try {
    evaluate(parse_query("Agreg(MakeSerie(Project(s Flatten(Past(Select(p Patient, p.poids > 100))), {s.poids, s.domT})),"
                         " {(poids, avg(poids))})"),
             w);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptySeries);
    EXPECT_NE(std::string(e.what()).find("Agreg at line 1:1"), std::string::npos) << e.what();
  }
}

TEST(Evaluate, BindingsShadowClassNames) {
  const Warehouse w = dupond();
  const auto c = std::get<ObjectSet>(run(w, "Patient = Select(p Patient, p.poids > 100);\nPatient"));
  EXPECT_TRUE(c.items.empty());
}
