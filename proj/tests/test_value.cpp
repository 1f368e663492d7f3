#include <gtest/gtest.h>

#include "twq/aggregate.hpp"
#include "twq/json_io.hpp"
#include "twq/names.hpp"
#include "twq/value.hpp"

using namespace twq;

TEST(Names, FoldsCaseAndAccents) {
  EXPECT_EQ(fold_identifier("Hématocrite"), "hematocrite");
  EXPECT_EQ(fold_identifier("URÉE"), "uree");
  EXPECT_EQ(fold_identifier("Prénom"), "prenom");
  EXPECT_TRUE(same_identifier("Évolution", "evolution"));
  EXPECT_FALSE(same_identifier("poids", "poid"));
}

TEST(Record, FindPrefersExactThenFolded) {
  Record r{{"prénom", Value("Michel")}, {"Prenom", Value("other")}, {"urée", Value(5)}};
  EXPECT_EQ(r.find("Prenom")->as_string(), "other");
  EXPECT_EQ(r.find("prénom")->as_string(), "Michel");
  EXPECT_EQ(r.find("UREE")->as_int(), 5);
  EXPECT_EQ(r.find("poids"), nullptr);
  r.set("urée", Value(6));
  r.set("poids", Value(80));
  EXPECT_EQ(r.size(), 4u);
  EXPECT_EQ(r.find("uree")->as_int(), 6);
  EXPECT_EQ(r.fields().back().first, "poids");
}

TEST(Value, EqualityKeepsIntegerAndDecimalApart) {
  EXPECT_NE(Value(80), Value(80.0));
  EXPECT_EQ(compare_values(Value(80), Value(80.0)), std::partial_ordering::equivalent);
  EXPECT_EQ(compare_values(Value(79), Value(80.5)), std::partial_ordering::less);
  EXPECT_EQ(compare_values(Value("b"), Value("a")), std::partial_ordering::greater);
  EXPECT_FALSE(compare_values(Value("80"), Value(80)).has_value());
  EXPECT_TRUE(total_less(Value(), Value(false)));
}

TEST(Value, DebugText) {
  const Value v(Record{{"poids", Value(80)}, {"tension", Value(Record{{"min", Value(10)}, {"max", Value(16)}})}});
  EXPECT_EQ(v.to_string(), "{poids=80, tension={min=10, max=16}}");
}

TEST(Value, WrongAccessorThrowsTypeMismatch) {
  try {
    Value("x").as_int();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TypeMismatch);
  }
}

TEST(JsonIo, RoundTripsEveryKind) {
  const Value v(Record{{"n", Value()},
                       {"b", Value(true)},
                       {"i", Value(std::int64_t{-9007199254740993})},
                       {"d", Value(79.66666666666667)},
                       {"whole", Value(80.0)},
                       {"s", Value("Dupond «é»")},
                       {"l", Value(List{Value(1), Value("x")})},
                       {"r", Value(Ref{"P1"})}});
  const Json j = value_to_json(v);
  EXPECT_EQ(value_from_json(j), v);
  EXPECT_EQ(value_from_json(Json::parse(j.dump())), v);
  EXPECT_EQ(j["r"]["$ref"], "P1");
}

TEST(JsonIo, RejectsMalformedReferences) {
  EXPECT_THROW(value_from_json(Json::parse(R"({"$ref": 3})")), Error);
}

TEST(Accumulator, ScalarKinds) {
  const std::vector<Value> xs = {Value(80), Value(79), Value(80)};
  EXPECT_DOUBLE_EQ(aggregate_values(AggKind::avg, xs).as_double(), 239.0 / 3);
  EXPECT_EQ(aggregate_values(AggKind::sum, xs), Value(239));
  EXPECT_EQ(aggregate_values(AggKind::count, xs), Value(3));
  EXPECT_EQ(aggregate_values(AggKind::max, xs), Value(80));
  EXPECT_EQ(aggregate_values(AggKind::min, xs), Value(79));
  EXPECT_TRUE(aggregate_values(AggKind::avg, {}).is_null());
}

TEST(Accumulator, CompositesAggregateFieldwise) {
  auto t = [](int lo, int hi) { return Value(Record{{"min", Value(lo)}, {"max", Value(hi)}}); };
  const Value avg = aggregate_values(AggKind::avg, {t(10, 16), t(8, 15)});
  EXPECT_DOUBLE_EQ(avg.as_record().find("min")->as_double(), 9.0);
  EXPECT_DOUBLE_EQ(avg.as_record().find("max")->as_double(), 15.5);
}

TEST(Accumulator, SupportResumesAggregation) {
  Accumulator a(AggKind::avg);
  a.add(Value(70));
  a.add(Value(71));
  Accumulator b = Accumulator::from_support(AggKind::avg, a.support());
  b.add(Value(72));
  Accumulator direct(AggKind::avg);
  for (int x : {70, 71, 72}) direct.add(Value(x));
  EXPECT_EQ(b.result(), direct.result());
  Accumulator m(AggKind::avg);
  m.add(Value(72));
  a.merge(m);
  EXPECT_EQ(a.result(), direct.result());
}

TEST(Accumulator, RejectsStrings) {
  Accumulator a(AggKind::sum);
  EXPECT_THROW(a.add(Value("x")), Error);
}
