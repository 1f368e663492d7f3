#include <gtest/gtest.h>

#include "support.hpp"
#include "twq/extraction.hpp"

using namespace twq;
using namespace twq::test;

namespace {

const char* kTwoPatients = R"(
{"timestamp": "2000-07"}
# comment lines are skipped
{"class": "Personnes", "key": "P1", "attributes": {"nom": "Dupond", "prenoms": ["Michel", "Jean"], "sexe": true, "naissance": "1948-03-12"}, "relationships": {"parametres": "V1"}}
{"class": "Variables", "key": "V1", "attributes": {"poids": 80, "tension": {"min": 10, "max": 16}, "hematocrite": 42, "plaquettes": 250, "uree": 5}, "relationships": {"patient": "P1"}}
{"class": "Personnes", "key": "P2", "attributes": {"nom": "Durand", "prenoms": ["Anne"], "sexe": false, "naissance": "1960-01-02"}, "relationships": {"parametres": "V2"}}
{"class": "Variables", "key": "V2", "attributes": {"poids": 61, "tension": {"min": 7, "max": 12}, "hematocrite": 39, "plaquettes": 300, "uree": 4}, "relationships": {"patient": "P2"}}
)";

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::IoError;
}

}  // namespace

TEST(Snapshot, ParsesObjectsAndTimestamp) {
  const SourceSnapshot s = parse_snapshot(kTwoPatients);
  ASSERT_TRUE(s.timestamp.has_value());
  EXPECT_EQ(*s.timestamp, Instant::month(2000, 7));
  ASSERT_EQ(s.objects.size(), 4u);
  EXPECT_EQ(s.objects[0].source_class, "Personnes");
  EXPECT_EQ(s.objects[0].relationships.find("parametres")->as_ref().key, "V1");
  EXPECT_EQ(s.objects[1].attributes.find("tension")->as_record().find("max")->as_int(), 16);
  EXPECT_NO_THROW(s.validate());
}

TEST(Snapshot, IntegerKeysAndReferenceLists) {
  const SourceSnapshot s = parse_snapshot(
      R"({"class": "A", "key": 7, "relationships": {"others": [8, 9], "none": null}})"
      "\n"
      R"({"class": "B", "key": 8})"
      "\n"
      R"({"class": "B", "key": 9})");
  EXPECT_EQ(s.objects[0].key, "7");
  EXPECT_EQ(s.objects[0].relationships.find("others")->as_list().size(), 2u);
  EXPECT_TRUE(s.objects[0].relationships.find("none")->is_null());
  EXPECT_NO_THROW(s.validate());
}

TEST(Snapshot, FormatErrorsCarryTheLine) {
  try {
    parse_snapshot("{\"class\": \"A\", \"key\": \"1\"}\n{not json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::FormatError);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
  EXPECT_EQ(code_of([] { parse_snapshot(R"({"key": "1"})"); }), ErrorCode::FormatError);
  EXPECT_EQ(code_of([] { parse_snapshot(R"({"class": "A", "key": [1]})"); }), ErrorCode::FormatError);
  EXPECT_EQ(code_of([] { load_snapshot("/nonexistent/snap.jsonl"); }), ErrorCode::IoError);
}

TEST(Snapshot, ValidationFindsDuplicatesAndDanglingReferences) {
  const auto dup = parse_snapshot("{\"class\": \"A\", \"key\": \"1\"}\n{\"class\": \"A\", \"key\": \"1\"}");
  EXPECT_EQ(code_of([&] { dup.validate(); }), ErrorCode::DuplicateSourceObject);
  const auto dangling = parse_snapshot(R"({"class": "A", "key": "1", "relationships": {"r": "9"}})");
  EXPECT_EQ(code_of([&] { dangling.validate(); }), ErrorCode::UnresolvedReference);
}

TEST(Mapping, PatientMappingBuildsOneRowPerPair) {
  const WarehouseSchema schema = patient_schema();
  const SourceSnapshot s = parse_snapshot(kTwoPatients);
  const auto rows = extract_class(schema, *schema.find_class("PATIENT"), s);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].key, (std::vector<std::string>{"P1", "V1"}));
  const Record& r = rows[0].value;
  ASSERT_EQ(r.size(), 7u);
  EXPECT_EQ(r.fields()[0].first, "nom");
  EXPECT_EQ(r.find("prénom")->as_string(), "Michel");
  EXPECT_EQ(r.find("poids")->as_int(), 80);
  EXPECT_EQ(r.find("hématocrite")->as_int(), 42);
  EXPECT_EQ(r.find("urée")->as_int(), 5);
  EXPECT_EQ(rows[1].value.find("nom")->as_string(), "Durand");
}

TEST(Mapping, SelectAndSetOperators) {
  const SourceSnapshot s = parse_snapshot(kTwoPatients);
  auto keys = [&](const std::string& text) {
    std::vector<std::string> out;
    for (const auto& r : evaluate_mapping(*dsl::parse_mapping(text), s)) out.push_back(r.key.front());
    return out;
  };
  EXPECT_EQ(keys("SELECT(p Personnes, p.nom = 'Dupond')"), std::vector<std::string>{"P1"});
  EXPECT_EQ(keys("SELECT(v Variables, v.tension.min < 8)"), std::vector<std::string>{"V2"});
  EXPECT_EQ(keys("UNION(SELECT(p Personnes, p.sexe = true), Personnes)"), (std::vector<std::string>{"P1", "P2"}));
  EXPECT_EQ(keys("INTERSECT(SELECT(p Personnes, p.sexe = true), Personnes)"), std::vector<std::string>{"P1"});
  EXPECT_EQ(keys("DIFFERENCE(Personnes, SELECT(p Personnes, p.sexe = true))"), std::vector<std::string>{"P2"});
  EXPECT_TRUE(keys("Nobody").empty());
}

TEST(Mapping, JoinFollowsRelationships) {
  const SourceSnapshot s = parse_snapshot(kTwoPatients);
  const auto rows = evaluate_mapping(*dsl::parse_mapping("JOIN(p Personnes, v Variables, p.parametres = v)"), s);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1].key, (std::vector<std::string>{"P2", "V2"}));
}

TEST(Mapping, ValidationAgainstTheCatalog) {
  const WarehouseSchema schema = patient_schema();
  EXPECT_TRUE(validate_mapping(*schema.find_class("PATIENT")->mapping, schema.sources).empty());
  const auto ds = validate_mapping(*dsl::parse_mapping("SELECT(x Nowhere, x.a = 1)"), schema.sources);
  EXPECT_TRUE(has_errors(ds));
  EXPECT_EQ(code_of([&] {
              evaluate_mapping(*dsl::parse_mapping("Nowhere"), parse_snapshot(kTwoPatients), &schema.sources);
            }),
            ErrorCode::UnknownSourceClass);
}

TEST(Mapping, PathErrors) {
  const SourceSnapshot s = parse_snapshot(kTwoPatients);
  EXPECT_EQ(code_of([&] { evaluate_mapping(*dsl::parse_mapping("SELECT(p Personnes, q.nom = 1)"), s); }),
            ErrorCode::UnboundVariable);
  EXPECT_EQ(code_of([&] { evaluate_mapping(*dsl::parse_mapping("SELECT(p Personnes, p.taille = 1)"), s); }),
            ErrorCode::UnknownAttribute);
}

TEST(ExtractClass, MissingAttributeAndTypeMismatch) {
  WarehouseSchema schema = patient_schema();
  const SourceSnapshot s = parse_snapshot(kTwoPatients);
  WarehouseClass c = *schema.find_class("PATIENT");
  c.attributes.push_back({"taille", TypeSpec::scalar(TypeSpec::Kind::integer)});
  EXPECT_EQ(code_of([&] { extract_class(schema, c, s); }), ErrorCode::MissingAttribute);
  c = *schema.find_class("PATIENT");
  c.attributes[0].type = TypeSpec::scalar(TypeSpec::Kind::integer);
  EXPECT_EQ(code_of([&] { extract_class(schema, c, s); }), ErrorCode::TypeMismatch);
}

TEST(ExtractClass, ExtraSourceAttributesAreDropped) {
  const WarehouseSchema schema = patient_schema();
  const auto rows = extract_class(schema, *schema.find_class("PATIENT"), parse_snapshot(kTwoPatients));
  EXPECT_FALSE(rows[0].value.has("sexe"));
  EXPECT_FALSE(rows[0].value.has("naissance"));
}

TEST(Schema, PatientSchemaValidates) {
  const WarehouseSchema schema = patient_schema();
  EXPECT_FALSE(has_errors(validate_schema(schema)));
  EXPECT_TRUE(schema.find_class("patient") != nullptr);
  EXPECT_TRUE(schema.find_environment("évolution") != nullptr);
}

TEST(Schema, ValidationReportsBrokenFilters) {
  WarehouseSchema schema = patient_schema();
  WarehouseClass& c = schema.classes.front();
  c.temporal_filter.entries.push_back({"taille", "taille", false});
  c.archive_filter.entries.push_back({"poids", {AggKind::avg, AggMode::strong}, "volume"});
  schema.environments.front().classes.push_back("NOBODY");
  const Diagnostics ds = validate_schema(schema);
  EXPECT_GE(std::count_if(ds.begin(), ds.end(), [](const Diagnostic& d) { return d.severity == Diagnostic::Severity::error; }),
            3);
}
