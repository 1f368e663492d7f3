#pragma once

// Fixture loading and small builders shared by the test suites.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "twq/algebra.hpp"
#include "twq/dsl/evaluate.hpp"
#include "twq/dsl/parser.hpp"
#include "twq/dsl/typecheck.hpp"
#include "twq/extraction.hpp"
#include "twq/lifecycle.hpp"

namespace twq::test {

inline std::string data_path(const std::string& rel) { return std::string(TWQ_DATA_DIR) + "/" + rel; }

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("missing fixture " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline WarehouseSchema patient_schema() { return dsl::parse_ddl(slurp(data_path("patient.ddl"))); }

inline std::vector<std::string> snapshot_files(const std::string& dir) {
  std::vector<std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(data_path(dir))) {
    if (e.path().extension() == ".jsonl") out.push_back(e.path().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<SourceSnapshot> snapshots(const std::string& dir) {
  std::vector<SourceSnapshot> out;
  for (const auto& f : snapshot_files(dir)) out.push_back(load_snapshot(f));
  return out;
}

inline Warehouse replay(const WarehouseSchema& schema, const std::vector<SourceSnapshot>& snaps) {
  Warehouse w;
  w.schema = schema;
  for (const auto& s : snaps) refresh(w, s, *s.timestamp);
  return w;
}

/// The monthly Dupond sequence 2000-07 .. 2001-01 loaded into the patient schema.
inline Warehouse dupond() { return replay(patient_schema(), snapshots("snapshots/dupond")); }

inline Collection run(const Warehouse& w, const std::string& text) {
  const dsl::QueryScript q = dsl::parse_query(text);
  const dsl::TypeReport tr = dsl::typecheck(q, w.schema);
  if (!tr.ok()) throw std::runtime_error("query does not typecheck: " + tr.diagnostics.front().to_string());
  return dsl::evaluate(q, w);
}

inline Instant month(int y, unsigned m) { return Instant::month(y, m); }

/// Month domain from inclusive (first, last) pairs given as "YYYY-MM".
inline TemporalDomain months(std::initializer_list<std::pair<const char*, const char*>> spans) {
  std::vector<Interval> ivs;
  for (const auto& [a, b] : spans) ivs.emplace_back(Instant::parse(a), Instant::parse(b));
  return TemporalDomain::normalize(ivs);
}

inline State state(Record value, TemporalDomain domain) {
  State s;
  s.value = std::move(value);
  s.domain = std::move(domain);
  return s;
}

/// A series element holding one numeric attribute.
inline State weight(double v, const char* from, const char* to) {
  return state(Record{{"poids", Value(v)}}, months({{from, to}}));
}

inline const std::string kSerieBinding =
    "SR = MakeSerie(Project(pp Flatten(Past(Select(p Patient, p.nom = «Dupond» ^ p.prénom = «Michel»))), "
    "{pp.poids, pp.domT}));\n";

}  // namespace twq::test
