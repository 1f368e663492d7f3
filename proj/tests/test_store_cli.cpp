#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <sys/wait.h>
#include <unistd.h>

#include "support.hpp"
#include "twq/cli.hpp"
#include "twq/store.hpp"

using namespace twq;
using namespace twq::test;
namespace fs = std::filesystem;

namespace {

class StoreTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("twq-test-" + std::to_string(::getpid()) + "-" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override {
    set_store_fault_hook({});
    fs::remove_all(dir_);
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult cli(std::vector<std::string> args) {
  args.insert(args.begin(), "twq");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

}  // namespace

TEST_F(StoreTest, SaveLoadIdentity) {
  Warehouse w = replay(patient_schema(), snapshots("snapshots/archival"));
  ASSERT_FALSE(w.objects[0].archive.empty());
  save_store(w, path("s.json"));
  const Warehouse back = load_store(path("s.json"));
  EXPECT_EQ(back, w);
  save_store(back, path("t.json"));
  EXPECT_EQ(slurp(path("s.json")), slurp(path("t.json")));
  EXPECT_FALSE(fs::exists(path("s.json.tmp")));
}

TEST_F(StoreTest, DocumentShape) {
  const Json j = store_to_json(dupond());
  EXPECT_EQ(j["format"], "twq-store");
  EXPECT_EQ(j["version"], kStoreVersion);
  EXPECT_EQ(j["last_refresh"], "2001-01");
  EXPECT_EQ(j["objects"].size(), 1u);
  EXPECT_EQ(store_from_json(j), dupond());
}

TEST_F(StoreTest, RejectsForeignOrBrokenDocuments) {
  auto code = [](const Json& j) {
    try {
      store_from_json(j);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::IoError;
  };
  EXPECT_EQ(code(Json::parse(R"({"format": "other"})")), ErrorCode::FormatError);
  Json j = store_to_json(dupond());
  j["version"] = 99;
  EXPECT_EQ(code(j), ErrorCode::FormatError);
  j = store_to_json(dupond());
  j["objects"][0]["past"][0]["role"] = "future";
  EXPECT_EQ(code(j), ErrorCode::FormatError);
  j = store_to_json(dupond());
  j["schema"] = "schema broken {";
  EXPECT_EQ(code(j), ErrorCode::SyntaxError);
  write_file(path("bad.json"), "{ not json");
  EXPECT_THROW(load_store(path("bad.json")), Error);
}

TEST_F(StoreTest, CrashBeforeRenameKeepsTheOldStore) {
  const Warehouse old = dupond();
  save_store(old, path("s.json"));
  Warehouse next = old;
  refresh(next, SourceSnapshot{}, Instant::month(2001, 2));
  set_store_fault_hook([](std::string_view stage) {
    if (stage == "temp-written") throw std::runtime_error("simulated crash");
  });
  EXPECT_THROW(save_store(next, path("s.json")), std::runtime_error);
  set_store_fault_hook({});
  EXPECT_EQ(load_store(path("s.json")), old);
}

TEST_F(StoreTest, CrashAfterRenameKeepsTheNewStore) {
  const Warehouse old = dupond();
  save_store(old, path("s.json"));
  Warehouse next = old;
  refresh(next, SourceSnapshot{}, Instant::month(2001, 2));
  set_store_fault_hook([](std::string_view stage) {
    if (stage == "renamed") throw std::runtime_error("simulated crash");
  });
  EXPECT_THROW(save_store(next, path("s.json")), std::runtime_error);
  set_store_fault_hook({});
  EXPECT_EQ(load_store(path("s.json")), next);
}

TEST_F(StoreTest, LockIsExclusive) {
  const std::string store = path("s.json");
  {
    StoreLock first(store);
    try {
      StoreLock second(store);
      FAIL() << "second lock acquired";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::LockError);
    }
    const pid_t child = ::fork();
    if (child == 0) {
      try {
        StoreLock other(store);
        ::_exit(0);
      } catch (const Error&) {
        ::_exit(7);
      }
    }
    int status = 0;
    ::waitpid(child, &status, 0);
    EXPECT_EQ(WEXITSTATUS(status), 7);
  }
  EXPECT_NO_THROW(StoreLock again(store));
}

TEST_F(StoreTest, CliFullSession) {
  const std::string store = path("s.json");
  auto init = cli({"init", "--schema", data_path("patient.ddl"), "--store", store});
  ASSERT_EQ(init.code, 0) << init.err;
  EXPECT_NE(init.out.find("1 class(es)"), std::string::npos);
  EXPECT_EQ(cli({"init", "--schema", data_path("patient.ddl"), "--store", store}).code, 1);
  for (const auto& f : snapshot_files("snapshots/dupond")) {
    const auto r = cli({"refresh", "--store", store, "--snapshot", f});
    ASSERT_EQ(r.code, 0) << r.err;
  }
  EXPECT_EQ(load_store(store), dupond());

  const auto q = cli({"query", "--store", store, "--file", data_path("queries/agreg.twq")});
  ASSERT_EQ(q.code, 0) << q.err;
  EXPECT_EQ(q.out, "[poids=79]\n");
  const auto j = cli({"query", "--store", store, "--output", "json", "Agreg(MakeSerie(Project(s Flatten(Past(Patient)), "
                                                                  "{s.poids, s.domT})), {(poids, count(poids))})"});
  ASSERT_EQ(j.code, 0) << j.err;
  EXPECT_EQ(Json::parse(j.out)["value"]["poids"], 4);

  const auto show = cli({"show", "--store", store, "OID1"});
  ASSERT_EQ(show.code, 0);
  EXPECT_EQ(show.out.rfind("OID1 PATIENT", 0), 0u);
  EXPECT_EQ(cli({"show", "--store", store, "PATIENT"}).out, show.out);
  EXPECT_EQ(cli({"show", "--store", store, "OID9"}).code, 3);
}

TEST_F(StoreTest, CliExitCodes) {
  const std::string store = path("s.json");
  ASSERT_EQ(cli({"init", "--schema", data_path("patient.ddl"), "--store", store}).code, 0);
  EXPECT_EQ(cli({}).code, 1);
  EXPECT_EQ(cli({"frobnicate"}).code, 1);
  EXPECT_EQ(cli({"refresh", "--store", store}).code, 1);
  EXPECT_EQ(cli({"query", "--store", store, "Select(p Patient, p.nom = )"}).code, 2);
  const auto typed = cli({"query", "--store", store, "Flatten(Patient)"});
  EXPECT_EQ(typed.code, 2);
  EXPECT_NE(typed.err.find("Flatten expects"), std::string::npos);
  write_file(path("broken.ddl"), "schema X;\ninterface A { attribute Strnig a; }");
  EXPECT_EQ(cli({"validate", path("broken.ddl")}).code, 2);
  EXPECT_EQ(cli({"validate", "--schema", data_path("patient.ddl")}).code, 0);
  write_file(path("bad.jsonl"), "{oops");
  EXPECT_EQ(cli({"refresh", "--store", store, "--snapshot", path("bad.jsonl"), "--at", "2000-07"}).code, 2);
  const std::string last = snapshot_files("snapshots/dupond").back();
  ASSERT_EQ(cli({"refresh", "--store", store, "--snapshot", last}).code, 0);
  const auto stale = cli({"refresh", "--store", store, "--snapshot", last, "--at", "2000-01"});
  EXPECT_EQ(stale.code, 3);
  EXPECT_NE(stale.err.find("NonMonotonicTimestamp"), std::string::npos);
  EXPECT_EQ(cli({"query", "--store", path("missing.json"), "Patient"}).code, 3);
  {
    StoreLock held(store);
    EXPECT_EQ(cli({"refresh", "--store", store, "--snapshot", last, "--at", "2001-02"}).code, 3);
  }
}

TEST_F(StoreTest, StoreComesFromTheEnvironment) {
  const std::string store = path("env.json");
  ::setenv("TWQ_STORE", store.c_str(), 1);
  const auto init = cli({"init", "--schema", data_path("patient.ddl")});
  ::unsetenv("TWQ_STORE");
  ASSERT_EQ(init.code, 0) << init.err;
  EXPECT_TRUE(fs::exists(store));
}

TEST_F(StoreTest, InstalledBinaryRuns) {
  const std::string store = path("bin.json");
  const std::string bin = TWQ_CLI_PATH;
  auto sh = [](const std::string& cmd) { return WEXITSTATUS(std::system(cmd.c_str())); };
  ASSERT_EQ(sh(bin + " init --schema " + data_path("patient.ddl") + " --store " + store + " > /dev/null"), 0);
  for (const auto& f : snapshot_files("snapshots/dupond")) {
    ASSERT_EQ(sh(bin + " refresh --store " + store + " --snapshot " + f + " > /dev/null"), 0);
  }
  const std::string out = path("out.txt");
  ASSERT_EQ(sh(bin + " query --store " + store + " --paper-style --file " + data_path("queries/scaleup.twq") + " > " + out),
            0);
  EXPECT_EQ(slurp(out), "<[poids=79,6 ; domT=<[07-2000;09-2000]>] ;\n[poids=78,5 ; domT=<[10-2000;12-2000]>]>\n");
  EXPECT_EQ(sh(bin + " query --store " + store + " 'Flatten(Patient)' 2> /dev/null"), 2);
}
