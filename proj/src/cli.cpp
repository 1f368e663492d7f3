#include "twq/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "twq/dsl/evaluate.hpp"
#include "twq/dsl/parser.hpp"
#include "twq/dsl/typecheck.hpp"
#include "twq/lifecycle.hpp"
#include "twq/names.hpp"
#include "twq/render.hpp"
#include "twq/store.hpp"

namespace twq {

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kInvalid = 2;
constexpr int kRuntime = 3;

int exit_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::SyntaxError:
    case ErrorCode::FormatError:
    case ErrorCode::UnsupportedEvent:
    case ErrorCode::UnsupportedAction:
      return kInvalid;
    default:
      return kRuntime;
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct Options {
  std::string schema;
  std::string store;
  std::string snapshot;
  std::string at;
  std::string query_file;
  std::string query_text;
  std::string output = "paper";
  std::string target;
  bool paper_style = false;
  bool force = false;
};

class Commands {
 public:
  Commands(const Options& o, std::ostream& out, std::ostream& err) : o_(o), out_(out), err_(err) {}

  int init() {
    WarehouseSchema s = dsl::parse_ddl(read_file(o_.schema));
    if (!report(validate_schema(s))) return kInvalid;
    if (std::filesystem::exists(store()) && !o_.force) {
      err_ << "error: " << store() << " already exists (use --force to replace it)\n";
      return kUsage;
    }
    StoreLock lock(store());
    Warehouse w;
    w.schema = std::move(s);
    save_store(w, store());
    std::size_t rules = 0;
    for (const auto& e : w.schema.environments) rules += e.rules.size();
    out_ << "initialized " << store() << ": " << w.schema.classes.size() << " class(es), "
         << w.schema.environments.size() << " environment(s), " << rules << " rule(s)\n";
    return kOk;
  }

  int validate() {
    const WarehouseSchema s = dsl::parse_ddl(read_file(o_.schema));
    const Diagnostics ds = validate_schema(s);
    if (!report(ds)) return kInvalid;
    out_ << o_.schema << ": ok\n";
    return kOk;
  }

  int refresh_store() {
    StoreLock lock(store());
    Warehouse w = load_store(store());
    const SourceSnapshot snap = load_snapshot(o_.snapshot);
    std::optional<Instant> at;
    if (!o_.at.empty()) at = Instant::parse(o_.at);
    if (!at) at = snap.timestamp;
    if (!at) {
      err_ << "error: no refresh instant (pass --at or give the snapshot a timestamp line)\n";
      return kUsage;
    }
    const RefreshReport r = refresh(w, snap, *at);
    save_store(w, store());
    out_ << r.to_string();
    for (const auto& e : r.rule_errors) err_ << "warning: " << e << "\n";
    return kOk;
  }

  int query() {
    const Warehouse w = load_store(store());
    std::string text = o_.query_text;
    if (!o_.query_file.empty()) text = read_file(o_.query_file);
    if (text.empty()) {
      err_ << "error: give a query or --file\n";
      return kUsage;
    }
    const dsl::QueryScript script = dsl::parse_query(text);
    const dsl::TypeReport tr = dsl::typecheck(script, w.schema);
    if (!report(tr.diagnostics)) return kInvalid;
    out_ << render(dsl::evaluate(script, w), style()) << "\n";
    return kOk;
  }

  int show() {
    const Warehouse w = load_store(store());
    std::vector<const WarehouseObject*> objs;
    if (const WarehouseObject* o = w.find(Oid{o_.target})) {
      objs.push_back(o);
    } else if (w.schema.find_class(o_.target)) {
      objs = w.extension(o_.target);
    } else {
      err_ << "error: no object or class named " << o_.target << "\n";
      return kRuntime;
    }
    for (std::size_t i = 0; i < objs.size(); ++i) {
      if (i > 0) out_ << "\n";
      out_ << render_object(*objs[i], style());
      if (style() == OutputStyle::json) out_ << "\n";
    }
    return kOk;
  }

 private:
  const std::string& store() const { return o_.store; }

  OutputStyle style() const {
    return o_.paper_style || o_.output == "paper" ? OutputStyle::paper : OutputStyle::json;
  }

  // Prints diagnostics; false when any is an error.
  bool report(const Diagnostics& ds) {
    for (const auto& d : ds) err_ << d.to_string() << "\n";
    return !has_errors(ds);
  }

  const Options& o_;
  std::ostream& out_;
  std::ostream& err_;
};

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Temporal object warehouse: build, refresh and query a warehouse store.", "twq"};
  app.require_subcommand(1);
  Options o;
  if (const char* env = std::getenv("TWQ_STORE")) o.store = env;

  auto add_store = [&](CLI::App* sub) {
    sub->add_option("--store", o.store, "Store file (default: $TWQ_STORE)");
  };
  auto add_output = [&](CLI::App* sub) {
    sub->add_option("--output", o.output, "Result notation")
        ->check(CLI::IsMember({"paper", "json"}));
    sub->add_flag("--paper-style", o.paper_style, "Same as --output paper");
  };

  CLI::App* init = app.add_subcommand("init", "Create an empty store from a schema");
  init->add_option("--schema", o.schema, "Schema DDL file")->required();
  add_store(init);
  init->add_flag("--force", o.force, "Replace an existing store");

  CLI::App* validate = app.add_subcommand("validate", "Check a schema DDL file");
  validate->add_option("--schema,schema", o.schema, "Schema DDL file")->required();

  CLI::App* refresh = app.add_subcommand("refresh", "Load a source snapshot into the store");
  add_store(refresh);
  refresh->add_option("--snapshot", o.snapshot, "Snapshot file (JSON lines)")->required();
  refresh->add_option("--at", o.at, "Refresh instant, e.g. 2000-07 (default: the snapshot timestamp)");

  CLI::App* query = app.add_subcommand("query", "Evaluate a query against the store");
  add_store(query);
  query->add_option("--file", o.query_file, "Query file");
  query->add_option("text", o.query_text, "Query text");
  add_output(query);

  CLI::App* show = app.add_subcommand("show", "Print object histories");
  add_store(show);
  show->add_option("target", o.target, "Object id (OID1) or class name")->required();
  add_output(show);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  if (!validate->parsed() && o.store.empty()) {
    err << "error: no store given (use --store or set TWQ_STORE)\n";
    return kUsage;
  }
  Commands cmd(o, out, err);
  try {
    if (init->parsed()) return cmd.init();
    if (validate->parsed()) return cmd.validate();
    if (refresh->parsed()) return cmd.refresh_store();
    if (query->parsed()) return cmd.query();
    return cmd.show();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code(e.code());
  }
}

}  // namespace twq
