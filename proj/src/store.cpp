#include "twq/store.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "twq/dsl/parser.hpp"
#include "twq/dsl/printer.hpp"

namespace twq {

namespace {

std::function<void(std::string_view)>& fault_hook() {
  static std::function<void(std::string_view)> hook;
  return hook;
}

Role role_from(const std::string& s) {
  if (s == "current") return Role::current;
  if (s == "past") return Role::past;
  if (s == "archive") return Role::archive;
  throw Error(ErrorCode::FormatError, "unknown state role '" + s + "'");
}

Json state_json(const State& s) {
  Json j = Json::object();
  j["value"] = record_to_json(s.value);
  j["domain"] = s.domain.to_string();
  j["role"] = std::string(role_name(s.role));
  j["owner"] = s.owner.value;
  if (s.open_end) j["open_end"] = true;
  if (!s.support.empty()) j["support"] = record_to_json(s.support);
  return j;
}

State state_from(const Json& j) {
  State s;
  s.value = record_from_json(j.at("value"));
  s.domain = TemporalDomain::parse(j.at("domain").get<std::string>());
  s.role = role_from(j.at("role").get<std::string>());
  s.owner.value = j.at("owner").get<std::string>();
  s.open_end = j.value("open_end", false);
  if (j.contains("support")) s.support = record_from_json(j.at("support"));
  return s;
}

std::optional<Instant> optional_instant(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return Instant::parse(j.get<std::string>());
}

}  // namespace

Json store_to_json(const Warehouse& w) {
  Json j = Json::object();
  j["format"] = "twq-store";
  j["version"] = kStoreVersion;
  j["schema"] = dsl::print_schema(w.schema);
  j["last_refresh"] = w.last_refresh ? Json(w.last_refresh->to_string()) : Json();
  j["next_oid"] = w.next_oid;
  Json objects = Json::array();
  for (const auto& o : w.objects) {
    Json x = Json::object();
    x["oid"] = o.oid.value;
    x["class"] = o.class_name;
    x["key"] = o.source_key;
    x["active"] = o.active;
    x["since"] = o.since.to_string();
    x["current"] = record_to_json(o.current);
    Json past = Json::array();
    for (const auto& s : o.past) past.push_back(state_json(s));
    x["past"] = std::move(past);
    Json archive = Json::array();
    for (const auto& s : o.archive) archive.push_back(state_json(s));
    x["archive"] = std::move(archive);
    objects.push_back(std::move(x));
  }
  j["objects"] = std::move(objects);
  Json journal = Json::array();
  for (const auto& f : w.journal) {
    Json x = Json::object();
    x["rule"] = f.rule;
    x["oid"] = f.oid.value;
    x["states"] = f.states;
    x["at"] = f.at.to_string();
    journal.push_back(std::move(x));
  }
  j["journal"] = std::move(journal);
  return j;
}

Warehouse store_from_json(const Json& j) {
  if (!j.is_object() || j.value("format", "") != "twq-store") {
    throw Error(ErrorCode::FormatError, "not a twq store document");
  }
  if (j.value("version", 0) != kStoreVersion) {
    throw Error(ErrorCode::FormatError, "unsupported store version " + j.at("version").dump());
  }
  Warehouse w;
  try {
    w.schema = dsl::parse_ddl(j.at("schema").get<std::string>());
    w.last_refresh = optional_instant(j.at("last_refresh"));
    w.next_oid = j.at("next_oid").get<std::int64_t>();
    for (const auto& x : j.at("objects")) {
      WarehouseObject o;
      o.oid.value = x.at("oid").get<std::string>();
      o.class_name = x.at("class").get<std::string>();
      o.source_key = x.at("key").get<std::vector<std::string>>();
      o.active = x.at("active").get<bool>();
      o.since = Instant::parse(x.at("since").get<std::string>());
      o.current = record_from_json(x.at("current"));
      for (const auto& s : x.at("past")) o.past.push_back(state_from(s));
      for (const auto& s : x.at("archive")) o.archive.push_back(state_from(s));
      w.objects.push_back(std::move(o));
    }
    for (const auto& x : j.at("journal")) {
      Firing f;
      f.rule = x.at("rule").get<std::string>();
      f.oid.value = x.at("oid").get<std::string>();
      f.states = x.at("states").get<std::size_t>();
      f.at = Instant::parse(x.at("at").get<std::string>());
      w.journal.push_back(std::move(f));
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::FormatError, std::string("malformed store: ") + e.what());
  }
  return w;
}

void save_store(const Warehouse& w, const std::string& path) {
  const std::string text = store_to_json(w).dump(2) + "\n";
  const std::string temp = path + ".tmp";
  const int fd = ::open(temp.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
  if (fd < 0) throw Error(ErrorCode::IoError, "cannot write " + temp);
  std::size_t done = 0;
  while (done < text.size()) {
    const ssize_t n = ::write(fd, text.data() + done, text.size() - done);
    if (n < 0) {
      ::close(fd);
      throw Error(ErrorCode::IoError, "write failed on " + temp);
    }
    done += static_cast<std::size_t>(n);
  }
  if (::fsync(fd) != 0 || ::close(fd) != 0) throw Error(ErrorCode::IoError, "cannot flush " + temp);
  if (fault_hook()) fault_hook()("temp-written");
  if (std::rename(temp.c_str(), path.c_str()) != 0) throw Error(ErrorCode::IoError, "cannot replace " + path);
  if (fault_hook()) fault_hook()("renamed");
}

Warehouse load_store(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read store " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  Json j;
  try {
    j = Json::parse(buf.str());
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::FormatError, path + ": " + e.what());
  }
  return store_from_json(j);
}

void set_store_fault_hook(std::function<void(std::string_view)> hook) { fault_hook() = std::move(hook); }

StoreLock::StoreLock(const std::string& store_path) {
  const std::string lock = store_path + ".lock";
  fd_ = ::open(lock.c_str(), O_RDWR | O_CREAT, 0644);
  if (fd_ < 0) throw Error(ErrorCode::IoError, "cannot open " + lock);
  if (::flock(fd_, LOCK_EX | LOCK_NB) != 0) {
    ::close(fd_);
    fd_ = -1;
    throw Error(ErrorCode::LockError, store_path + " is locked by another process");
  }
}

StoreLock::~StoreLock() {
  if (fd_ >= 0) {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
}

}  // namespace twq
