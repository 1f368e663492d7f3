#pragma once

// Persistence of a warehouse as one versioned JSON document, written
// atomically (temp file, fsync, rename) under an advisory lock.

#include <functional>
#include <string>
#include <string_view>

#include "twq/json_io.hpp"
#include "twq/model.hpp"

namespace twq {

inline constexpr int kStoreVersion = 1;

Json store_to_json(const Warehouse& w);
/// Throws FormatError on a malformed or foreign document, SyntaxError when
/// the embedded schema does not parse.
Warehouse store_from_json(const Json& j);

void save_store(const Warehouse& w, const std::string& path);
Warehouse load_store(const std::string& path);

/// Test hook called during save_store with "temp-written" (temp file
/// complete, not yet renamed) and "renamed". Throwing from it simulates a
/// crash at that point. Pass an empty function to clear.
void set_store_fault_hook(std::function<void(std::string_view stage)> hook);

/// Exclusive advisory lock on `<store>.lock`. Throws LockError when another
/// process holds it.
class StoreLock {
 public:
  explicit StoreLock(const std::string& store_path);
  ~StoreLock();
  StoreLock(const StoreLock&) = delete;
  StoreLock& operator=(const StoreLock&) = delete;

 private:
  int fd_ = -1;
};

}  // namespace twq
