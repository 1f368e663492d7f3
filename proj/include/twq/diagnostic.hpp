#pragma once

#include <string>
#include <vector>

namespace twq {

/// A non-fatal finding from validation or typechecking.
struct Diagnostic {
  enum class Severity { error, note };

  Severity severity = Severity::error;
  std::string message;
  /// Where the problem is: "class PATIENT / archive filter", "line 3:14", ...
  std::string location;

  std::string to_string() const {
    return (severity == Severity::error ? "error: " : "note: ") +
           (location.empty() ? std::string() : location + ": ") + message;
  }
  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

using Diagnostics = std::vector<Diagnostic>;

inline bool has_errors(const Diagnostics& ds) {
  for (const auto& d : ds) {
    if (d.severity == Diagnostic::Severity::error) return true;
  }
  return false;
}

}  // namespace twq
