#pragma once

// The `twq` command line: init, validate, refresh, query, show.

#include <ostream>

namespace twq {

/// Exit codes: 0 ok, 1 usage, 2 parse/validation failure, 3 runtime failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace twq
