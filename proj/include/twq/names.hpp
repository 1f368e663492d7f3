#pragma once

#include <string>
#include <string_view>

namespace twq {

/// Lower-cases ASCII letters and strips the accents of Latin-1 letters encoded
/// in UTF-8 ("Hématocrite" -> "hematocrite"). Other bytes pass through.
std::string fold_identifier(std::string_view name);

/// Exact match, or match after folding.
inline bool same_identifier(std::string_view a, std::string_view b) {
  return a == b || fold_identifier(a) == fold_identifier(b);
}

}  // namespace twq
