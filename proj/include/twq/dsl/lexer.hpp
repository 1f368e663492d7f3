#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace twq::dsl {

struct SourcePos {
  int line = 1;
  int column = 1;
  std::string to_string() const { return std::to_string(line) + ":" + std::to_string(column); }
};

enum class Tok {
  identifier,
  string,
  integer,
  decimal,
  lparen, rparen, lbrace, rbrace, lbracket, rbracket,
  comma, semicolon, colon, scope, dot,
  eq, ne, lt, le, gt, ge,
  and_, or_, not_, minus,
  end,
};

struct Token {
  Tok kind = Tok::end;
  std::string text;  // identifier name, string contents, or number spelling
  SourcePos pos;
};

/// Identifiers may contain any non-ASCII UTF-8 letters. Strings are delimited
/// by "...", '...' or «...». `=<` directly before a string is read as `=`.
/// Throws SyntaxError with the position of the offending character.
std::vector<Token> tokenize(std::string_view text);

std::string_view token_name(Tok t);

}  // namespace twq::dsl
