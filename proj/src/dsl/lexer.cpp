#include "twq/dsl/lexer.hpp"

#include <cctype>

#include "twq/error.hpp"

namespace twq::dsl {

std::string_view token_name(Tok t) {
  switch (t) {
    case Tok::identifier: return "identifier";
    case Tok::string: return "string";
    case Tok::integer: return "integer";
    case Tok::decimal: return "number";
    case Tok::lparen: return "'('";
    case Tok::rparen: return "')'";
    case Tok::lbrace: return "'{'";
    case Tok::rbrace: return "'}'";
    case Tok::lbracket: return "'['";
    case Tok::rbracket: return "']'";
    case Tok::comma: return "','";
    case Tok::semicolon: return "';'";
    case Tok::colon: return "':'";
    case Tok::scope: return "'::'";
    case Tok::dot: return "'.'";
    case Tok::eq: return "'='";
    case Tok::ne: return "'!='";
    case Tok::lt: return "'<'";
    case Tok::le: return "'<='";
    case Tok::gt: return "'>'";
    case Tok::ge: return "'>='";
    case Tok::and_: return "'^'";
    case Tok::or_: return "'or'";
    case Tok::not_: return "'not'";
    case Tok::minus: return "'-'";
    case Tok::end: return "end of input";
  }
  return "?";
}

namespace {

constexpr std::string_view kOpenGuillemet = "\xC2\xAB";
constexpr std::string_view kCloseGuillemet = "\xC2\xBB";

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      if (at_end()) break;
      out.push_back(next());
    }
    out.push_back(Token{Tok::end, "", pos_});
    return out;
  }

 private:
  bool at_end() const { return i_ >= text_.size(); }
  char peek(std::size_t k = 0) const { return i_ + k < text_.size() ? text_[i_ + k] : '\0'; }
  bool starts(std::string_view s, std::size_t at) const { return text_.substr(at, s.size()) == s; }

  void advance(std::size_t n = 1) {
    for (std::size_t k = 0; k < n && i_ < text_.size(); ++k, ++i_) {
      const auto c = static_cast<unsigned char>(text_[i_]);
      if (c == '\n') {
        ++pos_.line;
        pos_.column = 1;
      } else if ((c & 0xC0) != 0x80) {
        ++pos_.column;
      }
    }
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::SyntaxError, pos_.to_string() + ": " + what);
  }

  void skip_space() {
    for (;;) {
      while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) advance();
      if (peek() == '/' && peek(1) == '/') {
        while (!at_end() && peek() != '\n') advance();
      } else if (peek() == '/' && peek(1) == '*') {
        const SourcePos start = pos_;
        advance(2);
        while (!at_end() && !(peek() == '*' && peek(1) == '/')) advance();
        if (at_end()) throw Error(ErrorCode::SyntaxError, start.to_string() + ": unterminated comment");
        advance(2);
      } else {
        return;
      }
    }
  }

  bool string_ahead(std::size_t at) const {
    while (at < text_.size() && (text_[at] == ' ' || text_[at] == '\t')) ++at;
    return at < text_.size() && (text_[at] == '"' || text_[at] == '\'' || starts(kOpenGuillemet, at));
  }

  static bool ident_byte(unsigned char c) {
    return std::isalnum(c) || c == '_' || c >= 0x80;
  }

  Token next() {
    Token t;
    t.pos = pos_;
    const char c = peek();
    if (starts(kOpenGuillemet, i_)) return quoted(t, kCloseGuillemet, kOpenGuillemet.size());
    if (c == '"') return quoted(t, "\"", 1);
    if (c == '\'') return quoted(t, "'", 1);
    if (std::isdigit(static_cast<unsigned char>(c))) return number(t);
    if (ident_byte(static_cast<unsigned char>(c)) && !starts(kCloseGuillemet, i_)) {
      while (!at_end() && ident_byte(static_cast<unsigned char>(peek())) && !starts(kOpenGuillemet, i_) &&
             !starts(kCloseGuillemet, i_)) {
        t.text += peek();
        advance();
      }
      t.kind = Tok::identifier;
      return t;
    }
    auto single = [&](Tok k, std::size_t n) {
      t.kind = k;
      t.text = std::string(text_.substr(i_, n));
      advance(n);
      return t;
    };
    switch (c) {
      case '(': return single(Tok::lparen, 1);
      case ')': return single(Tok::rparen, 1);
      case '{': return single(Tok::lbrace, 1);
      case '}': return single(Tok::rbrace, 1);
      case '[': return single(Tok::lbracket, 1);
      case ']': return single(Tok::rbracket, 1);
      case ',': return single(Tok::comma, 1);
      case ';': return single(Tok::semicolon, 1);
      case '.': return single(Tok::dot, 1);
      case '^': return single(Tok::and_, 1);
      case '-': return single(Tok::minus, 1);
      case ':': return peek(1) == ':' ? single(Tok::scope, 2) : single(Tok::colon, 1);
      case '&':
        if (peek(1) == '&') return single(Tok::and_, 2);
        break;
      case '|':
        if (peek(1) == '|') return single(Tok::or_, 2);
        break;
      case '!': return peek(1) == '=' ? single(Tok::ne, 2) : single(Tok::not_, 1);
      case '<':
        if (peek(1) == '>') return single(Tok::ne, 2);
        return peek(1) == '=' ? single(Tok::le, 2) : single(Tok::lt, 1);
      case '>': return peek(1) == '=' ? single(Tok::ge, 2) : single(Tok::gt, 1);
      case '=':
        if (peek(1) == '<') {
          if (string_ahead(i_ + 2)) return single(Tok::eq, 2);
          return single(Tok::le, 2);
        }
        if (peek(1) == '=') return single(Tok::eq, 2);
        return single(Tok::eq, 1);
      default: break;
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  Token quoted(Token t, std::string_view close, std::size_t open_len) {
    advance(open_len);
    t.kind = Tok::string;
    for (;;) {
      if (at_end()) throw Error(ErrorCode::SyntaxError, t.pos.to_string() + ": unterminated string");
      if (starts(close, i_)) {
        advance(close.size());
        return t;
      }
      if (peek() == '\\' && i_ + 1 < text_.size()) {
        advance();
        const char e = peek();
        t.text += e == 'n' ? '\n' : e == 't' ? '\t' : e;
        advance();
        continue;
      }
      t.text += peek();
      advance();
    }
  }

  Token number(Token t) {
    t.kind = Tok::integer;
    auto digits = [&] {
      while (std::isdigit(static_cast<unsigned char>(peek()))) {
        t.text += peek();
        advance();
      }
    };
    digits();
    if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
      t.kind = Tok::decimal;
      t.text += '.';
      advance();
      digits();
    }
    if ((peek() == 'e' || peek() == 'E') &&
        (std::isdigit(static_cast<unsigned char>(peek(1))) ||
         ((peek(1) == '-' || peek(1) == '+') && std::isdigit(static_cast<unsigned char>(peek(2)))))) {
      t.kind = Tok::decimal;
      t.text += peek();
      advance();
      if (peek() == '-' || peek() == '+') {
        t.text += peek();
        advance();
      }
      digits();
    }
    if (ident_byte(static_cast<unsigned char>(peek())) && !std::isdigit(static_cast<unsigned char>(peek()))) {
      fail("malformed number");
    }
    return t;
  }

  std::string_view text_;
  std::size_t i_ = 0;
  SourcePos pos_;
};

}  // namespace

std::vector<Token> tokenize(std::string_view text) { return Lexer(text).run(); }

}  // namespace twq::dsl
