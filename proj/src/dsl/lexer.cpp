#include "ciot/dsl/lexer.hpp"

#include <algorithm>
#include <cctype>

#include "ciot/diagnostic.hpp"

namespace ciot::dsl {

const char* to_string(TokenKind k) {
  switch (k) {
    case TokenKind::Identifier: return "identifier";
    case TokenKind::Keyword: return "keyword";
    case TokenKind::Integer: return "integer";
    case TokenKind::Float: return "float";
    case TokenKind::String: return "string";
    case TokenKind::Punct: return "punctuation";
    case TokenKind::End: return "end of input";
  }
  return "?";
}

const std::vector<std::string_view>& keywords() {
  static const std::vector<std::string_view> words = {
      "action",    "and",       "bool",       "component", "connect",  "continuous",
      "does",      "entry",     "event",      "exit",      "false",    "float",
      "generic",   "incoming",  "initial",    "instance",  "int",      "interface",
      "not",       "on",        "op",         "or",        "outgoing", "part",
      "payload",   "port",      "property",   "provides",  "receive",  "requires",
      "self",      "send",      "state",      "statemachine", "string", "to",
      "transition", "true",     "when",
  };
  return words;
}

bool is_keyword(std::string_view word) {
  const auto& words = keywords();
  return std::find(words.begin(), words.end(), word) != words.end();
}

namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

class Lexer {
 public:
  Lexer(std::string_view src, const std::string& file) : src_(src), file_(file) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_trivia();
      if (pos_ >= src_.size()) break;
      out.push_back(next());
    }
    out.push_back(Token{TokenKind::End, "", line_, col_});
    return out;
  }

 private:
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_trivia() {
    while (pos_ < src_.size()) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '/' && peek(1) == '/') {
        while (pos_ < src_.size() && peek() != '\n') advance();
      } else {
        break;
      }
    }
  }

  [[noreturn]] void fail(const std::string& msg, int line, int col) const {
    Diagnostic d{"E_LEX", Severity::Error, msg, {line, col}, file_};
    throw Error("E_LEX", format_diagnostic(d), {d});
  }

  Token next() {
    const int line = line_;
    const int col = col_;
    const std::size_t start = pos_;
    const char c = peek();

    if (is_ident_start(c)) {
      while (pos_ < src_.size() && is_ident_char(peek())) advance();
      std::string text(src_.substr(start, pos_ - start));
      auto kind = is_keyword(text) ? TokenKind::Keyword : TokenKind::Identifier;
      return Token{kind, std::move(text), line, col};
    }

    if (is_digit(c)) {
      bool is_float = false;
      while (is_digit(peek())) advance();
      if (peek() == '.' && is_digit(peek(1))) {
        is_float = true;
        advance();
        while (is_digit(peek())) advance();
      }
      if (peek() == 'e' || peek() == 'E') {
        std::size_t k = 1;
        if (peek(k) == '+' || peek(k) == '-') ++k;
        if (is_digit(peek(k))) {
          is_float = true;
          for (std::size_t i = 0; i < k; ++i) advance();
          while (is_digit(peek())) advance();
        }
      }
      if (is_ident_char(peek())) fail("malformed number literal", line, col);
      return Token{is_float ? TokenKind::Float : TokenKind::Integer,
                   std::string(src_.substr(start, pos_ - start)), line, col};
    }

    if (c == '"') {
      advance();
      for (;;) {
        if (pos_ >= src_.size() || peek() == '\n') fail("unterminated string literal", line, col);
        char s = peek();
        if (s == '\\') {
          advance();
          if (pos_ >= src_.size() || peek() == '\n') fail("unterminated string literal", line, col);
          char e = peek();
          if (e != '"' && e != '\\' && e != 'n' && e != 't')
            fail(std::string("unknown escape sequence '\\") + e + "'", line_, col_ - 1);
          advance();
        } else if (s == '"') {
          advance();
          break;
        } else {
          advance();
        }
      }
      return Token{TokenKind::String, std::string(src_.substr(start, pos_ - start)), line, col};
    }

    static constexpr std::string_view two_char[] = {"->", "==", "!=", "<=", ">="};
    for (auto p : two_char) {
      if (src_.substr(pos_, 2) == p) {
        advance();
        advance();
        return Token{TokenKind::Punct, std::string(p), line, col};
      }
    }
    static constexpr std::string_view one_char = "{}()[];:,.<>=+-";
    if (one_char.find(c) != std::string_view::npos) {
      advance();
      return Token{TokenKind::Punct, std::string(1, c), line, col};
    }

    std::string shown = std::isprint(static_cast<unsigned char>(c))
                            ? std::string(1, c)
                            : "\\x" + std::to_string(static_cast<unsigned char>(c));
    fail("illegal character '" + shown + "'", line, col);
  }

  std::string_view src_;
  const std::string& file_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace

std::vector<Token> tokenize(std::string_view source, const std::string& file) {
  return Lexer(source, file).run();
}

std::string unescape_string_token(std::string_view raw) {
  std::string out;
  if (raw.size() < 2) return out;
  raw = raw.substr(1, raw.size() - 2);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] == '\\' && i + 1 < raw.size()) {
      char e = raw[++i];
      out += e == 'n' ? '\n' : e == 't' ? '\t' : e;
    } else {
      out += raw[i];
    }
  }
  return out;
}

}  // namespace ciot::dsl
