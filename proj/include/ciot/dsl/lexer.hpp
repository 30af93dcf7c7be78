#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ciot::dsl {

enum class TokenKind { Identifier, Keyword, Integer, Float, String, Punct, End };

const char* to_string(TokenKind k);

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;  // raw lexeme; string tokens keep their quotes
  int line = 1;
  int column = 1;

  /// Column one past the last character (tokens never span lines).
  int end_column() const { return column + static_cast<int>(text.size()); }
  bool is(TokenKind k, std::string_view t) const { return kind == k && text == t; }
  bool is_keyword(std::string_view t) const { return is(TokenKind::Keyword, t); }
  bool is_punct(std::string_view t) const { return is(TokenKind::Punct, t); }
};

bool is_keyword(std::string_view word);
const std::vector<std::string_view>& keywords();

/// Splits `source` into tokens, skipping whitespace and `//` comments. The
/// result always ends with a TokenKind::End token. Throws Error(E_LEX).
std::vector<Token> tokenize(std::string_view source, const std::string& file = {});

/// Decodes the body of a string token (quotes stripped, escapes applied).
std::string unescape_string_token(std::string_view raw);

}  // namespace ciot::dsl
