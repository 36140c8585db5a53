#include "lama/error.hpp"
#include "lama/parser.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>

namespace lama {

const std::vector<std::string>& reserved_words() {
  static const std::vector<std::string> words = {
      "typedef", "enum",   "constants", "input",      "nodes",     "node",      "returns",
      "let",     "tel",    "local",     "state",      "definition", "transition", "automaton",
      "location", "initial", "edge",    "default",    "assertion", "invariant", "use",
      "true",    "false",  "bool",      "int",        "real",      "sint",      "uint",
      "not",     "or",     "and",       "xor",        "div",       "mod",       "ite",
      "project", "match"};
  return words;
}

const std::vector<std::string>& reserved_symbols() {
  // Two-character symbols first so that a prefix scan yields the longest match.
  static const std::vector<std::string> symbols = {
      "=>", "<=", ">=", "=", "{", "}", ",", ";", "(", ")", ":", "[",
      "]",  "/",  "-",  "^", "#", ".", "_", "<", ">", "+", "*"};
  return symbols;
}

namespace {

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

}  // namespace

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  int line = 1, col = 1;

  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };

  const auto& words = reserved_words();
  const auto& symbols = reserved_symbols();

  while (i < src.size()) {
    char c = src[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
      advance(1);
      continue;
    }
    if (c == '-' && i + 1 < src.size() && src[i + 1] == '-') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    SourceLoc loc{line, col};
    if (is_ident_start(c)) {
      std::size_t j = i;
      while (j < src.size() && is_ident_char(src[j])) ++j;
      std::string text(src.substr(i, j - i));
      bool reserved = std::find(words.begin(), words.end(), text) != words.end();
      if (text == "_") {
        out.push_back({Token::Kind::Symbol, text, loc});
      } else if (reserved) {
        out.push_back({Token::Kind::Keyword, text, loc});
      } else if (j < src.size() && src[j] == '\'') {
        ++j;
        out.push_back({Token::Kind::StateId, text + "'", loc});
      } else {
        out.push_back({Token::Kind::Identifier, text, loc});
      }
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      out.push_back({Token::Kind::Integer, std::string(src.substr(i, j - i)), loc});
      advance(j - i);
      continue;
    }
    bool matched = false;
    for (const auto& s : symbols) {
      if (src.substr(i, s.size()) == s) {
        out.push_back({Token::Kind::Symbol, s, loc});
        advance(s.size());
        matched = true;
        break;
      }
    }
    if (!matched) {
      char shown[8];
      if (std::isprint(static_cast<unsigned char>(c)))
        std::snprintf(shown, sizeof shown, "%c", c);
      else
        std::snprintf(shown, sizeof shown, "\\x%02x", static_cast<unsigned char>(c));
      throw LexError(std::string("unrecognized character '") + shown + "'", loc);
    }
  }
  return out;
}

}  // namespace lama
