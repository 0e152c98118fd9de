#include "lexer.hpp"

#include <array>
#include <cstdio>

#include "gr1kit/speclang.hpp"

namespace gr1kit::speclang::detail {
namespace {

constexpr std::array<std::string_view, 8> kSections = {
    "ENV_VARS", "SYS_VARS", "ENV_INIT", "SYS_INIT",
    "ENV_TRANS", "SYS_TRANS", "ENV_LIVENESS", "SYS_LIVENESS",
};

bool is_ident_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}
bool is_ident_char(char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

std::string printable(char c) {
  auto u = static_cast<unsigned char>(c);
  if (u >= 0x20 && u < 0x7f) return std::string(1, c);
  char buf[8];
  std::snprintf(buf, sizeof buf, "\\x%02x", u);
  return buf;
}

[[noreturn]] void fail(int line, int col, std::string token, std::string msg) {
  throw SpecError(Diagnostic{ErrorKind::syntax, line, col, std::move(token), std::move(msg)});
}

}  // namespace

std::vector<Token> lex(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  int line = 1;
  std::size_t line_start = 0;

  auto push = [&](Tok kind, std::size_t start, std::size_t len) {
    Token t;
    t.kind = kind;
    t.text = std::string(text.substr(start, len));
    t.line = line;
    t.column = static_cast<int>(start - line_start) + 1;
    out.push_back(std::move(t));
  };

  while (i < text.size()) {
    const char c = text[i];
    const int col = static_cast<int>(i - line_start) + 1;
    if (c == '\n') {
      push(Tok::newline, i, 1);
      ++i;
      ++line;
      line_start = i;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      continue;
    }
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    if (is_ident_start(c)) {
      std::size_t j = i;
      while (j < text.size() && is_ident_char(text[j])) ++j;
      std::string_view word = text.substr(i, j - i);
      const bool primed = j < text.size() && text[j] == '\'';
      Tok kind = Tok::ident;
      if (word == "true") kind = Tok::kw_true;
      else if (word == "false") kind = Tok::kw_false;
      else if (word == "bool") kind = Tok::kw_bool;
      if (primed) {
        if (kind != Tok::ident) fail(line, col, std::string(word) + "'", "next-step operator applies to variables only");
        kind = Tok::ident_next;
      }
      push(kind, i, j - i);
      i = primed ? j + 1 : j;
      continue;
    }
    if (is_digit(c)) {
      std::size_t j = i;
      std::int64_t v = 0;
      while (j < text.size() && is_digit(text[j])) {
        if (v <= kMaxLiteral) v = v * 10 + (text[j] - '0');
        ++j;
      }
      if (v > kMaxLiteral) fail(line, col, std::string(text.substr(i, j - i)), "integer literal out of range");
      if (j < text.size() && is_ident_start(text[j])) fail(line, col, std::string(text.substr(i, j - i + 1)), "malformed number");
      push(Tok::integer, i, j - i);
      out.back().ival = v;
      i = j;
      continue;
    }
    if (c == '[') {
      std::size_t j = i + 1;
      while (j < text.size() && text[j] != ']' && text[j] != '\n') ++j;
      if (j >= text.size() || text[j] != ']') fail(line, col, "[", "unterminated section header");
      std::string_view name = text.substr(i + 1, j - i - 1);
      bool known = false;
      for (auto s : kSections) known = known || s == name;
      if (!known) fail(line, col, std::string(text.substr(i, j - i + 1)), "unknown section");
      push(Tok::section, i + 1, j - i - 1);
      i = j + 1;
      continue;
    }

    auto next_is = [&](char n) { return i + 1 < text.size() && text[i + 1] == n; };
    switch (c) {
      case ':': push(Tok::colon, i, 1); ++i; continue;
      case '(': push(Tok::lparen, i, 1); ++i; continue;
      case ')': push(Tok::rparen, i, 1); ++i; continue;
      case '&': push(Tok::amp, i, 1); ++i; continue;
      case '|': push(Tok::pipe, i, 1); ++i; continue;
      case '+': push(Tok::plus, i, 1); ++i; continue;
      case '=': push(Tok::eq, i, 1); ++i; continue;
      case '.':
        if (next_is('.')) { push(Tok::dotdot, i, 2); i += 2; continue; }
        break;
      case '!':
        if (next_is('=')) { push(Tok::ne, i, 2); i += 2; continue; }
        push(Tok::bang, i, 1); ++i; continue;
      case '-':
        if (next_is('>')) { push(Tok::arrow, i, 2); i += 2; continue; }
        push(Tok::minus, i, 1); ++i; continue;
      case '<':
        if (next_is('-') && i + 2 < text.size() && text[i + 2] == '>') { push(Tok::dblarrow, i, 3); i += 3; continue; }
        if (next_is('=')) { push(Tok::le, i, 2); i += 2; continue; }
        push(Tok::lt, i, 1); ++i; continue;
      case '>':
        if (next_is('=')) { push(Tok::ge, i, 2); i += 2; continue; }
        push(Tok::gt, i, 1); ++i; continue;
      default:
        break;
    }
    fail(line, col, printable(c), "unexpected character");
  }
  Token end;
  end.kind = Tok::end;
  end.line = line;
  end.column = static_cast<int>(i - line_start) + 1;
  out.push_back(std::move(end));
  return out;
}

}  // namespace gr1kit::speclang::detail
