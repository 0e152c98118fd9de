#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace gr1kit::speclang::detail {

enum class Tok {
  ident,
  ident_next,
  integer,
  section,
  kw_true,
  kw_false,
  kw_bool,
  colon,
  dotdot,
  lparen,
  rparen,
  bang,
  amp,
  pipe,
  arrow,
  dblarrow,
  eq,
  ne,
  lt,
  le,
  gt,
  ge,
  plus,
  minus,
  newline,
  end,
};

struct Token {
  Tok kind = Tok::end;
  std::string text;
  int line = 0;
  int column = 0;
  std::int64_t ival = 0;
};

// Largest magnitude accepted for integer literals and domain bounds.
inline constexpr std::int64_t kMaxLiteral = 1'000'000'000;

std::vector<Token> lex(std::string_view text);

}  // namespace gr1kit::speclang::detail
