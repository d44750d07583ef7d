#pragma once

#include <string>
#include <vector>

#include "anml/ast.hpp"

namespace fape::anml {

struct Token {
  enum class Type {
    Ident,
    Int,
    LParen, RParen, LBrace, RBrace, LBracket, RBracket,
    Comma, Semi, Colon, Dot,
    Lt, Le, Gt, Ge, EqEq, Neq, Eq,
    Assign,      // :=
    Transition,  // :->
    Decomposition,  // :decomposition
    Plus, Minus,
    End,
  } type;
  std::string text;
  int64_t intValue = 0;
  SourceSpan span;
};

// Throws ParseError on malformed input (unterminated comment, bad character).
std::vector<Token> lex(const std::string& text, const std::string& file);

}  // namespace fape::anml
