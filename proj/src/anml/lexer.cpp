#include "anml/lexer.hpp"

#include <cctype>

namespace fape::anml {

namespace {

struct Cursor {
  const std::string& text;
  const std::string& file;
  size_t pos = 0;
  int line = 1, col = 1;

  bool done() const { return pos >= text.size(); }
  char peek(int ahead = 0) const {
    return pos + ahead < text.size() ? text[pos + ahead] : '\0';
  }
  char advance() {
    char c = text[pos++];
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    return c;
  }
  SourceSpan here(int length = 1) const {
    return SourceSpan{file, line, col, length};
  }
};

}  // namespace

std::vector<Token> lex(const std::string& text, const std::string& file) {
  Cursor c{text, file};
  std::vector<Token> out;

  auto push = [&](Token::Type type, std::string s, SourceSpan span) {
    Token t;
    t.type = type;
    t.text = std::move(s);
    t.span = std::move(span);
    out.push_back(std::move(t));
  };

  while (!c.done()) {
    char ch = c.peek();
    if (ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n') {
      c.advance();
      continue;
    }
    if (ch == '/' && c.peek(1) == '/') {
      while (!c.done() && c.peek() != '\n') c.advance();
      continue;
    }
    if (ch == '/' && c.peek(1) == '*') {
      SourceSpan start = c.here(2);
      c.advance();
      c.advance();
      while (!c.done() && !(c.peek() == '*' && c.peek(1) == '/')) c.advance();
      if (c.done()) throw ParseError{"unterminated block comment", start};
      c.advance();
      c.advance();
      continue;
    }
    SourceSpan span = c.here();
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::string ident;
      while (!c.done() && (std::isalnum(static_cast<unsigned char>(c.peek())) ||
                           c.peek() == '_'))
        ident.push_back(c.advance());
      span.length = static_cast<int>(ident.size());
      push(Token::Type::Ident, std::move(ident), span);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      std::string num;
      while (!c.done() && std::isdigit(static_cast<unsigned char>(c.peek())))
        num.push_back(c.advance());
      span.length = static_cast<int>(num.size());
      Token t;
      t.type = Token::Type::Int;
      t.text = num;
      t.intValue = std::stoll(num);
      t.span = span;
      out.push_back(std::move(t));
      continue;
    }
    c.advance();
    switch (ch) {
      case '(': push(Token::Type::LParen, "(", span); break;
      case ')': push(Token::Type::RParen, ")", span); break;
      case '{': push(Token::Type::LBrace, "{", span); break;
      case '}': push(Token::Type::RBrace, "}", span); break;
      case '[': push(Token::Type::LBracket, "[", span); break;
      case ']': push(Token::Type::RBracket, "]", span); break;
      case ',': push(Token::Type::Comma, ",", span); break;
      case ';': push(Token::Type::Semi, ";", span); break;
      case '.': push(Token::Type::Dot, ".", span); break;
      case '+': push(Token::Type::Plus, "+", span); break;
      case '-': push(Token::Type::Minus, "-", span); break;
      case '<':
        if (c.peek() == '=') { c.advance(); push(Token::Type::Le, "<=", span); }
        else push(Token::Type::Lt, "<", span);
        break;
      case '>':
        if (c.peek() == '=') { c.advance(); push(Token::Type::Ge, ">=", span); }
        else push(Token::Type::Gt, ">", span);
        break;
      case '=':
        if (c.peek() == '=') { c.advance(); push(Token::Type::EqEq, "==", span); }
        else push(Token::Type::Eq, "=", span);
        break;
      case '!':
        if (c.peek() == '=') { c.advance(); push(Token::Type::Neq, "!=", span); }
        else throw ParseError{"unexpected character '!'", span};
        break;
      case ':':
        if (c.peek() == '=') {
          c.advance();
          push(Token::Type::Assign, ":=", span);
        } else if (c.peek() == '-' && c.peek(1) == '>') {
          c.advance();
          c.advance();
          push(Token::Type::Transition, ":->", span);
        } else if (std::isalpha(static_cast<unsigned char>(c.peek()))) {
          std::string word;
          while (!c.done() &&
                 std::isalnum(static_cast<unsigned char>(c.peek())))
            word.push_back(c.advance());
          if (word == "decomposition") {
            push(Token::Type::Decomposition, ":decomposition", span);
          } else {
            // A label colon directly followed by an identifier.
            push(Token::Type::Colon, ":", span);
            SourceSpan identSpan = span;
            identSpan.col += 1;
            identSpan.length = static_cast<int>(word.size());
            push(Token::Type::Ident, std::move(word), identSpan);
          }
        } else {
          push(Token::Type::Colon, ":", span);
        }
        break;
      default:
        throw ParseError{std::string("unexpected character '") + ch + "'",
                         span};
    }
  }
  Token end;
  end.type = Token::Type::End;
  end.span = c.here();
  out.push_back(std::move(end));
  return out;
}

}  // namespace fape::anml
