#include "anml/parser.hpp"

#include <set>

#include "anml/lexer.hpp"

namespace fape::anml {

namespace {

const std::set<std::string> kUnsupported = {
    "forall", "foreach", "exists", "when",     "resource",
    "uses",   "consumes", "produces", "sometime", "within",
};

class Parser {
 public:
  Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  ParsedDocument run() {
    ParsedDocument doc;
    while (!at(Token::Type::End)) parseTopLevel(doc);
    return doc;
  }

 private:
  const Token& cur() const { return toks_[pos_]; }
  const Token& peek(int ahead = 1) const {
    size_t p = pos_ + ahead;
    return p < toks_.size() ? toks_[p] : toks_.back();
  }
  bool at(Token::Type t) const { return cur().type == t; }
  bool atIdent(const char* word) const {
    return at(Token::Type::Ident) && cur().text == word;
  }
  Token take() { return toks_[pos_++]; }
  Token expect(Token::Type t, const char* what) {
    if (!at(t))
      throw ParseError{std::string("expected ") + what + ", found '" +
                           cur().text + "'",
                       cur().span};
    return take();
  }
  std::string expectIdent(const char* what) {
    return expect(Token::Type::Ident, what).text;
  }
  bool accept(Token::Type t) {
    if (at(t)) {
      take();
      return true;
    }
    return false;
  }
  void checkSupported(const Token& t) {
    if (t.type == Token::Type::Ident && kUnsupported.count(t.text))
      throw ParseError{"unsupported construct '" + t.text + "'", t.span};
  }

  AstTypeRef parseTypeRef() {
    AstTypeRef ref;
    ref.span = cur().span;
    if (accept(Token::Type::LParen)) {
      ref.unionNames.push_back(expectIdent("type name"));
      while (atIdent("or")) {
        take();
        ref.unionNames.push_back(expectIdent("type name"));
      }
      expect(Token::Type::RParen, "')'");
    } else {
      std::string name = expectIdent("type name");
      if (name == "int" || name == "integer") ref.isInt = true;
      else if (name == "bool" || name == "boolean") ref.isBool = true;
      else ref.unionNames.push_back(std::move(name));
    }
    return ref;
  }

  std::vector<AstParam> parseParamList() {
    std::vector<AstParam> params;
    expect(Token::Type::LParen, "'('");
    if (!at(Token::Type::RParen)) {
      do {
        AstParam p;
        p.span = cur().span;
        p.type = parseTypeRef();
        p.name = expectIdent("parameter name");
        params.push_back(std::move(p));
      } while (accept(Token::Type::Comma));
    }
    expect(Token::Type::RParen, "')'");
    return params;
  }

  AstFluentDecl parseFluentDecl(AstFluentDecl::Kind kind, bool boolValue) {
    AstFluentDecl f;
    f.kind = kind;
    f.span = cur().span;
    if (boolValue) {
      f.valueType.isBool = true;
    } else {
      f.valueType = parseTypeRef();
    }
    f.name = expectIdent("declaration name");
    if (at(Token::Type::LParen)) f.params = parseParamList();
    expect(Token::Type::Semi, "';'");
    return f;
  }

  void parseTypeDecl(ParsedDocument& doc) {
    AstTypeDecl t;
    t.span = take().span;  // 'type'
    t.name = expectIdent("type name");
    if (accept(Token::Type::Lt)) t.parent = expectIdent("parent type");
    if (atIdent("with")) {
      take();
      expect(Token::Type::LBrace, "'{'");
      while (!at(Token::Type::RBrace)) {
        if (atIdent("fluent")) {
          take();
          t.members.push_back(
              parseFluentDecl(AstFluentDecl::Kind::Fluent, false));
        } else if (atIdent("predicate")) {
          take();
          t.members.push_back(
              parseFluentDecl(AstFluentDecl::Kind::Fluent, true));
        } else if (atIdent("constant")) {
          take();
          t.members.push_back(
              parseFluentDecl(AstFluentDecl::Kind::Constant, false));
        } else {
          checkSupported(cur());
          throw ParseError{"expected member declaration", cur().span};
        }
      }
      expect(Token::Type::RBrace, "'}'");
    }
    expect(Token::Type::Semi, "';'");
    doc.types.push_back(std::move(t));
  }

  AstExpr parseExpr() {
    AstExpr e;
    e.span = cur().span;
    if (at(Token::Type::Int)) {
      e.kind = AstExpr::Kind::Int;
      e.value = take().intValue;
    } else if (at(Token::Type::Minus)) {
      take();
      e.kind = AstExpr::Kind::Int;
      e.value = -expect(Token::Type::Int, "integer").intValue;
    } else {
      std::string name = expectIdent("expression");
      if ((name == "start" || name == "end") && at(Token::Type::LParen)) {
        take();
        e.kind = AstExpr::Kind::TimeOf;
        e.name = name;
        AstExpr label;
        label.kind = AstExpr::Kind::Name;
        label.span = cur().span;
        label.name = expectIdent("label");
        e.args.push_back(std::move(label));
        expect(Token::Type::RParen, "')'");
      } else if (at(Token::Type::LParen)) {
        take();
        e.kind = AstExpr::Kind::Call;
        e.name = std::move(name);
        if (!at(Token::Type::RParen)) {
          do {
            e.args.push_back(parseExpr());
          } while (accept(Token::Type::Comma));
        }
        expect(Token::Type::RParen, "')'");
      } else if (at(Token::Type::Dot)) {
        take();
        e.kind = AstExpr::Kind::Dot;
        AstExpr recv;
        recv.kind = AstExpr::Kind::Name;
        recv.name = std::move(name);
        recv.span = e.span;
        e.name = expectIdent("field name");
        e.args.push_back(std::move(recv));
      } else {
        e.kind = AstExpr::Kind::Name;
        e.name = std::move(name);
      }
    }
    // Numeric offsets on time-valued expressions: t + 3, start - 2.
    while (at(Token::Type::Plus) || at(Token::Type::Minus)) {
      bool plus = take().type == Token::Type::Plus;
      int64_t v = expect(Token::Type::Int, "integer offset").intValue;
      e.value += plus ? v : -v;
    }
    return e;
  }

  AstTimeRef timeRefFromExpr(const AstExpr& e) {
    AstTimeRef t;
    t.span = e.span;
    t.offset = e.value;
    if (e.kind == AstExpr::Kind::Int) {
      t.kind = AstTimeRef::Kind::Absolute;
    } else if (e.kind == AstExpr::Kind::Name) {
      if (e.name == "start") t.kind = AstTimeRef::Kind::Start;
      else if (e.name == "end") t.kind = AstTimeRef::Kind::End;
      else {
        t.kind = AstTimeRef::Kind::Named;
        t.name = e.name;
      }
    } else {
      throw ParseError{"expected a timepoint", e.span};
    }
    return t;
  }

  AstInterval parseInterval() {
    AstInterval iv;
    iv.span = expect(Token::Type::LBracket, "'['").span;
    if (atIdent("all")) {
      take();
      iv.from.kind = AstTimeRef::Kind::Start;
      iv.to.kind = AstTimeRef::Kind::End;
    } else {
      AstExpr first = parseExpr();
      iv.from = timeRefFromExpr(first);
      if (accept(Token::Type::Comma)) {
        iv.to = timeRefFromExpr(parseExpr());
      } else {
        iv.to = iv.from;
        iv.point = true;
      }
    }
    expect(Token::Type::RBracket, "']'");
    return iv;
  }

  AstTaskRef parseTaskRef() {
    AstTaskRef tr;
    tr.span = cur().span;
    std::string first = expectIdent("task name");
    if (accept(Token::Type::Colon)) {
      tr.label = std::move(first);
      tr.name = expectIdent("task name");
    } else {
      tr.name = std::move(first);
    }
    expect(Token::Type::LParen, "'('");
    if (!at(Token::Type::RParen)) {
      do {
        tr.args.push_back(parseExpr());
      } while (accept(Token::Type::Comma));
    }
    expect(Token::Type::RParen, "')'");
    return tr;
  }

  // Statement body following a temporal annotation.
  AstStatement parseTimedBody(AstInterval iv) {
    AstStatement st;
    st.hasInterval = true;
    st.interval = std::move(iv);
    st.span = cur().span;
    if (atIdent("ordered")) {
      take();
      st.kind = AstStatement::Kind::Ordered;
      expect(Token::Type::LParen, "'('");
      do {
        st.tasks.push_back(parseTaskRef());
      } while (accept(Token::Type::Comma));
      expect(Token::Type::RParen, "')'");
      expect(Token::Type::Semi, "';'");
      return st;
    }
    if (atIdent("contains")) {
      take();
      st.kind = AstStatement::Kind::Contains;
      st.tasks.push_back(parseTaskRef());
      expect(Token::Type::Semi, "';'");
      return st;
    }
    checkSupported(cur());
    AstExpr lhs = parseExpr();
    if (at(Token::Type::EqEq)) {
      take();
      st.sv = std::move(lhs);
      st.value1 = parseExpr();
      if (accept(Token::Type::Transition)) {
        st.kind = AstStatement::Kind::Change;
        st.value2 = parseExpr();
      } else {
        st.kind = AstStatement::Kind::Persistence;
      }
      expect(Token::Type::Semi, "';'");
      return st;
    }
    if (at(Token::Type::Assign)) {
      take();
      st.kind = AstStatement::Kind::Assign;
      st.sv = std::move(lhs);
      st.value1 = parseExpr();
      expect(Token::Type::Semi, "';'");
      return st;
    }
    // A bare task reference (possibly labelled) is a subtask.
    if (lhs.kind == AstExpr::Kind::Call) {
      st.kind = AstStatement::Kind::Subtask;
      AstTaskRef tr;
      tr.span = lhs.span;
      tr.name = lhs.name;
      tr.args = lhs.args;
      st.tasks.push_back(std::move(tr));
      expect(Token::Type::Semi, "';'");
      return st;
    }
    if (lhs.kind == AstExpr::Kind::Name && accept(Token::Type::Colon)) {
      st.kind = AstStatement::Kind::Subtask;
      AstTaskRef tr = parseTaskRef();
      tr.label = lhs.name;
      st.tasks.push_back(std::move(tr));
      expect(Token::Type::Semi, "';'");
      return st;
    }
    throw ParseError{"expected '==' , ':=' or a task reference", cur().span};
  }

  AstStatement parseConstraintOrAssign() {
    AstStatement st;
    st.span = cur().span;
    checkSupported(cur());
    AstExpr lhs = parseExpr();
    if (lhs.kind == AstExpr::Kind::Call && at(Token::Type::Assign)) {
      take();
      st.kind = AstStatement::Kind::ConstAssign;
      st.sv = std::move(lhs);
      st.value1 = parseExpr();
      expect(Token::Type::Semi, "';'");
      return st;
    }
    st.kind = AstStatement::Kind::Constraint;
    switch (cur().type) {
      case Token::Type::EqEq: st.op = "=="; break;
      case Token::Type::Eq: st.op = "="; break;
      case Token::Type::Neq: st.op = "!="; break;
      case Token::Type::Lt: st.op = "<"; break;
      case Token::Type::Le: st.op = "<="; break;
      case Token::Type::Gt: st.op = ">"; break;
      case Token::Type::Ge: st.op = ">="; break;
      case Token::Type::Semi:
        // Bare relation application, e.g. connected(d, d2);
        take();
        st.lhs = std::move(lhs);
        st.op = "apply";
        return st;
      default:
        throw ParseError{"expected a comparison operator", cur().span};
    }
    take();
    st.lhs = std::move(lhs);
    st.rhs = parseExpr();
    expect(Token::Type::Semi, "';'");
    return st;
  }

  void parseActionItem(std::vector<AstLocalConst>& locals,
                       std::vector<AstStatement>& statements,
                       AstAction* action) {
    if (atIdent("motivated")) {
      Token t = take();
      if (!action)
        throw ParseError{"'motivated' only allowed directly in an action",
                         t.span};
      action->motivated = true;
      expect(Token::Type::Semi, "';'");
      return;
    }
    if (atIdent("duration")) {
      take();
      expect(Token::Type::Assign, "':='");
      AstStatement st;
      st.kind = AstStatement::Kind::DurationAssign;
      st.span = cur().span;
      st.value1 = parseExpr();
      expect(Token::Type::Semi, "';'");
      statements.push_back(std::move(st));
      return;
    }
    if (atIdent("constant")) {
      take();
      AstLocalConst lc;
      lc.span = cur().span;
      lc.type = parseTypeRef();
      lc.name = expectIdent("constant name");
      expect(Token::Type::Semi, "';'");
      locals.push_back(std::move(lc));
      return;
    }
    if (at(Token::Type::Decomposition)) {
      Token t = take();
      if (!action)
        throw ParseError{"nested decompositions are not supported", t.span};
      AstDecomposition d;
      d.span = t.span;
      expect(Token::Type::LBrace, "'{'");
      while (!at(Token::Type::RBrace))
        parseActionItem(d.locals, d.statements, nullptr);
      expect(Token::Type::RBrace, "'}'");
      accept(Token::Type::Semi);
      action->decompositions.push_back(std::move(d));
      return;
    }
    if (at(Token::Type::LBracket)) {
      AstInterval iv = parseInterval();
      statements.push_back(parseTimedBody(std::move(iv)));
      return;
    }
    statements.push_back(parseConstraintOrAssign());
  }

  void parseAction(ParsedDocument& doc) {
    AstAction a;
    a.span = take().span;  // 'action'
    a.name = expectIdent("action name");
    a.params = parseParamList();
    expect(Token::Type::LBrace, "'{'");
    while (!at(Token::Type::RBrace))
      parseActionItem(a.locals, a.statements, &a);
    expect(Token::Type::RBrace, "'}'");
    accept(Token::Type::Semi);
    doc.actions.push_back(std::move(a));
  }

  void parseTopLevel(ParsedDocument& doc) {
    if (atIdent("type")) return parseTypeDecl(doc);
    if (atIdent("instance")) {
      AstInstanceDecl inst;
      inst.span = take().span;
      inst.type = parseTypeRef();
      inst.names.push_back(expectIdent("instance name"));
      while (accept(Token::Type::Comma))
        inst.names.push_back(expectIdent("instance name"));
      expect(Token::Type::Semi, "';'");
      doc.instances.push_back(std::move(inst));
      return;
    }
    if (atIdent("fluent")) {
      take();
      doc.fluents.push_back(parseFluentDecl(AstFluentDecl::Kind::Fluent, false));
      return;
    }
    if (atIdent("predicate")) {
      take();
      doc.fluents.push_back(parseFluentDecl(AstFluentDecl::Kind::Fluent, true));
      return;
    }
    if (atIdent("function")) {
      take();
      doc.fluents.push_back(parseFluentDecl(AstFluentDecl::Kind::Fluent, false));
      return;
    }
    if (atIdent("constant")) {
      take();
      doc.fluents.push_back(
          parseFluentDecl(AstFluentDecl::Kind::Constant, false));
      return;
    }
    if (atIdent("action")) return parseAction(doc);
    if (at(Token::Type::LBracket)) {
      AstInterval iv = parseInterval();
      doc.statements.push_back(parseTimedBody(std::move(iv)));
      return;
    }
    checkSupported(cur());
    if (at(Token::Type::Ident) || at(Token::Type::Int)) {
      doc.statements.push_back(parseConstraintOrAssign());
      return;
    }
    throw ParseError{"unexpected token '" + cur().text + "'", cur().span};
  }

  std::vector<Token> toks_;
  size_t pos_ = 0;
};

}  // namespace

ParsedDocument parse(const std::string& text, const std::string& file) {
  return Parser(lex(text, file)).run();
}

void mergeInto(ParsedDocument& a, ParsedDocument&& b) {
  auto move_all = [](auto& dst, auto& src) {
    dst.insert(dst.end(), std::make_move_iterator(src.begin()),
               std::make_move_iterator(src.end()));
  };
  move_all(a.types, b.types);
  move_all(a.fluents, b.fluents);
  move_all(a.instances, b.instances);
  move_all(a.actions, b.actions);
  move_all(a.statements, b.statements);
}

}  // namespace fape::anml
