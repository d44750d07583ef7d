#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fape::anml {

struct SourceSpan {
  std::string file;
  int line = 1, col = 1, length = 1;

  std::string str() const {
    return file + ":" + std::to_string(line) + ":" + std::to_string(col);
  }
};

struct ParseError {
  std::string message;
  SourceSpan span;
};

struct AstTypeRef {
  std::vector<std::string> unionNames;  // "A or B" unions
  bool isInt = false;
  bool isBool = false;
  SourceSpan span;
};

struct AstParam {
  AstTypeRef type;
  std::string name;
  SourceSpan span;
};

struct AstExpr {
  enum class Kind {
    Name,    // identifier
    Call,    // f(args)
    Dot,     // receiver.field  (args[0] = receiver)
    Int,     // literal
    TimeOf,  // start(label) / end(label); name is "start"/"end"
  } kind = Kind::Name;
  std::string name;
  std::vector<AstExpr> args;
  int64_t value = 0;
  SourceSpan span;
};

struct AstTimeRef {
  enum class Kind { Start, End, Named, Absolute } kind = Kind::Start;
  std::string name;
  int64_t offset = 0;
  SourceSpan span;
};

struct AstInterval {
  AstTimeRef from, to;
  bool point = false;
  SourceSpan span;
};

struct AstTaskRef {
  std::string label;
  std::string name;
  std::vector<AstExpr> args;
  SourceSpan span;
};

struct AstStatement {
  enum class Kind {
    Persistence,     // [i] sv == v
    Change,          // [i] sv == v1 :-> v2
    Assign,          // [i] sv := v
    Subtask,         // [i] task(args)
    Ordered,         // [i] ordered(t1, ..., tn)
    Contains,        // [i] contains task(args)
    Constraint,      // lhs OP rhs   or bare relation application
    DurationAssign,  // duration := expr
    ConstAssign,     // rel(consts) := const   (top level)
  } kind;
  bool hasInterval = false;
  AstInterval interval;
  AstExpr sv;
  AstExpr value1, value2;
  std::vector<AstTaskRef> tasks;
  std::string op;  // constraint operator
  AstExpr lhs, rhs;
  SourceSpan span;
};

struct AstLocalConst {
  AstTypeRef type;
  std::string name;
  SourceSpan span;
};

struct AstDecomposition {
  std::vector<AstLocalConst> locals;
  std::vector<AstStatement> statements;
  SourceSpan span;
};

struct AstAction {
  std::string name;
  std::vector<AstParam> params;
  bool motivated = false;
  std::vector<AstLocalConst> locals;
  std::vector<AstStatement> statements;
  std::vector<AstDecomposition> decompositions;
  SourceSpan span;
};

struct AstFluentDecl {
  enum class Kind { Fluent, Constant } kind = Kind::Fluent;
  AstTypeRef valueType;
  std::string name;
  std::vector<AstParam> params;
  SourceSpan span;
};

struct AstTypeDecl {
  std::string name;
  std::string parent;  // empty if none
  std::vector<AstFluentDecl> members;
  SourceSpan span;
};

struct AstInstanceDecl {
  AstTypeRef type;
  std::vector<std::string> names;
  SourceSpan span;
};

// Parse result covering both domain and problem content.
struct ParsedDocument {
  std::vector<AstTypeDecl> types;
  std::vector<AstFluentDecl> fluents;
  std::vector<AstInstanceDecl> instances;
  std::vector<AstAction> actions;
  std::vector<AstStatement> statements;  // top-level problem statements
};

}  // namespace fape::anml
