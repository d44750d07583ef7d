#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "binding.hpp"
#include "stn.hpp"
#include "util.hpp"

namespace fape {

using TypeId = int32_t;
using ObjId = int64_t;  // shares the binding value space
using SvId = int32_t;
using TaskSymId = int32_t;
using TemplateId = int32_t;
using RelationId = int32_t;

constexpr int32_t kNone = -1;

// A term is a constant object, a binding variable, or one of two sentinels:
// Any unifies with everything except Undefined; Undefined unifies with
// nothing, itself included.
struct Term {
  enum class Kind : uint8_t { Const, Var, Any, Undefined };
  Kind kind = Kind::Const;
  int64_t v = 0;  // object id for Const, VarId for Var

  static Term constant(int64_t obj) { return Term{Kind::Const, obj}; }
  static Term var(VarId id) { return Term{Kind::Var, id}; }
  static Term any() { return Term{Kind::Any, 0}; }
  static Term undefined() { return Term{Kind::Undefined, 0}; }

  bool isConst() const { return kind == Kind::Const; }
  bool isVar() const { return kind == Kind::Var; }
  bool operator==(const Term& o) const { return kind == o.kind && v == o.v; }
};

struct ObjectType {
  std::string name;
  std::vector<TypeId> parents;
  std::vector<ObjId> instances;  // includes subtype instances, ordered
};

struct ObjectInfo {
  std::string name;
  TypeId type = kNone;  // declared type
};

struct StateVariableTemplate {
  std::string name;
  std::vector<TypeId> paramTypes;
  TypeId valueType = kNone;
};

struct TaskSymbol {
  std::string name;
  std::vector<TypeId> paramTypes;
};

// Template-local references: variables index into ActionTemplate::vars,
// timepoints into ActionTemplate::timepointNames (0 = start, 1 = end).
struct TPattern {
  enum class Kind : uint8_t { Const, Local, Any } kind = Kind::Const;
  int64_t v = 0;

  static TPattern constant(int64_t obj) { return TPattern{Kind::Const, obj}; }
  static TPattern local(int idx) { return TPattern{Kind::Local, idx}; }
  static TPattern any() { return TPattern{Kind::Any, 0}; }
};

enum class AssertKind : uint8_t { Persistence, Change, Assignment };

struct AssertionPattern {
  AssertKind kind;
  SvId sv;
  std::vector<TPattern> args;
  TPattern from;   // Change: initial value; unused otherwise
  TPattern value;  // Persistence: held value; Change: final; Assignment: set
  int ts = 0, te = 1;
};

struct SubtaskPattern {
  TaskSymId task;
  std::vector<TPattern> args;
  int ts, te;
  std::string label;  // optional source label
};

struct ConstraintPattern {
  enum class Kind : uint8_t {
    VarEq,       // a == b
    VarNeq,      // a != b
    InTable,     // (locals/consts...) in relation table
    TimeGE,      // time[tb] - time[ta] >= d
    DurationEq,  // time[tb] - time[ta] == delta, delta from table or constant
    DurationGE,
  } kind;
  TPattern a, b;               // VarEq / VarNeq
  RelationId relation = kNone; // InTable / Duration*
  std::vector<TPattern> args;  // InTable relation arguments
  int ta = 0, tb = 1;
  int64_t d = 0;               // TimeGE offset or constant duration
  bool constDuration = false;
};

struct LocalVar {
  std::string name;
  TypeId type;
};

struct ActionTemplate {
  std::string name;         // e.g. "transport.m2"
  std::string baseName;     // e.g. "transport"
  std::vector<LocalVar> vars;  // declared params first, then method locals
  int headParamCount = 0;
  TaskSymId task = kNone;
  std::vector<TPattern> taskArgs;
  bool dependent = false;
  std::vector<SubtaskPattern> subtasks;
  std::vector<AssertionPattern> assertions;
  std::vector<ConstraintPattern> constraints;
  std::vector<std::string> timepointNames;  // [0]="start", [1]="end", ...
  int declarationIndex = 0;
};

struct Relation {
  std::string name;
  std::shared_ptr<RelationTable> table;
  std::vector<TypeId> paramTypes;
  TypeId valueType = kNone;  // kNone for integer-valued relations
  bool intValued = false;
};

class Domain {
 public:
  std::vector<ObjectType> types;
  std::vector<ObjectInfo> objects;
  std::vector<StateVariableTemplate> svTemplates;
  std::vector<TaskSymbol> tasks;
  std::vector<Relation> relations;
  std::vector<ActionTemplate> templates;

  TypeId boolType = kNone;
  ObjId trueObj = kNone, falseObj = kNone;

  TypeId findType(const std::string& name) const;
  ObjId findObject(const std::string& name) const;
  SvId findSv(const std::string& name) const;
  TaskSymId findTask(const std::string& name) const;
  RelationId findRelation(const std::string& name) const;

  TypeId addType(const std::string& name, const std::vector<TypeId>& parents);
  ObjId addObject(const std::string& name, TypeId type);
  // Anonymous union type; reused when the same member set was built before.
  TypeId unionType(const std::vector<TypeId>& members);

  const std::vector<ObjId>& typeInstances(TypeId t) const {
    return types[t].instances;
  }
  bool typeHasInstance(TypeId t, ObjId o) const;
  const std::string& objName(ObjId o) const { return objects[o].name; }

  std::vector<TemplateId> refinementsOf(TaskSymId task) const;

  void ensureBool();
};

// Per-problem value helpers shared by several modules.
std::string termToString(const Domain& dom, const Term& t,
                         const BindingNet* net);

}  // namespace fape
