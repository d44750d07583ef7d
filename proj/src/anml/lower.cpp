#include "anml/lower.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "anml/parser.hpp"

namespace fape::anml {

namespace {

struct LowerCtx {
  Domain& dom;
  std::vector<ParseError>& errors;

  void error(const std::string& msg, const SourceSpan& span) {
    errors.push_back(ParseError{msg, span});
  }

  TypeId resolveTypeRef(const AstTypeRef& ref) {
    if (ref.isBool) {
      dom.ensureBool();
      return dom.boolType;
    }
    if (ref.isInt) {
      error("integer-typed fluents are not supported", ref.span);
      return kNone;
    }
    std::vector<TypeId> ids;
    for (const auto& n : ref.unionNames) {
      TypeId t = dom.findType(n);
      if (t == kNone) {
        error("unknown type '" + n + "'", ref.span);
        return kNone;
      }
      ids.push_back(t);
    }
    if (ids.size() == 1) return ids[0];
    return dom.unionType(ids);
  }
};

// Per-template lowering state: local variables, timepoints, subtask labels.
class TemplateBuilder {
 public:
  TemplateBuilder(LowerCtx& ctx, ActionTemplate& tmpl)
      : ctx_(ctx), tmpl_(tmpl) {
    tmpl_.timepointNames = {"start", "end"};
  }

  bool failed = false;

  void error(const std::string& msg, const SourceSpan& span) {
    ctx_.error(msg, span);
    failed = true;
  }

  int localVar(const std::string& name) const {
    for (size_t i = 0; i < tmpl_.vars.size(); ++i)
      if (tmpl_.vars[i].name == name) return static_cast<int>(i);
    return kNone;
  }

  int timepoint(const std::string& name, bool create) {
    for (size_t i = 0; i < tmpl_.timepointNames.size(); ++i)
      if (tmpl_.timepointNames[i] == name) return static_cast<int>(i);
    if (!create) return kNone;
    tmpl_.timepointNames.push_back(name);
    return static_cast<int>(tmpl_.timepointNames.size() - 1);
  }

  int freshTimepoint(const std::string& hint) {
    tmpl_.timepointNames.push_back(hint + "#" +
                                   std::to_string(tmpl_.timepointNames.size()));
    return static_cast<int>(tmpl_.timepointNames.size() - 1);
  }

  // A time reference with a nonzero offset becomes a fresh timepoint pinned
  // at the exact distance in both directions.
  int resolveTimeRef(const AstTimeRef& t) {
    int base;
    switch (t.kind) {
      case AstTimeRef::Kind::Start: base = 0; break;
      case AstTimeRef::Kind::End: base = 1; break;
      case AstTimeRef::Kind::Named: base = timepoint(t.name, true); break;
      case AstTimeRef::Kind::Absolute:
        error("absolute times are not allowed inside actions", t.span);
        return 0;
    }
    if (t.offset == 0) return base;
    int fresh = freshTimepoint(tmpl_.timepointNames[base] + "+" +
                               std::to_string(t.offset));
    addTimeGE(base, fresh, t.offset);
    addTimeGE(fresh, base, -t.offset);
    return fresh;
  }

  void addTimeGE(int ta, int tb, int64_t d) {
    ConstraintPattern c;
    c.kind = ConstraintPattern::Kind::TimeGE;
    c.ta = ta;
    c.tb = tb;
    c.d = d;
    tmpl_.constraints.push_back(std::move(c));
  }

  TPattern resolveTerm(const AstExpr& e, TypeId expected) {
    if (e.kind == AstExpr::Kind::Int) {
      error("integer literal in value position", e.span);
      return TPattern::constant(0);
    }
    if (e.kind != AstExpr::Kind::Name) {
      error("expected a variable or object name", e.span);
      return TPattern::constant(0);
    }
    int lv = localVar(e.name);
    if (lv != kNone) {
      if (expected != kNone) {
        TypeId lt = tmpl_.vars[lv].type;
        bool overlap = false;
        for (ObjId o : ctx_.dom.typeInstances(lt))
          if (ctx_.dom.typeHasInstance(expected, o)) {
            overlap = true;
            break;
          }
        if (!overlap) error("type mismatch for '" + e.name + "'", e.span);
      }
      return TPattern::local(lv);
    }
    ObjId obj = ctx_.dom.findObject(e.name);
    if (obj == kNone) {
      error("unknown symbol '" + e.name + "'", e.span);
      return TPattern::constant(0);
    }
    if (expected != kNone && !ctx_.dom.typeHasInstance(expected, obj))
      error("object '" + e.name + "' does not fit the expected type", e.span);
    return TPattern::constant(obj);
  }

  // State-variable reference: f(args), x.f, or a 0-ary fluent name.
  bool resolveSv(const AstExpr& e, SvId& sv, std::vector<TPattern>& args) {
    std::string name;
    std::vector<const AstExpr*> argExprs;
    if (e.kind == AstExpr::Kind::Call) {
      name = e.name;
      for (const auto& a : e.args) argExprs.push_back(&a);
    } else if (e.kind == AstExpr::Kind::Dot) {
      name = e.name;
      argExprs.push_back(&e.args[0]);
    } else if (e.kind == AstExpr::Kind::Name) {
      name = e.name;
    } else {
      error("expected a state variable", e.span);
      return false;
    }
    sv = ctx_.dom.findSv(name);
    if (sv == kNone) {
      error("unknown state variable '" + name + "'", e.span);
      return false;
    }
    const auto& tmplSv = ctx_.dom.svTemplates[sv];
    if (tmplSv.paramTypes.size() != argExprs.size()) {
      error("state variable '" + name + "' expects " +
                std::to_string(tmplSv.paramTypes.size()) + " arguments",
            e.span);
      return false;
    }
    for (size_t i = 0; i < argExprs.size(); ++i)
      args.push_back(resolveTerm(*argExprs[i], tmplSv.paramTypes[i]));
    return true;
  }

  void lowerAssertion(const AstStatement& st) {
    AssertionPattern ap;
    switch (st.kind) {
      case AstStatement::Kind::Persistence: ap.kind = AssertKind::Persistence; break;
      case AstStatement::Kind::Change: ap.kind = AssertKind::Change; break;
      case AstStatement::Kind::Assign: ap.kind = AssertKind::Assignment; break;
      default: FAPE_CHECK(false, "not an assertion statement");
    }
    if (!resolveSv(st.sv, ap.sv, ap.args)) return;
    TypeId vt = ctx_.dom.svTemplates[ap.sv].valueType;
    ap.ts = resolveTimeRef(st.interval.from);
    ap.te = st.interval.point ? ap.ts : resolveTimeRef(st.interval.to);
    if (ap.kind == AssertKind::Change) {
      ap.from = resolveTerm(st.value1, vt);
      ap.value = resolveTerm(st.value2, vt);
      if (ap.ts == ap.te)
        addTimeGE(ap.ts, ap.te, 1);  // a change takes at least one unit
    } else {
      ap.value = resolveTerm(st.value1, vt);
      if (ap.kind == AssertKind::Assignment) ap.te = ap.ts;
    }
    tmpl_.assertions.push_back(std::move(ap));
  }

  void lowerSubtasks(const AstStatement& st) {
    int bracketFrom = resolveTimeRef(st.interval.from);
    int bracketTo =
        st.interval.point ? bracketFrom : resolveTimeRef(st.interval.to);
    if (st.kind == AstStatement::Kind::Subtask) {
      addSubtask(st.tasks[0], bracketFrom, bracketTo, /*exact=*/true);
      return;
    }
    // ordered(...): fresh interval per subtask, chained with a minimum gap of
    // one time unit, contained in the bracketing interval.
    int prevEnd = kNone;
    for (size_t i = 0; i < st.tasks.size(); ++i) {
      const AstTaskRef& tr = st.tasks[i];
      std::string hint = tr.label.empty() ? tr.name : tr.label;
      int ts = freshTimepoint(hint + "_s");
      int te = freshTimepoint(hint + "_e");
      addTimeGE(ts, te, 1);
      if (i == 0) addTimeGE(bracketFrom, ts, 0);
      if (prevEnd != kNone) addTimeGE(prevEnd, ts, 1);
      if (i + 1 == st.tasks.size()) addTimeGE(te, bracketTo, 0);
      addSubtaskAt(tr, ts, te);
      prevEnd = te;
    }
  }

  void addSubtask(const AstTaskRef& tr, int bracketFrom, int bracketTo,
                  bool exact) {
    if (exact) {
      addSubtaskAt(tr, bracketFrom, bracketTo);
    } else {
      std::string hint = tr.label.empty() ? tr.name : tr.label;
      int ts = freshTimepoint(hint + "_s");
      int te = freshTimepoint(hint + "_e");
      addTimeGE(bracketFrom, ts, 0);
      addTimeGE(te, bracketTo, 0);
      addSubtaskAt(tr, ts, te);
    }
  }

  void addSubtaskAt(const AstTaskRef& tr, int ts, int te) {
    TaskSymId sym = ctx_.dom.findTask(tr.name);
    if (sym == kNone) {
      error("unknown task '" + tr.name + "'", tr.span);
      return;
    }
    const TaskSymbol& decl = ctx_.dom.tasks[sym];
    if (decl.paramTypes.size() != tr.args.size()) {
      error("task '" + tr.name + "' expects " +
                std::to_string(decl.paramTypes.size()) + " arguments",
            tr.span);
      return;
    }
    SubtaskPattern sp;
    sp.task = sym;
    for (size_t i = 0; i < tr.args.size(); ++i)
      sp.args.push_back(resolveTerm(tr.args[i], decl.paramTypes[i]));
    sp.ts = ts;
    sp.te = te;
    sp.label = tr.label;
    if (!tr.label.empty()) labels_[tr.label] = {ts, te};
    tmpl_.subtasks.push_back(std::move(sp));
  }

  // A side of a comparison, resolved to either a timepoint or an object term.
  struct Side {
    bool temporal = false;
    int tp = kNone;
    int64_t offset = 0;
    bool isRelationApp = false;
    RelationId relation = kNone;
    std::vector<TPattern> relArgs;
    TPattern term;
  };

  bool resolveSide(const AstExpr& e, Side& s) {
    switch (e.kind) {
      case AstExpr::Kind::TimeOf: {
        auto it = labels_.find(e.args[0].name);
        if (it == labels_.end()) {
          error("unknown subtask label '" + e.args[0].name + "'", e.span);
          return false;
        }
        s.temporal = true;
        s.tp = e.name == "start" ? it->second.first : it->second.second;
        s.offset = e.value;
        return true;
      }
      case AstExpr::Kind::Int:
        error("absolute times are not allowed inside actions", e.span);
        return false;
      case AstExpr::Kind::Name: {
        if (e.name == "start" || e.name == "end") {
          s.temporal = true;
          s.tp = e.name == "start" ? 0 : 1;
          s.offset = e.value;
          return true;
        }
        int known = timepoint(e.name, false);
        if (known != kNone) {
          s.temporal = true;
          s.tp = known;
          s.offset = e.value;
          return true;
        }
        if (localVar(e.name) != kNone ||
            ctx_.dom.findObject(e.name) != kNone) {
          if (e.value != 0) {
            error("numeric offset on an object term", e.span);
            return false;
          }
          s.term = resolveTerm(e, kNone);
          return true;
        }
        // Unknown name: a new local timepoint.
        s.temporal = true;
        s.tp = timepoint(e.name, true);
        s.offset = e.value;
        return true;
      }
      case AstExpr::Kind::Call: {
        RelationId rel = ctx_.dom.findRelation(e.name);
        if (rel == kNone) {
          error("unknown constant '" + e.name + "'", e.span);
          return false;
        }
        const Relation& r = ctx_.dom.relations[rel];
        if (r.paramTypes.size() != e.args.size()) {
          error("constant '" + e.name + "' expects " +
                    std::to_string(r.paramTypes.size()) + " arguments",
                e.span);
          return false;
        }
        s.isRelationApp = true;
        s.relation = rel;
        for (size_t i = 0; i < e.args.size(); ++i)
          s.relArgs.push_back(resolveTerm(e.args[i], r.paramTypes[i]));
        return true;
      }
      default:
        error("unsupported expression", e.span);
        return false;
    }
  }

  void lowerTemporalCmp(const Side& l, const Side& r, const std::string& op,
                        const SourceSpan& span) {
    // l.tp + l.offset OP r.tp + r.offset
    int64_t base = l.offset - r.offset;
    if (op == "<") addTimeGE(l.tp, r.tp, base + 1);
    else if (op == "<=") addTimeGE(l.tp, r.tp, base);
    else if (op == ">") addTimeGE(r.tp, l.tp, -base + 1);
    else if (op == ">=") addTimeGE(r.tp, l.tp, -base);
    else if (op == "=" || op == "==") {
      addTimeGE(l.tp, r.tp, base);
      addTimeGE(r.tp, l.tp, -base);
    } else {
      error("operator '" + op + "' not allowed on timepoints", span);
    }
  }

  void lowerConstraint(const AstStatement& st) {
    if (st.op == "apply") {
      Side s;
      if (!resolveSide(st.lhs, s)) return;
      if (!s.isRelationApp) {
        error("expected a relation application", st.span);
        return;
      }
      const Relation& r = ctx_.dom.relations[s.relation];
      if (r.valueType != ctx_.dom.boolType) {
        error("bare constraint requires a boolean constant", st.span);
        return;
      }
      ConstraintPattern c;
      c.kind = ConstraintPattern::Kind::InTable;
      c.relation = s.relation;
      c.args = s.relArgs;
      c.args.push_back(TPattern::constant(ctx_.dom.trueObj));
      tmpl_.constraints.push_back(std::move(c));
      return;
    }
    Side l, r;
    if (!resolveSide(st.lhs, l) || !resolveSide(st.rhs, r)) return;
    if (l.temporal != r.temporal) {
      error("comparison mixes a timepoint with an object", st.span);
      return;
    }
    if (l.temporal) {
      lowerTemporalCmp(l, r, st.op, st.span);
      return;
    }
    if (l.isRelationApp || r.isRelationApp) {
      if (l.isRelationApp && r.isRelationApp) {
        error("cannot compare two constant applications", st.span);
        return;
      }
      if (st.op != "==" && st.op != "=") {
        error("constant applications support only equality", st.span);
        return;
      }
      const Side& app = l.isRelationApp ? l : r;
      const Side& val = l.isRelationApp ? r : l;
      ConstraintPattern c;
      c.kind = ConstraintPattern::Kind::InTable;
      c.relation = app.relation;
      c.args = app.relArgs;
      c.args.push_back(val.term);
      tmpl_.constraints.push_back(std::move(c));
      return;
    }
    ConstraintPattern c;
    if (st.op == "==" || st.op == "=")
      c.kind = ConstraintPattern::Kind::VarEq;
    else if (st.op == "!=")
      c.kind = ConstraintPattern::Kind::VarNeq;
    else {
      error("operator '" + st.op + "' not allowed on objects", st.span);
      return;
    }
    c.a = l.term;
    c.b = r.term;
    tmpl_.constraints.push_back(std::move(c));
  }

  void lowerDuration(const AstStatement& st) {
    ConstraintPattern c;
    c.kind = ConstraintPattern::Kind::DurationEq;
    c.ta = 0;
    c.tb = 1;
    if (st.value1.kind == AstExpr::Kind::Int) {
      c.constDuration = true;
      c.d = st.value1.value;
    } else if (st.value1.kind == AstExpr::Kind::Call) {
      Side s;
      if (!resolveSide(st.value1, s)) return;
      if (!s.isRelationApp || !ctx_.dom.relations[s.relation].intValued) {
        error("duration must be an integer constant or an integer-valued "
              "constant function",
              st.value1.span);
        return;
      }
      c.relation = s.relation;
      c.args = s.relArgs;
    } else {
      error("unsupported duration expression", st.value1.span);
      return;
    }
    tmpl_.constraints.push_back(std::move(c));
  }

  void lowerStatement(const AstStatement& st) {
    switch (st.kind) {
      case AstStatement::Kind::Persistence:
      case AstStatement::Kind::Change:
      case AstStatement::Kind::Assign:
        lowerAssertion(st);
        break;
      case AstStatement::Kind::Subtask:
      case AstStatement::Kind::Ordered:
        lowerSubtasks(st);
        break;
      case AstStatement::Kind::Contains:
        error("'contains' is only allowed in the problem statement", st.span);
        break;
      case AstStatement::Kind::Constraint:
        lowerConstraint(st);
        break;
      case AstStatement::Kind::DurationAssign:
        lowerDuration(st);
        break;
      case AstStatement::Kind::ConstAssign:
        error("constant assignments are only allowed at top level", st.span);
        break;
    }
  }

 private:
  LowerCtx& ctx_;
  ActionTemplate& tmpl_;
  std::map<std::string, std::pair<int, int>> labels_;
};

void declareTaskSymbols(LowerCtx& ctx, const ParsedDocument& doc) {
  for (const auto& a : doc.actions) {
    if (ctx.dom.findTask(a.name) != kNone) {
      ctx.error("duplicate action '" + a.name + "'", a.span);
      continue;
    }
    TaskSymbol sym;
    sym.name = a.name;
    for (const auto& p : a.params) {
      TypeId t = ctx.resolveTypeRef(p.type);
      sym.paramTypes.push_back(t);
    }
    ctx.dom.tasks.push_back(std::move(sym));
  }
}

void lowerAction(LowerCtx& ctx, const AstAction& act, int declIndex) {
  TaskSymId task = ctx.dom.findTask(act.name);
  const TaskSymbol& sym = ctx.dom.tasks[task];

  auto makeTemplate = [&](const std::string& suffix,
                          const std::vector<AstLocalConst>& extraLocals,
                          const std::vector<AstStatement>& extraStatements) {
    ActionTemplate tmpl;
    tmpl.baseName = act.name;
    tmpl.name = suffix.empty() ? act.name : act.name + "." + suffix;
    tmpl.task = task;
    tmpl.dependent = act.motivated;
    tmpl.declarationIndex = declIndex;
    for (size_t i = 0; i < act.params.size(); ++i)
      tmpl.vars.push_back(LocalVar{act.params[i].name, sym.paramTypes[i]});
    tmpl.headParamCount = static_cast<int>(act.params.size());
    for (size_t i = 0; i < act.params.size(); ++i)
      tmpl.taskArgs.push_back(TPattern::local(static_cast<int>(i)));
    for (const auto& lc : act.locals)
      tmpl.vars.push_back(LocalVar{lc.name, ctx.resolveTypeRef(lc.type)});
    for (const auto& lc : extraLocals)
      tmpl.vars.push_back(LocalVar{lc.name, ctx.resolveTypeRef(lc.type)});

    TemplateBuilder b(ctx, tmpl);
    for (const auto& st : act.statements) b.lowerStatement(st);
    for (const auto& st : extraStatements) b.lowerStatement(st);
    ctx.dom.templates.push_back(std::move(tmpl));
  };

  if (act.decompositions.empty()) {
    makeTemplate("", {}, {});
  } else {
    for (size_t k = 0; k < act.decompositions.size(); ++k)
      makeTemplate("m" + std::to_string(k + 1), act.decompositions[k].locals,
                   act.decompositions[k].statements);
  }
}

int64_t resolveConstValue(LowerCtx& ctx, const AstExpr& e, TypeId expected,
                          bool intExpected, bool& ok) {
  ok = true;
  if (e.kind == AstExpr::Kind::Int) {
    if (!intExpected) {
      ctx.error("integer value for an object-valued constant", e.span);
      ok = false;
    }
    return e.value;
  }
  if (e.kind == AstExpr::Kind::Name) {
    if (intExpected) {
      ctx.error("expected an integer value", e.span);
      ok = false;
      return 0;
    }
    ObjId obj = ctx.dom.findObject(e.name);
    if (obj == kNone) {
      ctx.error("unknown object '" + e.name + "'", e.span);
      ok = false;
      return 0;
    }
    if (expected != kNone && !ctx.dom.typeHasInstance(expected, obj))
      ctx.error("object '" + e.name + "' does not fit the declared type",
                e.span);
    return obj;
  }
  ctx.error("expected a constant value", e.span);
  ok = false;
  return 0;
}

}  // namespace

LowerResult lowerDomain(const ParsedDocument& doc) {
  LowerResult res;
  res.domain = std::make_shared<Domain>();
  Domain& dom = *res.domain;
  LowerCtx ctx{dom, res.errors};

  // Pass 1: type names, then parents (declaration order independent).
  for (const auto& t : doc.types) {
    if (dom.findType(t.name) != kNone) {
      ctx.error("duplicate type '" + t.name + "'", t.span);
      continue;
    }
    dom.addType(t.name, {});
  }
  for (const auto& t : doc.types) {
    if (t.parent.empty()) continue;
    TypeId child = dom.findType(t.name);
    TypeId parent = dom.findType(t.parent);
    if (parent == kNone) {
      ctx.error("unknown parent type '" + t.parent + "'", t.span);
      continue;
    }
    dom.types[child].parents.push_back(parent);
  }
  dom.ensureBool();

  for (const auto& inst : doc.instances) {
    TypeId t = ctx.resolveTypeRef(inst.type);
    if (t == kNone) continue;
    for (const auto& n : inst.names) {
      if (dom.findObject(n) != kNone) {
        ctx.error("duplicate object '" + n + "'", inst.span);
        continue;
      }
      dom.addObject(n, t);
    }
  }

  // Fluent / constant declarations, including members of `type ... with {}`.
  auto declareFluent = [&](const AstFluentDecl& f, TypeId implicitParam) {
    std::vector<TypeId> params;
    if (implicitParam != kNone) params.push_back(implicitParam);
    for (const auto& p : f.params) params.push_back(ctx.resolveTypeRef(p.type));
    if (f.kind == AstFluentDecl::Kind::Fluent) {
      if (dom.findSv(f.name) != kNone) {
        ctx.error("duplicate fluent '" + f.name + "'", f.span);
        return;
      }
      TypeId vt = ctx.resolveTypeRef(f.valueType);
      if (vt == kNone) return;
      dom.svTemplates.push_back(StateVariableTemplate{f.name, params, vt});
    } else {
      if (dom.findRelation(f.name) != kNone) {
        ctx.error("duplicate constant '" + f.name + "'", f.span);
        return;
      }
      Relation r;
      r.name = f.name;
      r.paramTypes = params;
      r.intValued = f.valueType.isInt;
      if (!f.valueType.isInt) r.valueType = ctx.resolveTypeRef(f.valueType);
      r.table = std::make_shared<RelationTable>();
      r.table->name = f.name;
      r.table->arity = static_cast<int>(params.size()) + 1;
      dom.relations.push_back(std::move(r));
    }
  };
  for (const auto& t : doc.types) {
    TypeId tid = dom.findType(t.name);
    for (const auto& m : t.members) declareFluent(m, tid);
  }
  for (const auto& f : doc.fluents) declareFluent(f, kNone);

  // Constant assignments fill relation tables.
  for (const auto& st : doc.statements) {
    if (st.kind != AstStatement::Kind::ConstAssign) continue;
    RelationId rel = dom.findRelation(st.sv.name);
    if (rel == kNone) {
      ctx.error("unknown constant '" + st.sv.name + "'", st.sv.span);
      continue;
    }
    Relation& r = dom.relations[rel];
    if (r.paramTypes.size() != st.sv.args.size()) {
      ctx.error("constant '" + st.sv.name + "' expects " +
                    std::to_string(r.paramTypes.size()) + " arguments",
                st.sv.span);
      continue;
    }
    std::vector<int64_t> tup;
    bool ok = true;
    for (size_t i = 0; i < st.sv.args.size() && ok; ++i)
      tup.push_back(resolveConstValue(ctx, st.sv.args[i], r.paramTypes[i],
                                      false, ok));
    if (!ok) continue;
    bool vok = true;
    int64_t value = resolveConstValue(ctx, st.value1, r.valueType, r.intValued,
                                      vok);
    if (!vok) continue;
    tup.push_back(value);
    if (std::find(r.table->tuples.begin(), r.table->tuples.end(), tup) ==
        r.table->tuples.end())
      r.table->tuples.push_back(std::move(tup));
  }

  declareTaskSymbols(ctx, doc);
  int declIndex = 0;
  for (const auto& a : doc.actions) lowerAction(ctx, a, declIndex++);
  return res;
}

// ---------------------------------------------------------------------------
// Initial chronicle

namespace {

class ProblemBuilder {
 public:
  ProblemBuilder(std::shared_ptr<const Domain> domain, Chronicle& c,
                 std::vector<ParseError>& errors,
                 std::map<std::string, Timepoint>& named)
      : dom_(std::move(domain)), c_(c), errors_(errors), named_(named) {}

  void error(const std::string& msg, const SourceSpan& span) {
    errors_.push_back(ParseError{msg, span});
  }

  Timepoint resolveTime(const AstTimeRef& t) {
    Timepoint base;
    switch (t.kind) {
      case AstTimeRef::Kind::Start: base = c_.problemStart; break;
      case AstTimeRef::Kind::End: base = c_.problemEnd; break;
      case AstTimeRef::Kind::Named: {
        auto it = named_.find(t.name);
        if (it == named_.end()) {
          Timepoint fresh = c_.stn.addTimepoint();
          it = named_.emplace(t.name, fresh).first;
        }
        base = it->second;
        break;
      }
      case AstTimeRef::Kind::Absolute: {
        Timepoint fresh = c_.stn.addTimepoint();
        c_.stn.addEquality(c_.problemStart, fresh, t.offset);
        return fresh;
      }
    }
    if (t.offset == 0) return base;
    Timepoint fresh = c_.stn.addTimepoint();
    c_.stn.addEquality(base, fresh, t.offset);
    return fresh;
  }

  Term resolveGroundTerm(const AstExpr& e, TypeId expected, bool& ok) {
    ok = true;
    if (e.kind != AstExpr::Kind::Name) {
      error("expected an object name", e.span);
      ok = false;
      return Term::constant(0);
    }
    ObjId obj = dom_->findObject(e.name);
    if (obj == kNone) {
      error("unknown object '" + e.name + "'", e.span);
      ok = false;
      return Term::constant(0);
    }
    if (expected != kNone && !dom_->typeHasInstance(expected, obj))
      error("object '" + e.name + "' does not fit the expected type", e.span);
    return Term::constant(obj);
  }

  void lowerAssertion(const AstStatement& st) {
    SvId sv = kNone;
    std::vector<Term> args;
    std::string name;
    std::vector<const AstExpr*> argExprs;
    if (st.sv.kind == AstExpr::Kind::Call) {
      name = st.sv.name;
      for (const auto& a : st.sv.args) argExprs.push_back(&a);
    } else if (st.sv.kind == AstExpr::Kind::Dot) {
      name = st.sv.name;
      argExprs.push_back(&st.sv.args[0]);
    } else if (st.sv.kind == AstExpr::Kind::Name) {
      name = st.sv.name;
    } else {
      error("expected a state variable", st.sv.span);
      return;
    }
    sv = dom_->findSv(name);
    if (sv == kNone) {
      error("unknown state variable '" + name + "'", st.sv.span);
      return;
    }
    const auto& decl = dom_->svTemplates[sv];
    if (decl.paramTypes.size() != argExprs.size()) {
      error("state variable '" + name + "' expects " +
                std::to_string(decl.paramTypes.size()) + " arguments",
            st.sv.span);
      return;
    }
    bool ok = true;
    for (size_t i = 0; i < argExprs.size() && ok; ++i)
      args.push_back(resolveGroundTerm(*argExprs[i], decl.paramTypes[i], ok));
    if (!ok) return;

    Assertion a;
    a.sv = sv;
    a.args = std::move(args);
    a.start = resolveTime(st.interval.from);
    a.end = st.interval.point ? a.start : resolveTime(st.interval.to);
    switch (st.kind) {
      case AstStatement::Kind::Assign: {
        a.kind = AssertKind::Assignment;
        bool vok = true;
        a.value = resolveGroundTerm(st.value1, decl.valueType, vok);
        if (!vok) return;
        break;
      }
      case AstStatement::Kind::Persistence: {
        a.kind = AssertKind::Persistence;
        bool vok = true;
        a.value = resolveGroundTerm(st.value1, decl.valueType, vok);
        if (!vok) return;
        c_.stn.addConstraint(a.start, a.end, 0);
        break;
      }
      case AstStatement::Kind::Change: {
        a.kind = AssertKind::Change;
        bool vok = true;
        a.from = resolveGroundTerm(st.value1, decl.valueType, vok);
        if (!vok) return;
        a.value = resolveGroundTerm(st.value2, decl.valueType, vok);
        if (!vok) return;
        c_.stn.addConstraint(a.start, a.end, 1);
        break;
      }
      default:
        FAPE_CHECK(false, "not an assertion");
    }
    c_.addAssertion(std::move(a));
  }

  void lowerContains(const AstStatement& st) {
    const AstTaskRef& tr = st.tasks[0];
    TaskSymId sym = dom_->findTask(tr.name);
    if (sym == kNone) {
      error("unknown task '" + tr.name + "'", tr.span);
      return;
    }
    const TaskSymbol& decl = dom_->tasks[sym];
    if (decl.paramTypes.size() != tr.args.size()) {
      error("task '" + tr.name + "' expects " +
                std::to_string(decl.paramTypes.size()) + " arguments",
            tr.span);
      return;
    }
    std::vector<Term> args;
    bool ok = true;
    for (size_t i = 0; i < tr.args.size() && ok; ++i)
      args.push_back(resolveGroundTerm(tr.args[i], decl.paramTypes[i], ok));
    if (!ok) return;
    Timepoint lo = resolveTime(st.interval.from);
    Timepoint hi = st.interval.point ? lo : resolveTime(st.interval.to);
    Timepoint ts = c_.stn.addTimepoint();
    Timepoint te = c_.stn.addTimepoint();
    c_.stn.addConstraint(lo, ts, 0);
    c_.stn.addConstraint(ts, te, 1);
    c_.stn.addConstraint(te, hi, 0);
    c_.addTask(sym, std::move(args), ts, te, kNone, {});
  }

  struct TimeSide {
    Timepoint tp;
    int64_t offset = 0;
  };

  bool resolveTimeSide(const AstExpr& e, TimeSide& s) {
    if (e.kind == AstExpr::Kind::Int) {
      s.tp = c_.problemStart;
      s.offset = e.value;
      return true;
    }
    if (e.kind != AstExpr::Kind::Name) return false;
    s.offset = e.value;
    if (e.name == "start") { s.tp = c_.problemStart; return true; }
    if (e.name == "end") { s.tp = c_.problemEnd; return true; }
    auto it = named_.find(e.name);
    if (it != named_.end()) { s.tp = it->second; return true; }
    if (dom_->findObject(e.name) != kNone) return false;
    Timepoint fresh = c_.stn.addTimepoint();
    named_.emplace(e.name, fresh);
    s.tp = fresh;
    return true;
  }

  void lowerConstraint(const AstStatement& st) {
    if (st.op == "apply") {
      error("bare relation constraints are not allowed in the problem",
            st.span);
      return;
    }
    TimeSide l, r;
    if (!resolveTimeSide(st.lhs, l) || !resolveTimeSide(st.rhs, r)) {
      error("problem constraints must relate timepoints", st.span);
      return;
    }
    int64_t base = l.offset - r.offset;
    bool ok = true;
    if (st.op == "<") ok = c_.stn.addConstraint(l.tp, r.tp, base + 1);
    else if (st.op == "<=") ok = c_.stn.addConstraint(l.tp, r.tp, base);
    else if (st.op == ">") ok = c_.stn.addConstraint(r.tp, l.tp, -base + 1);
    else if (st.op == ">=") ok = c_.stn.addConstraint(r.tp, l.tp, -base);
    else if (st.op == "=" || st.op == "==")
      ok = c_.stn.addEquality(l.tp, r.tp, base);
    else {
      error("operator '" + st.op + "' not allowed on timepoints", st.span);
      return;
    }
    if (!ok) error("temporal constraint is inconsistent", st.span);
  }

  void lower(const AstStatement& st) {
    switch (st.kind) {
      case AstStatement::Kind::Assign:
      case AstStatement::Kind::Persistence:
      case AstStatement::Kind::Change:
        lowerAssertion(st);
        break;
      case AstStatement::Kind::Contains:
        lowerContains(st);
        break;
      case AstStatement::Kind::Constraint:
        lowerConstraint(st);
        break;
      case AstStatement::Kind::ConstAssign:
        break;  // consumed by lowerDomain
      case AstStatement::Kind::Subtask:
      case AstStatement::Kind::Ordered:
        error("subtasks are only allowed inside actions (use 'contains')",
              st.span);
        break;
      case AstStatement::Kind::DurationAssign:
        error("'duration' is only allowed inside actions", st.span);
        break;
    }
  }

 private:
  std::shared_ptr<const Domain> dom_;
  Chronicle& c_;
  std::vector<ParseError>& errors_;
  std::map<std::string, Timepoint>& named_;
};

}  // namespace

ProblemResult buildInitialChronicle(
    std::shared_ptr<const Domain> domain, const ParsedDocument& doc,
    std::shared_ptr<const InstantiationRelations> grounding) {
  ProblemResult res;
  Chronicle c(domain);
  c.grounding = std::move(grounding);
  ProblemBuilder b(domain, c, res.errors, res.namedTimepoints);
  for (const auto& st : doc.statements) b.lower(st);
  if (!res.errors.empty()) return res;
  if (!c.propagateNetworks()) {
    res.errors.push_back(
        ParseError{"initial chronicle is inconsistent", SourceSpan{}});
    return res;
  }
  res.chronicle = std::move(c);
  return res;
}

// ---------------------------------------------------------------------------
// Canonical printing and structural comparison

namespace {

std::string typeRefName(const Domain& d, TypeId t) { return d.types[t].name; }

std::string patternStr(const Domain& d, const ActionTemplate& t,
                       const TPattern& p) {
  switch (p.kind) {
    case TPattern::Kind::Const: return d.objName(p.v);
    case TPattern::Kind::Local: return t.vars[p.v].name;
    case TPattern::Kind::Any: return "ANY";
  }
  return "?";
}

std::string tpName(const ActionTemplate& t, int tp) {
  return t.timepointNames[tp];
}

void printTemplateBody(std::ostream& os, const Domain& d,
                       const ActionTemplate& t, int indent) {
  std::string pad(indent, ' ');
  for (size_t i = static_cast<size_t>(t.headParamCount); i < t.vars.size();
       ++i)
    os << pad << "constant " << typeRefName(d, t.vars[i].type) << " "
       << t.vars[i].name << ";\n";
  for (const auto& a : t.assertions) {
    os << pad << "[" << tpName(t, a.ts);
    if (a.te != a.ts) os << ", " << tpName(t, a.te);
    os << "] " << d.svTemplates[a.sv].name << "(";
    for (size_t i = 0; i < a.args.size(); ++i) {
      if (i) os << ", ";
      os << patternStr(d, t, a.args[i]);
    }
    os << ")";
    switch (a.kind) {
      case AssertKind::Persistence:
        os << " == " << patternStr(d, t, a.value);
        break;
      case AssertKind::Change:
        os << " == " << patternStr(d, t, a.from) << " :-> "
           << patternStr(d, t, a.value);
        break;
      case AssertKind::Assignment:
        os << " := " << patternStr(d, t, a.value);
        break;
    }
    os << ";\n";
  }
  for (const auto& s : t.subtasks) {
    os << pad << "[" << tpName(t, s.ts) << ", " << tpName(t, s.te) << "] "
       << d.tasks[s.task].name << "(";
    for (size_t i = 0; i < s.args.size(); ++i) {
      if (i) os << ", ";
      os << patternStr(d, t, s.args[i]);
    }
    os << ");\n";
  }
  for (const auto& cst : t.constraints) {
    switch (cst.kind) {
      case ConstraintPattern::Kind::VarEq:
        os << pad << patternStr(d, t, cst.a) << " == "
           << patternStr(d, t, cst.b) << ";\n";
        break;
      case ConstraintPattern::Kind::VarNeq:
        os << pad << patternStr(d, t, cst.a) << " != "
           << patternStr(d, t, cst.b) << ";\n";
        break;
      case ConstraintPattern::Kind::InTable: {
        const Relation& r = d.relations[cst.relation];
        os << pad << r.name << "(";
        for (size_t i = 0; i + 1 < cst.args.size(); ++i) {
          if (i) os << ", ";
          os << patternStr(d, t, cst.args[i]);
        }
        os << ") == " << patternStr(d, t, cst.args.back()) << ";\n";
        break;
      }
      case ConstraintPattern::Kind::TimeGE:
        os << pad << tpName(t, cst.ta);
        if (cst.d != 0) os << " + " << cst.d;
        os << " <= " << tpName(t, cst.tb) << ";\n";
        break;
      case ConstraintPattern::Kind::DurationEq:
      case ConstraintPattern::Kind::DurationGE:
        os << pad << "duration := ";
        if (cst.constDuration) {
          os << cst.d;
        } else {
          const Relation& r = d.relations[cst.relation];
          os << r.name << "(";
          for (size_t i = 0; i < cst.args.size(); ++i) {
            if (i) os << ", ";
            os << patternStr(d, t, cst.args[i]);
          }
          os << ")";
        }
        os << ";\n";
        break;
    }
  }
}

}  // namespace

std::string printDomainAnml(const Domain& d) {
  std::ostringstream os;
  for (size_t i = 0; i < d.types.size(); ++i) {
    if (static_cast<TypeId>(i) == d.boolType) continue;
    if (d.types[i].name.front() == '(') continue;  // synthetic unions
    os << "type " << d.types[i].name;
    if (!d.types[i].parents.empty())
      os << " < " << d.types[d.types[i].parents[0]].name;
    os << ";\n";
  }
  for (size_t i = 0; i < d.objects.size(); ++i) {
    if (static_cast<ObjId>(i) == d.trueObj ||
        static_cast<ObjId>(i) == d.falseObj)
      continue;
    os << "instance " << d.types[d.objects[i].type].name << " "
       << d.objects[i].name << ";\n";
  }
  for (const auto& sv : d.svTemplates) {
    os << "fluent " << typeRefName(d, sv.valueType) << " " << sv.name << "(";
    for (size_t i = 0; i < sv.paramTypes.size(); ++i) {
      if (i) os << ", ";
      os << typeRefName(d, sv.paramTypes[i]) << " p" << i;
    }
    os << ");\n";
  }
  for (const auto& r : d.relations) {
    os << "constant " << (r.intValued ? "int" : typeRefName(d, r.valueType))
       << " " << r.name << "(";
    for (size_t i = 0; i < r.paramTypes.size(); ++i) {
      if (i) os << ", ";
      os << typeRefName(d, r.paramTypes[i]) << " p" << i;
    }
    os << ");\n";
    for (const auto& tup : r.table->tuples) {
      os << r.name << "(";
      for (size_t i = 0; i + 1 < tup.size(); ++i) {
        if (i) os << ", ";
        os << d.objName(tup[i]);
      }
      os << ") := ";
      if (r.intValued) os << tup.back();
      else os << d.objName(tup.back());
      os << ";\n";
    }
  }
  // Templates grouped by base action; every body prints as a decomposition.
  std::vector<std::string> bases;
  for (const auto& t : d.templates)
    if (std::find(bases.begin(), bases.end(), t.baseName) == bases.end())
      bases.push_back(t.baseName);
  for (const auto& base : bases) {
    std::vector<const ActionTemplate*> methods;
    for (const auto& t : d.templates)
      if (t.baseName == base) methods.push_back(&t);
    const ActionTemplate& first = *methods[0];
    os << "action " << base << "(";
    for (int i = 0; i < first.headParamCount; ++i) {
      if (i) os << ", ";
      os << typeRefName(d, first.vars[i].type) << " " << first.vars[i].name;
    }
    os << ") {\n";
    if (first.dependent) os << "  motivated;\n";
    if (methods.size() == 1 && methods[0]->name == base) {
      printTemplateBody(os, d, first, 2);
    } else {
      for (const ActionTemplate* m : methods) {
        os << "  :decomposition {\n";
        printTemplateBody(os, d, *m, 4);
        os << "  };\n";
      }
    }
    os << "};\n";
  }
  return os.str();
}

namespace {

// Coarse per-template signature: counts and kinds, invariant to renaming.
std::string templateSignature(const Domain& d, const ActionTemplate& t) {
  std::ostringstream os;
  os << d.tasks[t.task].name << "/" << t.headParamCount
     << (t.dependent ? "/dep" : "/free");
  std::vector<std::string> parts;
  for (const auto& a : t.assertions) {
    std::string k = a.kind == AssertKind::Persistence ? "P"
                    : a.kind == AssertKind::Change    ? "C"
                                                      : "A";
    parts.push_back(k + d.svTemplates[a.sv].name);
  }
  std::sort(parts.begin(), parts.end());
  for (auto& p : parts) os << ";" << p;
  std::vector<std::string> subs;
  for (const auto& s : t.subtasks) subs.push_back(d.tasks[s.task].name);
  std::sort(subs.begin(), subs.end());
  for (auto& s : subs) os << ";st:" << s;
  int tableCst = 0, eqCst = 0, neqCst = 0, durCst = 0;
  for (const auto& c : t.constraints) {
    switch (c.kind) {
      case ConstraintPattern::Kind::InTable: ++tableCst; break;
      case ConstraintPattern::Kind::VarEq: ++eqCst; break;
      case ConstraintPattern::Kind::VarNeq: ++neqCst; break;
      case ConstraintPattern::Kind::DurationEq:
      case ConstraintPattern::Kind::DurationGE: ++durCst; break;
      case ConstraintPattern::Kind::TimeGE: break;  // count-insensitive
    }
  }
  os << ";tbl" << tableCst << ";eq" << eqCst << ";neq" << neqCst << ";dur"
     << durCst;
  return os.str();
}

}  // namespace

bool structurallyIsomorphic(const Domain& a, const Domain& b) {
  auto sortedNames = [](const auto& xs) {
    std::vector<std::string> names;
    for (const auto& x : xs) names.push_back(x.name);
    std::sort(names.begin(), names.end());
    return names;
  };
  if (sortedNames(a.svTemplates) != sortedNames(b.svTemplates)) return false;
  if (sortedNames(a.tasks) != sortedNames(b.tasks)) return false;
  if (a.objects.size() != b.objects.size()) return false;
  std::vector<std::string> sa, sb;
  for (const auto& t : a.templates) sa.push_back(templateSignature(a, t));
  for (const auto& t : b.templates) sb.push_back(templateSignature(b, t));
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  return sa == sb;
}

}  // namespace fape::anml
