#include "chronicle.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace fape {

TaskInstId Chronicle::addTask(TaskSymId sym, std::vector<Term> args,
                              Timepoint ts, Timepoint te,
                              ActionInstId parentAction,
                              std::vector<TaskInstId> ancestry,
                              bool attachRefVar) {
  TaskInstId id = static_cast<TaskInstId>(tasks.size());
  TaskInstance t;
  t.symbol = sym;
  t.args = std::move(args);
  t.start = ts;
  t.end = te;
  t.parentAction = parentAction;
  t.ancestry = std::move(ancestry);
  t.creationIndex = id;
  if (attachRefVar && grounding && grounding->taskRef[sym]) {
    const auto& table = grounding->taskRef[sym];
    std::set<int64_t> ids;
    for (const auto& tup : table->tuples) ids.insert(tup.back());
    t.refVar = bind.addVar(
        FiniteDomain::ofValues({ids.begin(), ids.end()}), BindingNet::Kind::Object,
        domain->tasks[sym].name + "#R" + std::to_string(id));
    std::vector<VarId> cvars;
    for (auto& a : t.args) cvars.push_back(termAsVar(a));
    cvars.push_back(t.refVar);
    bind.postTable(cvars, table);
  }
  tasks.push_back(std::move(t));
  return id;
}

AssertionId Chronicle::addAssertion(Assertion a) {
  if (a.kind == AssertKind::Assignment) {
    a.aPriori = true;
    a.end = a.start;
    if (!a.from.isVar()) {
      // Unconstrained pre-value: whatever the state variable held before.
      TypeId vt = domain->svTemplates[a.sv].valueType;
      VarId pre = bind.addVar(FiniteDomain::ofValues(domain->typeInstances(vt)),
                              BindingNet::Kind::Object,
                              "pre#" + std::to_string(assertions.size()));
      a.from = Term::var(pre);
    }
  }
  assertions.push_back(std::move(a));
  return static_cast<AssertionId>(assertions.size() - 1);
}

bool Chronicle::addDurationLink(Timepoint t1, Timepoint t2, VarId delta,
                                bool equality) {
  durLinks.push_back(DurationLink{t1, t2, delta, equality});
  return propagateNetworks();
}

bool Chronicle::propagateNetworks() {
  if (!bind.propagate()) return false;
  if (!stn.consistent()) return false;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& link : durLinks) {
      const FiniteDomain& d = bind.dom(link.delta);
      if (d.empty()) return false;
      int64_t before = stn.lb(link.t1, link.t2);
      if (!stn.addConstraint(link.t1, link.t2, d.minValue())) return false;
      if (stn.lb(link.t1, link.t2) != before) changed = true;
      if (link.equality) {
        before = stn.lb(link.t2, link.t1);
        if (!stn.addConstraint(link.t2, link.t1, -d.maxValue())) return false;
        if (stn.lb(link.t2, link.t1) != before) changed = true;
      }
      int64_t ub = stn.maxDelay(link.t1, link.t2);
      if (d.maxValue() > ub) {
        if (!bind.postLeq(link.delta, ub)) return false;
        changed = true;
      }
      if (link.equality) {
        int64_t lbv = stn.minDelay(link.t1, link.t2);
        if (lbv > kNegInf && d.minValue() < lbv) {
          if (!bind.postGeq(link.delta, lbv)) return false;
          changed = true;
        }
      }
    }
    if (!bind.propagate()) return false;
  }
  return true;
}

VarId Chronicle::termAsVar(const Term& t) {
  if (t.isVar()) return static_cast<VarId>(t.v);
  FAPE_CHECK(t.isConst(), "termAsVar on sentinel");
  return bind.addVar(FiniteDomain::ofValues({t.v}), BindingNet::Kind::Object);
}

Chronicle::InstOutcome Chronicle::instantiate(
    TemplateId tid, const std::vector<std::optional<int64_t>>& pinned,
    TaskInstId parentTask) {
  const ActionTemplate& tmpl = domain->templates[tid];
  ActionInstance inst;
  inst.tmpl = tid;
  inst.creationIndex = static_cast<int>(actions.size());
  int64_t serial = freshNameCounter++;

  for (size_t i = 0; i < tmpl.vars.size(); ++i) {
    std::vector<int64_t> vals = domain->typeInstances(tmpl.vars[i].type);
    if (i < pinned.size() && pinned[i].has_value())
      vals = domain->typeHasInstance(tmpl.vars[i].type, *pinned[i])
                 ? std::vector<int64_t>{*pinned[i]}
                 : std::vector<int64_t>{};
    VarId v = bind.addVar(FiniteDomain::ofValues(std::move(vals)),
                          BindingNet::Kind::Object,
                          tmpl.name + "#" + std::to_string(serial) + "." +
                              tmpl.vars[i].name);
    inst.params.push_back(v);
    if (bind.failed()) return {};
  }

  inst.times.resize(tmpl.timepointNames.size());
  for (size_t i = 0; i < tmpl.timepointNames.size(); ++i)
    inst.times[i] = stn.addTimepoint();
  inst.start = inst.times[0];
  inst.end = inst.times[1];
  if (!stn.addConstraint(inst.start, inst.end, 1)) return {};
  for (size_t i = 2; i < inst.times.size(); ++i) {
    if (!stn.addConstraint(inst.start, inst.times[i], 0)) return {};
    if (!stn.addConstraint(inst.times[i], inst.end, 0)) return {};
  }

  auto resolve = [&](const TPattern& p) -> Term {
    switch (p.kind) {
      case TPattern::Kind::Const: return Term::constant(p.v);
      case TPattern::Kind::Local:
        return Term::var(inst.params[static_cast<size_t>(p.v)]);
      case TPattern::Kind::Any: return Term::any();
    }
    return Term::any();
  };

  ActionInstId aid = static_cast<ActionInstId>(actions.size());

  // Ancestry: tasks strictly above this instance.
  if (parentTask != kNone) {
    inst.parentTask = parentTask;
    inst.ancestry = tasks[parentTask].ancestry;
    inst.ancestry.push_back(parentTask);
  }

  for (const auto& ap : tmpl.assertions) {
    Assertion a;
    a.kind = ap.kind;
    a.sv = ap.sv;
    for (const auto& arg : ap.args) a.args.push_back(resolve(arg));
    if (ap.kind == AssertKind::Change) a.from = resolve(ap.from);
    a.value = resolve(ap.value);
    a.start = inst.times[ap.ts];
    a.end = inst.times[ap.te];
    a.source = aid;
    addAssertion(std::move(a));
  }

  std::vector<TaskInstId> subAncestry = inst.ancestry;
  for (const auto& sp : tmpl.subtasks) {
    std::vector<Term> args;
    for (const auto& arg : sp.args) args.push_back(resolve(arg));
    addTask(sp.task, std::move(args), inst.times[sp.ts], inst.times[sp.te],
            aid, subAncestry);
    if (bind.failed()) return {};
  }

  for (const auto& cp : tmpl.constraints) {
    switch (cp.kind) {
      case ConstraintPattern::Kind::VarEq:
        if (!applyOp(RestrictionOp::termEq(resolve(cp.a), resolve(cp.b))))
          return {};
        break;
      case ConstraintPattern::Kind::VarNeq:
        if (!applyOp(RestrictionOp::termNeq(resolve(cp.a), resolve(cp.b))))
          return {};
        break;
      case ConstraintPattern::Kind::InTable: {
        std::vector<VarId> cvars;
        for (const auto& arg : cp.args) cvars.push_back(termAsVar(resolve(arg)));
        if (!bind.postTable(cvars, domain->relations[cp.relation].table))
          return {};
        break;
      }
      case ConstraintPattern::Kind::TimeGE:
        if (!stn.addConstraint(inst.times[cp.ta], inst.times[cp.tb], cp.d))
          return {};
        break;
      case ConstraintPattern::Kind::DurationEq:
      case ConstraintPattern::Kind::DurationGE: {
        bool eq = cp.kind == ConstraintPattern::Kind::DurationEq;
        if (cp.constDuration) {
          bool ok = eq ? stn.addEquality(inst.times[cp.ta], inst.times[cp.tb],
                                         cp.d)
                       : stn.addConstraint(inst.times[cp.ta],
                                           inst.times[cp.tb], cp.d);
          if (!ok) return {};
        } else {
          VarId delta = bind.addIntVar(tmpl.name + "#" + std::to_string(serial) +
                                       ".dur");
          std::vector<VarId> cvars;
          for (const auto& arg : cp.args)
            cvars.push_back(termAsVar(resolve(arg)));
          cvars.push_back(delta);
          if (!bind.postTable(cvars, domain->relations[cp.relation].table))
            return {};
          durLinks.push_back(DurationLink{inst.times[cp.ta],
                                          inst.times[cp.tb], delta, eq});
        }
        break;
      }
    }
  }

  if (grounding && grounding->actInst[tid]) {
    const auto& table = grounding->actInst[tid];
    std::set<int64_t> ids;
    for (const auto& tup : table->tuples) ids.insert(tup.back());
    if (ids.empty()) return {};
    inst.instVar =
        bind.addVar(FiniteDomain::ofValues({ids.begin(), ids.end()}),
                    BindingNet::Kind::Object,
                    tmpl.name + "#I" + std::to_string(serial));
    std::vector<VarId> cvars = inst.params;
    cvars.push_back(inst.instVar);
    if (!bind.postTable(cvars, table)) return {};
  }

  actions.push_back(std::move(inst));
  InstOutcome out;
  out.action = aid;
  out.ok = propagateNetworks();
  return out;
}

TransformResult Chronicle::refined(
    TaskInstId taskId, TemplateId tid,
    const std::vector<std::optional<int64_t>>& pinned) const {
  TransformResult res;
  const TaskInstance& tRef = tasks[taskId];
  if (tRef.refinedBy != kNone) {
    res.error = "task already refined";
    return res;
  }
  const ActionTemplate& tmpl = domain->templates[tid];
  if (tmpl.task != tRef.symbol) {
    res.error = "transformation-failed: task symbol mismatch";
    return res;
  }
  Chronicle child = *this;
  auto inst = child.instantiate(tid, pinned, taskId);
  if (!inst.ok) {
    res.error = "transformation-failed: instantiation inconsistent";
    return res;
  }
  ActionInstance& a = child.actions[inst.action];
  // task(a) = tau: unify parameters and pin start/end.
  const TaskInstance& tsk = child.tasks[taskId];
  for (size_t i = 0; i < tmpl.taskArgs.size(); ++i) {
    Term actSide = tmpl.taskArgs[i].kind == TPattern::Kind::Const
                       ? Term::constant(tmpl.taskArgs[i].v)
                       : Term::var(a.params[tmpl.taskArgs[i].v]);
    if (!child.applyOp(RestrictionOp::termEq(actSide, tsk.args[i]))) {
      res.error = "transformation-failed: task unification";
      return res;
    }
  }
  if (!child.stn.addEquality(tsk.start, a.start, 0) ||
      !child.stn.addEquality(tsk.end, a.end, 0)) {
    res.error = "transformation-failed: task timepoints";
    return res;
  }
  if (a.instVar != kNoVar && tsk.refVar != kNoVar) {
    if (!child.bind.postEq(a.instVar, tsk.refVar)) {
      res.error = "transformation-failed: refinement variable";
      return res;
    }
  }
  child.tasks[taskId].refinedBy = inst.action;
  if (!child.propagateNetworks()) {
    res.error = "transformation-failed: propagation";
    return res;
  }
  res.newAction = inst.action;
  res.chronicle = std::move(child);
  return res;
}

TransformResult Chronicle::inserted(
    TemplateId tid, const std::vector<std::optional<int64_t>>& pinned) const {
  TransformResult res;
  const ActionTemplate& tmpl = domain->templates[tid];
  if (tmpl.dependent) {
    res.error = "task-dependent actions can only be used through task "
                "decomposition";
    return res;
  }
  Chronicle child = *this;
  TaskInstId preTasks = static_cast<TaskInstId>(child.tasks.size());
  auto inst = child.instantiate(tid, pinned, kNone);
  if (!inst.ok) {
    res.error = "transformation-failed: instantiation inconsistent";
    return res;
  }
  ActionInstance& a = child.actions[inst.action];
  // The achieved task is materialized as an already-refined marker so that
  // support commitments can reference the new refinement tree.
  std::vector<Term> markerArgs;
  for (const auto& tp : tmpl.taskArgs)
    markerArgs.push_back(tp.kind == TPattern::Kind::Const
                             ? Term::constant(tp.v)
                             : Term::var(a.params[tp.v]));
  TaskInstId marker = child.addTask(tmpl.task, std::move(markerArgs), a.start,
                                    a.end, kNone, {}, /*attachRefVar=*/false);
  child.tasks[marker].refinedBy = inst.action;
  a.parentTask = marker;
  a.ancestry = {marker};
  // Subtasks created during instantiation sit under the marker.
  for (TaskInstId t = preTasks; t < marker; ++t)
    child.tasks[t].ancestry.insert(child.tasks[t].ancestry.begin(), marker);
  if (!child.propagateNetworks()) {
    res.error = "transformation-failed: propagation";
    return res;
  }
  res.newAction = inst.action;
  res.chronicle = std::move(child);
  return res;
}

bool Chronicle::applyOp(const RestrictionOp& op) {
  switch (op.kind) {
    case RestrictionOp::Kind::TimeGE:
      return stn.addConstraint(op.t1, op.t2, op.d);
    case RestrictionOp::Kind::TermEq: {
      if (op.a.kind == Term::Kind::Any || op.b.kind == Term::Kind::Any)
        return true;  // unconstrained side, vacuous
      if (op.a.kind == Term::Kind::Undefined ||
          op.b.kind == Term::Kind::Undefined)
        return false;
      if (op.a.isConst() && op.b.isConst()) return op.a.v == op.b.v;
      if (op.a.isVar() && op.b.isVar())
        return bind.postEq(static_cast<VarId>(op.a.v),
                           static_cast<VarId>(op.b.v));
      const Term& var = op.a.isVar() ? op.a : op.b;
      const Term& cst = op.a.isVar() ? op.b : op.a;
      return bind.postEqConst(static_cast<VarId>(var.v), cst.v);
    }
    case RestrictionOp::Kind::TermNeq: {
      if (op.a.kind == Term::Kind::Undefined ||
          op.b.kind == Term::Kind::Undefined)
        return true;  // never unifiable anyway
      if (op.a.kind == Term::Kind::Any || op.b.kind == Term::Kind::Any)
        return true;
      if (op.a.isConst() && op.b.isConst()) return op.a.v != op.b.v;
      if (op.a.isVar() && op.b.isVar())
        return bind.postNeq(static_cast<VarId>(op.a.v),
                            static_cast<VarId>(op.b.v));
      const Term& var = op.a.isVar() ? op.a : op.b;
      const Term& cst = op.a.isVar() ? op.b : op.a;
      return bind.postNeqConst(static_cast<VarId>(var.v), cst.v);
    }
  }
  return false;
}

TransformResult Chronicle::restricted(
    const std::vector<NewPersistence>& persistences,
    const std::vector<RestrictionOp>& ops) const {
  TransformResult res;
  Chronicle child = *this;
  for (const auto& p : persistences) {
    Assertion a;
    a.kind = AssertKind::Persistence;
    a.sv = p.sv;
    a.args = p.args;
    a.value = p.value;
    a.start = p.start;
    a.end = p.end;
    a.aPriori = p.aPriori;
    a.isLinkPersistence = p.isLink;
    a.source = p.source;
    child.addAssertion(std::move(a));
    if (!child.stn.addConstraint(p.start, p.end, 0)) {
      res.error = "transformation-failed: persistence interval";
      return res;
    }
  }
  for (const auto& op : ops) {
    if (!child.applyOp(op)) {
      res.error = "transformation-failed: restriction inconsistent";
      return res;
    }
  }
  if (!child.propagateNetworks()) {
    res.error = "transformation-failed: propagation";
    return res;
  }
  res.chronicle = std::move(child);
  return res;
}

bool Chronicle::hasIncomingLink(AssertionId a) const {
  for (const auto& l : links)
    if (l.supported == a) return true;
  return false;
}

bool Chronicle::hasOutgoingChangeLink(AssertionId a) const {
  for (const auto& l : links)
    if (l.supporter == a && assertions[l.supported].kind == AssertKind::Change)
      return true;
  return false;
}

std::vector<AssertionId> Chronicle::unsupportedAssertions() const {
  std::vector<AssertionId> out;
  for (AssertionId i = 0; i < static_cast<AssertionId>(assertions.size()); ++i)
    if (assertions[i].requiresSupport() && !hasIncomingLink(i))
      out.push_back(i);
  return out;
}

std::vector<TaskInstId> Chronicle::unrefinedTasks() const {
  std::vector<TaskInstId> out;
  for (TaskInstId i = 0; i < static_cast<TaskInstId>(tasks.size()); ++i)
    if (tasks[i].refinedBy == kNone) out.push_back(i);
  return out;
}

const std::vector<TaskInstId>* Chronicle::dtSet(AssertionId a) const {
  auto it = supportCommitments.find(a);
  return it == supportCommitments.end() ? nullptr : &it->second;
}

void Chronicle::addSupportCommitment(AssertionId a, TaskInstId t) {
  auto& set = supportCommitments[a];
  if (std::find(set.begin(), set.end(), t) == set.end()) set.push_back(t);
}

bool Chronicle::actionDescendsFrom(ActionInstId a, TaskInstId t) const {
  const auto& anc = actions[a].ancestry;
  return std::find(anc.begin(), anc.end(), t) != anc.end();
}

bool Chronicle::taskDescendsFrom(TaskInstId sub, TaskInstId anc) const {
  if (sub == anc) return true;
  const auto& chain = tasks[sub].ancestry;
  return std::find(chain.begin(), chain.end(), anc) != chain.end();
}

bool Chronicle::possiblyEqual(const Term& a, const Term& b) const {
  if (a.kind == Term::Kind::Undefined || b.kind == Term::Kind::Undefined)
    return false;
  if (a.kind == Term::Kind::Any || b.kind == Term::Kind::Any) return true;
  if (a.isConst() && b.isConst()) return a.v == b.v;
  if (a.isVar() && b.isVar())
    return bind.unifiable(static_cast<VarId>(a.v), static_cast<VarId>(b.v));
  const Term& var = a.isVar() ? a : b;
  const Term& cst = a.isVar() ? b : a;
  return bind.unifiableWithConst(static_cast<VarId>(var.v), cst.v);
}

bool Chronicle::necessarilyEqual(const Term& a, const Term& b) const {
  if (a.kind == Term::Kind::Undefined || b.kind == Term::Kind::Undefined)
    return false;
  if (a.kind == Term::Kind::Any || b.kind == Term::Kind::Any) return false;
  if (a.isConst() && b.isConst()) return a.v == b.v;
  if (a.isVar() && b.isVar())
    return bind.unified(static_cast<VarId>(a.v), static_cast<VarId>(b.v));
  const Term& var = a.isVar() ? a : b;
  const Term& cst = a.isVar() ? b : a;
  return bind.unifiedWithConst(static_cast<VarId>(var.v), cst.v);
}

bool Chronicle::possiblyDifferent(const Term& a, const Term& b) const {
  if (a.kind == Term::Kind::Undefined || b.kind == Term::Kind::Undefined)
    return true;
  if (a.kind == Term::Kind::Any || b.kind == Term::Kind::Any) return true;
  if (a.isConst() && b.isConst()) return a.v != b.v;
  if (a.isVar() && b.isVar())
    return bind.separable(static_cast<VarId>(a.v), static_cast<VarId>(b.v));
  const Term& var = a.isVar() ? a : b;
  const Term& cst = a.isVar() ? b : a;
  return bind.separableFromConst(static_cast<VarId>(var.v), cst.v);
}

bool Chronicle::svUnifiable(AssertionId a, AssertionId b) const {
  const Assertion& x = assertions[a];
  const Assertion& y = assertions[b];
  if (x.sv != y.sv) return false;
  for (size_t i = 0; i < x.args.size(); ++i)
    if (!possiblyEqual(x.args[i], y.args[i])) return false;
  return true;
}

bool Chronicle::svUnified(AssertionId a, AssertionId b) const {
  const Assertion& x = assertions[a];
  const Assertion& y = assertions[b];
  if (x.sv != y.sv) return false;
  for (size_t i = 0; i < x.args.size(); ++i)
    if (!necessarilyEqual(x.args[i], y.args[i])) return false;
  return true;
}

std::vector<Component> Chronicle::components(AssertionId id) const {
  const Assertion& a = assertions[id];
  switch (a.kind) {
    case AssertKind::Persistence:
      return {Component{a.start, a.end, 0, 0, a.value}};
    case AssertKind::Change:
      return {Component{a.start, a.start, 0, 0, a.from},
              Component{a.start, a.end, +1, -1, Term::undefined()},
              Component{a.end, a.end, 0, 0, a.value}};
    case AssertKind::Assignment:
      // Viewed as a change over [t-1, t]; the inner open interval is empty.
      return {Component{a.start, a.start, -1, -1, a.from},
              Component{a.start, a.start, 0, 0, a.value}};
  }
  return {};
}

bool Chronicle::possiblyOverlap(const Component& a, const Component& b) const {
  // Each interval must be possibly nonempty and the two must possibly meet.
  if (!stn.consistentWith(a.s, a.e, a.soff - a.eoff)) return false;
  if (!stn.consistentWith(b.s, b.e, b.soff - b.eoff)) return false;
  if (!stn.consistentWith(a.s, b.e, a.soff - b.eoff)) return false;
  if (!stn.consistentWith(b.s, a.e, b.soff - a.eoff)) return false;
  return true;
}

bool Chronicle::componentsConflict(AssertionId a, int ca, AssertionId b,
                                   int cb) const {
  auto compsA = components(a);
  auto compsB = components(b);
  const Component& x = compsA[ca];
  const Component& y = compsB[cb];
  return possiblyOverlap(x, y) && possiblyDifferent(x.value, y.value);
}

std::vector<std::pair<int, int>> Chronicle::conflictsBetween(
    AssertionId a, AssertionId b) const {
  std::vector<std::pair<int, int>> out;
  if (a == b) return out;
  if (!svUnifiable(a, b)) return out;
  auto compsA = components(a);
  auto compsB = components(b);
  for (size_t i = 0; i < compsA.size(); ++i)
    for (size_t j = 0; j < compsB.size(); ++j)
      if (possiblyOverlap(compsA[i], compsB[j]) &&
          possiblyDifferent(compsA[i].value, compsB[j].value))
        out.emplace_back(static_cast<int>(i), static_cast<int>(j));
  return out;
}

bool Chronicle::checkCausalSupport(const std::vector<AssertionId>& timeline,
                                   AssertionId alpha) const {
  const Assertion& a = assertions[alpha];
  if (a.aPriori) return true;
  Term need = a.condValue();
  for (AssertionId bid : timeline) {
    if (bid == alpha) continue;
    const Assertion& b = assertions[bid];
    if (!b.producesValue()) continue;
    if (!svUnified(alpha, bid)) continue;
    if (!necessarilyEqual(b.value, need)) continue;
    if (!stn.entails(b.end, a.start, 0)) continue;
    // The value must persist over [end(b), start(alpha)] via assertions in
    // the timeline: chain value-holding persistences whose intervals provably
    // connect, until the frontier provably reaches start(alpha).
    Timepoint covered = b.end;
    std::set<AssertionId> used;
    while (!stn.entails(a.start, covered, 0)) {
      bool progress = false;
      for (AssertionId pid : timeline) {
        if (pid == alpha || pid == bid || used.count(pid)) continue;
        const Assertion& p = assertions[pid];
        if (p.kind != AssertKind::Persistence) continue;
        if (!svUnified(alpha, pid)) continue;
        if (!necessarilyEqual(p.value, need)) continue;
        if (!stn.entails(p.start, covered, 0)) continue;  // starts <= frontier
        if (!stn.entails(covered, p.end, 0)) continue;    // ends >= frontier
        covered = p.end;
        used.insert(pid);
        progress = true;
        break;
      }
      if (!progress) break;
    }
    if (stn.entails(a.start, covered, 0)) return true;
  }
  return false;
}

bool Chronicle::necessarilyConsistent(
    const std::vector<AssertionId>& timeline) const {
  for (size_t i = 0; i < timeline.size(); ++i)
    for (size_t j = i + 1; j < timeline.size(); ++j)
      if (!conflictsBetween(timeline[i], timeline[j]).empty()) return false;
  return true;
}

bool Chronicle::possiblyConsistentRec(const std::vector<AssertionId>& timeline,
                                      int depth) const {
  if (depth > 64) return false;
  for (size_t i = 0; i < timeline.size(); ++i) {
    for (size_t j = i + 1; j < timeline.size(); ++j) {
      auto confl = conflictsBetween(timeline[i], timeline[j]);
      if (confl.empty()) continue;
      auto [ca, cb] = confl.front();
      auto compsA = components(timeline[i]);
      auto compsB = components(timeline[j]);
      const Component& x = compsA[ca];
      const Component& y = compsB[cb];
      std::vector<RestrictionOp> options;
      options.push_back(
          RestrictionOp::timeGE(x.e, y.s, x.eoff - y.soff + 1));  // x before y
      options.push_back(
          RestrictionOp::timeGE(y.e, x.s, y.eoff - x.soff + 1));  // y before x
      if (x.value.kind != Term::Kind::Undefined &&
          y.value.kind != Term::Kind::Undefined)
        options.push_back(RestrictionOp::termEq(x.value, y.value));
      const Assertion& aa = assertions[timeline[i]];
      const Assertion& bb = assertions[timeline[j]];
      for (size_t k = 0; k < aa.args.size(); ++k)
        options.push_back(RestrictionOp::termNeq(aa.args[k], bb.args[k]));
      for (const auto& op : options) {
        auto res = restricted({}, {op});
        if (res.chronicle &&
            res.chronicle->possiblyConsistentRec(timeline, depth + 1))
          return true;
      }
      return false;
    }
  }
  return true;  // no conflicts left
}

bool Chronicle::possiblyConsistent(
    const std::vector<AssertionId>& timeline) const {
  return possiblyConsistentRec(timeline, 0);
}

std::string Chronicle::dump() const {
  std::ostringstream os;
  os << "chronicle\n";
  for (size_t i = 0; i < tasks.size(); ++i) {
    const TaskInstance& t = tasks[i];
    os << "  task " << i << " " << domain->tasks[t.symbol].name << "(";
    for (size_t k = 0; k < t.args.size(); ++k) {
      if (k) os << ",";
      os << termToString(*domain, t.args[k], &bind);
    }
    os << ")";
    if (t.refinedBy != kNone) os << " refined-by " << t.refinedBy;
    os << "\n";
  }
  for (size_t i = 0; i < actions.size(); ++i) {
    const ActionInstance& a = actions[i];
    os << "  action " << i << " " << domain->templates[a.tmpl].name << " ["
       << stn.earliest(a.start) << "," << stn.earliest(a.end) << "]";
    if (a.parentTask != kNone) os << " refines " << a.parentTask;
    os << "\n";
  }
  for (size_t i = 0; i < assertions.size(); ++i) {
    const Assertion& a = assertions[i];
    const char* kind = a.kind == AssertKind::Persistence ? "persist"
                       : a.kind == AssertKind::Change    ? "change"
                                                         : "assign";
    os << "  " << kind << " " << i << " " << domain->svTemplates[a.sv].name
       << "(";
    for (size_t k = 0; k < a.args.size(); ++k) {
      if (k) os << ",";
      os << termToString(*domain, a.args[k], &bind);
    }
    os << ")";
    if (a.kind == AssertKind::Change)
      os << " " << termToString(*domain, a.from, &bind) << "->";
    else
      os << " =";
    os << termToString(*domain, a.value, &bind);
    os << " @[" << stn.earliest(a.start) << "," << stn.earliest(a.end) << "]";
    if (a.aPriori) os << " apriori";
    os << "\n";
  }
  for (const auto& l : links)
    os << "  link " << l.supporter << "->" << l.supported << " via "
       << l.linkAssertion << "\n";
  return os.str();
}

}  // namespace fape
