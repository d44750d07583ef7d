#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "model.hpp"

namespace fape {

using AssertionId = int32_t;
using ActionInstId = int32_t;
using TaskInstId = int32_t;

struct Assertion {
  AssertKind kind;
  SvId sv = kNone;
  std::vector<Term> args;
  Term from;   // Change: required start value; Assignment: unconstrained pre-var
  Term value;  // produced / held value
  Timepoint start = kOrigin, end = kOrigin;  // Assignment: start == end
  ActionInstId source = kNone;
  bool aPriori = false;
  bool isLinkPersistence = false;

  bool requiresSupport() const { return !aPriori; }
  bool producesValue() const { return kind != AssertKind::Persistence; }
  // Value required at start() for the assertion to be supported.
  Term condValue() const {
    return kind == AssertKind::Change ? from : value;
  }
};

struct CausalLink {
  AssertionId supporter = kNone;
  AssertionId supported = kNone;
  AssertionId linkAssertion = kNone;
};

struct ActionInstance {
  TemplateId tmpl = kNone;
  std::vector<VarId> params;        // one binding var per template local
  Timepoint start = kOrigin, end = kOrigin;
  std::vector<Timepoint> times;     // per template timepoint
  VarId instVar = kNoVar;           // ground-instance variable, if grounded
  TaskInstId parentTask = kNone;    // task this instance refines
  std::vector<TaskInstId> ancestry; // tasks above, outermost first
  int creationIndex = 0;
};

struct TaskInstance {
  TaskSymId symbol = kNone;
  std::vector<Term> args;
  Timepoint start = kOrigin, end = kOrigin;
  VarId refVar = kNoVar;            // refinement variable, if grounded
  ActionInstId refinedBy = kNone;
  ActionInstId parentAction = kNone;
  std::vector<TaskInstId> ancestry;
  int creationIndex = 0;
};

// Ground instantiation relations, shared by all chronicles of one problem.
struct InstantiationRelations {
  // (param values..., ground id) per template / (task args..., ground id)
  std::vector<std::shared_ptr<const RelationTable>> actInst;
  std::vector<std::shared_ptr<const RelationTable>> taskRef;
};

struct DurationLink {
  Timepoint t1, t2;
  VarId delta;
  bool equality;
};

// A component of an assertion for conflict analysis: a (possibly degenerate)
// interval with endpoint offsets carrying one value.
struct Component {
  Timepoint s, e;
  int soff = 0, eoff = 0;
  Term value;
};

struct RestrictionOp {
  enum class Kind : uint8_t { TimeGE, TermEq, TermNeq } kind;
  Timepoint t1 = kOrigin, t2 = kOrigin;
  int64_t d = 0;  // t2 - t1 >= d
  Term a, b;

  static RestrictionOp timeGE(Timepoint t1, Timepoint t2, int64_t d) {
    RestrictionOp r;
    r.kind = Kind::TimeGE;
    r.t1 = t1;
    r.t2 = t2;
    r.d = d;
    return r;
  }
  static RestrictionOp termEq(Term a, Term b) {
    RestrictionOp r;
    r.kind = Kind::TermEq;
    r.a = a;
    r.b = b;
    return r;
  }
  static RestrictionOp termNeq(Term a, Term b) {
    RestrictionOp r;
    r.kind = Kind::TermNeq;
    r.a = a;
    r.b = b;
    return r;
  }
};

struct NewPersistence {
  SvId sv;
  std::vector<Term> args;
  Term value;
  Timepoint start, end;
  bool aPriori = false;
  bool isLink = false;
  ActionInstId source = kNone;
};

struct TransformResult;

// A chronicle is a partial plan: action instances
// and tasks, temporal assertions, both constraint networks, causal links and
// support commitments. Children are copies extended by one transformation.
class Chronicle {
 public:
  Stn stn;
  BindingNet bind;
  std::vector<DurationLink> durLinks;

  std::vector<ActionInstance> actions;
  std::vector<TaskInstance> tasks;
  std::vector<Assertion> assertions;
  std::vector<CausalLink> links;
  std::map<AssertionId, std::vector<TaskInstId>> supportCommitments;

  std::shared_ptr<const Domain> domain;
  std::shared_ptr<const InstantiationRelations> grounding;  // null when lifted

  explicit Chronicle(std::shared_ptr<const Domain> dom)
      : domain(std::move(dom)) {
    problemStart = stn.addTimepoint();
    stn.addEquality(kOrigin, problemStart, 0);
    problemEnd = stn.addTimepoint();
    stn.addConstraint(problemStart, problemEnd, 0);
  }

  Timepoint problemStart, problemEnd;

  // --- construction used by the frontend and by transformations ---

  TaskInstId addTask(TaskSymId sym, std::vector<Term> args, Timepoint ts,
                     Timepoint te, ActionInstId parentAction,
                     std::vector<TaskInstId> ancestry,
                     bool attachRefVar = true);
  AssertionId addAssertion(Assertion a);
  bool addDurationLink(Timepoint t1, Timepoint t2, VarId delta, bool equality);

  // Joint fixpoint over the binding network, the STN and duration links.
  bool propagateNetworks();

  // --- the three chronicle transformations ---

  TransformResult refined(TaskInstId task, TemplateId tmpl,
                          const std::vector<std::optional<int64_t>>& pinned =
                              {}) const;
  TransformResult inserted(TemplateId tmpl,
                           const std::vector<std::optional<int64_t>>& pinned =
                               {}) const;
  TransformResult restricted(const std::vector<NewPersistence>& persistences,
                             const std::vector<RestrictionOp>& ops) const;

  bool applyOp(const RestrictionOp& op);

  // --- support & bookkeeping ---

  bool hasIncomingLink(AssertionId a) const;
  bool hasOutgoingChangeLink(AssertionId a) const;
  bool supported(AssertionId a) const {
    return assertions[a].aPriori || hasIncomingLink(a);
  }
  std::vector<AssertionId> unsupportedAssertions() const;
  std::vector<TaskInstId> unrefinedTasks() const;
  const std::vector<TaskInstId>* dtSet(AssertionId a) const;
  void addSupportCommitment(AssertionId a, TaskInstId t);

  bool actionDescendsFrom(ActionInstId a, TaskInstId t) const;
  bool taskDescendsFrom(TaskInstId sub, TaskInstId anc) const;

  // --- term / component reasoning ---

  bool possiblyEqual(const Term& a, const Term& b) const;
  bool necessarilyEqual(const Term& a, const Term& b) const;
  bool possiblyDifferent(const Term& a, const Term& b) const;
  bool svUnifiable(AssertionId a, AssertionId b) const;
  bool svUnified(AssertionId a, AssertionId b) const;

  std::vector<Component> components(AssertionId a) const;
  bool possiblyOverlap(const Component& a, const Component& b) const;
  bool componentsConflict(AssertionId a, int ca, AssertionId b, int cb) const;
  // All conflicting component pairs between two assertions.
  std::vector<std::pair<int, int>> conflictsBetween(AssertionId a,
                                                    AssertionId b) const;

  // --- timeline queries ---

  bool checkCausalSupport(const std::vector<AssertionId>& timeline,
                          AssertionId alpha) const;
  bool necessarilyConsistent(const std::vector<AssertionId>& timeline) const;
  bool possiblyConsistent(const std::vector<AssertionId>& timeline) const;

  std::string dump() const;

  int64_t freshNameCounter = 0;

 private:
  struct InstOutcome {
    ActionInstId action = kNone;
    bool ok = false;
  };
  InstOutcome instantiate(TemplateId tmpl,
                          const std::vector<std::optional<int64_t>>& pinned,
                          TaskInstId parentTask);
  VarId termAsVar(const Term& t);
  bool possiblyConsistentRec(const std::vector<AssertionId>& timeline,
                             int depth) const;
};

struct TransformResult {
  std::optional<Chronicle> chronicle;
  std::string error;  // empty on success
  ActionInstId newAction = kNone;

  bool ok() const { return chronicle.has_value(); }
};

}  // namespace fape
