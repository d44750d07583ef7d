#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "util.hpp"

namespace fape {

using VarId = int32_t;
constexpr VarId kNoVar = -1;

// Finite domain, kept either as a closed integer interval or as a sorted
// explicit value set. Integer variables start as an interval and usually
// collapse to a set on the first relation constraint.
class FiniteDomain {
 public:
  static FiniteDomain interval(int64_t lo, int64_t hi) {
    FiniteDomain d;
    d.isInterval_ = true;
    d.lo_ = lo;
    d.hi_ = hi;
    return d;
  }
  static FiniteDomain ofValues(std::vector<int64_t> vals) {
    FiniteDomain d;
    d.isInterval_ = false;
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    d.vals_ = std::move(vals);
    return d;
  }

  bool empty() const { return isInterval_ ? lo_ > hi_ : vals_.empty(); }
  bool isInterval() const { return isInterval_; }
  int64_t size() const {
    return isInterval_ ? (lo_ > hi_ ? 0 : hi_ - lo_ + 1)
                       : static_cast<int64_t>(vals_.size());
  }
  bool contains(int64_t v) const {
    if (isInterval_) return v >= lo_ && v <= hi_;
    return std::binary_search(vals_.begin(), vals_.end(), v);
  }
  bool singleton() const { return size() == 1; }
  int64_t soleValue() const {
    FAPE_CHECK(singleton(), "soleValue on non-singleton domain");
    return isInterval_ ? lo_ : vals_[0];
  }
  int64_t minValue() const { return isInterval_ ? lo_ : vals_.front(); }
  int64_t maxValue() const { return isInterval_ ? hi_ : vals_.back(); }

  // Each mutator returns true when the domain actually shrank.
  bool restrictLeq(int64_t bound);
  bool restrictGeq(int64_t bound);
  bool restrictToValue(int64_t v);
  bool removeValue(int64_t v);
  bool intersectWith(const FiniteDomain& other);
  bool intersectSorted(const std::vector<int64_t>& sortedVals);

  bool intersects(const FiniteDomain& other) const;
  std::vector<int64_t> values() const;  // materializes intervals; keep small

 private:
  void materialize();

  bool isInterval_ = false;
  int64_t lo_ = 0, hi_ = -1;
  std::vector<int64_t> vals_;
};

// Immutable table of allowed tuples for relation constraints.
struct RelationTable {
  std::string name;
  int arity = 0;
  std::vector<std::vector<int64_t>> tuples;
};

enum class VarRelation { Unified, Unifiable, Separable, Separated };

// Binding constraint network with AC-3 style propagation. Value semantics:
// copies are independent snapshots.
class BindingNet {
 public:
  enum class Kind { Object, Integer };

  static constexpr int64_t kDefaultIntHorizon = 1000000;

  VarId addVar(FiniteDomain dom, Kind kind = Kind::Object,
               std::string name = {});
  VarId addIntVar(std::string name = {}) {
    return addVar(FiniteDomain::interval(0, kDefaultIntHorizon),
                  Kind::Integer, std::move(name));
  }

  int varCount() const { return static_cast<int>(vars_.size()); }
  bool failed() const { return failed_; }
  const FiniteDomain& dom(VarId v) const { return vars_[v].dom; }
  const std::string& varName(VarId v) const { return vars_[v].name; }

  // Posting runs propagation to quiescence; false means the network failed.
  bool postEq(VarId a, VarId b);
  bool postNeq(VarId a, VarId b);
  bool postEqConst(VarId a, int64_t value);
  bool postNeqConst(VarId a, int64_t value);
  bool postTable(std::vector<VarId> vars,
                 std::shared_ptr<const RelationTable> table);
  bool postDisjEq(VarId x, std::vector<VarId> options);
  bool postLeq(VarId a, int64_t bound);
  bool postGeq(VarId a, int64_t bound);

  // Direct domain restriction (used by reachability pruning); requeues the
  // constraints that watch the variable.
  bool restrictDomainSorted(VarId v, const std::vector<int64_t>& sortedVals);

  bool propagate();

  // Classification queries; valid at quiescence.
  bool unified(VarId a, VarId b) const;
  bool unifiable(VarId a, VarId b) const;
  bool separable(VarId a, VarId b) const { return !unified(a, b); }
  bool separated(VarId a, VarId b) const { return !unifiable(a, b); }

  bool unifiedWithConst(VarId a, int64_t value) const {
    return dom(a).singleton() && dom(a).soleValue() == value;
  }
  bool unifiableWithConst(VarId a, int64_t value) const;
  bool separableFromConst(VarId a, int64_t value) const;

  // Backtracking search with propagation lookahead over the whole network.
  bool fullyConsistent() const;

  // Deterministic assignment extending the current domains, empty on failure.
  std::vector<int64_t> solve() const;

 private:
  struct Constraint {
    enum class Type { Eq, Neq, Table, DisjEq } type;
    std::vector<VarId> vars;
    std::shared_ptr<const RelationTable> table;
    std::vector<char> aliveTuples;
  };
  struct Var {
    FiniteDomain dom;
    Kind kind;
    std::string name;
    std::vector<int32_t> watched;  // constraint indices
    VarId ufParent;
  };

  VarId ufFind(VarId v) const;
  void ufUnion(VarId a, VarId b);
  void onDomainChanged(VarId v);
  bool revise(int32_t ci);
  void fail() { failed_ = true; }
  bool neqBetweenClasses(VarId ra, VarId rb) const;
  bool searchAssign(std::vector<FiniteDomain>& doms,
                    std::vector<int64_t>& out) const;

  std::vector<Var> vars_;
  std::vector<Constraint> constraints_;
  std::vector<std::pair<VarId, VarId>> neqs_;
  std::vector<int32_t> queue_;
  bool failed_ = false;
};

}  // namespace fape
