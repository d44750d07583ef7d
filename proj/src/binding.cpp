#include "binding.hpp"

#include <set>

namespace fape {

void FiniteDomain::materialize() {
  if (!isInterval_) return;
  FAPE_CHECK(hi_ - lo_ < 10000000, "materializing an oversized interval");
  vals_.clear();
  vals_.reserve(static_cast<size_t>(hi_ - lo_ + 1));
  for (int64_t v = lo_; v <= hi_; ++v) vals_.push_back(v);
  isInterval_ = false;
}

bool FiniteDomain::restrictLeq(int64_t bound) {
  if (isInterval_) {
    if (hi_ <= bound) return false;
    hi_ = bound;
    return true;
  }
  size_t old = vals_.size();
  while (!vals_.empty() && vals_.back() > bound) vals_.pop_back();
  return vals_.size() != old;
}

bool FiniteDomain::restrictGeq(int64_t bound) {
  if (isInterval_) {
    if (lo_ >= bound) return false;
    lo_ = bound;
    return true;
  }
  auto it = std::lower_bound(vals_.begin(), vals_.end(), bound);
  if (it == vals_.begin()) return false;
  vals_.erase(vals_.begin(), it);
  return true;
}

bool FiniteDomain::restrictToValue(int64_t v) {
  if (!contains(v)) {
    isInterval_ = false;
    vals_.clear();
    return true;
  }
  if (singleton()) return false;
  isInterval_ = false;
  vals_ = {v};
  return true;
}

bool FiniteDomain::removeValue(int64_t v) {
  if (!contains(v)) return false;
  if (isInterval_) {
    if (v == lo_) { ++lo_; return true; }
    if (v == hi_) { --hi_; return true; }
    materialize();
  }
  auto it = std::lower_bound(vals_.begin(), vals_.end(), v);
  vals_.erase(it);
  return true;
}

bool FiniteDomain::intersectWith(const FiniteDomain& other) {
  if (other.isInterval_) {
    bool ch = restrictGeq(other.lo_);
    ch |= restrictLeq(other.hi_);
    return ch;
  }
  return intersectSorted(other.vals_);
}

bool FiniteDomain::intersectSorted(const std::vector<int64_t>& sortedVals) {
  std::vector<int64_t> kept;
  kept.reserve(sortedVals.size());
  for (int64_t v : sortedVals)
    if (contains(v)) kept.push_back(v);
  bool changed = static_cast<int64_t>(kept.size()) != size();
  isInterval_ = false;
  vals_ = std::move(kept);
  return changed;
}

bool FiniteDomain::intersects(const FiniteDomain& other) const {
  if (empty() || other.empty()) return false;
  if (isInterval_ && other.isInterval_)
    return lo_ <= other.hi_ && other.lo_ <= hi_;
  const FiniteDomain& set = isInterval_ ? other : *this;
  const FiniteDomain& any = isInterval_ ? *this : other;
  for (int64_t v : set.vals_)
    if (any.contains(v)) return true;
  return false;
}

std::vector<int64_t> FiniteDomain::values() const {
  if (!isInterval_) return vals_;
  FiniteDomain copy = *this;
  copy.materialize();
  return copy.vals_;
}

VarId BindingNet::addVar(FiniteDomain dom, Kind kind, std::string name) {
  VarId id = static_cast<VarId>(vars_.size());
  bool emptyDom = dom.empty();
  vars_.push_back(Var{std::move(dom), kind, std::move(name), {}, id});
  if (emptyDom) fail();
  return id;
}

VarId BindingNet::ufFind(VarId v) const {
  while (vars_[v].ufParent != v) v = vars_[v].ufParent;
  return v;
}

void BindingNet::ufUnion(VarId a, VarId b) {
  VarId ra = ufFind(a), rb = ufFind(b);
  if (ra != rb) const_cast<Var&>(vars_[rb]).ufParent = ra;
}

void BindingNet::onDomainChanged(VarId v) {
  if (vars_[v].dom.empty()) {
    fail();
    return;
  }
  for (int32_t ci : vars_[v].watched)
    if (std::find(queue_.begin(), queue_.end(), ci) == queue_.end())
      queue_.push_back(ci);
}

bool BindingNet::postEq(VarId a, VarId b) {
  if (a == b) return propagate();
  int32_t ci = static_cast<int32_t>(constraints_.size());
  constraints_.push_back(Constraint{Constraint::Type::Eq, {a, b}, nullptr, {}});
  vars_[a].watched.push_back(ci);
  vars_[b].watched.push_back(ci);
  ufUnion(a, b);
  queue_.push_back(ci);
  return propagate();
}

bool BindingNet::postNeq(VarId a, VarId b) {
  if (a == b) { fail(); return false; }
  int32_t ci = static_cast<int32_t>(constraints_.size());
  constraints_.push_back(Constraint{Constraint::Type::Neq, {a, b}, nullptr, {}});
  vars_[a].watched.push_back(ci);
  vars_[b].watched.push_back(ci);
  neqs_.emplace_back(a, b);
  queue_.push_back(ci);
  return propagate();
}

bool BindingNet::postEqConst(VarId a, int64_t value) {
  if (vars_[a].dom.restrictToValue(value)) onDomainChanged(a);
  return propagate();
}

bool BindingNet::postNeqConst(VarId a, int64_t value) {
  if (vars_[a].dom.removeValue(value)) onDomainChanged(a);
  return propagate();
}

bool BindingNet::postTable(std::vector<VarId> vids,
                           std::shared_ptr<const RelationTable> table) {
  FAPE_CHECK(static_cast<int>(vids.size()) == table->arity,
             "table constraint arity mismatch");
  int32_t ci = static_cast<int32_t>(constraints_.size());
  Constraint c{Constraint::Type::Table, std::move(vids), std::move(table), {}};
  c.aliveTuples.assign(c.table->tuples.size(), 1);
  constraints_.push_back(std::move(c));
  for (VarId v : constraints_.back().vars) vars_[v].watched.push_back(ci);
  queue_.push_back(ci);
  return propagate();
}

bool BindingNet::postDisjEq(VarId x, std::vector<VarId> options) {
  int32_t ci = static_cast<int32_t>(constraints_.size());
  std::vector<VarId> all;
  all.push_back(x);
  for (VarId o : options) all.push_back(o);
  constraints_.push_back(
      Constraint{Constraint::Type::DisjEq, std::move(all), nullptr, {}});
  for (VarId v : constraints_.back().vars) vars_[v].watched.push_back(ci);
  queue_.push_back(ci);
  return propagate();
}

bool BindingNet::postLeq(VarId a, int64_t bound) {
  if (vars_[a].dom.restrictLeq(bound)) onDomainChanged(a);
  return propagate();
}

bool BindingNet::postGeq(VarId a, int64_t bound) {
  if (vars_[a].dom.restrictGeq(bound)) onDomainChanged(a);
  return propagate();
}

bool BindingNet::restrictDomainSorted(VarId v,
                                      const std::vector<int64_t>& sortedVals) {
  if (vars_[v].dom.intersectSorted(sortedVals)) onDomainChanged(v);
  return propagate();
}

bool BindingNet::revise(int32_t ci) {
  Constraint& c = constraints_[ci];
  switch (c.type) {
    case Constraint::Type::Eq: {
      VarId a = c.vars[0], b = c.vars[1];
      FiniteDomain inter = vars_[a].dom;
      inter.intersectWith(vars_[b].dom);
      if (vars_[a].dom.intersectWith(inter)) onDomainChanged(a);
      if (failed_) return false;
      if (vars_[b].dom.intersectWith(inter)) onDomainChanged(b);
      break;
    }
    case Constraint::Type::Neq: {
      VarId a = c.vars[0], b = c.vars[1];
      if (vars_[a].dom.singleton()) {
        if (vars_[b].dom.removeValue(vars_[a].dom.soleValue()))
          onDomainChanged(b);
      }
      if (failed_) return false;
      if (vars_[b].dom.singleton()) {
        if (vars_[a].dom.removeValue(vars_[b].dom.soleValue()))
          onDomainChanged(a);
      }
      break;
    }
    case Constraint::Type::Table: {
      const auto& tuples = c.table->tuples;
      int arity = c.table->arity;
      std::vector<std::set<int64_t>> proj(arity);
      for (size_t ti = 0; ti < tuples.size(); ++ti) {
        if (!c.aliveTuples[ti]) continue;
        bool ok = true;
        for (int i = 0; i < arity && ok; ++i)
          ok = vars_[c.vars[i]].dom.contains(tuples[ti][i]);
        if (!ok) {
          c.aliveTuples[ti] = 0;
          continue;
        }
        for (int i = 0; i < arity; ++i) proj[i].insert(tuples[ti][i]);
      }
      for (int i = 0; i < arity; ++i) {
        std::vector<int64_t> allowed(proj[i].begin(), proj[i].end());
        if (vars_[c.vars[i]].dom.intersectSorted(allowed))
          onDomainChanged(c.vars[i]);
        if (failed_) return false;
      }
      break;
    }
    case Constraint::Type::DisjEq: {
      VarId x = c.vars[0];
      std::set<int64_t> unionVals;
      for (size_t i = 1; i < c.vars.size(); ++i)
        for (int64_t v : vars_[c.vars[i]].dom.values()) unionVals.insert(v);
      std::vector<int64_t> allowed(unionVals.begin(), unionVals.end());
      if (vars_[x].dom.intersectSorted(allowed)) onDomainChanged(x);
      break;
    }
  }
  return !failed_;
}

bool BindingNet::propagate() {
  if (failed_) return false;
  while (!queue_.empty()) {
    int32_t ci = queue_.front();
    queue_.erase(queue_.begin());
    if (!revise(ci)) return false;
  }
  return true;
}

bool BindingNet::neqBetweenClasses(VarId ra, VarId rb) const {
  for (auto& [x, y] : neqs_) {
    VarId rx = ufFind(x), ry = ufFind(y);
    if ((rx == ra && ry == rb) || (rx == rb && ry == ra)) return true;
  }
  return false;
}

bool BindingNet::unified(VarId a, VarId b) const {
  if (a == b) return true;
  if (ufFind(a) == ufFind(b)) return true;
  return dom(a).singleton() && dom(b).singleton() &&
         dom(a).soleValue() == dom(b).soleValue();
}

bool BindingNet::unifiable(VarId a, VarId b) const {
  if (unified(a, b)) return true;
  if (!dom(a).intersects(dom(b))) return false;
  return !neqBetweenClasses(ufFind(a), ufFind(b));
}

bool BindingNet::unifiableWithConst(VarId a, int64_t value) const {
  if (!dom(a).contains(value)) return false;
  // An inequality with a singleton-domain variable holding this value
  // separates them.
  VarId ra = ufFind(a);
  for (auto& [x, y] : neqs_) {
    VarId other = kNoVar;
    if (ufFind(x) == ra) other = y;
    else if (ufFind(y) == ra) other = x;
    if (other != kNoVar && dom(other).singleton() &&
        dom(other).soleValue() == value)
      return false;
  }
  return true;
}

bool BindingNet::separableFromConst(VarId a, int64_t value) const {
  return !(dom(a).singleton() && dom(a).soleValue() == value);
}

bool BindingNet::searchAssign(std::vector<FiniteDomain>& doms,
                              std::vector<int64_t>& out) const {
  // Pick the unassigned variable with the smallest domain.
  int best = -1;
  int64_t bestSize = 0;
  for (int v = 0; v < varCount(); ++v) {
    if (doms[v].singleton()) continue;
    if (doms[v].empty()) return false;
    if (best < 0 || doms[v].size() < bestSize) {
      best = v;
      bestSize = doms[v].size();
    }
  }
  if (best < 0) {
    // All singleton: verify every constraint.
    for (const auto& c : constraints_) {
      switch (c.type) {
        case Constraint::Type::Eq:
          if (doms[c.vars[0]].soleValue() != doms[c.vars[1]].soleValue())
            return false;
          break;
        case Constraint::Type::Neq:
          if (doms[c.vars[0]].soleValue() == doms[c.vars[1]].soleValue())
            return false;
          break;
        case Constraint::Type::Table: {
          bool any = false;
          for (size_t ti = 0; ti < c.table->tuples.size() && !any; ++ti) {
            if (!c.aliveTuples[ti]) continue;
            any = true;
            for (int i = 0; i < c.table->arity; ++i)
              if (c.table->tuples[ti][i] != doms[c.vars[i]].soleValue()) {
                any = false;
                break;
              }
          }
          if (!any) return false;
          break;
        }
        case Constraint::Type::DisjEq: {
          bool any = false;
          for (size_t i = 1; i < c.vars.size() && !any; ++i)
            any = doms[c.vars[0]].soleValue() == doms[c.vars[i]].soleValue();
          if (!any) return false;
          break;
        }
      }
    }
    out.resize(varCount());
    for (int v = 0; v < varCount(); ++v) out[v] = doms[v].soleValue();
    return true;
  }
  for (int64_t v : doms[best].values()) {
    BindingNet scratch = *this;
    for (int i = 0; i < varCount(); ++i) scratch.vars_[i].dom = doms[i];
    scratch.failed_ = false;
    if (!scratch.postEqConst(best, v)) continue;
    std::vector<FiniteDomain> next(varCount());
    for (int i = 0; i < varCount(); ++i) next[i] = scratch.vars_[i].dom;
    if (scratch.searchAssign(next, out)) return true;
  }
  return false;
}

bool BindingNet::fullyConsistent() const {
  if (failed_) return false;
  std::vector<int64_t> out;
  std::vector<FiniteDomain> doms(varCount());
  for (int v = 0; v < varCount(); ++v) doms[v] = vars_[v].dom;
  return searchAssign(doms, out);
}

std::vector<int64_t> BindingNet::solve() const {
  std::vector<int64_t> out;
  if (failed_) return out;
  std::vector<FiniteDomain> doms(varCount());
  for (int v = 0; v < varCount(); ++v) doms[v] = vars_[v].dom;
  searchAssign(doms, out);
  return out;
}

}  // namespace fape
