#pragma once

// Brute-force arc-consistency fixpoint and full-consistency enumeration used
// as ground truth for the propagating network.

#include <cstdint>
#include <memory>
#include <set>
#include <vector>

#include "binding.hpp"

namespace fape::testing {

struct OracleConstraint {
  enum class Type { Eq, Neq, Table } type;
  std::vector<int> vars;
  std::shared_ptr<const fape::RelationTable> table;
};

using OracleDomains = std::vector<std::set<int64_t>>;

// One value-support pass over a single constraint.
inline bool valueSupported(const OracleConstraint& c, const OracleDomains& doms,
                           int varPos, int64_t value) {
  switch (c.type) {
    case OracleConstraint::Type::Eq: {
      int other = c.vars[varPos == 0 ? 1 : 0];
      return doms[other].count(value) > 0;
    }
    case OracleConstraint::Type::Neq: {
      int other = c.vars[varPos == 0 ? 1 : 0];
      for (int64_t w : doms[other])
        if (w != value) return true;
      return false;
    }
    case OracleConstraint::Type::Table: {
      for (const auto& tup : c.table->tuples) {
        if (tup[varPos] != value) continue;
        bool ok = true;
        for (size_t i = 0; i < c.vars.size() && ok; ++i)
          ok = doms[c.vars[i]].count(tup[i]) > 0;
        if (ok) return true;
      }
      return false;
    }
  }
  return false;
}

// Repeated support filtering until nothing changes. Neq prunes only against
// singleton opposites, matching the propagation contract under test.
inline bool acFixpoint(OracleDomains& doms,
                       const std::vector<OracleConstraint>& cs) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& c : cs) {
      for (size_t pos = 0; pos < c.vars.size(); ++pos) {
        auto& dom = doms[c.vars[pos]];
        for (auto it = dom.begin(); it != dom.end();) {
          if (!valueSupported(c, doms, static_cast<int>(pos), *it)) {
            it = dom.erase(it);
            changed = true;
          } else {
            ++it;
          }
        }
        if (dom.empty()) return false;
      }
    }
  }
  return true;
}

// Exhaustive satisfiability over the cross product of current domains.
inline bool bruteForceSatisfiable(const OracleDomains& doms,
                                  const std::vector<OracleConstraint>& cs,
                                  std::vector<int64_t>& assignment, size_t v) {
  if (v == doms.size()) {
    for (const auto& c : cs) {
      switch (c.type) {
        case OracleConstraint::Type::Eq:
          if (assignment[c.vars[0]] != assignment[c.vars[1]]) return false;
          break;
        case OracleConstraint::Type::Neq:
          if (assignment[c.vars[0]] == assignment[c.vars[1]]) return false;
          break;
        case OracleConstraint::Type::Table: {
          bool any = false;
          for (const auto& tup : c.table->tuples) {
            bool match = true;
            for (size_t i = 0; i < c.vars.size() && match; ++i)
              match = tup[i] == assignment[c.vars[i]];
            if (match) { any = true; break; }
          }
          if (!any) return false;
          break;
        }
      }
    }
    return true;
  }
  for (int64_t val : doms[v]) {
    assignment[v] = val;
    if (bruteForceSatisfiable(doms, cs, assignment, v + 1)) return true;
  }
  return false;
}

inline bool bruteForceSatisfiable(const OracleDomains& doms,
                                  const std::vector<OracleConstraint>& cs) {
  std::vector<int64_t> assignment(doms.size());
  return bruteForceSatisfiable(doms, cs, assignment, 0);
}

}  // namespace fape::testing
