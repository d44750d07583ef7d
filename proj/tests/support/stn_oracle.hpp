#pragma once

// Independent Bellman-Ford reference for STN minimal-delay matrices. Works on
// the raw constraint list, not on the incremental matrix under test.

#include <cstdint>
#include <vector>

#include "util.hpp"

namespace fape::testing {

struct StnEdge {
  int t1, t2;
  int64_t d;  // t2 - t1 >= d
};

struct OracleStn {
  // lb[a][b] = strongest entailed lower bound on b - a, kNegInf if none.
  std::vector<std::vector<int64_t>> lb;
  bool consistent = true;
};

// n timepoints (0 = origin). Every timepoint is implicitly >= origin.
inline OracleStn bellmanFordStn(int n, std::vector<StnEdge> edges) {
  for (int t = 1; t < n; ++t) edges.push_back({0, t, 0});
  OracleStn out;
  out.lb.assign(n, std::vector<int64_t>(n, kNegInf));
  for (int s = 0; s < n; ++s) {
    auto& dist = out.lb[s];
    dist[s] = 0;
    // Longest paths over "t2 - t1 >= d" edges; positive cycles mean
    // inconsistency.
    for (int iter = 0; iter <= n; ++iter) {
      bool changed = false;
      for (const auto& e : edges) {
        if (dist[e.t1] == kNegInf) continue;
        int64_t cand = addSat(dist[e.t1], e.d);
        if (cand > dist[e.t2]) {
          dist[e.t2] = cand;
          changed = true;
        }
      }
      if (!changed) break;
      if (iter == n) out.consistent = false;  // still improving: cycle
    }
    if (dist[s] > 0) out.consistent = false;
  }
  return out;
}

}  // namespace fape::testing
