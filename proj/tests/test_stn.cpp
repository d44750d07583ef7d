#include <algorithm>
#include <random>

#include "doctest.h"
#include "stn.hpp"
#include "support/stn_oracle.hpp"

using namespace fape;
using namespace fape::testing;

TEST_CASE("fresh timepoint bounds") {
  Stn stn;
  Timepoint t = stn.addTimepoint();
  CHECK(stn.lb(kOrigin, t) == 0);
  CHECK(stn.lb(t, kOrigin) == kNegInf);
  CHECK(stn.maxDelay(kOrigin, t) == kPosInf);
  CHECK(stn.lb(t, t) == 0);
}

TEST_CASE("matrix grows with added points") {
  Stn stn;
  stn.addTimepoint();
  stn.addTimepoint();
  stn.addTimepoint();
  CHECK(stn.size() == 4);  // origin included
}

TEST_CASE("equality encoding") {
  Stn stn;
  Timepoint t1 = stn.addTimepoint();
  Timepoint t2 = stn.addTimepoint();
  CHECK(stn.addConstraint(t1, t2, 5));
  CHECK(stn.addConstraint(t2, t1, -5));
  CHECK(stn.lb(t1, t2) == 5);
  CHECK(stn.maxDelay(t1, t2) == 5);
}

TEST_CASE("contradictory bounds are rejected and flagged") {
  Stn stn;
  Timepoint t1 = stn.addTimepoint();
  Timepoint t2 = stn.addTimepoint();
  CHECK(stn.addConstraint(t1, t2, 5));
  CHECK_FALSE(stn.addConstraint(t2, t1, -3));  // t2 - t1 <= 3
  CHECK_FALSE(stn.consistent());
}

TEST_CASE("strict self-loop is inconsistent") {
  Stn stn;
  Timepoint t = stn.addTimepoint();
  CHECK_FALSE(stn.addConstraint(t, t, 1));
  CHECK_FALSE(stn.consistent());
}

TEST_CASE("unrelated fresh timepoints are unbounded") {
  Stn stn;
  Timepoint t1 = stn.addTimepoint();
  Timepoint t2 = stn.addTimepoint();
  CHECK(stn.lb(t1, t2) == kNegInf);
  CHECK(stn.maxDelay(t1, t2) == kPosInf);
}

TEST_CASE("snapshots are independent") {
  Stn stn;
  Timepoint t1 = stn.addTimepoint();
  Timepoint t2 = stn.addTimepoint();
  stn.addConstraint(t1, t2, 2);
  Stn copy = stn;
  copy.addConstraint(t1, t2, 9);
  CHECK(stn.lb(t1, t2) == 2);
  CHECK(copy.lb(t1, t2) == 9);
}

TEST_CASE("snapshot of inconsistent network carries flag") {
  Stn stn;
  Timepoint t = stn.addTimepoint();
  stn.addConstraint(t, t, 1);
  Stn copy = stn;
  CHECK_FALSE(copy.consistent());
}

namespace {

std::vector<StnEdge> randomEdges(std::mt19937& rng, int n, int m) {
  std::uniform_int_distribution<int> pick(1, n - 1);
  std::uniform_int_distribution<int64_t> weight(-12, 12);
  std::vector<StnEdge> edges;
  for (int i = 0; i < m; ++i) {
    int a = pick(rng), b = pick(rng);
    if (a == b) continue;
    edges.push_back({a, b, weight(rng)});
  }
  return edges;
}

}  // namespace

TEST_CASE("incremental matrix matches Bellman-Ford on random instances") {
  std::mt19937 rng(7);
  int agreeChecked = 0;
  for (int round = 0; round < 200; ++round) {
    int n = 2 + static_cast<int>(rng() % 39);
    int m = 1 + static_cast<int>(rng() % (3 * n));
    auto edges = randomEdges(rng, n, m);

    Stn stn;
    for (int i = 1; i < n; ++i) stn.addTimepoint();
    bool ok = true;
    for (const auto& e : edges) {
      if (!stn.addConstraint(e.t1, e.t2, e.d)) {
        ok = false;
        break;
      }
    }
    auto oracle = bellmanFordStn(n, edges);
    if (!ok) {
      CHECK_FALSE(oracle.consistent);
      continue;
    }
    REQUIRE(oracle.consistent);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        REQUIRE(stn.lb(a, b) == oracle.lb[a][b]);
        ++agreeChecked;
      }
  }
  CHECK(agreeChecked > 0);
}

TEST_CASE("constraint order does not change the fixpoint") {
  std::mt19937 rng(11);
  for (int round = 0; round < 40; ++round) {
    int n = 3 + static_cast<int>(rng() % 10);
    auto edges = randomEdges(rng, n, 2 * n);

    auto run = [&](const std::vector<StnEdge>& es) {
      Stn stn;
      for (int i = 1; i < n; ++i) stn.addTimepoint();
      for (const auto& e : es)
        if (!stn.addConstraint(e.t1, e.t2, e.d)) break;
      return stn;
    };
    Stn first = run(edges);
    auto shuffled = edges;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    Stn second = run(shuffled);
    REQUIRE(first.consistent() == second.consistent());
    if (!first.consistent() || first.size() != n) continue;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) REQUIRE(first.lb(a, b) == second.lb(a, b));
  }
}

TEST_CASE("bounds are monotone in the constraint set") {
  std::mt19937 rng(13);
  for (int round = 0; round < 40; ++round) {
    int n = 3 + static_cast<int>(rng() % 8);
    auto edges = randomEdges(rng, n, 2 * n);
    Stn stn;
    for (int i = 1; i < n; ++i) stn.addTimepoint();
    std::vector<int64_t> prev;
    for (const auto& e : edges) {
      if (!stn.addConstraint(e.t1, e.t2, e.d)) break;
      std::vector<int64_t> cur;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) cur.push_back(stn.lb(a, b));
      if (!prev.empty())
        for (size_t i = 0; i < cur.size(); ++i) REQUIRE(cur[i] >= prev[i]);
      prev = std::move(cur);
    }
  }
}
