#include <random>

#include "binding.hpp"
#include "chronicle.hpp"
#include "doctest.h"
#include "model.hpp"
#include "support/csp_oracle.hpp"

using namespace fape;
using namespace fape::testing;

namespace {

FiniteDomain dom(std::vector<int64_t> vals) {
  return FiniteDomain::ofValues(std::move(vals));
}

}  // namespace

TEST_CASE("empty initial domain fails immediately") {
  BindingNet net;
  net.addVar(dom({}));
  CHECK(net.failed());
}

TEST_CASE("integer vars default to a bounded interval") {
  BindingNet net;
  VarId v = net.addIntVar();
  CHECK(net.dom(v).minValue() == 0);
  CHECK(net.dom(v).maxValue() == BindingNet::kDefaultIntHorizon);
}

TEST_CASE("equality prunes to the intersection") {
  BindingNet net;
  VarId x = net.addVar(dom({1, 2}));
  VarId y = net.addVar(dom({2}));
  CHECK(net.postEq(x, y));
  CHECK(net.dom(x).singleton());
  CHECK(net.dom(x).soleValue() == 2);
}

TEST_CASE("relation constraint prunes the duration column") {
  // travel-time style table {(d1,d2,7),(d2,d3,9)} with origin fixed to d1.
  auto table = std::make_shared<RelationTable>();
  table->name = "travel";
  table->arity = 3;
  table->tuples = {{0, 1, 7}, {1, 2, 9}};
  BindingNet net;
  VarId from = net.addVar(dom({0}));
  VarId to = net.addVar(dom({0, 1, 2}));
  VarId delta = net.addIntVar();
  CHECK(net.postTable({from, to, delta}, table));
  CHECK(net.dom(delta).singleton());
  CHECK(net.dom(delta).soleValue() == 7);
  CHECK(net.dom(to).singleton());
  CHECK(net.dom(to).soleValue() == 1);
}

TEST_CASE("disjunctive equality restricts the left side") {
  BindingNet net;
  VarId x = net.addVar(dom({1, 2, 3, 4}));
  VarId x1 = net.addVar(dom({1}));
  VarId x2 = net.addVar(dom({2}));
  CHECK(net.postDisjEq(x, {x1, x2}));
  CHECK(net.dom(x).size() == 2);
  CHECK(net.dom(x).contains(1));
  CHECK(net.dom(x).contains(2));
}

TEST_CASE("queries classify variable pairs") {
  BindingNet net;
  VarId a = net.addVar(dom({5}));
  VarId b = net.addVar(dom({5}));
  CHECK(net.unified(a, b));
  CHECK(net.unifiable(a, b));
  CHECK_FALSE(net.separated(a, b));

  VarId c = net.addVar(dom({1, 2}));
  VarId d = net.addVar(dom({3, 4}));
  CHECK(net.separated(c, d));
  CHECK(net.separable(c, d));
  CHECK_FALSE(net.unifiable(c, d));

  VarId e = net.addVar(dom({1, 2}));
  VarId f = net.addVar(dom({2, 3}));
  CHECK(net.unifiable(e, f));
  CHECK(net.separable(e, f));
  CHECK_FALSE(net.unified(e, f));
  CHECK_FALSE(net.separated(e, f));

  VarId g = net.addVar(dom({1, 2}));
  VarId h = net.addVar(dom({1, 2}));
  net.postNeq(g, h);
  CHECK(net.separated(g, h));
}

TEST_CASE("inequality separates through unified classes") {
  BindingNet net;
  VarId a = net.addVar(dom({1, 2, 3}));
  VarId b = net.addVar(dom({1, 2, 3}));
  VarId c = net.addVar(dom({1, 2, 3}));
  VarId d = net.addVar(dom({1, 2, 3}));
  net.postEq(a, b);
  net.postEq(c, d);
  net.postNeq(b, c);
  CHECK_FALSE(net.unifiable(a, d));
}

TEST_CASE("snapshots are independent") {
  BindingNet net;
  VarId x = net.addVar(dom({1, 2, 3}));
  BindingNet copy = net;
  copy.postEqConst(x, 2);
  CHECK(net.dom(x).size() == 3);
  CHECK(copy.dom(x).singleton());
}

TEST_CASE("full consistency finds implicit pigeonhole failure") {
  BindingNet net;
  VarId a = net.addVar(dom({1, 2}));
  VarId b = net.addVar(dom({1, 2}));
  VarId c = net.addVar(dom({1, 2}));
  net.postNeq(a, b);
  net.postNeq(b, c);
  net.postNeq(a, c);
  CHECK_FALSE(net.failed());  // arc consistency alone does not notice
  CHECK_FALSE(net.fullyConsistent());
}

namespace {

struct RandomNet {
  BindingNet net;
  OracleDomains doms;
  std::vector<OracleConstraint> cs;
  bool postedOk = true;
};

RandomNet makeRandomNet(std::mt19937& rng) {
  RandomNet r;
  int nvars = 2 + static_cast<int>(rng() % 7);
  std::uniform_int_distribution<int64_t> val(0, 5);
  for (int v = 0; v < nvars; ++v) {
    int dsize = 1 + static_cast<int>(rng() % 6);
    std::set<int64_t> vals;
    for (int i = 0; i < dsize; ++i) vals.insert(val(rng));
    r.doms.push_back(vals);
    r.net.addVar(FiniteDomain::ofValues({vals.begin(), vals.end()}));
  }
  int ncons = 1 + static_cast<int>(rng() % 10);
  std::uniform_int_distribution<int> pickVar(0, nvars - 1);
  for (int i = 0; i < ncons && r.postedOk; ++i) {
    int kind = static_cast<int>(rng() % 3);
    int a = pickVar(rng), b = pickVar(rng);
    if (a == b) continue;
    if (kind == 0) {
      r.cs.push_back({OracleConstraint::Type::Eq, {a, b}, nullptr});
      r.postedOk = r.net.postEq(a, b);
    } else if (kind == 1) {
      r.cs.push_back({OracleConstraint::Type::Neq, {a, b}, nullptr});
      r.postedOk = r.net.postNeq(a, b);
    } else {
      int arity = 2 + static_cast<int>(rng() % 2);
      std::vector<int> vars;
      for (int k = 0; k < arity; ++k) vars.push_back(pickVar(rng));
      auto table = std::make_shared<RelationTable>();
      table->arity = arity;
      int rows = 1 + static_cast<int>(rng() % 8);
      for (int t = 0; t < rows; ++t) {
        std::vector<int64_t> tup;
        for (int k = 0; k < arity; ++k) tup.push_back(val(rng));
        table->tuples.push_back(tup);
      }
      r.cs.push_back({OracleConstraint::Type::Table, vars, table});
      std::vector<VarId> vids(vars.begin(), vars.end());
      r.postedOk = r.net.postTable(vids, table);
    }
  }
  return r;
}

}  // namespace

TEST_CASE("propagation matches the brute-force arc-consistent fixpoint") {
  std::mt19937 rng(23);
  for (int round = 0; round < 200; ++round) {
    RandomNet r = makeRandomNet(rng);
    bool oracleOk = acFixpoint(r.doms, r.cs);
    REQUIRE(r.postedOk == oracleOk);
    if (!oracleOk) continue;
    for (size_t v = 0; v < r.doms.size(); ++v) {
      auto got = r.net.dom(static_cast<VarId>(v)).values();
      std::vector<int64_t> want(r.doms[v].begin(), r.doms[v].end());
      REQUIRE(got == want);
    }
  }
}

TEST_CASE("satisfiable networks never fail arc consistency") {
  std::mt19937 rng(29);
  for (int round = 0; round < 200; ++round) {
    RandomNet r = makeRandomNet(rng);
    OracleDomains orig = r.doms;
    if (bruteForceSatisfiable(orig, r.cs)) {
      REQUIRE(r.postedOk);
      REQUIRE(r.net.fullyConsistent());
    }
  }
}

TEST_CASE("duration bridge: minimum duration reaches the STN") {
  auto dom0 = std::make_shared<Domain>();
  Chronicle c(dom0);
  Timepoint s = c.stn.addTimepoint();
  Timepoint e = c.stn.addTimepoint();
  VarId delta = c.bind.addIntVar("delta");
  c.bind.restrictDomainSorted(delta, {7, 9});
  REQUIRE(c.addDurationLink(s, e, delta, true));
  CHECK(c.stn.minDelay(s, e) == 7);

  SUBCASE("later STN tightening prunes the domain") {
    REQUIRE(c.stn.addConstraint(e, s, -8));  // e - s <= 8
    REQUIRE(c.propagateNetworks());
    CHECK(c.bind.dom(delta).singleton());
    CHECK(c.bind.dom(delta).soleValue() == 7);
    CHECK(c.stn.maxDelay(s, e) == 7);  // equality sense propagates back
  }
  SUBCASE("singleton domain pins both bounds") {
    REQUIRE(c.bind.restrictDomainSorted(delta, {7}));
    REQUIRE(c.propagateNetworks());
    CHECK(c.stn.minDelay(s, e) == 7);
    CHECK(c.stn.maxDelay(s, e) == 7);
  }
}

TEST_CASE("bridge fixpoint terminates within domain-size rounds") {
  auto dom0 = std::make_shared<Domain>();
  Chronicle c(dom0);
  Timepoint s = c.stn.addTimepoint();
  Timepoint e = c.stn.addTimepoint();
  VarId delta = c.bind.addIntVar("delta");
  c.bind.restrictDomainSorted(delta, {3, 5, 8, 13});
  REQUIRE(c.addDurationLink(s, e, delta, true));
  REQUIRE(c.stn.addConstraint(e, s, -9));
  REQUIRE(c.propagateNetworks());
  CHECK(c.bind.dom(delta).maxValue() == 8);
  CHECK(c.stn.minDelay(s, e) == 3);
}
