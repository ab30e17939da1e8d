#include <gtest/gtest.h>

#include <random>

#include "fairvrp/colgen.hpp"
#include "fairvrp/cuts.hpp"
#include "fairvrp/master.hpp"
#include "fairvrp/oracle_bruteforce.hpp"
#include "fairvrp/rmh.hpp"
#include "testing.hpp"

using namespace fvrp;

namespace {

Instance fig1_with_budget() {
  Instance inst = fixture::fig1();
  inst.set_budget(budget_from_percentage(105.0, 2820.0793));
  return inst;
}

Relaxation relax(Rmp& rmp, const BnBNode& node, NgSets& ng) {
  rmp.apply_node(node);
  Pricer pricer(rmp.instance(), node, ng);
  return solve_relaxation(rmp, pricer);
}

}  // namespace

TEST(Master, InitialRowCounts) {
  const Instance inst = fig1_with_budget();
  const Rmp rmp = build_initial_rmp(inst, BnBNode::root());
  EXPECT_EQ(rmp.num_partition_rows(), 7);
  EXPECT_TRUE(rmp.has_budget_row());
  EXPECT_TRUE(rmp.has_fleet_row());
  EXPECT_EQ(rmp.num_link_rows(), 14);
  EXPECT_EQ(rmp.num_cut_rows(), 0);
  EXPECT_EQ(rmp.num_rows(), 7 + 1 + 1 + 14);
  ASSERT_EQ(rmp.routes().size(), 7u);
  for (int i = 0; i < 7; ++i) EXPECT_EQ(rmp.routes()[i].seq, std::vector<int>{i + 1});
  EXPECT_DOUBLE_EQ(rmp.big_m(), inst.budget());
  EXPECT_DOUBLE_EQ(rmp.artificial_cost(), 10.0 * inst.budget());
}

TEST(Master, DistanceObjectiveDropsLinkRows) {
  const Instance inst = fig1_with_budget();
  const Rmp rmp = build_initial_rmp(inst, BnBNode::root(), Objective::distance);
  EXPECT_EQ(rmp.num_link_rows(), 0);
  EXPECT_FALSE(rmp.has_budget_row());
  EXPECT_EQ(rmp.num_rows(), 8);
}

TEST(Master, SingleCustomerSeedIsOptimal) {
  Instance inst = parse_instance("N 1\nK 1\nQ 1\nCOORDS\n0 0 0\n1 3 4\nDEMANDS\n1 1\n");
  inst.set_budget(10.0);
  Rmp rmp = build_initial_rmp(inst, BnBNode::root());
  NgSets ng(inst, 8);
  const Relaxation rel = relax(rmp, BnBNode::root(), ng);
  ASSERT_EQ(rel.status, RelaxationStatus::optimal);
  EXPECT_NEAR(rel.bound, 0.0, 1e-9);
  EXPECT_EQ(rel.columns_added, 0);
  EXPECT_NEAR(rel.solution.x[0], 1.0, 1e-9);
}

TEST(Master, ArcBanDisablesSeedRoutes) {
  const Instance inst = fig1_with_budget();
  BnBNode node;
  node.forbid_arc({0, 3});
  Rmp rmp = build_initial_rmp(inst, node);
  for (int r = 0; r < 7; ++r) EXPECT_EQ(rmp.enabled(r), rmp.routes()[r].seq[0] != 3) << r;
  BnBNode forced;
  forced.force_arc({1, 2});
  rmp.apply_node(forced);
  EXPECT_FALSE(rmp.enabled(0));
  EXPECT_FALSE(rmp.enabled(1));
  EXPECT_TRUE(rmp.enabled(2));
  const int idx = rmp.add_route(Route::make(inst, {1, 2, 3}));
  EXPECT_TRUE(rmp.enabled(idx));
  EXPECT_EQ(rmp.add_route(Route::make(inst, {1, 2, 3})), idx);
}

TEST(Master, ReducedCostExamples) {
  const Instance inst = fixture::fig1();
  const Route r = Route::make(inst, {1, 2, 3});
  DualValues d = DualValues::zero(7);
  EXPECT_EQ(reduced_cost(r, d, {}), 0.0);
  d.mu[1] = 100;
  d.mu[2] = 200;
  d.mu[3] = 300;
  d.sigma = 50;
  EXPECT_NEAR(reduced_cost(r, d, {}), -650.0, 1e-9);
  DualValues l = DualValues::zero(7);
  l.lambda = 1.0;
  EXPECT_NEAR(reduced_cost(r, l, {}), 1296.56, 0.01);
  DualValues link = DualValues::zero(7);
  link.alpha[3] = 0.5;
  link.beta[3] = 0.25;
  link.big_m = 1000.0;
  EXPECT_NEAR(reduced_cost(r, link, {}), 0.25 * r.length + 250.0, 1e-9);
  link.beta[3] = 0.0;
  link.alpha[1] = 7.0;
  EXPECT_NEAR(reduced_cost(r, link, {}), 0.5 * r.length, 1e-9);
}

TEST(Master, ReducedCostCountsCutArcs) {
  const Instance inst = fixture::fig1();
  const Route r = Route::make(inst, {1, 3, 2});
  const int path[] = {1, 3, 2, 0};
  const std::vector<Cut> cuts = {base_tsp_cut(path)};
  DualValues d = DualValues::zero(7, 1);
  d.cut[0] = -2.0;
  EXPECT_NEAR(reduced_cost(r, d, cuts), 6.0, 1e-9);
  const auto ad = arc_duals(inst.num_nodes(), d, cuts);
  EXPECT_EQ(ad[1 * 8 + 3], -2.0);
  EXPECT_EQ(ad[2 * 8 + 0], -2.0);
  EXPECT_EQ(ad[0 * 8 + 1], 0.0);
}

TEST(Master, FixtureRootBoundSandwich) {
  const Instance inst = fig1_with_budget();
  Rmp rmp = build_initial_rmp(inst, BnBNode::root());
  NgSets ng(inst, 8);
  const Relaxation rel = relax(rmp, BnBNode::root(), ng);
  ASSERT_EQ(rel.status, RelaxationStatus::optimal);
  // The big-M link rows let the LP push gamma above eta, so only the clamped bound is nonnegative.
  EXPECT_LE(rel.bound, 227.0);
  EXPECT_GE(rel.solution.gamma, 0.0);
  EXPECT_GE(rel.solution.eta, 0.0);
  EXPECT_GE(rel.certificate_rc, -1e-6);
  EXPECT_GE(pool_certificate(rmp, rel.solution.duals), -1e-6);
  EXPECT_NEAR(rel.solution.artificial, 0.0, 1e-9);
}

TEST(Master, PoolWithOptimumNeedsNoNewColumns) {
  const Instance inst = fig1_with_budget();
  Rmp rmp = build_initial_rmp(inst, BnBNode::root());
  NgSets ng(inst, 8);
  relax(rmp, BnBNode::root(), ng);
  const auto before = rmp.routes().size();
  const Relaxation again = relax(rmp, BnBNode::root(), ng);
  ASSERT_EQ(again.status, RelaxationStatus::optimal);
  EXPECT_EQ(again.columns_added, 0);
  EXPECT_EQ(rmp.routes().size(), before);
}

TEST(Master, InfeasibleNodeIsReported) {
  const Instance inst = fig1_with_budget();
  BnBNode node;
  node.len_hi = 100.0;
  Rmp rmp = build_initial_rmp(inst, node);
  NgSets ng(inst, 8);
  EXPECT_EQ(relax(rmp, node, ng).status, RelaxationStatus::infeasible);
}

TEST(Master, ArcFlowExamples) {
  const Instance inst = fixture::fig1();
  const auto b = fixture::fig1_solution_b(inst);
  const std::vector<double> ones = {1.0, 1.0};
  const ArcFlows f = flows_of(inst, b, ones);
  int unit = 0;
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) {
      if (f(i, j) == 1.0) ++unit;
      else EXPECT_EQ(f(i, j), 0.0);
    }
  }
  EXPECT_EQ(unit, 9);

  const std::vector<Route> two = {Route::make(inst, {1, 2}), Route::make(inst, {1, 3})};
  const std::vector<double> half = {0.5, 0.5};
  const ArcFlows g = flows_of(inst, two, half);
  EXPECT_DOUBLE_EQ(g(0, 1), 1.0);
  EXPECT_DOUBLE_EQ(g(1, 2), 0.5);
  const std::vector<double> none = {0.0, 0.0};
  const ArcFlows z = flows_of(inst, two, none);
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) EXPECT_EQ(z(i, j), 0.0);
  }
}

TEST(Master, FlowConservationAtConvergence) {
  const Instance inst = fig1_with_budget();
  Rmp rmp = build_initial_rmp(inst, BnBNode::root());
  NgSets ng(inst, 8);
  const Relaxation rel = relax(rmp, BnBNode::root(), ng);
  const ArcFlows f = rmp.arc_flows(rel.solution);
  for (int c = 1; c <= 7; ++c) {
    double in = 0.0, out = 0.0;
    for (int v = 0; v < 8; ++v) {
      in += f(v, c);
      out += f(c, v);
      EXPECT_GE(f(v, c), -1e-9);
    }
    EXPECT_NEAR(in, 1.0, 1e-6);
    EXPECT_NEAR(out, 1.0, 1e-6);
  }
}

TEST(Master, RmhExamples) {
  const Instance inst = fig1_with_budget();
  const TspOracle oracle(inst);
  const auto a = fixture::fig1_solution_a(inst);
  const auto ra = rmh(inst, a, Objective::range, oracle, lp::kInf);
  ASSERT_TRUE(ra);
  EXPECT_NEAR(ra->value, 227.0, 1.0);

  const auto b = fixture::fig1_solution_b(inst);
  const auto rb = rmh(inst, b, Objective::range, oracle, lp::kInf);
  ASSERT_TRUE(rb);
  EXPECT_NEAR(rb->value, ra->value, 1e-9);
  for (const auto& r : rb->routes) EXPECT_TRUE(oracle.is_tsp_optimal(r));

  const std::vector<Route> partial = {Route::make(inst, {1, 2, 3}), Route::make(inst, {4, 5, 6})};
  EXPECT_FALSE(rmh(inst, partial, Objective::range, oracle, lp::kInf));
  EXPECT_FALSE(rmh(inst, a, Objective::range, oracle, 200.0));
}

TEST(Master, AddingViolatedCutsNeverLowersBound) {
  const Instance inst = fig1_with_budget();
  const TspOracle oracle(inst);
  Rmp rmp = build_initial_rmp(inst, BnBNode::root());
  NgSets ng(inst, 8);
  Relaxation rel = relax(rmp, BnBNode::root(), ng);
  CutPool pool;
  for (int round = 0; round < 6 && rel.status == RelaxationStatus::optimal; ++round) {
    const ArcFlows f = rmp.arc_flows(rel.solution);
    auto cuts = separate_tsp(f, inst, oracle).cuts;
    for (auto& c : separate_rci(f, inst)) cuts.push_back(c);
    int added = 0;
    for (const auto& c : cuts) {
      if (pool.insert(c)) {
        rmp.add_cut(c);
        ++added;
      }
    }
    if (!added) break;
    const double before = rel.bound;
    rel = relax(rmp, BnBNode::root(), ng);
    ASSERT_EQ(rel.status, RelaxationStatus::optimal);
    EXPECT_GE(rel.bound, before - 1e-6);
    EXPECT_GE(rel.certificate_rc, -1e-6);
  }
}

// The root relaxation never exceeds the brute-force F-CVRP optimum, and a node that still
// admits the oracle's witness never exceeds its range either.
TEST(Master, BoundBelowOracleOptimum) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 12; ++trial) {
    const int n = 5 + static_cast<int>(rng() % 3);
    Instance inst = fixture::random_instance(rng(), n, 2, n - 1);
    inst.set_budget(1e5);
    const auto opt = enumerate(inst, OracleMode::fcvrp);
    ASSERT_TRUE(opt.feasible);
    Rmp rmp = build_initial_rmp(inst, BnBNode::root());
    NgSets ng(inst, 8);
    const Relaxation rel = relax(rmp, BnBNode::root(), ng);
    ASSERT_EQ(rel.status, RelaxationStatus::optimal);
    EXPECT_LE(rel.bound, opt.value + 1e-6);

    BnBNode node;
    node.id = 1;
    for (int i = 1; i <= n; ++i) {
      for (int j = 1; j <= n; ++j) {
        if (i == j) continue;
        bool used = false;
        for (const auto& r : opt.witness) used = used || r.uses_arc({i, j});
        if (!used && rng() % 3 == 0) node.forbid_arc({i, j});
      }
    }
    const Relaxation sub = relax(rmp, node, ng);
    ASSERT_EQ(sub.status, RelaxationStatus::optimal);
    EXPECT_LE(sub.bound, opt.value + 1e-6);
    EXPECT_GE(sub.bound, rel.bound - 1e-6);
  }
}
