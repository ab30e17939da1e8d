#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fairvrp/instance.hpp"
#include "testing.hpp"

using namespace fvrp;

namespace {

const char* kSingle = R"(NAME single
N 1
K 1
Q 1
COORDS
0 0 0
1 3 4
DEMANDS
1 1
)";

int error_line(const std::string& text) {
  try {
    parse_instance(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST(Instance, ParsesTwoVehicleFixture) {
  const Instance inst = fixture::fig1();
  EXPECT_EQ(inst.num_customers(), 7);
  EXPECT_EQ(inst.num_nodes(), 8);
  EXPECT_EQ(inst.fleet(), 2);
  EXPECT_EQ(inst.capacity(), 4);
  EXPECT_FALSE(inst.has_budget());
  ASSERT_TRUE(inst.budget_percentage());
  EXPECT_DOUBLE_EQ(*inst.budget_percentage(), 105.0);
  EXPECT_EQ(inst.total_demand(), 7);
  EXPECT_THROW(inst.budget(), std::logic_error);
}

TEST(Instance, MinimalInstance) {
  const Instance inst = parse_instance(kSingle);
  EXPECT_EQ(inst.num_customers(), 1);
  EXPECT_EQ(inst.demand(1), 1);
  EXPECT_DOUBLE_EQ(inst.distance(0, 1), 5.0);
}

TEST(Instance, DemandAboveCapacityIsRejectedWithLine) {
  const std::string text = "N 1\nK 1\nQ 3\nCOORDS\n0 0 0\n1 1 1\nDEMANDS\n1 5\n";
  EXPECT_THROW(parse_instance(text), ParseError);
  EXPECT_EQ(error_line(text), 8);
}

TEST(Instance, MalformedInputNamesLine) {
  EXPECT_EQ(error_line("N 2\nK 0\n"), 2);
  EXPECT_EQ(error_line("N 1\nK 1\nQ -1\n"), 3);
  EXPECT_EQ(error_line("N 1\nK 1\nQ 1\nCOORDS\n0 0\n"), 5);
  EXPECT_EQ(error_line("N 1\nK 1\nQ 1\nFOO 2\n"), 4);
  EXPECT_EQ(error_line("N 1\nK 1\nQ 1\nBUDGET_PCT 99\n"), 4);
  EXPECT_GT(error_line("N 2\nK 1\nQ 1\nCOORDS\n0 0 0\n1 1 1\n2 2 2\nDEMANDS\n1 1\n2 1\n"), 0);
}

TEST(Instance, DistanceExamples) {
  const Instance inst = fixture::fig1();
  EXPECT_NEAR(inst.distance(0, 1), std::sqrt(100.0 * 100.0 + 320.0 * 320.0), 1e-12);
  EXPECT_NEAR(inst.distance(0, 1), 335.2611, 1e-4);
  for (int i = 0; i < inst.num_nodes(); ++i) EXPECT_EQ(inst.distance(i, i), 0.0);

  Instance rounded = Instance::from_coords("r", inst.coords(), {0, 1, 1, 1, 1, 1, 1, 1}, 2, 4, Rounding::nearest_int);
  EXPECT_EQ(rounded.distance(0, 1), 335.0);
}

TEST(Instance, DistanceIsSymmetricAndObeysTriangleInequality) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Instance inst = fixture::random_instance(seed, 9, 2, 9);
    for (int i = 0; i < inst.num_nodes(); ++i) {
      for (int j = 0; j < inst.num_nodes(); ++j) {
        EXPECT_EQ(inst.distance(i, j), inst.distance(j, i));
        for (int k = 0; k < inst.num_nodes(); ++k) {
          EXPECT_LE(inst.distance(i, k), inst.distance(i, j) + inst.distance(j, k) + 1e-9);
        }
      }
    }
  }
}

TEST(Instance, BudgetFromPercentage) {
  EXPECT_DOUBLE_EQ(budget_from_percentage(105, 1000), 1050.0);
  EXPECT_DOUBLE_EQ(budget_from_percentage(100, 1000), 1000.0);
  EXPECT_NEAR(budget_from_percentage(110, 2820.08), 3102.088, 1e-9);
  EXPECT_THROW(budget_from_percentage(99.9, 1000), std::invalid_argument);
}

TEST(Instance, RoundTripIsBitExact) {
  std::vector<Instance> cases = {fixture::fig1(), parse_instance(kSingle)};
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Instance inst = fixture::random_instance(seed, 6, 2, 4);
    inst.set_budget(1234.5678901234567 + seed);
    cases.push_back(inst);
  }
  Instance int_mode = Instance::from_coords("i", fixture::fig1().coords(), {0, 1, 1, 1, 1, 1, 1, 1}, 2, 4,
                                            Rounding::nearest_int);
  cases.push_back(int_mode);
  cases.push_back(Instance::from_matrix("m", {0, 1.5, 2.25, 1.5, 0, 3.125, 2.25, 3.125, 0}, {0, 1, 2}, 2, 2));

  for (const auto& inst : cases) {
    const Instance back = parse_instance(emit_instance(inst));
    EXPECT_EQ(back.name(), inst.name());
    ASSERT_EQ(back.num_customers(), inst.num_customers());
    EXPECT_EQ(back.fleet(), inst.fleet());
    EXPECT_EQ(back.capacity(), inst.capacity());
    EXPECT_EQ(back.rounding(), inst.rounding());
    EXPECT_EQ(back.has_budget(), inst.has_budget());
    if (inst.has_budget()) EXPECT_EQ(back.budget(), inst.budget());
    EXPECT_EQ(back.budget_percentage(), inst.budget_percentage());
    for (int i = 0; i < inst.num_nodes(); ++i) {
      EXPECT_EQ(back.demand(i), inst.demand(i));
      for (int j = 0; j < inst.num_nodes(); ++j) EXPECT_EQ(back.distance(i, j), inst.distance(i, j));
    }
    EXPECT_EQ(emit_instance(back), emit_instance(inst));
  }
}

TEST(Instance, RouteDerivedFields) {
  const Instance inst = fixture::fig1();
  const Route r = Route::make(inst, {1, 2, 3});
  EXPECT_EQ(r.last, 3);
  EXPECT_EQ(r.load, 3);
  EXPECT_TRUE(r.visits(2));
  EXPECT_FALSE(r.visits(4));
  EXPECT_NEAR(r.length, inst.distance(0, 1) + inst.distance(1, 2) + inst.distance(2, 3) + inst.distance(3, 0), 1e-9);
  EXPECT_TRUE(r.uses_arc({0, 1}));
  EXPECT_TRUE(r.uses_arc({3, 0}));
  EXPECT_FALSE(r.uses_arc({2, 1}));
  EXPECT_EQ(r.arcs().size(), 4u);
  EXPECT_THROW(Route::make(inst, {1, 2, 1}), std::invalid_argument);
  EXPECT_THROW(Route::make(inst, {}), std::invalid_argument);
}

TEST(Instance, FixtureSolutionsHaveCaptionRanges) {
  const Instance inst = fixture::fig1();
  EXPECT_NEAR(solution_range(fixture::fig1_solution_a(inst)), 227.0, 1.0);
  EXPECT_NEAR(solution_range(fixture::fig1_solution_b(inst)), 87.0, 1.0);
  EXPECT_NEAR(solution_distance(fixture::fig1_solution_a(inst)), 2820.08, 0.01);
}

TEST(Instance, FeasibilityChecks) {
  Instance inst = fixture::fig1();
  inst.set_budget(3000.0);
  EXPECT_TRUE(is_feasible_solution(inst, fixture::fig1_solution_a(inst)));
  std::vector<Route> missing = {Route::make(inst, {1, 2, 3}), Route::make(inst, {4, 5, 6})};
  EXPECT_FALSE(is_feasible_solution(inst, missing));
  std::vector<Route> overload = {Route::make(inst, {1, 2, 3, 4, 5}), Route::make(inst, {6, 7})};
  EXPECT_FALSE(is_feasible_solution(inst, overload));
  inst.set_budget(2000.0);
  EXPECT_FALSE(is_feasible_solution(inst, fixture::fig1_solution_a(inst)));
}
