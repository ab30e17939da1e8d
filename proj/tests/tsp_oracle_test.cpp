#include <gtest/gtest.h>

#include <algorithm>
#include <limits>
#include <random>

#include "fairvrp/tsp_oracle.hpp"
#include "testing.hpp"

using namespace fvrp;

namespace {

double brute_path(const Instance& inst, int start, int end, std::vector<int> interior) {
  std::sort(interior.begin(), interior.end());
  double best = std::numeric_limits<double>::infinity();
  do {
    std::vector<int> p = {start};
    p.insert(p.end(), interior.begin(), interior.end());
    p.push_back(end);
    best = std::min(best, path_length(inst, p));
  } while (std::next_permutation(interior.begin(), interior.end()));
  return best;
}

CustomerMask mask_of(std::initializer_list<int> xs) {
  CustomerMask m = 0;
  for (int x : xs) m |= bit(x);
  return m;
}

}  // namespace

TEST(TspOracle, TourExamples) {
  const Instance inst = fixture::fig1();
  const int one[] = {1};
  const Tour t1 = held_karp_tour(inst, one);
  EXPECT_EQ(t1.order, std::vector<int>{1});
  EXPECT_DOUBLE_EQ(t1.length, 2 * inst.distance(0, 1));

  const int abc[] = {3, 1, 2};
  const Tour t = held_karp_tour(inst, abc);
  EXPECT_EQ(t.order, (std::vector<int>{1, 2, 3}));
  EXPECT_NEAR(t.length, 1296.56, 0.01);
  EXPECT_NEAR(t.length, fixture::brute_tour(inst, {1, 2, 3}), 1e-9);

  const int big[] = {4, 5, 6, 7};
  EXPECT_NEAR(held_karp_tour(inst, big).length, 1523.52, 0.01);
}

TEST(TspOracle, TourCapacityError) {
  const Instance inst = fixture::random_instance(3, 8, 2, 8);
  const int xs[] = {1, 2, 3, 4, 5};
  EXPECT_THROW(held_karp_tour(inst, xs, 4), HeldKarpCapacityError);
  EXPECT_NO_THROW(held_karp_tour(inst, xs, 5));
}

TEST(TspOracle, PathExamples) {
  const Instance inst = fixture::fig1();
  EXPECT_DOUBLE_EQ(held_karp_path(inst, {2, 5, 0}), inst.distance(2, 5));
  EXPECT_NEAR(held_karp_path(inst, {1, 0, mask_of({2, 3})}), 961.30, 0.01);
  EXPECT_NEAR(held_karp_path(inst, {0, 2, mask_of({1, 3})}), 859.47, 0.01);
  EXPECT_NEAR(held_karp_path(inst, {1, 0, mask_of({2, 3})}), brute_path(inst, 1, 0, {2, 3}), 1e-9);
}

TEST(TspOracle, ViolatingPathExamples) {
  const Instance inst = fixture::fig1();
  const int bad[] = {1, 3, 2, 0};
  EXPECT_NEAR(path_length(inst, bad), 1101.18, 0.01);
  EXPECT_TRUE(is_tsp_violating_path(inst, bad));
  const int good[] = {0, 1, 3, 2};
  EXPECT_FALSE(is_tsp_violating_path(inst, good));
  for (int a = 0; a < inst.num_nodes(); ++a) {
    for (int b = 1; b < inst.num_nodes(); ++b) {
      for (int c = 0; c < inst.num_nodes(); ++c) {
        if (a == b || b == c || a == c) continue;
        const int p[] = {a, b, c};
        EXPECT_FALSE(is_tsp_violating_path(inst, p));
      }
    }
  }
  const int depot_inside[] = {1, 0, 2};
  EXPECT_THROW(is_tsp_violating_path(inst, depot_inside), std::invalid_argument);
}

TEST(TspOracle, RouteOptimality) {
  const Instance inst = fixture::fig1();
  const Route bad = Route::make(inst, {1, 3, 2});
  EXPECT_FALSE(is_tsp_optimal_route(inst, bad));
  const Route fixed = tsp_optimalize_route(inst, bad);
  EXPECT_EQ(fixed.seq, (std::vector<int>{1, 2, 3}));
  EXPECT_NEAR(fixed.length, 1296.56, 0.01);
  EXPECT_EQ(fixed.covered, bad.covered);
  EXPECT_EQ(fixed.load, bad.load);

  const Route single = Route::make(inst, {5});
  EXPECT_TRUE(is_tsp_optimal_route(inst, single));
  EXPECT_EQ(tsp_optimalize_route(inst, single), single);
  EXPECT_TRUE(is_tsp_optimal_route(inst, Route::make(inst, {4, 5, 6, 7})));
}

// Integer distances make every summation order exact, so equality is bitwise.
TEST(TspOracle, HeldKarpMatchesPermutations) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    const Rounding mode = trial % 2 ? Rounding::nearest_int : Rounding::exact;
    const Instance inst = fixture::random_instance(rng(), 9, 3, 9, mode);
    const int size = 1 + static_cast<int>(rng() % 9);
    std::vector<int> all = {1, 2, 3, 4, 5, 6, 7, 8, 9};
    std::shuffle(all.begin(), all.end(), rng);
    std::vector<int> set(all.begin(), all.begin() + size);
    const Tour t = held_karp_tour(inst, set);
    if (mode == Rounding::nearest_int) {
      EXPECT_EQ(t.length, fixture::brute_tour(inst, set)) << "size " << size;
    } else {
      EXPECT_NEAR(t.length, fixture::brute_tour(inst, set), 1e-9) << "size " << size;
    }
    EXPECT_NEAR(tour_length(inst, t.order), t.length, 1e-9);
  }
}

TEST(TspOracle, PathMatchesPermutations) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const Instance inst = fixture::random_instance(rng(), 8, 2, 8);
    std::vector<int> nodes = {0, 1, 2, 3, 4, 5, 6, 7, 8};
    std::shuffle(nodes.begin(), nodes.end(), rng);
    const int start = nodes[0], end = nodes[1];
    std::vector<int> interior;
    for (int k = 2; k < 2 + static_cast<int>(rng() % 6); ++k) {
      if (nodes[k] != 0) interior.push_back(nodes[k]);
    }
    CustomerMask m = 0;
    for (int c : interior) m |= bit(c);
    EXPECT_NEAR(held_karp_path(inst, {start, end, m}), brute_path(inst, start, end, interior), 1e-9);
  }
}

TEST(TspOracle, OptimalizeIsIdempotent) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const Instance inst = fixture::random_instance(rng(), 7, 2, 7);
    std::vector<int> seq = {1, 2, 3, 4, 5, 6, 7};
    std::shuffle(seq.begin(), seq.end(), rng);
    seq.resize(1 + rng() % 7);
    const Route r = Route::make(inst, seq);
    const Route once = tsp_optimalize_route(inst, r);
    const Route twice = tsp_optimalize_route(inst, once);
    EXPECT_EQ(once.seq, twice.seq);
    EXPECT_LE(once.length, r.length + 1e-9);
    EXPECT_TRUE(is_tsp_optimal_route(inst, once));
  }
}

// A route is TSP-optimal iff none of its contiguous subpaths of the closed walk is violating.
TEST(TspOracle, OptimalIffNoViolatingSubpath) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 60; ++trial) {
    const Instance inst = fixture::random_instance(rng(), 6, 2, 6);
    std::vector<int> seq = {1, 2, 3, 4, 5, 6};
    std::shuffle(seq.begin(), seq.end(), rng);
    seq.resize(2 + rng() % 5);
    const Route r = Route::make(inst, seq);
    std::vector<int> walk = {0};
    walk.insert(walk.end(), seq.begin(), seq.end());
    walk.push_back(0);
    bool any = false;
    for (std::size_t a = 0; a < walk.size(); ++a) {
      for (std::size_t b = a + 2; b < walk.size(); ++b) {
        std::span<const int> sub(walk.data() + a, b - a + 1);
        if (sub.front() == 0 && sub.back() == 0) {
          any = any || brute_path(inst, 0, 0, seq) < r.length - 1e-6;
          continue;
        }
        any = any || is_tsp_violating_path(inst, sub);
      }
    }
    EXPECT_EQ(!any, is_tsp_optimal_route(inst, r));
    std::vector<int> rev(seq.rbegin(), seq.rend());
    EXPECT_EQ(is_tsp_optimal_route(inst, Route::make(inst, rev)), is_tsp_optimal_route(inst, r));
  }
}

TEST(TspOracle, CacheReturnsSameAnswers) {
  const Instance inst = fixture::fig1();
  TspOracle oracle(inst, 4);
  const PathQuery q{1, 0, mask_of({2, 3})};
  const double first = oracle.path(q);
  EXPECT_EQ(oracle.path(q), first);
  EXPECT_GE(oracle.cache_hits(), 1u);
  for (int s = 1; s <= 7; ++s) oracle.path({s, 0, mask_of({(s % 7) + 1})});
  EXPECT_LE(oracle.cache_size(), 4u);
  EXPECT_EQ(oracle.path(q), first);
  const int bad[] = {1, 3, 2, 0};
  EXPECT_TRUE(oracle.is_violating_path(bad));
}
