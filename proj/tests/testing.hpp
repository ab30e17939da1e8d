#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fairvrp/instance.hpp"

namespace fvrp::fixture {

std::string data_path(const std::string& name);

/// The two-vehicle fixture in data/fig1.inst.
Instance fig1();

/// Route sets of the two depicted solutions: TSP-optimal (a) and TSP-violating (b).
std::vector<Route> fig1_solution_a(const Instance& inst);
std::vector<Route> fig1_solution_b(const Instance& inst);

/// Uniform coordinates in [0,1000]^2, unit demands, no budget.
Instance random_instance(std::uint64_t seed, int n, int fleet, int capacity, Rounding rounding = Rounding::exact);

/// Exhaustive permutation minimum of the closed tour over `customers`.
double brute_tour(const Instance& inst, std::vector<int> customers);

/// Random symmetric instance with L = pct% of the enumerated minimum distance.
struct SuiteCase {
  std::uint64_t seed = 0;
  Instance inst;
};

/// The seeded 50-instance suite: n in [5,8], K in {2,3}, Q in {ceil(n/K)+1, n}, L = 110% of mindist.
std::vector<SuiteCase> acceptance_suite(int count = 50);

}  // namespace fvrp::fixture
