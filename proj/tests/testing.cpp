#include "testing.hpp"

#include <algorithm>
#include <limits>
#include <random>

#include "fairvrp/oracle_bruteforce.hpp"

namespace fvrp::fixture {

std::string data_path(const std::string& name) { return std::string(FAIRVRP_DATA_DIR) + "/" + name; }

Instance fig1() { return load_instance(data_path("fig1.inst")); }

std::vector<Route> fig1_solution_a(const Instance& inst) {
  return {Route::make(inst, {1, 2, 3}), Route::make(inst, {4, 5, 6, 7})};
}

std::vector<Route> fig1_solution_b(const Instance& inst) {
  return {Route::make(inst, {1, 3, 2}), Route::make(inst, {4, 5, 6, 7})};
}

Instance random_instance(std::uint64_t seed, int n, int fleet, int capacity, Rounding rounding) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(0.0, 1000.0);
  std::vector<Point> pts(n + 1);
  for (auto& p : pts) p = {coord(rng), coord(rng)};
  std::vector<int> d(n + 1, 1);
  d[0] = 0;
  return Instance::from_coords("rand" + std::to_string(seed), pts, d, fleet, capacity, rounding);
}

double brute_tour(const Instance& inst, std::vector<int> customers) {
  std::sort(customers.begin(), customers.end());
  double best = std::numeric_limits<double>::infinity();
  do {
    double len = 0.0;
    int prev = 0;
    for (int c : customers) {
      len += inst.distance(prev, c);
      prev = c;
    }
    len += inst.distance(prev, 0);
    best = std::min(best, len);
  } while (std::next_permutation(customers.begin(), customers.end()));
  return best;
}

std::vector<SuiteCase> acceptance_suite(int count) {
  std::vector<SuiteCase> out;
  std::mt19937_64 rng(20240611);
  for (int k = 0; k < count; ++k) {
    const int n = std::uniform_int_distribution<int>(5, 8)(rng);
    const int fleet = std::uniform_int_distribution<int>(2, 3)(rng);
    const int tight = (n + fleet - 1) / fleet + 1;
    const int capacity = std::uniform_int_distribution<int>(0, 1)(rng) ? n : tight;
    const std::uint64_t seed = rng();
    Instance inst = random_instance(seed, n, fleet, capacity);
    const auto base = enumerate(inst, OracleMode::mindist);
    inst.set_budget(budget_from_percentage(110.0, base.value));
    out.push_back({seed, std::move(inst)});
  }
  return out;
}

}  // namespace fvrp::fixture
