#pragma once

#include <optional>
#include <span>
#include <vector>

#include "fairvrp/master.hpp"
#include "fairvrp/tsp_oracle.hpp"

namespace fvrp {

struct RmhOptions {
  double time_limit_s = 5.0;
  /// Replace every column by its Held-Karp twin and require TSP-optimal routes in the answer.
  bool tsp_convert = true;
  long max_nodes = 1'000'000;
};

struct RmhResult {
  std::vector<Route> routes;
  double value = 0.0;
  long nodes = 0;
};

/// Depth-first branch-and-bound over the given columns under the model's rows.
/// Returns a solution only when it is strictly better than `incumbent`.
std::optional<RmhResult> rmh(const Instance& inst, std::span<const Route> pool, Objective objective,
                             const TspOracle& oracle, double incumbent, const RmhOptions& opt = {});

/// Objective value of a complete solution (range or total distance).
double solution_value(std::span<const Route> routes, Objective objective);

}  // namespace fvrp
