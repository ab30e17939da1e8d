#pragma once

#include <string>

#include "fairvrp/bnb.hpp"
#include "fairvrp/oracle_bruteforce.hpp"

namespace fvrp {

/// {status, lb, ub, gap, range, routes, stats{nodes, cuts_rci, cuts_tsp, cg_iters, time_s}}
std::string result_json(const SolveResult& r, int indent = 2);

/// Oracle output in the same schema: lb = ub = optimum.
SolveResult result_from_oracle(const EnumeratedOptimum& o, double time_s);

/// Human-readable summary.
std::string result_table(const SolveResult& r);

}  // namespace fvrp
