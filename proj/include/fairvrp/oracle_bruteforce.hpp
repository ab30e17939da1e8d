#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "fairvrp/cuts.hpp"
#include "fairvrp/instance.hpp"

namespace fvrp {

inline constexpr int kOracleMaxCustomers = 9;
inline constexpr int kOracleMaxFleet = 4;

class OracleLimitError : public std::length_error {
 public:
  using std::length_error::length_error;
};

enum class OracleMode { fcvrp, fcvrp_tsp, mindist };

const char* to_string(OracleMode m);
OracleMode parse_oracle_mode(const std::string& s);

struct EnumeratedOptimum {
  bool feasible = false;
  double value = 0.0;          // range, or total distance for mindist
  std::vector<Route> witness;
  long count_feasible = 0;     // capacity- and budget-feasible partitions
};

/// Exhaustive search over partitions into exactly K nonempty blocks.
/// fcvrp and fcvrp_tsp respect the budget; mindist ignores it.
EnumeratedOptimum enumerate(const Instance& inst, OracleMode mode);

struct CutValidation {
  bool clean = true;
  long solutions_checked = 0;
  int cut_index = -1;
  std::vector<Route> witness;
};

/// Checks every feasible solution made of TSP-optimal routes (all optimal orders per block)
/// against every cut and reports the first violation.
CutValidation validate_cuts(const Instance& inst, std::span<const Cut> cuts);

/// Every feasible solution made of TSP-optimal routes.
std::vector<std::vector<Route>> enumerate_tsp_solutions(const Instance& inst);

}  // namespace fvrp
