#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fairvrp/cuts.hpp"
#include "fairvrp/instance.hpp"
#include "fairvrp/master.hpp"
#include "fairvrp/node.hpp"
#include "fairvrp/pricing.hpp"

namespace fvrp {

enum class SolveMode { exact, fcvrp, postprocess, mindist };

const char* to_string(SolveMode m);
SolveMode parse_solve_mode(const std::string& s);
Lifting parse_lifting(const std::string& s);

struct SolverConfig {
  SolveMode mode = SolveMode::exact;
  Lifting lifting = Lifting::both;
  bool rci = true;
  bool aggressive_lifting = false;
  double time_limit_s = 3600.0;
  long node_limit = 1'000'000;
  int stall_limit = 5;
  int rmh_every = 10;
  double rmh_time_s = 5.0;
  int max_cuts = 50;
  int bfs_depth = 8;
  std::uint64_t seed = 0;
  bool record_cuts = false;
  PricingOptions pricing;
};

enum class SolveStatus { optimal, feasible, limit, infeasible };

const char* to_string(SolveStatus s);

struct SolveStats {
  long nodes = 0;
  long cuts_rci = 0;
  long cuts_tsp = 0;
  long cg_iters = 0;
  double time_s = 0.0;
  long rmh_calls = 0;
  long relaxations = 0;
  /// Smallest pool re-pricing value over all converged relaxations.
  double min_certificate_rc = lp::kInf;
  /// Smallest (lifted - base) violation over all separation points that produced a lifted cut.
  double min_lifting_gain = lp::kInf;
  long lifted_checks = 0;
  /// Parent/child bound violations beyond 1e-6 (expected 0).
  long bound_regressions = 0;
};

struct SolveResult {
  SolveStatus status = SolveStatus::limit;
  double lb = 0.0;
  double ub = lp::kInf;
  double gap = 1.0;
  std::vector<Route> routes;
  SolveStats stats;
  std::vector<Cut> emitted_cuts;
  /// Budget the solve ran with (resolved from a percentage when needed).
  double budget = 0.0;
};

enum class BranchRule { range_eta, range_gamma, last_customer, arc };

struct Branching {
  BranchRule rule = BranchRule::arc;
  BnBNode first;
  BnBNode second;
};

/// Children of a node with fractional master solution `sol`. Rules in order: range on eta,
/// range on gamma, last customer, arc. Child ids are next_id and next_id + 1.
Branching branch(const Instance& inst, const Rmp& rmp, const RmpSolution& sol, const BnBNode& node, int& next_id);

/// (ub - lb) / ub; 0 when both are 0.
double relative_gap(double lb, double ub);

/// Branch-price-and-cut. mode exact forbids TSP-violating routes through cuts; fcvrp solves the
/// problem without that requirement; postprocess and mindist dispatch to the functions below.
SolveResult solve(const Instance& inst, const SolverConfig& config = {});

/// F-CVRP optimum, then each route replaced by its Held-Karp tour.
SolveResult postprocess_mode(const Instance& inst, const SolverConfig& config = {});

/// Minimum total distance with K routes (budget ignored).
SolveResult mindist_mode(const Instance& inst, const SolverConfig& config = {});

/// Copy of inst whose budget is fixed: a pending percentage is resolved against mindist_mode.
Instance resolve_budget(const Instance& inst, const SolverConfig& config = {});

}  // namespace fvrp
