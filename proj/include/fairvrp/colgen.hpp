#pragma once

#include <chrono>
#include <optional>

#include "fairvrp/master.hpp"
#include "fairvrp/pricing.hpp"

namespace fvrp {

struct ColgenOptions {
  int max_rounds = 100000;
  double rc_tol = 1e-6;
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

enum class RelaxationStatus { optimal, infeasible, limit, numerical };

const char* to_string(RelaxationStatus s);

struct Relaxation {
  RelaxationStatus status = RelaxationStatus::numerical;
  double bound = 0.0;
  RmpSolution solution;
  int rounds = 0;
  int columns_added = 0;
  /// min reduced cost over enabled pooled columns, recomputed from the final duals.
  double certificate_rc = lp::kInf;
};

/// Alternates LP solves and pricing until no route with reduced cost below -rc_tol exists.
Relaxation solve_relaxation(Rmp& rmp, Pricer& pricer, const ColgenOptions& opt = {});

/// Independent re-pricing of the pool: min over enabled columns of the reduced cost.
double pool_certificate(const Rmp& rmp, const DualValues& duals);

}  // namespace fvrp
