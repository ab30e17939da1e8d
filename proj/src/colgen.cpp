#include "fairvrp/colgen.hpp"

#include <algorithm>

namespace fvrp {

const char* to_string(RelaxationStatus s) {
  switch (s) {
    case RelaxationStatus::optimal: return "optimal";
    case RelaxationStatus::infeasible: return "infeasible";
    case RelaxationStatus::limit: return "limit";
    case RelaxationStatus::numerical: return "numerical";
  }
  return "unknown";
}

double pool_certificate(const Rmp& rmp, const DualValues& duals) {
  double best = lp::kInf;
  for (std::size_t r = 0; r < rmp.routes().size(); ++r) {
    if (!rmp.enabled(static_cast<int>(r))) continue;
    best = std::min(best, reduced_cost(rmp.routes()[r], duals, rmp.cuts()));
  }
  return best;
}

Relaxation solve_relaxation(Rmp& rmp, Pricer& pricer, const ColgenOptions& opt) {
  Relaxation out;
  const int nn = rmp.instance().num_nodes();
  rmp.set_phase_one(false);
  rmp.set_artificials_enabled(true);
  while (out.rounds < opt.max_rounds) {
    if (opt.deadline && std::chrono::steady_clock::now() > *opt.deadline) {
      out.status = RelaxationStatus::limit;
      break;
    }
    ++out.rounds;
    out.solution = rmp.solve();
    if (out.solution.status == lp::Status::infeasible) {
      out.status = RelaxationStatus::infeasible;
      break;
    }
    if (out.solution.status != lp::Status::optimal) {
      out.status = RelaxationStatus::numerical;
      break;
    }
    const auto ad = arc_duals(nn, out.solution.duals, rmp.cuts());
    const auto priced = pricer.price_all(out.solution.duals, ad);
    int added = 0;
    for (const auto& pr : priced) {
      if (pr.rc >= -opt.rc_tol) continue;
      const std::size_t before = rmp.routes().size();
      rmp.add_route(pr.route);
      if (rmp.routes().size() > before) ++added;
    }
    out.columns_added += added;
    if (added > 0) continue;

    out.certificate_rc = pool_certificate(rmp, out.solution.duals);
    if (!priced.empty()) {
      // Negative routes that are already pooled: the LP did not reach optimality on them.
      out.status = RelaxationStatus::numerical;
      break;
    }
    if (out.solution.artificial <= 1e-6) {
      if (rmp.phase_one()) {
        // Feasible without artificials: drop them and optimize the true objective.
        rmp.set_phase_one(false);
        rmp.set_artificials_enabled(false);
        continue;
      }
      out.status = RelaxationStatus::optimal;
      out.bound = out.solution.objective;
      break;
    }
    if (rmp.phase_one() || !rmp.artificials_enabled()) {
      out.status = RelaxationStatus::infeasible;
      break;
    }
    rmp.set_phase_one(true);
  }
  if (out.rounds >= opt.max_rounds && out.status == RelaxationStatus::numerical && out.solution.status == lp::Status::optimal) {
    out.status = RelaxationStatus::limit;
  }
  rmp.set_phase_one(false);
  rmp.set_artificials_enabled(true);
  return out;
}

}  // namespace fvrp
