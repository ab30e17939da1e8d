#include "fairvrp/rmh.hpp"

#include <chrono>
#include <cmath>
#include <set>

namespace fvrp {

double solution_value(std::span<const Route> routes, Objective objective) {
  return objective == Objective::range ? solution_range(routes) : solution_distance(routes);
}

std::optional<RmhResult> rmh(const Instance& inst, std::span<const Route> pool, Objective objective,
                             const TspOracle& oracle, double incumbent, const RmhOptions& opt) {
  if (pool.empty()) return std::nullopt;
  const auto deadline = std::chrono::steady_clock::now() + std::chrono::duration<double>(opt.time_limit_s);

  Rmp rmp(inst, objective);
  std::set<std::vector<int>> seen;
  for (const auto& r : pool) {
    Route col = opt.tsp_convert ? oracle.optimalize(r) : r;
    if (col.load > inst.capacity() || !seen.insert(col.seq).second) continue;
    rmp.add_route(col);
  }
  rmp.set_artificials_enabled(false);
  const int m = static_cast<int>(rmp.routes().size());

  std::optional<RmhResult> best;
  double best_value = incumbent;
  long explored = 0;
  std::vector<std::vector<std::pair<int, int>>> stack{{}};
  while (!stack.empty()) {
    if (std::chrono::steady_clock::now() > deadline || explored >= opt.max_nodes) break;
    auto fix = std::move(stack.back());
    stack.pop_back();
    ++explored;
    for (int r = 0; r < m; ++r) rmp.set_route_bounds(r, 0.0, lp::kInf);
    for (auto [r, v] : fix) rmp.set_route_bounds(r, v, v);
    const RmpSolution sol = rmp.solve();
    if (sol.status != lp::Status::optimal) continue;
    if (sol.objective >= best_value - 1e-6) continue;

    int branch = -1;
    double frac = 0.0;
    for (int r = 0; r < m; ++r) {
      const double f = std::abs(sol.x[r] - std::round(sol.x[r]));
      if (f > 1e-6 && f > frac) {
        frac = f;
        branch = r;
      }
    }
    if (branch < 0) {
      std::vector<Route> chosen;
      for (int r = 0; r < m; ++r) {
        if (sol.x[r] > 0.5) chosen.push_back(rmp.routes()[r]);
      }
      bool ok = is_feasible_solution(inst, chosen);
      if (ok && opt.tsp_convert) {
        for (const auto& r : chosen) ok = ok && oracle.is_tsp_optimal(r);
      }
      const double value = solution_value(chosen, objective);
      if (ok && value < best_value - 1e-9) {
        best_value = value;
        best = RmhResult{std::move(chosen), value, 0};
      }
      continue;
    }
    auto zero = fix;
    zero.emplace_back(branch, 0);
    auto one = std::move(fix);
    one.emplace_back(branch, 1);
    stack.push_back(std::move(zero));
    stack.push_back(std::move(one));
  }
  if (best) best->nodes = explored;
  return best;
}

}  // namespace fvrp
