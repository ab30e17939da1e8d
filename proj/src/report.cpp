#include "fairvrp/report.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include "json.hpp"

namespace fvrp {

namespace {

nlohmann::json number(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

}  // namespace

std::string result_json(const SolveResult& r, int indent) {
  nlohmann::json j;
  j["status"] = to_string(r.status);
  j["lb"] = number(r.lb);
  j["ub"] = number(r.ub);
  j["gap"] = number(r.gap);
  j["range"] = r.routes.empty() ? nlohmann::json(nullptr) : nlohmann::json(solution_range(r.routes));
  j["distance"] = r.routes.empty() ? nlohmann::json(nullptr) : nlohmann::json(solution_distance(r.routes));
  auto routes = nlohmann::json::array();
  for (const auto& route : r.routes) {
    routes.push_back({{"seq", route.seq}, {"length", route.length}, {"load", route.load}});
  }
  j["routes"] = routes;
  j["stats"] = {{"nodes", r.stats.nodes},
                {"cuts_rci", r.stats.cuts_rci},
                {"cuts_tsp", r.stats.cuts_tsp},
                {"cg_iters", r.stats.cg_iters},
                {"time_s", r.stats.time_s}};
  return j.dump(indent);
}

SolveResult result_from_oracle(const EnumeratedOptimum& o, double time_s) {
  SolveResult r;
  r.stats.time_s = time_s;
  if (!o.feasible) {
    r.status = SolveStatus::infeasible;
    r.lb = r.ub = INFINITY;
    r.gap = 0.0;
    return r;
  }
  r.status = SolveStatus::optimal;
  r.lb = r.ub = o.value;
  r.gap = 0.0;
  r.routes = o.witness;
  return r;
}

std::string result_table(const SolveResult& r) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(4);
  out << "status  " << to_string(r.status) << "\n"
      << "lb      " << r.lb << "\n"
      << "ub      " << r.ub << "\n"
      << "gap     " << r.gap * 100.0 << " %\n"
      << "nodes   " << r.stats.nodes << "\n"
      << "cuts    tsp " << r.stats.cuts_tsp << "  rci " << r.stats.cuts_rci << "\n"
      << "cg      " << r.stats.cg_iters << "\n"
      << "time    " << r.stats.time_s << " s\n";
  for (const auto& route : r.routes) {
    out << "route   " << route.length << " :";
    for (int c : route.seq) out << " " << c;
    out << "\n";
  }
  return out.str();
}

}  // namespace fvrp
