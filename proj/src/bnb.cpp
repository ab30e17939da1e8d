#include "fairvrp/bnb.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "fairvrp/colgen.hpp"
#include "fairvrp/rmh.hpp"
#include "fairvrp/tsp_oracle.hpp"

namespace fvrp {

namespace {

using Clock = std::chrono::steady_clock;

constexpr double kIntTol = 1e-6;
constexpr double kBoundTol = 1e-6;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool is_integral(const RmpSolution& sol) {
  for (double v : sol.x) {
    if (std::abs(v - std::round(v)) > kIntTol) return false;
  }
  return true;
}

std::vector<Route> selected_routes(const Rmp& rmp, const RmpSolution& sol) {
  std::vector<Route> out;
  for (std::size_t r = 0; r < sol.x.size(); ++r) {
    if (sol.x[r] > 0.5) out.push_back(rmp.routes()[r]);
  }
  return out;
}

double fractionality(double v) { return std::min(v - std::floor(v), std::ceil(v) - v); }

struct Search {
  const Instance& inst;
  Objective objective;
  bool tsp_exact;
  SolverConfig cfg;
};

SolveResult run_search(const Search& s) {
  const Instance& inst = s.inst;
  const SolverConfig& cfg = s.cfg;
  const auto t0 = Clock::now();
  const auto deadline = t0 + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(cfg.time_limit_s));

  SolveResult res;
  res.budget = s.objective == Objective::range ? effective_budget(inst) : 0.0;
  if (inst.num_customers() < inst.fleet()) {
    res.status = SolveStatus::infeasible;
    res.lb = res.ub = lp::kInf;
    res.gap = 0.0;
    return res;
  }

  TspOracle oracle(inst);
  NgSets ng(inst, cfg.pricing.ng_size);
  BnBNode root = BnBNode::root();
  Rmp rmp = build_initial_rmp(inst, root, s.objective);
  CutPool pool;

  SeparationOptions sep;
  sep.max_path_nodes = cfg.bfs_depth;
  sep.max_cuts = cfg.max_cuts;
  sep.lifting = cfg.lifting;
  sep.aggressive_lifting = cfg.aggressive_lifting;

  ColgenOptions cg;
  cg.deadline = deadline;

  std::vector<BnBNode> open{root};
  int next_id = 1;
  double ub = lp::kInf;
  bool stopped = false;
  double stopped_bound = lp::kInf;

  auto take_incumbent = [&](std::vector<Route> routes) {
    const double v = solution_value(routes, s.objective);
    if (v < ub - 1e-9) {
      ub = v;
      res.routes = std::move(routes);
    }
  };

  while (!open.empty()) {
    auto it = std::min_element(open.begin(), open.end(), [](const BnBNode& a, const BnBNode& b) {
      return a.lp_bound < b.lp_bound || (a.lp_bound == b.lp_bound && a.id < b.id);
    });
    BnBNode node = *it;
    open.erase(it);
    if (node.lp_bound >= ub - kBoundTol) continue;
    if (Clock::now() > deadline || res.stats.nodes >= cfg.node_limit) {
      stopped = true;
      stopped_bound = node.lp_bound;
      break;
    }
    ++res.stats.nodes;

    rmp.apply_node(node);
    Pricer pricer(inst, node, ng, cfg.pricing);
    bool infeasible = false;
    auto relax = [&]() -> Relaxation {
      Relaxation rel = solve_relaxation(rmp, pricer, cg);
      res.stats.cg_iters += rel.rounds;
      ++res.stats.relaxations;
      if (rel.status == RelaxationStatus::optimal) {
        res.stats.min_certificate_rc = std::min(res.stats.min_certificate_rc, rel.certificate_rc);
      }
      return rel;
    };

    Relaxation rel = relax();
    if (rel.status == RelaxationStatus::optimal && rel.bound < node.parent_lp - kBoundTol) {
      ++res.stats.bound_regressions;
    }
    double lb = std::max(rel.bound, node.lp_bound);
    double raw = rel.bound;
    int stall = 0;
    while (rel.status == RelaxationStatus::optimal && lb < ub - kBoundTol) {
      const bool integral = is_integral(rel.solution);
      std::vector<Route> chosen;
      bool violating = false;
      if (integral && s.tsp_exact) {
        chosen = selected_routes(rmp, rel.solution);
        for (const auto& r : chosen) violating = violating || !oracle.is_tsp_optimal(r);
      }
      if (stall >= cfg.stall_limit && !violating) break;

      const ArcFlows flows = rmp.arc_flows(rel.solution);
      std::vector<Cut> fresh;
      if (s.tsp_exact) {
        TspSeparation ts = separate_tsp(flows, inst, oracle, sep);
        if (ts.lifted_checks > 0) {
          res.stats.lifted_checks += ts.lifted_checks;
          res.stats.min_lifting_gain = std::min(res.stats.min_lifting_gain, ts.min_lifting_gain);
        }
        for (auto& c : ts.cuts) fresh.push_back(std::move(c));
        if (violating) {
          for (const auto& r : chosen) {
            if (oracle.is_tsp_optimal(r)) continue;
            const auto path = violating_path_of_route(r, oracle);
            for (auto& c : tsp_cuts_for_path(path, inst, oracle, cfg.lifting, cfg.aggressive_lifting)) {
              fresh.push_back(std::move(c));
            }
          }
        }
      }
      std::size_t tsp_count = fresh.size();
      if (cfg.rci) {
        for (auto& c : separate_rci(flows, inst, cfg.max_cuts)) fresh.push_back(std::move(c));
      }
      int added = 0;
      for (std::size_t k = 0; k < fresh.size(); ++k) {
        // TSP cuts come first; RCIs only fill the remaining room of the round.
        if (k >= tsp_count && added >= cfg.max_cuts) break;
        if (fresh[k].violation(flows) <= 1e-6 || !pool.insert(fresh[k])) continue;
        rmp.add_cut(fresh[k]);
        ++added;
        if (fresh[k].is_tsp()) {
          ++res.stats.cuts_tsp;
        } else {
          ++res.stats.cuts_rci;
        }
        if (cfg.record_cuts) res.emitted_cuts.push_back(fresh[k]);
      }
      if (added == 0) {
        if (violating) throw std::logic_error("integral TSP-violating solution could not be cut");
        break;
      }
      rel = relax();
      if (rel.status != RelaxationStatus::optimal) break;
      raw = std::max(raw, rel.bound);
      const double next = std::max(rel.bound, lb);
      stall = next > lb + kBoundTol ? 0 : stall + 1;
      lb = next;
    }

    if (rel.status == RelaxationStatus::infeasible) infeasible = true;
    if (rel.status == RelaxationStatus::limit || rel.status == RelaxationStatus::numerical) {
      stopped = true;
      stopped_bound = node.lp_bound;
      break;
    }
    if (infeasible) continue;
    node.lp_bound = lb;

    if (cfg.rmh_every > 0 && (res.stats.nodes == 1 || res.stats.nodes % cfg.rmh_every == 0)) {
      ++res.stats.rmh_calls;
      RmhOptions ro;
      ro.time_limit_s = std::min(cfg.rmh_time_s, std::max(0.0, cfg.time_limit_s - seconds_since(t0)));
      ro.tsp_convert = s.tsp_exact || s.objective == Objective::distance;
      if (auto found = rmh(inst, rmp.routes(), s.objective, oracle, ub, ro)) take_incumbent(std::move(found->routes));
    }
    if (lb >= ub - kBoundTol) continue;

    if (is_integral(rel.solution)) {
      auto chosen = selected_routes(rmp, rel.solution);
      bool ok = is_feasible_solution(inst, chosen);
      if (s.tsp_exact) {
        for (const auto& r : chosen) ok = ok && oracle.is_tsp_optimal(r);
      }
      if (ok) {
        take_incumbent(std::move(chosen));
        continue;
      }
    }
    Branching ch = branch(inst, rmp, rel.solution, node, next_id);
    ch.first.lp_bound = lb;
    ch.second.lp_bound = lb;
    ch.first.parent_lp = raw;
    ch.second.parent_lp = raw;
    open.push_back(std::move(ch.first));
    open.push_back(std::move(ch.second));
  }

  res.stats.time_s = seconds_since(t0);
  res.ub = ub;
  if (stopped) {
    double lb = stopped_bound;
    for (const auto& n : open) lb = std::min(lb, n.lp_bound);
    res.lb = std::min(lb, ub);
    res.status = SolveStatus::limit;
  } else if (ub < lp::kInf) {
    res.lb = ub;
    res.status = SolveStatus::optimal;
  } else {
    res.lb = lp::kInf;
    res.status = SolveStatus::infeasible;
  }
  res.gap = ub < lp::kInf ? relative_gap(res.lb, ub) : (res.status == SolveStatus::infeasible ? 0.0 : 1.0);
  return res;
}

}  // namespace

Branching branch(const Instance& inst, const Rmp& rmp, const RmpSolution& sol, const BnBNode& node, int& next_id) {
  Branching ch{BranchRule::range_eta, node.child(next_id), node.child(next_id + 1)};
  next_id += 2;
  const auto& routes = rmp.routes();

  if (rmp.objective() == Objective::range) {
    double l_max = -lp::kInf;
    double l_min = lp::kInf;
    for (std::size_t r = 0; r < routes.size(); ++r) {
      if (sol.x[r] <= kIntTol) continue;
      const double l = routes[r].length;
      if (l > sol.eta + kLengthTol) l_max = std::max(l_max, l);
      if (l < sol.gamma - kLengthTol) l_min = std::min(l_min, l);
    }
    if (l_max > -lp::kInf) {
      ch.first.eta_hi = std::min(ch.first.eta_hi, l_max - kLengthTol);
      ch.first.len_hi = std::min(ch.first.len_hi, l_max - kLengthTol);
      ch.second.eta_lo = std::max(ch.second.eta_lo, l_max);
      return ch;
    }
    if (l_min < lp::kInf) {
      ch.rule = BranchRule::range_gamma;
      ch.first.gamma_hi = std::min(ch.first.gamma_hi, l_min);
      ch.second.gamma_lo = std::max(ch.second.gamma_lo, l_min + kLengthTol);
      ch.second.len_lo = std::max(ch.second.len_lo, l_min + kLengthTol);
      return ch;
    }
  }

  const int n = inst.num_customers();
  std::vector<double> z(n + 1, 0.0);
  for (std::size_t r = 0; r < routes.size(); ++r) z[routes[r].last] += sol.x[r];
  int best_last = -1;
  double best_frac = kIntTol;
  for (int i = 1; i <= n; ++i) {
    const double f = fractionality(z[i]);
    if (f > best_frac + 1e-12) {
      best_frac = f;
      best_last = i;
    }
  }
  if (best_last > 0) {
    ch.rule = BranchRule::last_customer;
    ch.first.last_forced |= bit(best_last);
    ch.second.last_forbidden |= bit(best_last);
    return ch;
  }

  const ArcFlows flows = rmp.arc_flows(sol);
  Arc best_arc{-1, -1};
  best_frac = kIntTol;
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      if (i == j) continue;
      const double f = fractionality(flows(i, j));
      if (f > best_frac + 1e-12 &&
          std::find(node.forced_arcs.begin(), node.forced_arcs.end(), Arc{i, j}) == node.forced_arcs.end()) {
        best_frac = f;
        best_arc = {i, j};
      }
    }
  }
  if (best_arc.from < 0) throw std::logic_error("fractional master solution without a branching candidate");
  ch.rule = BranchRule::arc;
  ch.first.forbid_arc(best_arc);
  ch.second.force_arc(best_arc);
  return ch;
}

const char* to_string(SolveMode m) {
  switch (m) {
    case SolveMode::exact: return "exact";
    case SolveMode::fcvrp: return "fcvrp";
    case SolveMode::postprocess: return "postprocess";
    case SolveMode::mindist: return "mindist";
  }
  return "unknown";
}

SolveMode parse_solve_mode(const std::string& s) {
  if (s == "exact") return SolveMode::exact;
  if (s == "fcvrp") return SolveMode::fcvrp;
  if (s == "postprocess") return SolveMode::postprocess;
  if (s == "mindist") return SolveMode::mindist;
  throw std::invalid_argument("unknown mode: " + s);
}

Lifting parse_lifting(const std::string& s) {
  if (s == "none") return Lifting::none;
  if (s == "forward") return Lifting::forward;
  if (s == "backward") return Lifting::backward;
  if (s == "both") return Lifting::both;
  throw std::invalid_argument("unknown lifting: " + s);
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::feasible: return "feasible";
    case SolveStatus::limit: return "limit";
    case SolveStatus::infeasible: return "infeasible";
  }
  return "unknown";
}

double relative_gap(double lb, double ub) {
  if (ub <= 0.0) return 0.0;
  if (!std::isfinite(ub) || !std::isfinite(lb)) return 1.0;
  return std::clamp((ub - lb) / ub, 0.0, 1.0);
}

SolveResult mindist_mode(const Instance& inst, const SolverConfig& config) {
  Instance plain = inst;
  plain.clear_budget();
  return run_search({plain, Objective::distance, false, config});
}

Instance resolve_budget(const Instance& inst, const SolverConfig& config) {
  Instance out = inst;
  if (out.has_budget() || !out.budget_percentage()) return out;
  const SolveResult base = mindist_mode(inst, config);
  if (base.status != SolveStatus::optimal) throw std::runtime_error("minimum-distance baseline could not be computed");
  out.set_budget(budget_from_percentage(*out.budget_percentage(), base.ub));
  return out;
}

SolveResult solve(const Instance& inst, const SolverConfig& config) {
  switch (config.mode) {
    case SolveMode::postprocess: return postprocess_mode(inst, config);
    case SolveMode::mindist: return mindist_mode(inst, config);
    case SolveMode::exact:
    case SolveMode::fcvrp: break;
  }
  const Instance resolved = resolve_budget(inst, config);
  SolveResult res = run_search({resolved, Objective::range, config.mode == SolveMode::exact, config});
  res.budget = effective_budget(resolved);
  return res;
}

SolveResult postprocess_mode(const Instance& inst, const SolverConfig& config) {
  SolverConfig cfg = config;
  cfg.mode = SolveMode::fcvrp;
  const Instance resolved = resolve_budget(inst, cfg);
  SolveResult res = run_search({resolved, Objective::range, false, cfg});
  res.budget = effective_budget(resolved);
  if (res.routes.empty()) return res;
  const TspOracle oracle(resolved);
  for (auto& r : res.routes) r = oracle.optimalize(r);
  res.ub = solution_range(res.routes);
  res.lb = std::min(res.lb, res.ub);
  res.gap = relative_gap(res.lb, res.ub);
  if (res.status != SolveStatus::limit) res.status = res.gap <= 1e-6 ? SolveStatus::optimal : SolveStatus::feasible;
  return res;
}

}  // namespace fvrp
