#include "fairvrp/cuts.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <deque>
#include <numeric>
#include <sstream>

namespace fvrp {

namespace {

constexpr double kViolationTol = 1e-6;

void normalize(std::vector<Arc>& arcs) {
  std::sort(arcs.begin(), arcs.end());
  arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());
}

bool on_path(std::span<const int> path, std::size_t from, std::size_t to, int node) {
  for (std::size_t k = from; k <= to && k < path.size(); ++k) {
    if (path[k] == node) return true;
  }
  return false;
}

}  // namespace

double ArcFlows::sum(std::span<const Arc> arcs) const {
  double s = 0.0;
  for (const auto& a : arcs) s += (*this)(a);
  return s;
}

ArcFlows flows_of(const Instance& inst, std::span<const Route> routes, std::span<const double> values) {
  ArcFlows flows(inst.num_nodes());
  for (std::size_t r = 0; r < routes.size(); ++r) {
    if (values[r] == 0.0) continue;
    int prev = 0;
    for (int c : routes[r].seq) {
      flows(prev, c) += values[r];
      prev = c;
    }
    flows(prev, 0) += values[r];
  }
  return flows;
}

const char* to_string(CutKind k) {
  switch (k) {
    case CutKind::tsp_base: return "TSP_BASE";
    case CutKind::tsp_forward: return "TSP_FORWARD";
    case CutKind::tsp_backward: return "TSP_BACKWARD";
    case CutKind::rci: return "RCI";
  }
  return "UNKNOWN";
}

const char* to_string(Lifting l) {
  switch (l) {
    case Lifting::none: return "none";
    case Lifting::forward: return "forward";
    case Lifting::backward: return "backward";
    case Lifting::both: return "both";
  }
  return "unknown";
}

bool Cut::contains(Arc a) const { return std::binary_search(arcs.begin(), arcs.end(), a); }

double Cut::violation(const ArcFlows& flows) const {
  const double l = lhs(flows);
  switch (sense) {
    case lp::Sense::le: return l - rhs;
    case lp::Sense::ge: return rhs - l;
    case lp::Sense::eq: return std::abs(l - rhs);
  }
  return 0.0;
}

int Cut::coefficient(const Route& r) const {
  int count = 0;
  int prev = 0;
  for (int c : r.seq) {
    count += contains({prev, c});
    prev = c;
  }
  return count + contains({prev, 0});
}

int Cut::count(std::span<const Route> routes) const {
  int total = 0;
  for (const auto& r : routes) total += coefficient(r);
  return total;
}

std::string dump_cut(const Cut& c) {
  std::ostringstream out;
  out << to_string(c.kind) << " " << c.rhs << " ";
  for (std::size_t k = 0; k < c.arcs.size(); ++k) {
    out << (k ? "," : "") << c.arcs[k].from << "-" << c.arcs[k].to;
  }
  return out.str();
}

Cut base_tsp_cut(std::span<const int> path) {
  if (path.size() < 3) throw std::invalid_argument("TSP cut path needs at least 3 nodes");
  Cut c;
  c.kind = CutKind::tsp_base;
  for (std::size_t k = 1; k < path.size(); ++k) c.arcs.push_back({path[k - 1], path[k]});
  normalize(c.arcs);
  c.sense = lp::Sense::le;
  c.rhs = static_cast<double>(path.size()) - 2.0;
  c.origin.assign(path.begin(), path.end());
  return c;
}

Cut lift_forward(std::span<const int> path, const Instance& inst, const TspOracle& oracle, bool aggressive) {
  Cut c = base_tsp_cut(path);
  c.kind = CutKind::tsp_forward;
  const std::size_t p = path.size();
  int prefix_demand = 0;
  std::vector<int> prefix;
  for (std::size_t h = 0; h + 1 < p; ++h) {
    const int vh = path[h];
    prefix.push_back(vh);
    prefix_demand += inst.demand(vh);
    // Elementarity: arcs back to earlier customers of the prefix.
    for (std::size_t j = 0; j < h; ++j) {
      if (path[j] != 0) c.arcs.push_back({vh, path[j]});
    }
    for (int j = 1; j < inst.num_nodes(); ++j) {
      if (on_path(path, 0, h + 1, j)) continue;
      if (prefix_demand + inst.demand(j) > inst.capacity()) {
        c.arcs.push_back({vh, j});
        continue;
      }
      if (h >= 1) {
        prefix.push_back(j);
        if (oracle.is_violating_path(prefix)) c.arcs.push_back({vh, j});
        prefix.pop_back();
      }
    }
  }
  if (aggressive && path[p - 1] != 0) {
    for (std::size_t j = 0; j + 1 < p; ++j) {
      if (path[j] != 0) c.arcs.push_back({path[p - 1], path[j]});
    }
  }
  normalize(c.arcs);
  return c;
}

Cut lift_backward(std::span<const int> path, const Instance& inst, const TspOracle& oracle) {
  Cut c = base_tsp_cut(path);
  c.kind = CutKind::tsp_backward;
  const std::size_t p = path.size();
  int suffix_demand = inst.demand(path[p - 1]);
  std::vector<int> suffix;  // (j, v_h, ..., v_p)
  for (std::size_t h = p - 1; h >= 1; --h) {
    const int vh = path[h];
    if (h != p - 1) suffix_demand += inst.demand(vh);
    for (std::size_t j = h + 1; j < p; ++j) {
      if (path[j] != 0) c.arcs.push_back({path[j], vh});
    }
    suffix.assign(1, 0);
    suffix.insert(suffix.end(), path.begin() + static_cast<std::ptrdiff_t>(h), path.end());
    for (int j = 1; j < inst.num_nodes(); ++j) {
      if (on_path(path, h - 1, p - 1, j)) continue;
      if (inst.demand(j) + suffix_demand > inst.capacity()) {
        c.arcs.push_back({j, vh});
        continue;
      }
      if (p - h >= 2) {
        suffix[0] = j;
        if (oracle.is_violating_path(suffix)) c.arcs.push_back({j, vh});
      }
    }
  }
  normalize(c.arcs);
  return c;
}

std::vector<Cut> tsp_cuts_for_path(std::span<const int> path, const Instance& inst, const TspOracle& oracle,
                                   Lifting lifting, bool aggressive) {
  std::vector<Cut> out;
  switch (lifting) {
    case Lifting::none: out.push_back(base_tsp_cut(path)); break;
    case Lifting::forward: out.push_back(lift_forward(path, inst, oracle, aggressive)); break;
    case Lifting::backward: out.push_back(lift_backward(path, inst, oracle)); break;
    case Lifting::both:
      out.push_back(lift_forward(path, inst, oracle, aggressive));
      out.push_back(lift_backward(path, inst, oracle));
      break;
  }
  return out;
}

std::vector<std::vector<int>> find_violating_paths(const ArcFlows& flows, const Instance& inst,
                                                   const TspOracle& oracle, const SeparationOptions& opt) {
  struct Partial {
    std::vector<int> nodes;  // in traversal order of the search
    double flow = 0.0;
    CustomerMask visited = 0;
  };
  const int nn = inst.num_nodes();
  std::set<std::vector<int>> found;

  for (int pass = 0; pass < 2; ++pass) {
    const bool forward = pass == 0;
    auto flow = [&](int a, int b) { return forward ? flows(a, b) : flows(b, a); };
    std::deque<Partial> queue;
    queue.push_back({{0}, 0.0, 0});
    while (!queue.empty()) {
      Partial cur = std::move(queue.front());
      queue.pop_front();
      const int u = cur.nodes.back();
      for (int w = 0; w < nn; ++w) {
        if (w == u) continue;
        const double xw = flow(u, w);
        if (xw <= opt.support_eps) continue;
        if (w == 0 ? cur.nodes.size() < 2 : (cur.visited & bit(w)) != 0) continue;
        const double f = cur.flow + xw;
        const double arcs = static_cast<double>(cur.nodes.size());
        if (f <= arcs - 1.0 + kViolationTol) continue;
        Partial next{cur.nodes, f, cur.visited | (w ? bit(w) : 0)};
        next.nodes.push_back(w);
        if (next.nodes.size() >= 3) {
          std::vector<int> path = next.nodes;
          if (!forward) std::reverse(path.begin(), path.end());
          if (oracle.is_violating_path(path)) {
            found.insert(std::move(path));
            continue;
          }
        }
        if (w != 0 && static_cast<int>(next.nodes.size()) < opt.max_path_nodes) queue.push_back(std::move(next));
      }
    }
  }
  return {found.begin(), found.end()};
}

TspSeparation separate_tsp(const ArcFlows& flows, const Instance& inst, const TspOracle& oracle,
                           const SeparationOptions& opt) {
  TspSeparation sep;
  sep.paths = find_violating_paths(flows, inst, oracle, opt);
  std::vector<std::pair<double, Cut>> scored;
  CutPool seen;
  for (const auto& path : sep.paths) {
    const double base = base_tsp_cut(path).violation(flows);
    for (auto& c : tsp_cuts_for_path(path, inst, oracle, opt.lifting, opt.aggressive_lifting)) {
      const double v = c.violation(flows);
      if (c.kind != CutKind::tsp_base) {
        ++sep.lifted_checks;
        sep.min_lifting_gain = std::min(sep.min_lifting_gain, v - base);
      }
      if (v > kViolationTol && seen.insert(c)) scored.emplace_back(v, std::move(c));
    }
  }
  std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  for (auto& [v, c] : scored) {
    if (static_cast<int>(sep.cuts.size()) >= opt.max_cuts) break;
    sep.cuts.push_back(std::move(c));
  }
  return sep;
}

std::vector<int> violating_path_of_route(const Route& r, const TspOracle& oracle) {
  std::vector<int> closed;
  closed.push_back(0);
  closed.insert(closed.end(), r.seq.begin(), r.seq.end());
  closed.push_back(0);
  const std::size_t total = closed.size();
  for (std::size_t len = 3; len < total; ++len) {
    std::span<const int> prefix(closed.data(), len);
    if (oracle.is_violating_path(prefix)) return {prefix.begin(), prefix.end()};
    std::span<const int> suffix(closed.data() + (total - len), len);
    if (oracle.is_violating_path(suffix)) return {suffix.begin(), suffix.end()};
  }
  return closed;
}

Cut make_rci(const Instance& inst, CustomerMask set) {
  Cut c;
  c.kind = CutKind::rci;
  c.sense = lp::Sense::ge;
  int demand = 0;
  for (int i = 1; i < inst.num_nodes(); ++i) {
    if (!(set & bit(i))) continue;
    c.origin.push_back(i);
    demand += inst.demand(i);
    for (int j = 0; j < inst.num_nodes(); ++j) {
      if (j != i && (j == 0 || !(set & bit(j)))) c.arcs.push_back({i, j});
    }
  }
  normalize(c.arcs);
  c.rhs = std::ceil(static_cast<double>(demand) / inst.capacity());
  return c;
}

std::vector<Cut> separate_rci(const ArcFlows& flows, const Instance& inst, int max_cuts) {
  const int n = inst.num_customers();
  const double support = 1e-4;
  auto linked = [&](int i, int j) { return flows(i, j) + flows(j, i) > support; };

  auto violation = [&](CustomerMask s) {
    double out = 0.0;
    int demand = 0;
    for (int i = 1; i <= n; ++i) {
      if (!(s & bit(i))) continue;
      demand += inst.demand(i);
      for (int j = 0; j <= n; ++j) {
        if (j != i && (j == 0 || !(s & bit(j)))) out += flows(i, j);
      }
    }
    return std::ceil(static_cast<double>(demand) / inst.capacity()) - out;
  };

  // Components of the customer support graph.
  std::vector<int> comp(n + 1, -1);
  std::vector<CustomerMask> seeds;
  for (int s = 1; s <= n; ++s) {
    if (comp[s] >= 0) continue;
    CustomerMask m = 0;
    std::vector<int> stack{s};
    comp[s] = static_cast<int>(seeds.size());
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      m |= bit(u);
      for (int v = 1; v <= n; ++v) {
        if (comp[v] < 0 && linked(u, v)) {
          comp[v] = comp[s];
          stack.push_back(v);
        }
      }
    }
    seeds.push_back(m);
  }

  std::set<CustomerMask> candidates;
  for (CustomerMask s : seeds) {
    candidates.insert(s);
    CustomerMask cur = s;
    double cur_v = violation(cur);
    for (int it = 0; it < 2 * n; ++it) {
      CustomerMask best = cur;
      double best_v = cur_v;
      for (int j = 1; j <= n; ++j) {
        CustomerMask next;
        if (cur & bit(j)) {
          if (std::popcount(cur) <= 1) continue;
          next = cur & ~bit(j);
        } else {
          bool adjacent = false;
          for (int i = 1; i <= n && !adjacent; ++i) adjacent = (cur & bit(i)) && linked(i, j);
          if (!adjacent) continue;
          next = cur | bit(j);
        }
        double v = violation(next);
        if (v > best_v + 1e-9) {
          best_v = v;
          best = next;
        }
      }
      if (best == cur) break;
      cur = best;
      cur_v = best_v;
      candidates.insert(cur);
    }
  }

  std::vector<std::pair<double, Cut>> scored;
  for (CustomerMask s : candidates) {
    double v = violation(s);
    if (v > kViolationTol) scored.emplace_back(v, make_rci(inst, s));
  }
  std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<Cut> out;
  for (auto& [v, c] : scored) {
    if (static_cast<int>(out.size()) >= max_cuts) break;
    out.push_back(std::move(c));
  }
  return out;
}

bool CutPool::contains(const Cut& c) const {
  return keys_.contains(Key{c.arcs, static_cast<int>(c.sense), c.rhs});
}

bool CutPool::insert(const Cut& c) {
  return keys_.insert(Key{c.arcs, static_cast<int>(c.sense), c.rhs}).second;
}

}  // namespace fvrp
