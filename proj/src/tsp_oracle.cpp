#include "fairvrp/tsp_oracle.hpp"

#include <algorithm>
#include <bit>
#include <limits>

namespace fvrp {

namespace {

constexpr double kTieTol = 1e-7;
constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<int> members(CustomerMask mask) {
  std::vector<int> out;
  while (mask) {
    int c = std::countr_zero(mask);
    out.push_back(c);
    mask &= mask - 1;
  }
  return out;
}

// cost_to_go[S * k + v]: cheapest way to finish after visiting subset S (which
// contains v, the current node) through the remaining nodes and then `end`.
std::vector<double> suffix_table(const Instance& inst, const std::vector<int>& nodes, int end) {
  const int k = static_cast<int>(nodes.size());
  const std::size_t full = (std::size_t{1} << k) - 1;
  std::vector<double> g((full + 1) * k, kInf);
  for (int v = 0; v < k; ++v) g[full * k + v] = inst.distance(nodes[v], end);
  for (std::size_t s = full; s-- > 1;) {
    for (int v = 0; v < k; ++v) {
      if (!(s >> v & 1)) continue;
      double best = kInf;
      for (int w = 0; w < k; ++w) {
        if (s >> w & 1) continue;
        double c = inst.distance(nodes[v], nodes[w]) + g[(s | (std::size_t{1} << w)) * k + w];
        best = std::min(best, c);
      }
      g[s * k + v] = best;
    }
  }
  return g;
}

// Greedy forward reconstruction: the smallest next node that stays within the tie tolerance.
std::vector<int> reconstruct(const Instance& inst, const std::vector<int>& nodes, int start,
                             const std::vector<double>& g, double optimum) {
  const int k = static_cast<int>(nodes.size());
  std::vector<int> order;
  std::size_t s = 0;
  int cur = start;
  double spent = 0.0;
  for (int step = 0; step < k; ++step) {
    int pick = -1;
    for (int w = 0; w < k; ++w) {
      if (s >> w & 1) continue;
      double c = spent + inst.distance(cur, nodes[w]) + g[(s | (std::size_t{1} << w)) * k + w];
      if (c <= optimum + kTieTol) {
        pick = w;
        break;
      }
    }
    if (pick < 0) {
      // Rounding pushed every candidate over the tolerance; take the true minimum.
      double best = kInf;
      for (int w = 0; w < k; ++w) {
        if (s >> w & 1) continue;
        double c = spent + inst.distance(cur, nodes[w]) + g[(s | (std::size_t{1} << w)) * k + w];
        if (c < best) {
          best = c;
          pick = w;
        }
      }
    }
    spent += inst.distance(cur, nodes[pick]);
    s |= std::size_t{1} << pick;
    cur = nodes[pick];
    order.push_back(cur);
  }
  return order;
}

}  // namespace

Tour held_karp_tour(const Instance& inst, std::span<const int> customers, int limit) {
  std::vector<int> nodes(customers.begin(), customers.end());
  std::sort(nodes.begin(), nodes.end());
  if (nodes.empty()) throw std::invalid_argument("tour needs at least one customer");
  if (std::adjacent_find(nodes.begin(), nodes.end()) != nodes.end()) {
    throw std::invalid_argument("tour customers must be distinct");
  }
  if (static_cast<int>(nodes.size()) > limit) {
    throw HeldKarpCapacityError("Held-Karp query over " + std::to_string(nodes.size()) +
                                " customers exceeds the limit of " + std::to_string(limit));
  }
  const int k = static_cast<int>(nodes.size());
  auto g = suffix_table(inst, nodes, 0);
  double optimum = kInf;
  for (int v = 0; v < k; ++v) {
    optimum = std::min(optimum, inst.distance(0, nodes[v]) + g[(std::size_t{1} << v) * k + v]);
  }
  Tour t;
  t.order = reconstruct(inst, nodes, 0, g, optimum);
  t.length = tour_length(inst, t.order);
  return t;
}

double held_karp_path(const Instance& inst, const PathQuery& q, int limit) {
  if (q.interior & (bit(q.start) | bit(q.end))) {
    throw std::invalid_argument("path endpoints must not be interior nodes");
  }
  if (q.interior & 1) throw std::invalid_argument("the depot cannot be an interior node");
  auto nodes = members(q.interior);
  if (nodes.empty()) {
    if (q.start == q.end) throw std::invalid_argument("closed path needs a nonempty interior");
    return inst.distance(q.start, q.end);
  }
  if (static_cast<int>(nodes.size()) > limit) {
    throw HeldKarpCapacityError("Held-Karp query over " + std::to_string(nodes.size()) +
                                " nodes exceeds the limit of " + std::to_string(limit));
  }
  const int k = static_cast<int>(nodes.size());
  auto g = suffix_table(inst, nodes, q.end);
  double optimum = kInf;
  for (int v = 0; v < k; ++v) {
    optimum = std::min(optimum, inst.distance(q.start, nodes[v]) + g[(std::size_t{1} << v) * k + v]);
  }
  return optimum;
}

TspOracle::TspOracle(const Instance& inst, std::size_t cache_capacity, int limit)
    : inst_(inst), capacity_(cache_capacity), limit_(limit) {}

double TspOracle::path(const PathQuery& q) const {
  const Key key{q.start, q.end, q.interior};
  {
    std::lock_guard lock(mu_);
    if (auto it = index_.find(key); it != index_.end()) {
      lru_.splice(lru_.begin(), lru_, it->second);
      ++hits_;
      return it->second->second;
    }
  }
  double value = held_karp_path(inst_, q, limit_);
  std::lock_guard lock(mu_);
  if (capacity_ == 0 || index_.contains(key)) return value;
  lru_.emplace_front(key, value);
  index_[key] = lru_.begin();
  if (index_.size() > capacity_) {
    index_.erase(lru_.back().first);
    lru_.pop_back();
  }
  return value;
}

std::size_t TspOracle::cache_size() const {
  std::lock_guard lock(mu_);
  return index_.size();
}

bool TspOracle::is_violating_path(std::span<const int> path) const {
  if (path.size() < 3) throw std::invalid_argument("a TSP-violating path needs at least 3 nodes");
  CustomerMask interior = 0;
  for (std::size_t k = 1; k + 1 < path.size(); ++k) {
    if (path[k] == 0) throw std::invalid_argument("the depot cannot be an intermediate path node");
    interior |= bit(path[k]);
  }
  double best = this->path({path.front(), path.back(), interior});
  return best < path_length(inst_, path) - kLengthTol;
}

bool TspOracle::is_tsp_optimal(const Route& r) const {
  if (r.seq.size() <= 1) return true;
  return path({0, 0, r.covered}) >= r.length - kLengthTol;
}

Route TspOracle::optimalize(const Route& r) const {
  if (r.seq.size() <= 1) return r;
  Tour t = tour(r.seq);
  if (t.length >= r.length - kLengthTol) return r;
  return Route::make(inst_, std::move(t.order));
}

bool is_tsp_violating_path(const Instance& inst, std::span<const int> path) {
  TspOracle oracle(inst, 0);
  return oracle.is_violating_path(path);
}

bool is_tsp_optimal_route(const Instance& inst, const Route& r) {
  return TspOracle(inst, 0).is_tsp_optimal(r);
}

Route tsp_optimalize_route(const Instance& inst, const Route& r) {
  return TspOracle(inst, 0).optimalize(r);
}

}  // namespace fvrp
