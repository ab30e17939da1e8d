#pragma once

#include <cstdint>
#include <vector>

#include "fairvrp/instance.hpp"
#include "fairvrp/master.hpp"
#include "fairvrp/node.hpp"

namespace fvrp {

struct PricingOptions {
  int ng_size = 8;
  int k_best = 30;
  bool bidirectional = true;
  bool dominance = true;
  int threads = 1;
  double rc_tol = 1e-6;
};

/// ng neighbourhoods: for each customer the set of its ng_size nearest customers,
/// itself included. Grown by the decremental state-space loop.
class NgSets {
 public:
  NgSets() = default;
  NgSets(const Instance& inst, int ng_size);

  CustomerMask of(int customer) const { return sets_[customer]; }
  void add(int customer, int member) { sets_[customer] |= bit(member); }
  void merge(const NgSets& other);
  const std::vector<CustomerMask>& sets() const { return sets_; }

 private:
  std::vector<CustomerMask> sets_;
};

/// Vertex (customer, load) layers for load q in [d_i, Q] and the arcs between them, with
/// the arc cost pieces of one pricing problem. The source is (0, 0); every vertex of a
/// customer with an allowed arc into `last` feeds the sink through (last, q + d_last).
struct LoadExpandedGraph {
  struct Vertex {
    int node = 0;
    int load = 0;
  };
  struct Edge {
    int from = 0;  // vertex index
    int to = 0;
    double cost = 0.0;
  };
  int last = 0;
  std::vector<int> layers;  // per node: number of load values
  std::vector<Vertex> vertices;
  std::vector<Edge> edges;
  double sink_constant = 0.0;
};

LoadExpandedGraph build_graph(const Instance& inst, int last, const BnBNode& node, const DualValues& duals,
                              std::span<const double> arc_dual);

struct PricedRoute {
  Route route;
  double rc = 0.0;
};

struct PricingResult {
  int last = 0;
  bool skipped = false;
  std::vector<PricedRoute> routes;  // elementary, rc < -rc_tol, ascending by rc
  double best_rc = lp::kInf;        // best over completed ng-paths of the final round
  bool best_elementary = true;
  int dssr_rounds = 0;
  long labels = 0;
  NgSets grown;
};

/// Labeling for one search node. Routes respect the node's arc fixings, the length window,
/// capacity and elementarity. A negative ng-path that is not elementary triggers growth of the
/// ng sets, so an empty result certifies that no negative elementary route exists.
class Pricer {
 public:
  Pricer(const Instance& inst, const BnBNode& node, NgSets& ng, PricingOptions opt = {});

  PricingResult price(int last, const DualValues& duals, std::span<const double> arc_dual) const;
  /// All enabled last customers; ng growth merged afterwards. Routes sorted by rc, deduplicated.
  std::vector<PricedRoute> price_all(const DualValues& duals, std::span<const double> arc_dual,
                                     std::vector<PricingResult>* per_last = nullptr);

  /// Lower bound on the distance from `node` to the end of a route with the given last customer.
  double completion_bound(int last, int node) const;
  /// Lower bound on the distance from the depot to `node` avoiding `last`.
  double prefix_bound(int last, int node) const;

  const PricingOptions& options() const { return opt_; }

 private:
  PricingResult run(int last, const DualValues& duals, std::span<const double> arc_dual, NgSets& ng) const;
  bool allowed(int i, int j) const { return allowed_[static_cast<std::size_t>(i) * nn_ + j] != 0; }

  const Instance& inst_;
  BnBNode node_;
  NgSets& ng_;
  PricingOptions opt_;
  int nn_;
  std::vector<char> allowed_;
  std::vector<std::vector<double>> to_end_;    // [last][node]
  std::vector<std::vector<double>> from_depot_;  // [last][node]
};

/// Order-independent description of the pricing state space (vertices and arcs of every
/// enabled graph). Duals do not enter it.
std::uint64_t topology_signature(const Instance& inst, const BnBNode& node);

}  // namespace fvrp
