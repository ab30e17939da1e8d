#pragma once

#include <set>
#include <tuple>
#include <span>
#include <string>
#include <vector>

#include "fairvrp/instance.hpp"
#include "fairvrp/lp_engine.hpp"
#include "fairvrp/tsp_oracle.hpp"

namespace fvrp {

/// Dense arc-flow matrix x_a = sum of x_r over routes using a.
class ArcFlows {
 public:
  explicit ArcFlows(int num_nodes = 0) : n_(num_nodes), flow_(static_cast<std::size_t>(num_nodes) * num_nodes, 0.0) {}

  int num_nodes() const { return n_; }
  double operator()(int i, int j) const { return flow_[static_cast<std::size_t>(i) * n_ + j]; }
  double& operator()(int i, int j) { return flow_[static_cast<std::size_t>(i) * n_ + j]; }
  double operator()(Arc a) const { return (*this)(a.from, a.to); }

  double sum(std::span<const Arc> arcs) const;

 private:
  int n_;
  std::vector<double> flow_;
};

ArcFlows flows_of(const Instance& inst, std::span<const Route> routes, std::span<const double> values);

enum class CutKind { tsp_base, tsp_forward, tsp_backward, rci };

const char* to_string(CutKind k);

/// sum over arcs of x_a (sense) rhs, all coefficients 1.
struct Cut {
  CutKind kind = CutKind::tsp_base;
  std::vector<Arc> arcs;  // sorted, unique
  lp::Sense sense = lp::Sense::le;
  double rhs = 0.0;
  std::vector<int> origin;  // path P for TSP kinds, customer set S for RCI

  bool is_tsp() const { return kind != CutKind::rci; }
  bool contains(Arc a) const;
  double lhs(const ArcFlows& flows) const { return flows.sum(arcs); }
  /// Positive when the flows violate the cut.
  double violation(const ArcFlows& flows) const;
  /// Number of the route's arcs in the cut.
  int coefficient(const Route& r) const;
  /// Left-hand side of the cut for an integer solution.
  int count(std::span<const Route> routes) const;
};

/// `KIND rhs i-j,i-j,...`
std::string dump_cut(const Cut& c);

enum class Lifting { none, forward, backward, both };

const char* to_string(Lifting l);

struct SeparationOptions {
  int max_path_nodes = 8;
  int max_cuts = 50;
  Lifting lifting = Lifting::both;
  /// Adds arcs out of the terminal node to forward-lifted cuts. Not covered by the validity proof.
  bool aggressive_lifting = false;
  double support_eps = 1e-9;
};

Cut base_tsp_cut(std::span<const int> path);
Cut lift_forward(std::span<const int> path, const Instance& inst, const TspOracle& oracle,
                 bool aggressive = false);
Cut lift_backward(std::span<const int> path, const Instance& inst, const TspOracle& oracle);

/// Cuts emitted for one TSP-violating path according to the lifting mode.
std::vector<Cut> tsp_cuts_for_path(std::span<const int> path, const Instance& inst,
                                   const TspOracle& oracle, Lifting lifting, bool aggressive = false);

/// Depot-anchored BFS over the flow support. Every returned path is TSP-violating and
/// its base cut is violated by more than 1e-6.
std::vector<std::vector<int>> find_violating_paths(const ArcFlows& flows, const Instance& inst,
                                                   const TspOracle& oracle, const SeparationOptions& opt = {});

struct TspSeparation {
  std::vector<Cut> cuts;
  std::vector<std::vector<int>> paths;
  /// min over produced lifted cuts of (lifted violation - base violation); +inf if none.
  double min_lifting_gain = lp::kInf;
  int lifted_checks = 0;
};

TspSeparation separate_tsp(const ArcFlows& flows, const Instance& inst, const TspOracle& oracle,
                           const SeparationOptions& opt = {});

/// A depot-anchored TSP-violating subpath of r (shortest prefix, then suffix, else the whole
/// closed route). r must be TSP-violating.
std::vector<int> violating_path_of_route(const Route& r, const TspOracle& oracle);

/// x(delta+(S)) >= ceil(d(S)/Q) over outgoing arcs of S.
Cut make_rci(const Instance& inst, CustomerMask set);

/// Connected components of the customer support graph plus greedy add/drop moves.
std::vector<Cut> separate_rci(const ArcFlows& flows, const Instance& inst, int max_cuts = 50);

/// Keeps structurally distinct cuts (sorted arc set, sense, rhs).
class CutPool {
 public:
  bool contains(const Cut& c) const;
  /// Returns false for a duplicate.
  bool insert(const Cut& c);
  std::size_t size() const { return keys_.size(); }

 private:
  using Key = std::tuple<std::vector<Arc>, int, double>;
  std::set<Key> keys_;
};

}  // namespace fvrp
