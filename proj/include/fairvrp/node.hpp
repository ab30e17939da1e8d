#pragma once

#include <vector>

#include "fairvrp/instance.hpp"
#include "fairvrp/lp_engine.hpp"

namespace fvrp {

/// Branching state of one search node. Forced arcs and last-customer fixings are
/// translated into forbidden arcs, so the pricing graph only needs `allowed`.
struct BnBNode {
  int id = 0;
  int parent = -1;
  int depth = 0;
  double len_lo = 0.0;
  double len_hi = lp::kInf;
  double eta_lo = 0.0;
  double eta_hi = lp::kInf;
  double gamma_lo = 0.0;
  double gamma_hi = lp::kInf;
  std::vector<Arc> forbidden_arcs;
  std::vector<Arc> forced_arcs;
  CustomerMask last_forbidden = 0;
  CustomerMask last_forced = 0;
  double lp_bound = 0.0;
  /// Unclamped relaxation value of the parent.
  double parent_lp = -lp::kInf;

  static BnBNode root() { return {}; }

  /// Dense (n+1)^2 arc admissibility after applying all fixings.
  std::vector<char> allowed_arcs(const Instance& inst) const;
  bool admits(const Instance& inst, const Route& r) const;
  /// Same test against a precomputed allowed_arcs() matrix.
  bool admits(const std::vector<char>& allowed, int num_nodes, const Route& r) const;
  bool pricing_enabled(int last) const { return (last_forbidden & bit(last)) == 0; }

  BnBNode child(int new_id) const;
  void forbid_arc(Arc a) { forbidden_arcs.push_back(a); }
  void force_arc(Arc a) { forced_arcs.push_back(a); }
};

}  // namespace fvrp
