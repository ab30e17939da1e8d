#pragma once

#include <map>
#include <optional>
#include <vector>

#include "fairvrp/cuts.hpp"
#include "fairvrp/instance.hpp"
#include "fairvrp/lp_engine.hpp"
#include "fairvrp/node.hpp"

namespace fvrp {

/// range: min eta - gamma with budget and link rows. distance: min total length.
enum class Objective { range, distance };

/// Duals in the sign convention of the model: lambda, alpha, beta >= 0.
struct DualValues {
  std::vector<double> mu;     // index 0 unused
  double lambda = 0.0;
  double sigma = 0.0;
  std::vector<double> alpha;  // index 0 unused
  std::vector<double> beta;   // index 0 unused
  std::vector<double> cut;    // raw row duals: <= 0 on le cuts, >= 0 on ge cuts
  double length_weight = 0.0; // 1 under the distance objective
  double big_m = 0.0;

  static DualValues zero(int num_customers, std::size_t num_cuts = 0);
};

/// Reduced cost of r given duals; cuts must be aligned with d.cut.
double reduced_cost(const Route& r, const DualValues& d, std::span<const Cut> cuts);

/// Sum of cut duals per arc, dense (n+1)^2.
std::vector<double> arc_duals(int num_nodes, const DualValues& d, std::span<const Cut> cuts);

struct RmpSolution {
  lp::Status status = lp::Status::iteration_limit;
  double objective = 0.0;
  std::vector<double> x;  // per pooled route
  double eta = 0.0;
  double gamma = 0.0;
  double artificial = 0.0;
  int iterations = 0;
  DualValues duals;
};

/// Restricted master problem. Holds every generated route and every separated cut
/// for the whole search; node restrictions are applied through column bounds.
class Rmp {
 public:
  Rmp(const Instance& inst, Objective objective);

  const Instance& instance() const { return inst_; }
  Objective objective() const { return objective_; }
  double big_m() const { return big_m_; }

  /// Adds a column unless a route with the same sequence exists. Returns its pool index.
  int add_route(const Route& r);
  std::optional<int> find_route(const std::vector<int>& seq) const;
  const std::vector<Route>& routes() const { return routes_; }
  bool enabled(int r) const { return enabled_[r] != 0; }
  /// Overrides the bounds of an enabled column until the next apply_node.
  void set_route_bounds(int r, double lower, double upper);

  int add_cut(const Cut& c);
  const std::vector<Cut>& cuts() const { return cuts_; }

  /// Disables columns the node does not admit and sets the eta/gamma bounds.
  void apply_node(const BnBNode& node);
  const BnBNode& node() const { return node_; }

  void set_artificials_enabled(bool on);
  bool artificials_enabled() const { return art_enabled_; }
  double artificial_cost() const { return art_cost_; }
  /// Phase one: every cost is zero except the artificials, which cost 1.
  void set_phase_one(bool on);
  bool phase_one() const { return phase_one_; }

  RmpSolution solve();

  ArcFlows arc_flows(const RmpSolution& sol) const;

  int num_partition_rows() const { return inst_.num_customers(); }
  bool has_budget_row() const { return budget_row_ >= 0; }
  bool has_fleet_row() const { return fleet_row_ >= 0; }
  int num_link_rows() const { return objective_ == Objective::range ? 2 * inst_.num_customers() : 0; }
  int num_cut_rows() const { return static_cast<int>(cuts_.size()); }
  int num_rows() const { return model_.num_rows(); }
  int num_columns() const { return model_.num_cols(); }

 private:
  std::vector<lp::Entry> column_entries(const Route& r) const;
  double route_cost(const Route& r) const;
  void set_column_bounds(int r);

  const Instance& inst_;
  Objective objective_;
  double budget_ = 0.0;
  double big_m_ = 0.0;
  double art_cost_ = 0.0;
  lp::Model model_;

  int budget_row_ = -1;
  int fleet_row_ = -1;
  int max_row0_ = -1;
  int min_row0_ = -1;
  std::vector<int> cut_rows_;

  int eta_col_ = -1;
  int gamma_col_ = -1;
  std::vector<int> art_cols_;
  bool art_enabled_ = true;
  bool phase_one_ = false;

  std::vector<Route> routes_;
  std::vector<int> route_cols_;
  std::vector<char> enabled_;
  std::map<std::vector<int>, int> index_;
  std::vector<Cut> cuts_;
  BnBNode node_;
  std::vector<char> allowed_;
};

/// All rows of the model plus one single-customer route per customer.
Rmp build_initial_rmp(const Instance& inst, const BnBNode& node, Objective objective = Objective::range);

/// Budget used by the range objective; an instance without a budget gets a bound
/// no route set can exceed.
double effective_budget(const Instance& inst);

}  // namespace fvrp
