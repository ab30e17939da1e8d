#include "fairvrp/master.hpp"

#include <algorithm>
#include <cmath>

namespace fvrp {

DualValues DualValues::zero(int num_customers, std::size_t num_cuts) {
  DualValues d;
  d.mu.assign(num_customers + 1, 0.0);
  d.alpha.assign(num_customers + 1, 0.0);
  d.beta.assign(num_customers + 1, 0.0);
  d.cut.assign(num_cuts, 0.0);
  return d;
}

double reduced_cost(const Route& r, const DualValues& d, std::span<const Cut> cuts) {
  const int i = r.last;
  double rc = (d.length_weight + d.lambda + d.alpha[i] - d.beta[i]) * r.length + d.big_m * d.beta[i] - d.sigma;
  for (int c : r.seq) rc -= d.mu[c];
  for (std::size_t k = 0; k < cuts.size() && k < d.cut.size(); ++k) {
    if (d.cut[k] != 0.0) rc -= cuts[k].coefficient(r) * d.cut[k];
  }
  return rc;
}

std::vector<double> arc_duals(int num_nodes, const DualValues& d, std::span<const Cut> cuts) {
  std::vector<double> out(static_cast<std::size_t>(num_nodes) * num_nodes, 0.0);
  for (std::size_t k = 0; k < cuts.size() && k < d.cut.size(); ++k) {
    if (d.cut[k] == 0.0) continue;
    for (const auto& a : cuts[k].arcs) out[static_cast<std::size_t>(a.from) * num_nodes + a.to] += d.cut[k];
  }
  return out;
}

double effective_budget(const Instance& inst) {
  if (inst.has_budget()) return inst.budget();
  double longest = 0.0;
  for (int v = 0; v < inst.num_nodes(); ++v) {
    double out = 0.0;
    for (int w = 0; w < inst.num_nodes(); ++w) out = std::max(out, inst.distance(v, w));
    longest += out;
  }
  return longest * std::max(1, inst.fleet());
}

Rmp::Rmp(const Instance& inst, Objective objective) : inst_(inst), objective_(objective) {
  const int n = inst.num_customers();
  if (objective_ == Objective::range) {
    budget_ = effective_budget(inst);
    big_m_ = budget_;
    art_cost_ = 10.0 * std::max(budget_, 1.0);
  } else {
    double trips = 0.0;
    for (int i = 1; i <= n; ++i) trips += inst.distance(0, i) + inst.distance(i, 0);
    art_cost_ = 10.0 * std::max(trips, 1.0);
  }

  for (int i = 1; i <= n; ++i) model_.add_row(lp::Sense::eq, 1.0);
  if (objective_ == Objective::range) budget_row_ = model_.add_row(lp::Sense::le, budget_);
  fleet_row_ = model_.add_row(lp::Sense::eq, static_cast<double>(inst.fleet()));
  if (objective_ == Objective::range) {
    max_row0_ = model_.num_rows();
    for (int i = 1; i <= n; ++i) model_.add_row(lp::Sense::le, 0.0);
    min_row0_ = model_.num_rows();
    for (int i = 1; i <= n; ++i) model_.add_row(lp::Sense::ge, -big_m_);

    std::vector<lp::Entry> eta, gamma;
    for (int i = 0; i < n; ++i) {
      eta.push_back({max_row0_ + i, -1.0});
      gamma.push_back({min_row0_ + i, -1.0});
    }
    eta_col_ = model_.add_column(1.0, 0.0, lp::kInf, eta);
    gamma_col_ = model_.add_column(-1.0, 0.0, lp::kInf, gamma);
  }

  for (int i = 0; i < n; ++i) {
    lp::Entry e{i, 1.0};
    art_cols_.push_back(model_.add_column(art_cost_, 0.0, lp::kInf, std::span(&e, 1)));
  }
  for (double sign : {1.0, -1.0}) {
    lp::Entry e{fleet_row_, sign};
    art_cols_.push_back(model_.add_column(art_cost_, 0.0, lp::kInf, std::span(&e, 1)));
  }
  allowed_ = node_.allowed_arcs(inst_);
}

std::vector<lp::Entry> Rmp::column_entries(const Route& r) const {
  std::vector<lp::Entry> e;
  for (int c : r.seq) e.push_back({c - 1, 1.0});
  if (budget_row_ >= 0) e.push_back({budget_row_, r.length});
  e.push_back({fleet_row_, 1.0});
  if (objective_ == Objective::range) {
    e.push_back({max_row0_ + r.last - 1, r.length});
    e.push_back({min_row0_ + r.last - 1, r.length - big_m_});
  }
  for (std::size_t k = 0; k < cuts_.size(); ++k) {
    const int coeff = cuts_[k].coefficient(r);
    if (coeff) e.push_back({cut_rows_[k], static_cast<double>(coeff)});
  }
  return e;
}

std::optional<int> Rmp::find_route(const std::vector<int>& seq) const {
  auto it = index_.find(seq);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

double Rmp::route_cost(const Route& r) const {
  return objective_ == Objective::distance && !phase_one_ ? r.length : 0.0;
}

int Rmp::add_route(const Route& r) {
  if (auto found = find_route(r.seq)) return *found;
  const int col = model_.add_column(route_cost(r), 0.0, lp::kInf, column_entries(r));
  const int idx = static_cast<int>(routes_.size());
  routes_.push_back(r);
  route_cols_.push_back(col);
  enabled_.push_back(1);
  index_.emplace(r.seq, idx);
  set_column_bounds(idx);
  return idx;
}

void Rmp::set_column_bounds(int r) {
  enabled_[r] = node_.admits(allowed_, inst_.num_nodes(), routes_[r]) ? 1 : 0;
  model_.set_bounds(route_cols_[r], 0.0, enabled_[r] ? lp::kInf : 0.0);
}

void Rmp::set_route_bounds(int r, double lower, double upper) {
  if (!enabled_[r]) return;
  model_.set_bounds(route_cols_[r], lower, upper);
}

int Rmp::add_cut(const Cut& c) {
  std::vector<lp::Entry> e;
  for (std::size_t r = 0; r < routes_.size(); ++r) {
    const int coeff = c.coefficient(routes_[r]);
    if (coeff) e.push_back({route_cols_[r], static_cast<double>(coeff)});
  }
  const int row = model_.add_row(c.sense, c.rhs, e);
  cut_rows_.push_back(row);
  cuts_.push_back(c);
  if (c.sense == lp::Sense::ge) {
    lp::Entry a{row, 1.0};
    const int col = model_.add_column(phase_one_ ? 1.0 : art_cost_, 0.0, art_enabled_ ? lp::kInf : 0.0, std::span(&a, 1));
    art_cols_.push_back(col);
  }
  return static_cast<int>(cuts_.size()) - 1;
}

void Rmp::apply_node(const BnBNode& node) {
  node_ = node;
  allowed_ = node_.allowed_arcs(inst_);
  for (std::size_t r = 0; r < routes_.size(); ++r) set_column_bounds(static_cast<int>(r));
  if (eta_col_ >= 0) {
    model_.set_bounds(eta_col_, node.eta_lo, node.eta_hi);
    model_.set_bounds(gamma_col_, node.gamma_lo, std::max(node.gamma_lo, node.gamma_hi));
  }
}

void Rmp::set_artificials_enabled(bool on) {
  art_enabled_ = on;
  for (int c : art_cols_) model_.set_bounds(c, 0.0, on ? lp::kInf : 0.0);
}

void Rmp::set_phase_one(bool on) {
  phase_one_ = on;
  for (int c : art_cols_) model_.set_cost(c, on ? 1.0 : art_cost_);
  for (std::size_t r = 0; r < routes_.size(); ++r) model_.set_cost(route_cols_[r], route_cost(routes_[r]));
  if (eta_col_ >= 0) {
    model_.set_cost(eta_col_, on ? 0.0 : 1.0);
    model_.set_cost(gamma_col_, on ? 0.0 : -1.0);
  }
}

RmpSolution Rmp::solve() {
  RmpSolution out;
  lp::Solution s = model_.solve();
  out.status = s.status;
  out.iterations = s.iterations;
  if (s.status != lp::Status::optimal) return out;
  out.objective = s.objective;
  out.x.resize(routes_.size());
  for (std::size_t r = 0; r < routes_.size(); ++r) out.x[r] = s.x[route_cols_[r]];
  if (eta_col_ >= 0) {
    out.eta = s.x[eta_col_];
    out.gamma = s.x[gamma_col_];
  }
  for (int c : art_cols_) out.artificial += s.x[c];

  const int n = inst_.num_customers();
  DualValues& d = out.duals;
  d = DualValues::zero(n, cuts_.size());
  for (int i = 1; i <= n; ++i) d.mu[i] = s.duals[i - 1];
  d.sigma = s.duals[fleet_row_];
  if (objective_ == Objective::range) {
    d.lambda = -s.duals[budget_row_];
    for (int i = 1; i <= n; ++i) {
      d.alpha[i] = -s.duals[max_row0_ + i - 1];
      d.beta[i] = s.duals[min_row0_ + i - 1];
    }
  } else {
    d.length_weight = phase_one_ ? 0.0 : 1.0;
  }
  for (std::size_t k = 0; k < cuts_.size(); ++k) d.cut[k] = s.duals[cut_rows_[k]];
  d.big_m = big_m_;
  return out;
}

ArcFlows Rmp::arc_flows(const RmpSolution& sol) const { return flows_of(inst_, routes_, sol.x); }

Rmp build_initial_rmp(const Instance& inst, const BnBNode& node, Objective objective) {
  Rmp rmp(inst, objective);
  rmp.apply_node(node);
  for (int i = 1; i <= inst.num_customers(); ++i) rmp.add_route(Route::make(inst, {i}));
  return rmp;
}

}  // namespace fvrp
