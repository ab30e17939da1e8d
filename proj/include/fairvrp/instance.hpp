#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fvrp {

/// Absolute tolerance used for every route-length comparison.
inline constexpr double kLengthTol = 1e-6;

/// Largest customer count the solver components accept (customer sets are 64-bit masks).
inline constexpr int kMaxCustomers = 63;

enum class Rounding { exact, nearest_int };

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct Arc {
  int from = 0;
  int to = 0;

  friend auto operator<=>(const Arc&, const Arc&) = default;
};

using CustomerMask = std::uint64_t;

inline CustomerMask bit(int customer) { return CustomerMask{1} << customer; }

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  int line() const { return line_; }

 private:
  int line_;
};

/// Problem data. Node 0 is the depot, customers are 1..n.
/// Immutable once built; the distance matrix is materialized at construction.
class Instance {
 public:
  Instance() = default;

  /// Builds an instance from coordinates (coords.size() == demand.size() == n + 1).
  static Instance from_coords(std::string name, std::vector<Point> coords, std::vector<int> demand,
                              int fleet, int capacity, Rounding rounding = Rounding::exact);

  /// Builds an instance from an explicit (n + 1) x (n + 1) row-major distance matrix.
  static Instance from_matrix(std::string name, std::vector<double> matrix,
                              std::vector<int> demand, int fleet, int capacity);

  const std::string& name() const { return name_; }
  int num_customers() const { return n_; }
  int num_nodes() const { return n_ + 1; }
  int fleet() const { return fleet_; }
  int capacity() const { return capacity_; }
  Rounding rounding() const { return rounding_; }
  bool has_coords() const { return !coords_.empty(); }
  const std::vector<Point>& coords() const { return coords_; }

  int demand(int node) const { return demand_[node]; }
  int total_demand() const;

  double distance(int i, int j) const { return dist_[static_cast<std::size_t>(i) * (n_ + 1) + j]; }

  bool has_budget() const { return budget_.has_value(); }
  /// Throws std::logic_error while the budget is still a pending percentage.
  double budget() const;
  std::optional<double> budget_percentage() const { return budget_pct_; }

  void set_budget(double value) { budget_ = value; }
  void set_budget_percentage(double pct) { budget_pct_ = pct; }
  void clear_budget() { budget_.reset(); }

  CustomerMask all_customers() const;

 private:
  void validate() const;
  void build_distances();

  std::string name_;
  int n_ = 0;
  int fleet_ = 0;
  int capacity_ = 0;
  Rounding rounding_ = Rounding::exact;
  std::vector<Point> coords_;
  std::vector<int> demand_;
  std::vector<double> dist_;
  std::optional<double> budget_;
  std::optional<double> budget_pct_;
};

/// Parses the line-oriented instance format (see README). Throws ParseError.
Instance parse_instance(std::string_view text);
Instance load_instance(const std::string& path);

/// Writes an instance so that parse_instance(emit_instance(x)) reproduces it bit-exactly.
std::string emit_instance(const Instance& inst);

/// L = baseline * pct / 100; pct must be at least 100.
double budget_from_percentage(double pct, double baseline);

/// Length of 0 -> seq[0] -> ... -> seq.back() -> 0.
double tour_length(const Instance& inst, std::span<const int> seq);

/// Length of an open node sequence (no implicit depot).
double path_length(const Instance& inst, std::span<const int> path);

/// Elementary depot-to-depot cycle over customers.
struct Route {
  std::vector<int> seq;
  double length = 0.0;
  int last = 0;
  int load = 0;
  CustomerMask covered = 0;

  /// Validates elementarity and computes the derived fields. Capacity is not checked here.
  static Route make(const Instance& inst, std::vector<int> seq);

  bool visits(int customer) const { return (covered & bit(customer)) != 0; }
  bool uses_arc(Arc a) const;
  std::vector<Arc> arcs() const;

  friend bool operator==(const Route& a, const Route& b) { return a.seq == b.seq; }
};

/// Longest minus shortest route length.
double solution_range(std::span<const Route> routes);
double solution_distance(std::span<const Route> routes);

/// Partition, fleet, capacity and budget checks for a complete solution.
bool is_feasible_solution(const Instance& inst, std::span<const Route> routes);

}  // namespace fvrp
