#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace fvrp::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense { le, eq, ge };

enum class Status { optimal, infeasible, unbounded, iteration_limit };

const char* to_string(Status s);

struct Entry {
  int index = 0;
  double value = 0.0;
};

struct Solution {
  Status status = Status::iteration_limit;
  double objective = 0.0;
  std::vector<double> x;       // per column
  std::vector<double> duals;   // per row, y = c_B B^-1; >= 0 on ge rows, <= 0 on le rows
  std::vector<double> reduced; // per column, c_j - y^T a_j
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_infeasibility = 0.0;

  bool optimal() const { return status == Status::optimal; }
};

/// Basis snapshot for warm starts. Variables are encoded as column index j >= 0
/// or slack of row i as -(i + 1).
struct Basis {
  std::vector<int> head;
  std::vector<std::int8_t> col_state;
  std::vector<std::int8_t> row_state;
};

struct Options {
  int max_iterations = 0;           // 0 = automatic
  double primal_tol = 1e-9;
  double dual_tol = 1e-9;
  int refactor_every = 64;
  int degenerate_switch = 50;       // consecutive degenerate pivots before Bland's rule
};

/// Minimization LP with row senses and column bounds, solved by a bounded-variable
/// revised simplex. Rows and columns can be appended between solves; indices stay stable.
/// The last basis is kept and reused by the next solve.
class Model {
 public:
  Model() = default;

  int add_column(double cost, double lower, double upper, std::span<const Entry> rows = {});
  /// `cols` gives coefficients on existing columns.
  int add_row(Sense sense, double rhs, std::span<const Entry> cols = {});

  void set_bounds(int col, double lower, double upper);
  void set_cost(int col, double cost);
  void set_rhs(int row, double rhs);

  int num_rows() const { return static_cast<int>(rows_.size()); }
  int num_cols() const { return static_cast<int>(cols_.size()); }
  double cost(int col) const { return cols_[col].cost; }
  double lower(int col) const { return cols_[col].lower; }
  double upper(int col) const { return cols_[col].upper; }
  Sense sense(int row) const { return rows_[row].sense; }
  double rhs(int row) const { return rows_[row].rhs; }
  const std::vector<Entry>& column(int col) const { return cols_[col].entries; }

  Solution solve(const Options& opt = {});

  Basis basis() const;
  /// Falls back to the slack basis at the next solve if the snapshot does not fit.
  void set_basis(const Basis& b);
  void reset_basis();

 private:
  struct Column {
    double cost = 0.0;
    double lower = 0.0;
    double upper = kInf;
    std::vector<Entry> entries;
  };
  struct Row {
    Sense sense = Sense::le;
    double rhs = 0.0;
  };

  std::vector<Column> cols_;
  std::vector<Row> rows_;
  Basis basis_;
};

}  // namespace fvrp::lp
