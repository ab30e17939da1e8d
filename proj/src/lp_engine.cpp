#include "fairvrp/lp_engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fvrp::lp {

namespace {

enum State : std::int8_t { kBasic = 0, kAtLower = 1, kAtUpper = 2, kAtZero = 3 };

constexpr double kPivotTol = 1e-9;
constexpr double kSingularTol = 1e-11;

}  // namespace

const char* to_string(Status s) {
  switch (s) {
    case Status::optimal: return "optimal";
    case Status::infeasible: return "infeasible";
    case Status::unbounded: return "unbounded";
    case Status::iteration_limit: return "iteration_limit";
  }
  return "unknown";
}

int Model::add_column(double cost, double lower, double upper, std::span<const Entry> rows) {
  if (lower > upper) throw std::invalid_argument("column lower bound exceeds upper bound");
  Column c;
  c.cost = cost;
  c.lower = lower;
  c.upper = upper;
  for (const auto& e : rows) {
    if (e.index < 0 || e.index >= num_rows()) throw std::out_of_range("row index out of range");
    if (e.value != 0.0) c.entries.push_back(e);
  }
  std::sort(c.entries.begin(), c.entries.end(), [](const Entry& a, const Entry& b) { return a.index < b.index; });
  cols_.push_back(std::move(c));
  basis_.col_state.push_back(kAtLower);
  return num_cols() - 1;
}

int Model::add_row(Sense sense, double rhs, std::span<const Entry> cols) {
  const int row = num_rows();
  rows_.push_back({sense, rhs});
  for (const auto& e : cols) {
    if (e.index < 0 || e.index >= num_cols()) throw std::out_of_range("column index out of range");
    if (e.value != 0.0) cols_[e.index].entries.push_back({row, e.value});
  }
  basis_.head.push_back(-(row + 1));
  basis_.row_state.push_back(kBasic);
  return row;
}

void Model::set_bounds(int col, double lower, double upper) {
  if (lower > upper) throw std::invalid_argument("column lower bound exceeds upper bound");
  cols_.at(col).lower = lower;
  cols_[col].upper = upper;
}

void Model::set_cost(int col, double cost) { cols_.at(col).cost = cost; }

void Model::set_rhs(int row, double rhs) { rows_.at(row).rhs = rhs; }

Basis Model::basis() const { return basis_; }

void Model::set_basis(const Basis& b) {
  if (b.head.size() == rows_.size() && b.col_state.size() == cols_.size() && b.row_state.size() == rows_.size()) {
    basis_ = b;
  } else {
    reset_basis();
  }
}

void Model::reset_basis() {
  basis_.head.resize(rows_.size());
  for (int i = 0; i < num_rows(); ++i) basis_.head[i] = -(i + 1);
  basis_.col_state.assign(cols_.size(), kAtLower);
  basis_.row_state.assign(rows_.size(), kBasic);
}

namespace {

// Working state of one simplex run. Variables 0..n-1 are columns, n..n+m-1 row slacks.
class Simplex {
 public:
  Simplex(int n, int m, const Options& opt) : n_(n), m_(m), opt_(opt) {}

  int n_;
  int m_;
  Options opt_;
  std::vector<double> lo, up, cost;
  std::vector<const std::vector<Entry>*> entries;  // per structural
  std::vector<double> b;
  std::vector<std::int8_t> state;
  std::vector<int> head;
  std::vector<double> x;      // all variables
  std::vector<double> binv;   // column-major m x m
  int updates = 0;

  int total() const { return n_ + m_; }

  void column(int v, std::vector<double>& dense) const {
    std::fill(dense.begin(), dense.end(), 0.0);
    if (v < n_) {
      for (const auto& e : *entries[v]) dense[e.index] = e.value;
    } else {
      dense[v - n_] = 1.0;
    }
  }

  double dot_column(const std::vector<double>& y, int v) const {
    if (v >= n_) return y[v - n_];
    double s = 0.0;
    for (const auto& e : *entries[v]) s += y[e.index] * e.value;
    return s;
  }

  // alpha = B^-1 a_v
  void ftran(int v, std::vector<double>& alpha) const {
    std::fill(alpha.begin(), alpha.end(), 0.0);
    auto axpy = [&](int k, double val) {
      const double* col = &binv[static_cast<std::size_t>(k) * m_];
      for (int i = 0; i < m_; ++i) alpha[i] += val * col[i];
    };
    if (v < n_) {
      for (const auto& e : *entries[v]) axpy(e.index, e.value);
    } else {
      axpy(v - n_, 1.0);
    }
  }

  // y = c_B^T B^-1
  void btran(const std::vector<double>& cb, std::vector<double>& y) const {
    for (int k = 0; k < m_; ++k) {
      const double* col = &binv[static_cast<std::size_t>(k) * m_];
      double s = 0.0;
      for (int i = 0; i < m_; ++i) s += cb[i] * col[i];
      y[k] = s;
    }
  }

  bool factor() {
    const std::size_t mm = static_cast<std::size_t>(m_) * m_;
    std::vector<double> a(mm, 0.0);  // row-major B
    std::vector<double> inv(mm, 0.0);  // row-major identity -> B^-1
    std::vector<double> dense(m_);
    for (int k = 0; k < m_; ++k) {
      column(head[k], dense);
      for (int i = 0; i < m_; ++i) a[static_cast<std::size_t>(i) * m_ + k] = dense[i];
      inv[static_cast<std::size_t>(k) * m_ + k] = 1.0;
    }
    for (int k = 0; k < m_; ++k) {
      int p = k;
      double best = std::abs(a[static_cast<std::size_t>(k) * m_ + k]);
      for (int i = k + 1; i < m_; ++i) {
        double v = std::abs(a[static_cast<std::size_t>(i) * m_ + k]);
        if (v > best) {
          best = v;
          p = i;
        }
      }
      if (best < kSingularTol) return false;
      if (p != k) {
        std::swap_ranges(a.begin() + static_cast<std::ptrdiff_t>(p) * m_, a.begin() + static_cast<std::ptrdiff_t>(p + 1) * m_,
                         a.begin() + static_cast<std::ptrdiff_t>(k) * m_);
        std::swap_ranges(inv.begin() + static_cast<std::ptrdiff_t>(p) * m_, inv.begin() + static_cast<std::ptrdiff_t>(p + 1) * m_,
                         inv.begin() + static_cast<std::ptrdiff_t>(k) * m_);
      }
      const double piv = a[static_cast<std::size_t>(k) * m_ + k];
      for (int j = 0; j < m_; ++j) {
        a[static_cast<std::size_t>(k) * m_ + j] /= piv;
        inv[static_cast<std::size_t>(k) * m_ + j] /= piv;
      }
      for (int i = 0; i < m_; ++i) {
        if (i == k) continue;
        const double f = a[static_cast<std::size_t>(i) * m_ + k];
        if (f == 0.0) continue;
        for (int j = 0; j < m_; ++j) {
          a[static_cast<std::size_t>(i) * m_ + j] -= f * a[static_cast<std::size_t>(k) * m_ + j];
          inv[static_cast<std::size_t>(i) * m_ + j] -= f * inv[static_cast<std::size_t>(k) * m_ + j];
        }
      }
    }
    binv.assign(mm, 0.0);
    for (int i = 0; i < m_; ++i) {
      for (int j = 0; j < m_; ++j) binv[static_cast<std::size_t>(j) * m_ + i] = inv[static_cast<std::size_t>(i) * m_ + j];
    }
    updates = 0;
    return true;
  }

  void slack_basis() {
    for (int v = 0; v < n_; ++v) {
      if (state[v] == kBasic) state[v] = kAtLower;
    }
    for (int i = 0; i < m_; ++i) {
      head[i] = n_ + i;
      state[n_ + i] = kBasic;
    }
  }

  void fix_nonbasic_states() {
    for (int v = 0; v < total(); ++v) {
      if (state[v] == kBasic) continue;
      const bool has_lo = std::isfinite(lo[v]);
      const bool has_up = std::isfinite(up[v]);
      if (state[v] == kAtLower && has_lo) continue;
      if (state[v] == kAtUpper && has_up) continue;
      if (state[v] == kAtZero && !has_lo && !has_up) continue;
      state[v] = has_lo ? kAtLower : has_up ? kAtUpper : kAtZero;
    }
  }

  double nonbasic_value(int v) const {
    switch (state[v]) {
      case kAtLower: return lo[v];
      case kAtUpper: return up[v];
      default: return 0.0;
    }
  }

  void compute_primal() {
    std::vector<double> r = b;
    for (int v = 0; v < total(); ++v) {
      if (state[v] == kBasic) continue;
      x[v] = nonbasic_value(v);
      if (x[v] == 0.0) continue;
      if (v < n_) {
        for (const auto& e : *entries[v]) r[e.index] -= e.value * x[v];
      } else {
        r[v - n_] -= x[v];
      }
    }
    for (int i = 0; i < m_; ++i) {
      double s = 0.0;
      for (int k = 0; k < m_; ++k) s += binv[static_cast<std::size_t>(k) * m_ + i] * r[k];
      x[head[i]] = s;
    }
  }

  double infeasibility(int v) const {
    if (x[v] < lo[v] - opt_.primal_tol) return lo[v] - x[v];
    if (x[v] > up[v] + opt_.primal_tol) return x[v] - up[v];
    return 0.0;
  }

  void pivot(int r, const std::vector<double>& alpha) {
    const double ar = alpha[r];
    for (int k = 0; k < m_; ++k) {
      double* col = &binv[static_cast<std::size_t>(k) * m_];
      const double piv = col[r] / ar;
      if (piv != 0.0) {
        for (int i = 0; i < m_; ++i) col[i] -= alpha[i] * piv;
      }
      col[r] = piv;
    }
    ++updates;
  }

  Status run(int& iterations) {
    std::vector<double> cb(m_), y(m_), d(total(), 0.0), alpha(m_);
    int degenerate = 0;
    int recoveries = 0;
    const int limit = opt_.max_iterations > 0 ? opt_.max_iterations : 20000 + 50 * (n_ + m_);

    while (iterations < limit) {
      if (updates >= opt_.refactor_every) {
        if (!factor()) {
          slack_basis();
          factor();
        }
        compute_primal();
      }

      bool phase1 = false;
      for (int i = 0; i < m_; ++i) {
        const int v = head[i];
        if (x[v] < lo[v] - opt_.primal_tol) {
          cb[i] = -1.0;
          phase1 = true;
        } else if (x[v] > up[v] + opt_.primal_tol) {
          cb[i] = 1.0;
          phase1 = true;
        } else {
          cb[i] = 0.0;
        }
      }
      if (!phase1) {
        for (int i = 0; i < m_; ++i) cb[i] = cost[head[i]];
      }
      btran(cb, y);

      const bool bland = degenerate >= opt_.degenerate_switch;
      int enter = -1;
      double best = 0.0;
      for (int v = 0; v < total(); ++v) {
        if (state[v] == kBasic || lo[v] == up[v]) continue;
        const double cv = phase1 ? 0.0 : cost[v];
        const double dv = cv - dot_column(y, v);
        d[v] = dv;
        bool eligible = false;
        switch (state[v]) {
          case kAtLower: eligible = dv < -opt_.dual_tol; break;
          case kAtUpper: eligible = dv > opt_.dual_tol; break;
          default: eligible = std::abs(dv) > opt_.dual_tol; break;
        }
        if (!eligible) continue;
        if (bland) {
          enter = v;
          break;
        }
        if (std::abs(dv) > best) {
          best = std::abs(dv);
          enter = v;
        }
      }

      if (enter < 0) {
        if (updates > 0 && recoveries < 3) {
          // Confirm on a fresh factorization before concluding.
          ++recoveries;
          if (!factor()) {
            slack_basis();
            factor();
          }
          compute_primal();
          continue;
        }
        return phase1 ? Status::infeasible : Status::optimal;
      }

      const double dir = d[enter] < 0.0 ? 1.0 : -1.0;
      ftran(enter, alpha);

      // Harris two-pass ratio test. In phase 1 an infeasible basic blocks only where it becomes feasible.
      const double tol = opt_.primal_tol;
      double tmax = kInf;
      for (int i = 0; i < m_; ++i) {
        if (std::abs(alpha[i]) < kPivotTol) continue;
        const int v = head[i];
        const double delta = -dir * alpha[i];
        double t = kInf;
        if (delta < 0.0) {
          if (x[v] > up[v] + tol) {
            t = (x[v] - up[v] + tol) / -delta;
          } else if (x[v] >= lo[v] - tol && std::isfinite(lo[v])) {
            t = (x[v] - lo[v] + tol) / -delta;
          }
        } else {
          if (x[v] < lo[v] - tol) {
            t = (lo[v] - x[v] + tol) / delta;
          } else if (x[v] <= up[v] + tol && std::isfinite(up[v])) {
            t = (up[v] - x[v] + tol) / delta;
          }
        }
        tmax = std::min(tmax, t);
      }
      int leave = -1;
      double step = kInf;
      bool leave_to_upper = false;
      double best_pivot = 0.0;
      for (int i = 0; i < m_; ++i) {
        if (std::abs(alpha[i]) < kPivotTol) continue;
        const int v = head[i];
        const double delta = -dir * alpha[i];
        double t = kInf;
        bool to_upper = false;
        if (delta < 0.0) {
          if (x[v] > up[v] + tol) {
            t = (x[v] - up[v]) / -delta;
            to_upper = true;
          } else if (x[v] >= lo[v] - tol && std::isfinite(lo[v])) {
            t = (x[v] - lo[v]) / -delta;
          }
        } else {
          if (x[v] < lo[v] - tol) {
            t = (lo[v] - x[v]) / delta;
          } else if (x[v] <= up[v] + tol && std::isfinite(up[v])) {
            t = (up[v] - x[v]) / delta;
            to_upper = true;
          }
        }
        if (std::isfinite(t) && t <= tmax && std::abs(alpha[i]) > best_pivot) {
          best_pivot = std::abs(alpha[i]);
          leave = i;
          step = std::max(t, 0.0);
          leave_to_upper = to_upper;
        }
      }

      const double flip = up[enter] - lo[enter];
      if (std::isfinite(flip) && flip <= step) {
        // Bound flip of the entering variable; basis unchanged.
        const double t = flip;
        for (int i = 0; i < m_; ++i) x[head[i]] -= dir * t * alpha[i];
        state[enter] = state[enter] == kAtLower ? kAtUpper : kAtLower;
        x[enter] = nonbasic_value(enter);
        ++iterations;
        degenerate = t <= 1e-12 ? degenerate + 1 : 0;
        continue;
      }
      if (leave < 0) {
        if (phase1 || updates > 0) {
          if (recoveries++ >= 3) return Status::iteration_limit;
          if (!factor()) {
            slack_basis();
            factor();
          }
          compute_primal();
          continue;
        }
        return Status::unbounded;
      }

      for (int i = 0; i < m_; ++i) x[head[i]] -= dir * step * alpha[i];
      x[enter] += dir * step;
      const int out = head[leave];
      state[out] = leave_to_upper ? kAtUpper : kAtLower;
      if (!std::isfinite(leave_to_upper ? up[out] : lo[out])) state[out] = kAtZero;
      x[out] = nonbasic_value(out);
      head[leave] = enter;
      state[enter] = kBasic;
      pivot(leave, alpha);
      ++iterations;
      degenerate = step <= 1e-12 ? degenerate + 1 : 0;
    }
    return Status::iteration_limit;
  }
};

}  // namespace

Solution Model::solve(const Options& opt) {
  if (cols_.empty()) throw std::invalid_argument("LP model needs at least one column");
  const int n = num_cols();
  const int m = num_rows();
  Solution sol;

  Simplex s(n, m, opt);
  s.lo.resize(n + m);
  s.up.resize(n + m);
  s.cost.assign(n + m, 0.0);
  s.entries.resize(n);
  for (int j = 0; j < n; ++j) {
    s.lo[j] = cols_[j].lower;
    s.up[j] = cols_[j].upper;
    s.cost[j] = cols_[j].cost;
    s.entries[j] = &cols_[j].entries;
  }
  s.b.resize(m);
  for (int i = 0; i < m; ++i) {
    s.b[i] = rows_[i].rhs;
    switch (rows_[i].sense) {
      case Sense::le: s.lo[n + i] = 0.0; s.up[n + i] = kInf; break;
      case Sense::ge: s.lo[n + i] = -kInf; s.up[n + i] = 0.0; break;
      case Sense::eq: s.lo[n + i] = 0.0; s.up[n + i] = 0.0; break;
    }
  }

  if (basis_.head.size() != rows_.size() || basis_.col_state.size() != cols_.size() ||
      basis_.row_state.size() != rows_.size()) {
    reset_basis();
  }
  s.state.resize(n + m);
  s.head.resize(m);
  for (int j = 0; j < n; ++j) s.state[j] = basis_.col_state[j];
  for (int i = 0; i < m; ++i) s.state[n + i] = basis_.row_state[i];
  bool consistent = true;
  std::vector<char> seen(n + m, 0);
  for (int i = 0; i < m; ++i) {
    const int enc = basis_.head[i];
    const int v = enc >= 0 ? enc : n + (-enc - 1);
    if (v < 0 || v >= n + m || seen[v]) {
      consistent = false;
      break;
    }
    seen[v] = 1;
    s.head[i] = v;
  }
  if (consistent) {
    for (int v = 0; v < n + m; ++v) {
      if ((s.state[v] == kBasic) != static_cast<bool>(seen[v])) consistent = false;
    }
  }
  if (!consistent) {
    for (int j = 0; j < n; ++j) s.state[j] = kAtLower;
    s.slack_basis();
  }
  s.fix_nonbasic_states();
  s.x.assign(n + m, 0.0);
  if (!s.factor()) {
    s.slack_basis();
    s.fix_nonbasic_states();
    s.factor();
  }
  s.compute_primal();

  int iterations = 0;
  Status status = s.run(iterations);

  // Final certification on a fresh factorization.
  if (!s.factor()) {
    s.slack_basis();
    s.fix_nonbasic_states();
    s.factor();
    status = Status::iteration_limit;
  }
  s.compute_primal();

  std::vector<double> cb(m), y(m, 0.0);
  for (int i = 0; i < m; ++i) cb[i] = s.cost[s.head[i]];
  if (m > 0) s.btran(cb, y);

  sol.iterations = iterations;
  sol.x.assign(s.x.begin(), s.x.begin() + n);
  sol.duals = y;
  sol.reduced.resize(n);
  double obj = 0.0;
  for (int j = 0; j < n; ++j) {
    obj += s.cost[j] * s.x[j];
    sol.reduced[j] = s.cost[j] - s.dot_column(y, j);
  }
  sol.objective = obj;

  // Primal residual: row senses and column bounds, computed from scratch.
  double residual = 0.0;
  std::vector<double> act(m, 0.0);
  for (int j = 0; j < n; ++j) {
    for (const auto& e : cols_[j].entries) act[e.index] += e.value * s.x[j];
    residual = std::max({residual, cols_[j].lower - s.x[j], s.x[j] - cols_[j].upper});
  }
  for (int i = 0; i < m; ++i) {
    const double diff = act[i] - rows_[i].rhs;
    switch (rows_[i].sense) {
      case Sense::le: residual = std::max(residual, diff); break;
      case Sense::ge: residual = std::max(residual, -diff); break;
      case Sense::eq: residual = std::max(residual, std::abs(diff)); break;
    }
  }
  sol.primal_residual = residual;

  double dual_inf = 0.0;
  for (int v = 0; v < n + m; ++v) {
    if (s.state[v] == kBasic || s.lo[v] == s.up[v]) continue;
    const double dv = v < n ? sol.reduced[v] : -y[v - n];
    switch (s.state[v]) {
      case kAtLower: dual_inf = std::max(dual_inf, -dv); break;
      case kAtUpper: dual_inf = std::max(dual_inf, dv); break;
      default: dual_inf = std::max(dual_inf, std::abs(dv)); break;
    }
  }
  sol.dual_infeasibility = dual_inf;

  if (status == Status::optimal && (residual > 1e-7 || dual_inf > 1e-6)) status = Status::iteration_limit;
  sol.status = status;

  basis_.head.resize(m);
  for (int i = 0; i < m; ++i) {
    const int v = s.head[i];
    basis_.head[i] = v < n ? v : -(v - n + 1);
  }
  basis_.col_state.assign(s.state.begin(), s.state.begin() + n);
  basis_.row_state.assign(s.state.begin() + n, s.state.end());
  return sol;
}

}  // namespace fvrp::lp
