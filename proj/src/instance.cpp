#include "fairvrp/instance.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace fvrp {

namespace {

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

template <typename T>
T parse_number(std::string_view tok, int line, const char* what) {
  T value{};
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError(line, std::string("invalid ") + what + " '" + std::string(tok) + "'");
  }
  return value;
}

}  // namespace

Instance Instance::from_coords(std::string name, std::vector<Point> coords,
                               std::vector<int> demand, int fleet, int capacity,
                               Rounding rounding) {
  Instance inst;
  inst.name_ = std::move(name);
  inst.n_ = static_cast<int>(coords.size()) - 1;
  inst.fleet_ = fleet;
  inst.capacity_ = capacity;
  inst.rounding_ = rounding;
  inst.coords_ = std::move(coords);
  inst.demand_ = std::move(demand);
  if (inst.n_ < 1 || inst.demand_.size() != inst.coords_.size()) {
    throw std::invalid_argument("instance needs a depot, at least one customer and one demand per node");
  }
  inst.demand_[0] = 0;
  inst.validate();
  inst.build_distances();
  return inst;
}

Instance Instance::from_matrix(std::string name, std::vector<double> matrix,
                               std::vector<int> demand, int fleet, int capacity) {
  Instance inst;
  inst.name_ = std::move(name);
  inst.n_ = static_cast<int>(demand.size()) - 1;
  inst.fleet_ = fleet;
  inst.capacity_ = capacity;
  inst.rounding_ = Rounding::exact;
  inst.demand_ = std::move(demand);
  if (inst.n_ < 1 || matrix.size() != inst.demand_.size() * inst.demand_.size()) {
    throw std::invalid_argument("distance matrix must be (n+1) x (n+1)");
  }
  inst.demand_[0] = 0;
  inst.validate();
  for (int i = 0; i <= inst.n_; ++i) {
    for (int j = 0; j <= inst.n_; ++j) {
      double d = matrix[static_cast<std::size_t>(i) * (inst.n_ + 1) + j];
      if (!(d >= 0.0) || (i == j && d != 0.0)) {
        throw std::invalid_argument("distances must be nonnegative with a zero diagonal");
      }
    }
  }
  inst.dist_ = std::move(matrix);
  return inst;
}

void Instance::validate() const {
  if (n_ > kMaxCustomers) throw std::invalid_argument("at most " + std::to_string(kMaxCustomers) + " customers are supported");
  if (fleet_ <= 0) throw std::invalid_argument("fleet size must be positive");
  if (capacity_ <= 0) throw std::invalid_argument("capacity must be positive");
  for (int i = 1; i <= n_; ++i) {
    if (demand_[i] < 1) throw std::invalid_argument("demand of customer " + std::to_string(i) + " must be positive");
    if (demand_[i] > capacity_) {
      throw std::invalid_argument("demand of customer " + std::to_string(i) + " exceeds capacity");
    }
  }
  if (static_cast<long long>(total_demand()) > static_cast<long long>(fleet_) * capacity_) {
    throw std::invalid_argument("total demand exceeds fleet capacity");
  }
}

void Instance::build_distances() {
  const int m = n_ + 1;
  dist_.assign(static_cast<std::size_t>(m) * m, 0.0);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      if (i == j) continue;
      double d = std::hypot(coords_[i].x - coords_[j].x, coords_[i].y - coords_[j].y);
      if (rounding_ == Rounding::nearest_int) d = std::nearbyint(d);
      dist_[static_cast<std::size_t>(i) * m + j] = d;
    }
  }
}

int Instance::total_demand() const { return std::accumulate(demand_.begin(), demand_.end(), 0); }

double Instance::budget() const {
  if (!budget_) throw std::logic_error("instance budget is not resolved");
  return *budget_;
}

CustomerMask Instance::all_customers() const {
  CustomerMask m = 0;
  for (int i = 1; i <= n_; ++i) m |= bit(i);
  return m;
}

Instance parse_instance(std::string_view text) {
  enum class Section { header, coords, demands, matrix };
  Section section = Section::header;

  std::string name = "unnamed";
  int n = -1, fleet = 0, capacity = 0;
  int n_line = 0, k_line = 0;
  std::optional<double> budget, budget_pct;
  Rounding rounding = Rounding::exact;
  std::vector<std::optional<Point>> coords;
  std::vector<std::optional<int>> demand;
  std::vector<int> demand_line;
  std::vector<double> matrix;
  int matrix_rows = 0;

  auto require_n = [&](int line) {
    if (n < 1) throw ParseError(line, "section before a valid N line");
  };

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto tok = split_ws(line);
    if (tok.empty()) {
      if (end == text.size()) break;
      continue;
    }

    const std::string_view key = tok[0];
    auto expect_args = [&](std::size_t count) {
      if (tok.size() != count + 1) throw ParseError(line_no, "malformed " + std::string(key) + " line");
    };

    if (key == "NAME") {
      expect_args(1);
      name = std::string(tok[1]);
      section = Section::header;
    } else if (key == "N") {
      expect_args(1);
      n = parse_number<int>(tok[1], line_no, "N");
      if (n < 1) throw ParseError(line_no, "N must be positive");
      if (n > kMaxCustomers) throw ParseError(line_no, "N exceeds " + std::to_string(kMaxCustomers));
      n_line = line_no;
      coords.assign(n + 1, std::nullopt);
      demand.assign(n + 1, std::nullopt);
      demand_line.assign(n + 1, 0);
      section = Section::header;
    } else if (key == "K") {
      expect_args(1);
      fleet = parse_number<int>(tok[1], line_no, "K");
      if (fleet <= 0) throw ParseError(line_no, "K must be positive");
      k_line = line_no;
      section = Section::header;
    } else if (key == "Q") {
      expect_args(1);
      capacity = parse_number<int>(tok[1], line_no, "Q");
      if (capacity <= 0) throw ParseError(line_no, "Q must be positive");
      section = Section::header;
    } else if (key == "BUDGET") {
      expect_args(1);
      budget = parse_number<double>(tok[1], line_no, "BUDGET");
      if (!(*budget > 0.0)) throw ParseError(line_no, "BUDGET must be positive");
      section = Section::header;
    } else if (key == "BUDGET_PCT") {
      expect_args(1);
      budget_pct = parse_number<double>(tok[1], line_no, "BUDGET_PCT");
      if (!(*budget_pct >= 100.0)) throw ParseError(line_no, "BUDGET_PCT must be at least 100");
      section = Section::header;
    } else if (key == "ROUNDING") {
      expect_args(1);
      if (tok[1] == "EXACT") {
        rounding = Rounding::exact;
      } else if (tok[1] == "INT") {
        rounding = Rounding::nearest_int;
      } else {
        throw ParseError(line_no, "ROUNDING must be EXACT or INT");
      }
      section = Section::header;
    } else if (key == "COORDS") {
      expect_args(0);
      require_n(line_no);
      section = Section::coords;
    } else if (key == "DEMANDS") {
      expect_args(0);
      require_n(line_no);
      section = Section::demands;
    } else if (key == "MATRIX") {
      expect_args(0);
      require_n(line_no);
      section = Section::matrix;
    } else if (key == "EOF") {
      break;
    } else if (section == Section::coords) {
      if (tok.size() != 3) throw ParseError(line_no, "coordinate line must be 'id x y'");
      int id = parse_number<int>(tok[0], line_no, "node id");
      if (id < 0 || id > n) throw ParseError(line_no, "node id out of range");
      if (coords[id]) throw ParseError(line_no, "duplicate coordinates for node " + std::to_string(id));
      coords[id] = Point{parse_number<double>(tok[1], line_no, "x"), parse_number<double>(tok[2], line_no, "y")};
    } else if (section == Section::demands) {
      if (tok.size() != 2) throw ParseError(line_no, "demand line must be 'id d'");
      int id = parse_number<int>(tok[0], line_no, "node id");
      if (id < 0 || id > n) throw ParseError(line_no, "node id out of range");
      int d = parse_number<int>(tok[1], line_no, "demand");
      if (id == 0) {
        if (d != 0) throw ParseError(line_no, "depot demand must be 0");
        continue;
      }
      if (d < 1) throw ParseError(line_no, "demand must be positive");
      if (demand[id]) throw ParseError(line_no, "duplicate demand for node " + std::to_string(id));
      demand[id] = d;
      demand_line[id] = line_no;
    } else if (section == Section::matrix) {
      if (static_cast<int>(tok.size()) != n + 1) throw ParseError(line_no, "matrix row must have N+1 entries");
      if (matrix_rows > n) throw ParseError(line_no, "too many matrix rows");
      for (auto t : tok) {
        double d = parse_number<double>(t, line_no, "distance");
        if (!(d >= 0.0)) throw ParseError(line_no, "distance must be nonnegative");
        matrix.push_back(d);
      }
      if (matrix[static_cast<std::size_t>(matrix_rows) * (n + 1) + matrix_rows] != 0.0) {
        throw ParseError(line_no, "diagonal distance must be 0");
      }
      ++matrix_rows;
    } else {
      throw ParseError(line_no, "unknown keyword '" + std::string(key) + "'");
    }
    if (end == text.size()) break;
  }

  if (n < 1) throw ParseError(line_no, "missing N");
  if (fleet <= 0) throw ParseError(line_no, "missing K");
  if (capacity <= 0) throw ParseError(line_no, "missing Q");

  std::vector<int> dem(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    if (!demand[i]) throw ParseError(line_no, "missing demand for customer " + std::to_string(i));
    if (*demand[i] > capacity) {
      throw ParseError(demand_line[i], "demand " + std::to_string(*demand[i]) + " of customer " +
                                           std::to_string(i) + " exceeds Q=" + std::to_string(capacity));
    }
    dem[i] = *demand[i];
  }
  long long total = std::accumulate(dem.begin(), dem.end(), 0LL);
  if (total > static_cast<long long>(fleet) * capacity) {
    throw ParseError(k_line, "total demand exceeds K*Q");
  }

  Instance inst;
  const bool any_coords = std::any_of(coords.begin(), coords.end(), [](const auto& c) { return c.has_value(); });
  if (matrix_rows > 0) {
    if (any_coords) throw ParseError(n_line, "give either COORDS or MATRIX, not both");
    if (matrix_rows != n + 1) throw ParseError(line_no, "matrix must have N+1 rows");
    inst = Instance::from_matrix(name, std::move(matrix), std::move(dem), fleet, capacity);
  } else {
    std::vector<Point> pts(n + 1);
    for (int i = 0; i <= n; ++i) {
      if (!coords[i]) throw ParseError(line_no, "missing coordinates for node " + std::to_string(i));
      pts[i] = *coords[i];
    }
    inst = Instance::from_coords(name, std::move(pts), std::move(dem), fleet, capacity, rounding);
  }
  if (budget) inst.set_budget(*budget);
  if (budget_pct) inst.set_budget_percentage(*budget_pct);
  return inst;
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str());
}

std::string emit_instance(const Instance& inst) {
  std::ostringstream out;
  out << "NAME " << inst.name() << "\n";
  out << "N " << inst.num_customers() << "\n";
  out << "K " << inst.fleet() << "\n";
  out << "Q " << inst.capacity() << "\n";
  if (inst.has_budget()) out << "BUDGET " << format_double(inst.budget()) << "\n";
  if (auto pct = inst.budget_percentage()) out << "BUDGET_PCT " << format_double(*pct) << "\n";
  if (inst.has_coords()) {
    out << "ROUNDING " << (inst.rounding() == Rounding::exact ? "EXACT" : "INT") << "\n";
    out << "COORDS\n";
    for (int i = 0; i < inst.num_nodes(); ++i) {
      out << i << " " << format_double(inst.coords()[i].x) << " " << format_double(inst.coords()[i].y) << "\n";
    }
  } else {
    out << "MATRIX\n";
    for (int i = 0; i < inst.num_nodes(); ++i) {
      for (int j = 0; j < inst.num_nodes(); ++j) {
        out << (j ? " " : "") << format_double(inst.distance(i, j));
      }
      out << "\n";
    }
  }
  out << "DEMANDS\n";
  for (int i = 1; i < inst.num_nodes(); ++i) out << i << " " << inst.demand(i) << "\n";
  return out.str();
}

double budget_from_percentage(double pct, double baseline) {
  if (!(pct >= 100.0)) throw std::invalid_argument("budget percentage must be at least 100");
  if (!(baseline > 0.0)) throw std::invalid_argument("baseline distance must be positive");
  return baseline * pct / 100.0;
}

double tour_length(const Instance& inst, std::span<const int> seq) {
  if (seq.empty()) return 0.0;
  double len = inst.distance(0, seq.front());
  for (std::size_t k = 1; k < seq.size(); ++k) len += inst.distance(seq[k - 1], seq[k]);
  return len + inst.distance(seq.back(), 0);
}

double path_length(const Instance& inst, std::span<const int> path) {
  double len = 0.0;
  for (std::size_t k = 1; k < path.size(); ++k) len += inst.distance(path[k - 1], path[k]);
  return len;
}

Route Route::make(const Instance& inst, std::vector<int> seq) {
  if (seq.empty()) throw std::invalid_argument("route must visit at least one customer");
  Route r;
  for (int c : seq) {
    if (c < 1 || c > inst.num_customers() || c > kMaxCustomers) {
      throw std::invalid_argument("route visits invalid customer " + std::to_string(c));
    }
    if (r.covered & bit(c)) throw std::invalid_argument("route is not elementary");
    r.covered |= bit(c);
    r.load += inst.demand(c);
  }
  r.length = tour_length(inst, seq);
  r.last = seq.back();
  r.seq = std::move(seq);
  return r;
}

bool Route::uses_arc(Arc a) const {
  if (a.from == 0) return !seq.empty() && seq.front() == a.to;
  if (a.to == 0) return !seq.empty() && seq.back() == a.from;
  for (std::size_t k = 1; k < seq.size(); ++k) {
    if (seq[k - 1] == a.from && seq[k] == a.to) return true;
  }
  return false;
}

std::vector<Arc> Route::arcs() const {
  std::vector<Arc> out;
  out.reserve(seq.size() + 1);
  int prev = 0;
  for (int c : seq) {
    out.push_back({prev, c});
    prev = c;
  }
  out.push_back({prev, 0});
  return out;
}

double solution_range(std::span<const Route> routes) {
  if (routes.empty()) return 0.0;
  auto [lo, hi] = std::minmax_element(routes.begin(), routes.end(),
                                      [](const Route& a, const Route& b) { return a.length < b.length; });
  return hi->length - lo->length;
}

double solution_distance(std::span<const Route> routes) {
  double total = 0.0;
  for (const auto& r : routes) total += r.length;
  return total;
}

bool is_feasible_solution(const Instance& inst, std::span<const Route> routes) {
  if (static_cast<int>(routes.size()) != inst.fleet()) return false;
  CustomerMask seen = 0;
  for (const auto& r : routes) {
    if (r.seq.empty() || r.load > inst.capacity()) return false;
    if (seen & r.covered) return false;
    seen |= r.covered;
  }
  if (seen != inst.all_customers()) return false;
  if (inst.has_budget() && solution_distance(routes) > inst.budget() + kLengthTol) return false;
  return true;
}

}  // namespace fvrp
