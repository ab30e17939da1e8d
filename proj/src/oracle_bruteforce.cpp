#include "fairvrp/oracle_bruteforce.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <map>

namespace fvrp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Ordering {
  double length;
  std::vector<int> seq;
};

// All visiting orders of one block, sorted by length.
class BlockTable {
 public:
  explicit BlockTable(const Instance& inst) : inst_(inst) {}

  const std::vector<Ordering>& orders(CustomerMask block) {
    auto it = cache_.find(block);
    if (it != cache_.end()) return it->second;
    std::vector<int> seq;
    for (int i = 1; i <= inst_.num_customers(); ++i) {
      if (block & bit(i)) seq.push_back(i);
    }
    std::vector<Ordering> out;
    do {
      out.push_back({tour_length(inst_, seq), seq});
    } while (std::next_permutation(seq.begin(), seq.end()));
    std::stable_sort(out.begin(), out.end(), [](const Ordering& a, const Ordering& b) { return a.length < b.length; });
    return cache_.emplace(block, std::move(out)).first->second;
  }

  double shortest(CustomerMask block) { return orders(block).front().length; }

 private:
  const Instance& inst_;
  std::map<CustomerMask, std::vector<Ordering>> cache_;
};

void check_limits(const Instance& inst) {
  if (inst.num_customers() > kOracleMaxCustomers || inst.fleet() > kOracleMaxFleet) {
    throw OracleLimitError("instance exceeds the enumeration limits");
  }
}

// Restricted-growth enumeration of partitions into exactly K capacity-feasible blocks.
void for_each_partition(const Instance& inst, const std::function<void(const std::vector<CustomerMask>&)>& visit) {
  const int n = inst.num_customers();
  const int K = inst.fleet();
  std::vector<CustomerMask> blocks;
  std::vector<int> loads;
  std::function<void(int)> rec = [&](int i) {
    if (static_cast<int>(blocks.size()) + (n - i + 1) < K) return;
    if (i > n) {
      if (static_cast<int>(blocks.size()) == K) visit(blocks);
      return;
    }
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      if (loads[b] + inst.demand(i) > inst.capacity()) continue;
      blocks[b] |= bit(i);
      loads[b] += inst.demand(i);
      rec(i + 1);
      blocks[b] &= ~bit(i);
      loads[b] -= inst.demand(i);
    }
    if (static_cast<int>(blocks.size()) < K) {
      blocks.push_back(bit(i));
      loads.push_back(inst.demand(i));
      rec(i + 1);
      blocks.pop_back();
      loads.pop_back();
    }
  };
  if (n >= K) rec(1);
}

double oracle_budget(const Instance& inst) {
  if (inst.has_budget()) return inst.budget();
  if (inst.budget_percentage()) {
    const auto base = enumerate(inst, OracleMode::mindist);
    if (!base.feasible) return kInf;
    return budget_from_percentage(*inst.budget_percentage(), base.value);
  }
  return kInf;
}

Route as_route(const Instance& inst, const std::vector<int>& seq) { return Route::make(inst, seq); }

}  // namespace

const char* to_string(OracleMode m) {
  switch (m) {
    case OracleMode::fcvrp: return "fcvrp";
    case OracleMode::fcvrp_tsp: return "fcvrp_tsp";
    case OracleMode::mindist: return "mindist";
  }
  return "unknown";
}

OracleMode parse_oracle_mode(const std::string& s) {
  if (s == "fcvrp") return OracleMode::fcvrp;
  if (s == "fcvrp_tsp" || s == "exact") return OracleMode::fcvrp_tsp;
  if (s == "mindist") return OracleMode::mindist;
  throw std::invalid_argument("unknown oracle mode: " + s);
}

EnumeratedOptimum enumerate(const Instance& inst, OracleMode mode) {
  check_limits(inst);
  const double L = mode == OracleMode::mindist ? kInf : oracle_budget(inst);
  BlockTable table(inst);
  EnumeratedOptimum best;
  best.value = kInf;

  for_each_partition(inst, [&](const std::vector<CustomerMask>& blocks) {
    double total_min = 0.0;
    for (CustomerMask b : blocks) total_min += table.shortest(b);
    if (total_min > L + kLengthTol) return;
    ++best.count_feasible;

    if (mode == OracleMode::mindist || mode == OracleMode::fcvrp_tsp) {
      double value = total_min;
      if (mode == OracleMode::fcvrp_tsp) {
        double hi = -kInf, lo = kInf;
        for (CustomerMask b : blocks) {
          hi = std::max(hi, table.shortest(b));
          lo = std::min(lo, table.shortest(b));
        }
        value = hi - lo;
      }
      if (value < best.value - 1e-12) {
        best.value = value;
        best.feasible = true;
        best.witness.clear();
        for (CustomerMask b : blocks) best.witness.push_back(as_route(inst, table.orders(b).front().seq));
      }
      return;
    }

    // fcvrp: try every attainable length as the shortest route and take the shortest
    // admissible order of every block.
    std::vector<const std::vector<Ordering>*> per;
    for (CustomerMask b : blocks) per.push_back(&table.orders(b));
    for (const auto* list : per) {
      for (const auto& cand : *list) {
        const double gamma = cand.length;
        double hi = -kInf, lo = kInf, total = 0.0;
        std::vector<const Ordering*> pick;
        bool ok = true;
        for (const auto* other : per) {
          auto it = std::lower_bound(other->begin(), other->end(), gamma,
                                     [](const Ordering& o, double g) { return o.length < g; });
          if (it == other->end()) {
            ok = false;
            break;
          }
          pick.push_back(&*it);
          hi = std::max(hi, it->length);
          lo = std::min(lo, it->length);
          total += it->length;
        }
        if (!ok || total > L + kLengthTol) continue;
        if (hi - lo < best.value - 1e-12) {
          best.value = hi - lo;
          best.feasible = true;
          best.witness.clear();
          for (const auto* o : pick) best.witness.push_back(as_route(inst, o->seq));
        }
      }
    }
  });
  if (!best.feasible) best.value = kInf;
  return best;
}

std::vector<std::vector<Route>> enumerate_tsp_solutions(const Instance& inst) {
  check_limits(inst);
  const double L = oracle_budget(inst);
  BlockTable table(inst);
  std::vector<std::vector<Route>> out;
  for_each_partition(inst, [&](const std::vector<CustomerMask>& blocks) {
    double total = 0.0;
    std::vector<std::vector<Route>> options;
    for (CustomerMask b : blocks) {
      const auto& orders = table.orders(b);
      const double best = orders.front().length;
      total += best;
      std::vector<Route> opt;
      for (const auto& o : orders) {
        if (o.length > best + kLengthTol) break;
        opt.push_back(as_route(inst, o.seq));
      }
      options.push_back(std::move(opt));
    }
    if (total > L + kLengthTol) return;
    std::vector<Route> current;
    std::function<void(std::size_t)> rec = [&](std::size_t k) {
      if (k == options.size()) {
        out.push_back(current);
        return;
      }
      for (const auto& r : options[k]) {
        current.push_back(r);
        rec(k + 1);
        current.pop_back();
      }
    };
    rec(0);
  });
  return out;
}

CutValidation validate_cuts(const Instance& inst, std::span<const Cut> cuts) {
  CutValidation report;
  check_limits(inst);
  if (cuts.empty()) return report;
  for (const auto& sol : enumerate_tsp_solutions(inst)) {
    ++report.solutions_checked;
    for (std::size_t k = 0; k < cuts.size(); ++k) {
      const double lhs = cuts[k].count(sol);
      bool ok = true;
      switch (cuts[k].sense) {
        case lp::Sense::le: ok = lhs <= cuts[k].rhs + 1e-9; break;
        case lp::Sense::ge: ok = lhs >= cuts[k].rhs - 1e-9; break;
        case lp::Sense::eq: ok = std::abs(lhs - cuts[k].rhs) <= 1e-9; break;
      }
      if (!ok) {
        report.clean = false;
        report.cut_index = static_cast<int>(k);
        report.witness = sol;
        return report;
      }
    }
  }
  return report;
}

}  // namespace fvrp
