#pragma once

#include <cstdint>
#include <list>
#include <mutex>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "fairvrp/instance.hpp"

namespace fvrp {

/// Default cap on the number of customers a Held-Karp query may cover.
inline constexpr int kHeldKarpLimit = 20;

class HeldKarpCapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Shortest start -> (all of interior) -> end query. start == end is allowed
/// only with a nonempty interior (a closed tour).
struct PathQuery {
  int start = 0;
  int end = 0;
  CustomerMask interior = 0;
};

struct Tour {
  std::vector<int> order;
  double length = 0.0;
};

/// Exact subset DP. Ties within 1e-7 resolve to the lexicographically smallest order.
Tour held_karp_tour(const Instance& inst, std::span<const int> customers, int limit = kHeldKarpLimit);
double held_karp_path(const Instance& inst, const PathQuery& q, int limit = kHeldKarpLimit);

/// Held-Karp queries with a bounded LRU cache of path lengths. Thread-safe.
class TspOracle {
 public:
  explicit TspOracle(const Instance& inst, std::size_t cache_capacity = 1'000'000,
                     int limit = kHeldKarpLimit);

  const Instance& instance() const { return inst_; }

  Tour tour(std::span<const int> customers) const { return held_karp_tour(inst_, customers, limit_); }
  double path(const PathQuery& q) const;

  /// P = (v_1, ..., v_p), p >= 3, with customers only at v_2..v_{p-1}.
  /// True iff a reordering of the interior with the same endpoints is shorter by more than 1e-6.
  bool is_violating_path(std::span<const int> path) const;

  bool is_tsp_optimal(const Route& r) const;
  /// The Held-Karp tour over r's customers; r itself when r is already TSP-optimal.
  Route optimalize(const Route& r) const;

  std::size_t cache_size() const;
  std::uint64_t cache_hits() const { return hits_; }

 private:
  struct Key {
    int start;
    int end;
    CustomerMask interior;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      std::uint64_t h = k.interior * 0x9E3779B97F4A7C15ULL;
      h ^= (static_cast<std::uint64_t>(k.start) << 32) ^ static_cast<std::uint64_t>(k.end) * 0xBF58476D1CE4E5B9ULL;
      return static_cast<std::size_t>(h ^ (h >> 29));
    }
  };
  using LruList = std::list<std::pair<Key, double>>;

  const Instance& inst_;
  std::size_t capacity_;
  int limit_;
  mutable std::mutex mu_;
  mutable LruList lru_;
  mutable std::unordered_map<Key, LruList::iterator, KeyHash> index_;
  mutable std::uint64_t hits_ = 0;
};

bool is_tsp_violating_path(const Instance& inst, std::span<const int> path);
bool is_tsp_optimal_route(const Instance& inst, const Route& r);
Route tsp_optimalize_route(const Instance& inst, const Route& r);

}  // namespace fvrp
