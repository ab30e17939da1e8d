#include "fairvrp/node.hpp"

namespace fvrp {

std::vector<char> BnBNode::allowed_arcs(const Instance& inst) const {
  const int nn = inst.num_nodes();
  std::vector<char> ok(static_cast<std::size_t>(nn) * nn, 1);
  auto at = [&](int i, int j) -> char& { return ok[static_cast<std::size_t>(i) * nn + j]; };
  for (int i = 0; i < nn; ++i) at(i, i) = 0;
  for (const auto& a : forbidden_arcs) at(a.from, a.to) = 0;
  for (const auto& a : forced_arcs) {
    if (a.from != 0) {
      for (int k = 0; k < nn; ++k) {
        if (k != a.to) at(a.from, k) = 0;
      }
    }
    if (a.to != 0) {
      for (int k = 0; k < nn; ++k) {
        if (k != a.from) at(k, a.to) = 0;
      }
    }
  }
  for (int i = 1; i < nn; ++i) {
    if (last_forced & bit(i)) {
      for (int k = 1; k < nn; ++k) at(i, k) = 0;
    }
    if (last_forbidden & bit(i)) at(i, 0) = 0;
  }
  return ok;
}

bool BnBNode::admits(const Instance& inst, const Route& r) const {
  return admits(allowed_arcs(inst), inst.num_nodes(), r);
}

bool BnBNode::admits(const std::vector<char>& ok, int nn, const Route& r) const {
  if (r.length < len_lo || r.length > len_hi) return false;
  int prev = 0;
  for (int c : r.seq) {
    if (!ok[static_cast<std::size_t>(prev) * nn + c]) return false;
    prev = c;
  }
  return ok[static_cast<std::size_t>(prev) * nn] != 0;
}

BnBNode BnBNode::child(int new_id) const {
  BnBNode c = *this;
  c.id = new_id;
  c.parent = id;
  c.depth = depth + 1;
  return c;
}

}  // namespace fvrp
