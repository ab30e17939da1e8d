#include "fairvrp/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <thread>

namespace fvrp {

namespace {

constexpr double kTie = 1e-9;

struct Label {
  int node = 0;
  int load = 0;
  double rc = 0.0;
  double dist = 0.0;
  CustomerMask mem = 0;
  int pred = -1;
  bool alive = true;
};

class Buckets {
 public:
  Buckets(int num_nodes, int capacity) : cap_(capacity + 1), ids_(static_cast<std::size_t>(num_nodes) * cap_) {}
  std::vector<int>& at(int node, int load) { return ids_[static_cast<std::size_t>(node) * cap_ + load]; }

 private:
  int cap_;
  std::vector<std::vector<int>> ids_;
};

// Dijkstra on a dense matrix; `weight(u, v)` returns +inf for unusable arcs.
template <class W>
std::vector<double> shortest_from(int n, int source, W weight) {
  std::vector<double> dist(n, lp::kInf);
  std::vector<char> done(n, 0);
  dist[source] = 0.0;
  for (int it = 0; it < n; ++it) {
    int u = -1;
    for (int v = 0; v < n; ++v) {
      if (!done[v] && dist[v] < lp::kInf && (u < 0 || dist[v] < dist[u])) u = v;
    }
    if (u < 0) break;
    done[u] = 1;
    for (int v = 0; v < n; ++v) {
      const double w = weight(u, v);
      if (w < lp::kInf && dist[u] + w < dist[v]) dist[v] = dist[u] + w;
    }
  }
  return dist;
}

}  // namespace

NgSets::NgSets(const Instance& inst, int ng_size) : sets_(inst.num_nodes(), 0) {
  const int n = inst.num_customers();
  for (int i = 1; i <= n; ++i) {
    std::vector<int> others;
    for (int j = 1; j <= n; ++j) {
      if (j != i) others.push_back(j);
    }
    std::stable_sort(others.begin(), others.end(),
                     [&](int a, int b) { return inst.distance(i, a) < inst.distance(i, b); });
    sets_[i] = bit(i);
    for (int k = 0; k < std::min<int>(ng_size - 1, static_cast<int>(others.size())); ++k) sets_[i] |= bit(others[k]);
  }
}

void NgSets::merge(const NgSets& other) {
  if (sets_.size() < other.sets_.size()) sets_.resize(other.sets_.size(), 0);
  for (std::size_t i = 0; i < other.sets_.size(); ++i) sets_[i] |= other.sets_[i];
}

LoadExpandedGraph build_graph(const Instance& inst, int last, const BnBNode& node, const DualValues& duals,
                              std::span<const double> arc_dual) {
  LoadExpandedGraph g;
  g.last = last;
  const int nn = inst.num_nodes();
  const int Q = inst.capacity();
  g.layers.assign(nn, 0);
  if (!node.pricing_enabled(last)) return g;
  const auto ok = node.allowed_arcs(inst);
  auto allowed = [&](int i, int j) { return ok[static_cast<std::size_t>(i) * nn + j] != 0; };
  auto ad = [&](int i, int j) { return arc_dual.empty() ? 0.0 : arc_dual[static_cast<std::size_t>(i) * nn + j]; };
  const double c = duals.length_weight + duals.lambda + duals.alpha[last] - duals.beta[last];

  std::vector<int> first(nn, -1);
  g.vertices.push_back({0, 0});
  for (int v = 1; v < nn; ++v) {
    g.layers[v] = Q - inst.demand(v) + 1;
    first[v] = static_cast<int>(g.vertices.size());
    for (int q = inst.demand(v); q <= Q; ++q) g.vertices.push_back({v, q});
  }
  auto vertex = [&](int v, int q) { return first[v] + q - inst.demand(v); };
  auto cost = [&](int u, int v) { return c * inst.distance(u, v) - duals.mu[v] - ad(u, v); };

  for (int v = 1; v < nn; ++v) {
    if (allowed(0, v)) g.edges.push_back({0, vertex(v, inst.demand(v)), cost(0, v)});
  }
  for (int u = 1; u < nn; ++u) {
    if (u == last) continue;
    for (int q = inst.demand(u); q <= Q; ++q) {
      for (int v = 1; v < nn; ++v) {
        if (v == u || !allowed(u, v) || q + inst.demand(v) > Q) continue;
        g.edges.push_back({vertex(u, q), vertex(v, q + inst.demand(v)), cost(u, v)});
      }
    }
  }
  g.sink_constant = allowed(last, 0)
                        ? c * inst.distance(last, 0) - ad(last, 0) + duals.big_m * duals.beta[last] - duals.sigma
                        : lp::kInf;
  return g;
}

std::uint64_t topology_signature(const Instance& inst, const BnBNode& node) {
  const DualValues zero = DualValues::zero(inst.num_customers());
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&](std::uint64_t v) {
    h ^= v + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
  };
  for (int last = 1; last <= inst.num_customers(); ++last) {
    const auto g = build_graph(inst, last, node, zero, {});
    mix(static_cast<std::uint64_t>(last));
    mix(g.vertices.size());
    for (const auto& e : g.edges) mix((static_cast<std::uint64_t>(e.from) << 32) | static_cast<std::uint32_t>(e.to));
  }
  return h;
}

Pricer::Pricer(const Instance& inst, const BnBNode& node, NgSets& ng, PricingOptions opt)
    : inst_(inst), node_(node), ng_(ng), opt_(opt), nn_(inst.num_nodes()), allowed_(node.allowed_arcs(inst)) {
  to_end_.assign(nn_, std::vector<double>(nn_, lp::kInf));
  from_depot_.assign(nn_, std::vector<double>(nn_, lp::kInf));
  for (int last = 1; last < nn_; ++last) {
    if (!node_.pricing_enabled(last) || !allowed(last, 0)) continue;
    // Reverse search toward `last` through customers only.
    auto back = shortest_from(nn_, last, [&](int v, int u) {
      if (u == 0 || v == 0 || (u == last) || !allowed(u, v)) return lp::kInf;
      return inst_.distance(u, v);
    });
    auto& te = to_end_[last];
    for (int u = 1; u < nn_; ++u) te[u] = back[u] + inst_.distance(last, 0);
    for (int v = 1; v < nn_; ++v) {
      if (allowed(0, v)) te[0] = std::min(te[0], inst_.distance(0, v) + te[v]);
    }
    auto fwd = shortest_from(nn_, 0, [&](int u, int v) {
      if (v == 0 || v == last || u == last || !allowed(u, v)) return lp::kInf;
      return inst_.distance(u, v);
    });
    auto& fd = from_depot_[last];
    fd[0] = 0.0;
    for (int v = 1; v < nn_; ++v) {
      if (v != last) fd[v] = fwd[v];
    }
    for (int u = 0; u < nn_; ++u) {
      if (u != last && fd[u] < lp::kInf && allowed(u, last)) fd[last] = std::min(fd[last], fd[u] + inst_.distance(u, last));
    }
  }
}

double Pricer::completion_bound(int last, int node) const { return to_end_[last][node]; }
double Pricer::prefix_bound(int last, int node) const { return from_depot_[last][node]; }

PricingResult Pricer::price(int last, const DualValues& duals, std::span<const double> arc_dual) const {
  NgSets local = ng_;
  PricingResult r = run(last, duals, arc_dual, local);
  r.grown = std::move(local);
  return r;
}

PricingResult Pricer::run(int last, const DualValues& duals, std::span<const double> arc_dual, NgSets& ng) const {
  PricingResult res;
  res.last = last;
  if (!node_.pricing_enabled(last) || !allowed(last, 0)) {
    res.skipped = true;
    return res;
  }
  const int n = inst_.num_customers();
  const int Q = inst_.capacity();
  const int dl = inst_.demand(last);
  const double len_lo = node_.len_lo;
  const double len_hi = node_.len_hi;
  const bool bounded_hi = len_hi < lp::kInf;
  const bool bounded_lo = len_lo > 0.0;
  const double c = duals.length_weight + duals.lambda + duals.alpha[last] - duals.beta[last];
  const double sink = duals.big_m * duals.beta[last] - duals.sigma;
  auto ad = [&](int i, int j) { return arc_dual.empty() ? 0.0 : arc_dual[static_cast<std::size_t>(i) * nn_ + j]; };
  auto dist = [&](int i, int j) { return inst_.distance(i, j); };
  const auto& te = to_end_[last];
  const auto& fd = from_depot_[last];
  if (fd[last] + dist(last, 0) > len_hi + kTie) return res;

  const double half = opt_.bidirectional ? Q / 2.0 : static_cast<double>(Q);
  const int cap_f = Q - dl;

  auto dominates = [&](const Label& e, const Label& l) {
    if (e.rc > l.rc + kTie) return false;
    if ((e.mem & ~l.mem) != 0) return false;
    if (bounded_hi && e.dist > l.dist + kTie) return false;
    if (bounded_lo && e.dist < l.dist - kTie) return false;
    return true;
  };
  auto insert = [&](std::vector<Label>& pool, Buckets& b, Label lab) {
    auto& bucket = b.at(lab.node, lab.load);
    if (opt_.dominance) {
      for (int id : bucket) {
        if (pool[id].alive && dominates(pool[id], lab)) return;
      }
      for (int id : bucket) {
        if (pool[id].alive && dominates(lab, pool[id])) pool[id].alive = false;
      }
      std::erase_if(bucket, [&](int id) { return !pool[id].alive; });
    }
    bucket.push_back(static_cast<int>(pool.size()));
    pool.push_back(lab);
  };

  for (;;) {
    ++res.dssr_rounds;
    std::vector<Label> fwd, bwd;
    Buckets fb(nn_, Q), bb(nn_, Q);

    insert(fwd, fb, Label{0, 0, 0.0, 0.0, 0, -1, true});
    for (int q = 0; q <= cap_f; ++q) {
      if (q > half) break;
      for (int u = 0; u <= n; ++u) {
        if (u == last) continue;
        const std::vector<int> ids = fb.at(u, q);
        for (int id : ids) {
          if (!fwd[id].alive) continue;
          const Label cur = fwd[id];
          for (int v = 1; v <= n; ++v) {
            if (v == last || v == u || !allowed(u, v) || (cur.mem & bit(v))) continue;
            const int nq = q + inst_.demand(v);
            if (nq > cap_f) continue;
            const double nd = cur.dist + dist(u, v);
            if (nd + te[v] > len_hi + kTie) continue;
            Label next{v, nq, cur.rc + c * dist(u, v) - duals.mu[v] - ad(u, v), nd, (cur.mem & ng.of(v)) | bit(v), id, true};
            insert(fwd, fb, next);
          }
        }
      }
    }

    insert(bwd, bb, Label{last, dl, c * dist(last, 0) - ad(last, 0), dist(last, 0), bit(last), -1, true});
    if (opt_.bidirectional) {
      for (int q = dl; q <= Q; ++q) {
        if (q > half) break;
        for (int v = 1; v <= n; ++v) {
          const std::vector<int> ids = bb.at(v, q);
          for (int id : ids) {
            if (!bwd[id].alive) continue;
            const Label cur = bwd[id];
            for (int w = 1; w <= n; ++w) {
              if (w == last || w == v || !allowed(w, v) || (cur.mem & bit(w))) continue;
              const int nq = q + inst_.demand(w);
              if (nq > Q) continue;
              const double nd = cur.dist + dist(w, v);
              if (nd + fd[w] > len_hi + kTie) continue;
              Label next{w, nq, cur.rc + c * dist(w, v) - duals.mu[v] - ad(w, v), nd, (cur.mem & ng.of(w)) | bit(w), id, true};
              insert(bwd, bb, next);
            }
          }
        }
      }
    }
    res.labels += static_cast<long>(fwd.size() + bwd.size());

    // Backward labels grouped by node for the join.
    std::vector<std::vector<int>> at_node(nn_);
    for (int id = 0; id < static_cast<int>(bwd.size()); ++id) {
      if (bwd[id].alive) at_node[bwd[id].node].push_back(id);
    }

    auto rebuild = [&](int f, int b) {
      std::vector<int> seq;
      for (int id = f; id >= 0 && fwd[id].node != 0; id = fwd[id].pred) seq.push_back(fwd[id].node);
      std::reverse(seq.begin(), seq.end());
      for (int id = b; id >= 0; id = bwd[id].pred) seq.push_back(bwd[id].node);
      return seq;
    };

    double best = lp::kInf;
    int best_f = -1, best_b = -1;
    std::map<std::vector<int>, double> found;
    for (int f = 0; f < static_cast<int>(fwd.size()); ++f) {
      const Label& fl = fwd[f];
      if (!fl.alive) continue;
      for (int v = 1; v <= n; ++v) {
        if (v == fl.node || !allowed(fl.node, v)) continue;
        const double link = c * dist(fl.node, v) - duals.mu[v] - ad(fl.node, v);
        for (int b : at_node[v]) {
          const Label& bl = bwd[b];
          if (!opt_.bidirectional && b != 0) continue;
          if (fl.load + bl.load > Q || (fl.mem & bl.mem)) continue;
          const double total = fl.dist + dist(fl.node, v) + bl.dist;
          if (total > len_hi + kTie || total < len_lo - kTie) continue;
          const double rc = fl.rc + link + bl.rc + sink;
          if (rc < best) {
            best = rc;
            best_f = f;
            best_b = b;
          }
          if (rc < -opt_.rc_tol) {
            auto seq = rebuild(f, b);
            CustomerMask seen = 0;
            bool elementary = true;
            for (int x : seq) {
              if (seen & bit(x)) elementary = false;
              seen |= bit(x);
            }
            if (!elementary) continue;
            auto [it, fresh] = found.emplace(std::move(seq), rc);
            if (!fresh) it->second = std::min(it->second, rc);
          }
        }
      }
    }
    res.best_rc = best;
    res.best_elementary = true;
    if (best_f >= 0 && best < -opt_.rc_tol) {
      auto seq = rebuild(best_f, best_b);
      std::vector<int> pos(nn_, -1);
      bool grew = false;
      for (int k = 0; k < static_cast<int>(seq.size()); ++k) {
        const int x = seq[k];
        if (pos[x] >= 0) {
          res.best_elementary = false;
          for (int m = pos[x] + 1; m < k; ++m) {
            if (!(ng.of(seq[m]) & bit(x))) {
              ng.add(seq[m], x);
              grew = true;
            }
          }
        }
        pos[x] = k;
      }
      if (!res.best_elementary && grew) continue;
    }

    for (auto& [seq, rc] : found) {
      Route r = Route::make(inst_, seq);
      if (r.load > Q || !node_.admits(allowed_, nn_, r)) continue;
      res.routes.push_back({std::move(r), rc});
    }
    std::stable_sort(res.routes.begin(), res.routes.end(), [](const PricedRoute& a, const PricedRoute& b) { return a.rc < b.rc; });
    if (static_cast<int>(res.routes.size()) > opt_.k_best) res.routes.resize(opt_.k_best);
    return res;
  }
}

std::vector<PricedRoute> Pricer::price_all(const DualValues& duals, std::span<const double> arc_dual,
                                           std::vector<PricingResult>* per_last) {
  const int n = inst_.num_customers();
  std::vector<PricingResult> results(n + 1);
  const int workers = std::max(1, std::min(opt_.threads, n));
  if (workers == 1) {
    for (int last = 1; last <= n; ++last) results[last] = price(last, duals, arc_dual);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (int last = 1 + w; last <= n; last += workers) results[last] = price(last, duals, arc_dual);
      });
    }
    for (auto& t : pool) t.join();
  }
  std::vector<PricedRoute> all;
  for (int last = 1; last <= n; ++last) {
    ng_.merge(results[last].grown);
    for (auto& pr : results[last].routes) all.push_back(pr);
  }
  std::stable_sort(all.begin(), all.end(), [](const PricedRoute& a, const PricedRoute& b) {
    return a.rc < b.rc || (a.rc == b.rc && a.route.seq < b.route.seq);
  });
  if (per_last) {
    results.erase(results.begin());
    *per_last = std::move(results);
  }
  return all;
}

}  // namespace fvrp
