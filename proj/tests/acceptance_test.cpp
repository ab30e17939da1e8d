#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "fairvrp/bnb.hpp"
#include "fairvrp/oracle_bruteforce.hpp"
#include "fairvrp/tsp_oracle.hpp"
#include "testing.hpp"

using namespace fvrp;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
  std::printf("criterion %d %s: %s\n", id, ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string format(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

struct SuiteRun {
  EnumeratedOptimum oracle;
  SolveResult both;
  SolveResult none;
  SolveResult post;
  double oracle_s = 0.0;
};

struct Certificates {
  double min_rc = lp::kInf;
  double min_gain = lp::kInf;
  long lifted_checks = 0;
  long solves = 0;

  void add(const SolveResult& r) {
    min_rc = std::min(min_rc, r.stats.min_certificate_rc);
    if (r.stats.lifted_checks > 0) min_gain = std::min(min_gain, r.stats.min_lifting_gain);
    lifted_checks += r.stats.lifted_checks;
    ++solves;
  }
};

}  // namespace

int main() {
  Certificates cert;

  // 1: the two-vehicle fixture.
  const Instance fig = fixture::fig1();
  SolverConfig exact_cfg;
  SolveResult fig_post;
  SolveResult fig_exact;
  {
    const double ra = solution_range(fixture::fig1_solution_a(fig));
    const double rb = solution_range(fixture::fig1_solution_b(fig));
    const auto t0 = Clock::now();
    fig_exact = solve(fig, exact_cfg);
    SolverConfig fc;
    fc.mode = SolveMode::fcvrp;
    const SolveResult fig_free = solve(fig, fc);
    const double solve_s = since(t0);
    const auto tsp_opt = enumerate(fig, OracleMode::fcvrp_tsp);
    const auto free_opt = enumerate(fig, OracleMode::fcvrp);
    SolverConfig pc;
    pc.mode = SolveMode::postprocess;
    fig_post = solve(fig, pc);
    cert.add(fig_exact);
    cert.add(fig_free);
    cert.add(fig_post);
    const bool ok = std::abs(ra - 227.0) <= 1.0 && std::abs(rb - 87.0) <= 1.0 &&
                    fig_exact.status == SolveStatus::optimal && std::abs(fig_exact.ub - 227.0) <= 1.0 &&
                    fig_free.status == SolveStatus::optimal && std::abs(fig_free.ub - 87.0) <= 1.0 &&
                    std::abs(fig_exact.ub - tsp_opt.value) <= 1e-6 && std::abs(fig_free.ub - free_opt.value) <= 1e-6 &&
                    solve_s < 5.0;
    report(1, ok,
           format("depicted ranges %.2f / %.2f, exact %.4f (oracle %.4f), fcvrp %.4f (oracle %.4f), %.2f s", ra, rb,
                  fig_exact.ub, tsp_opt.value, fig_free.ub, free_opt.value, solve_s));
  }

  // Shared runs over the seeded suite.
  const auto suite = fixture::acceptance_suite(50);
  std::vector<SuiteRun> runs(suite.size());
  double exact_s = 0.0, oracle_s = 0.0;
  for (std::size_t k = 0; k < suite.size(); ++k) {
    const Instance& inst = suite[k].inst;
    SuiteRun& run = runs[k];
    auto t0 = Clock::now();
    run.oracle = enumerate(inst, OracleMode::fcvrp_tsp);
    run.oracle_s = since(t0);
    oracle_s += run.oracle_s;

    SolverConfig both;
    both.record_cuts = k < 20;
    t0 = Clock::now();
    run.both = solve(inst, both);
    exact_s += since(t0);

    SolverConfig none;
    none.lifting = Lifting::none;
    run.none = solve(inst, none);

    SolverConfig post;
    post.mode = SolveMode::postprocess;
    run.post = solve(inst, post);

    cert.add(run.both);
    cert.add(run.none);
    cert.add(run.post);
  }

  // 2: exact mode against exhaustive enumeration.
  {
    int matched = 0;
    double worst = 0.0;
    for (const auto& run : runs) {
      const bool ok = run.oracle.feasible && run.both.status == SolveStatus::optimal &&
                      std::abs(run.both.ub - run.oracle.value) <= 1e-6;
      matched += ok;
      if (run.oracle.feasible && run.both.status == SolveStatus::optimal) {
        worst = std::max(worst, std::abs(run.both.ub - run.oracle.value));
      }
    }
    const double total = exact_s + oracle_s;
    report(2, matched == static_cast<int>(runs.size()) && total < 600.0,
           format("%d/%zu match, max deviation %.2e, solve %.1f s + oracle %.1f s", matched, runs.size(), worst, exact_s,
                  oracle_s));
  }

  // 3: every emitted cut holds on every feasible TSP-optimal solution.
  {
    long cuts = 0, checked = 0, bad = 0;
    int kinds[4] = {0, 0, 0, 0};
    for (std::size_t k = 0; k < 20 && k < runs.size(); ++k) {
      const auto& emitted = runs[k].both.emitted_cuts;
      cuts += static_cast<long>(emitted.size());
      for (const auto& c : emitted) ++kinds[static_cast<int>(c.kind)];
      const auto v = validate_cuts(suite[k].inst, emitted);
      checked += v.solutions_checked;
      if (!v.clean) {
        ++bad;
        std::printf("  instance %zu: cut %d violated\n", k, v.cut_index);
      }
    }
    report(3, bad == 0,
           format("%ld cuts (base %d, forward %d, backward %d, rci %d) against %ld solutions, %ld instances violated",
                  cuts, kinds[static_cast<int>(CutKind::tsp_base)], kinds[static_cast<int>(CutKind::tsp_forward)],
                  kinds[static_cast<int>(CutKind::tsp_backward)], kinds[static_cast<int>(CutKind::rci)], checked, bad));
  }

  // 4: lifting never weakens a cut and does not grow the tree.
  {
    int fewer = 0;
    long nodes_both = 0, nodes_none = 0;
    for (const auto& run : runs) {
      fewer += run.both.stats.nodes <= run.none.stats.nodes;
      nodes_both += run.both.stats.nodes;
      nodes_none += run.none.stats.nodes;
    }
    const double share = static_cast<double>(fewer) / static_cast<double>(runs.size());
    const bool gain_ok = cert.lifted_checks > 0 && cert.min_gain >= -1e-9;
    report(4, gain_ok && share >= 0.6,
           format("min lifted-minus-base violation %.3g over %ld checks; nodes(both) <= nodes(none) on %.0f%% "
                  "(total %ld vs %ld)",
                  cert.min_gain, cert.lifted_checks, share * 100.0, nodes_both, nodes_none));
  }

  // 5: Held-Karp against permutations. Integer distances make equality exact.
  {
    std::mt19937_64 rng(5150);
    int equal = 0;
    for (int trial = 0; trial < 200; ++trial) {
      const Instance inst = fixture::random_instance(rng(), 9, 3, 9, Rounding::nearest_int);
      std::vector<int> all = {1, 2, 3, 4, 5, 6, 7, 8, 9};
      std::shuffle(all.begin(), all.end(), rng);
      const int size = 1 + static_cast<int>(rng() % 9);
      const std::vector<int> set(all.begin(), all.begin() + size);
      equal += held_karp_tour(inst, set).length == fixture::brute_tour(inst, set);
    }
    report(5, equal == 200, format("%d/200 customer sets equal", equal));
  }

  // 6: exact never loses to solve-then-repair.
  {
    int dominated = 0;
    for (const auto& run : runs) dominated += run.both.ub <= run.post.ub + 1e-6;
    const bool fig_ok = std::abs(fig_post.gap - 0.617) <= 0.005 && fig_exact.gap == 0.0;
    report(6, dominated == static_cast<int>(runs.size()) && fig_ok,
           format("exact ub <= postprocess ub on %d/%zu; fixture gaps postprocess %.2f%%, exact %.2f%%", dominated,
                  runs.size(), fig_post.gap * 100.0, fig_exact.gap * 100.0));
  }

  // 7: pooled reduced costs at every converged relaxation.
  report(7, cert.min_rc >= -1e-6, format("min pooled reduced cost %.3g over %ld solves", cert.min_rc, cert.solves));

  return failures == 0 ? 0 : 1;
}
