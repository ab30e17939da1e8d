#include "fairvrp/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "fairvrp/bnb.hpp"
#include "fairvrp/oracle_bruteforce.hpp"
#include "fairvrp/report.hpp"

namespace fvrp {

namespace {

struct RunConfig {
  std::string mode = "exact";
  std::string lifting = "both";
  std::string rci = "on";
  double time_limit = 3600.0;
  long node_limit = 1'000'000;
  std::uint64_t seed = 0;
  std::string output = "json";
  int threads = 1;
  bool aggressive = false;
  std::string dump_cuts;
};

SolverConfig solver_config(const RunConfig& rc) {
  SolverConfig c;
  c.mode = parse_solve_mode(rc.mode);
  c.lifting = parse_lifting(rc.lifting);
  c.rci = rc.rci == "on";
  c.time_limit_s = rc.time_limit;
  c.node_limit = rc.node_limit;
  c.seed = rc.seed;
  c.aggressive_lifting = rc.aggressive;
  c.pricing.threads = rc.threads;
  c.record_cuts = !rc.dump_cuts.empty();
  return c;
}

void add_run_options(CLI::App* app, RunConfig& rc, bool oracle_mode) {
  const std::vector<std::string> modes = oracle_mode
                                             ? std::vector<std::string>{"exact", "postprocess", "fcvrp", "mindist", "oracle"}
                                             : std::vector<std::string>{"exact", "postprocess", "fcvrp", "mindist"};
  app->add_option("--mode", rc.mode, "solve mode")->check(CLI::IsMember(modes));
  app->add_option("--lifting", rc.lifting, "TSP cut lifting")->check(CLI::IsMember({"none", "forward", "backward", "both"}));
  app->add_option("--rci", rc.rci, "rounded capacity inequalities")->check(CLI::IsMember({"on", "off"}));
  app->add_option("--time-limit", rc.time_limit, "seconds")->check(CLI::PositiveNumber);
  app->add_option("--node-limit", rc.node_limit, "branch-and-bound nodes")->check(CLI::PositiveNumber);
  app->add_option("--seed", rc.seed, "seed");
  app->add_option("--threads", rc.threads, "pricing threads")->check(CLI::PositiveNumber);
  app->add_flag("--aggressive-lifting", rc.aggressive, "also lift arcs out of the terminal node");
}

int exit_code(SolveStatus s) { return s == SolveStatus::limit ? 2 : 0; }

SolveResult run_oracle(const Instance& inst, OracleMode mode) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto opt = enumerate(inst, mode);
  const double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result_from_oracle(opt, t);
}

SolveResult run_mode(const Instance& inst, const RunConfig& rc) {
  if (rc.mode == "oracle") return run_oracle(inst, OracleMode::fcvrp_tsp);
  return solve(inst, solver_config(rc));
}

void write_cuts(const std::string& path, const SolveResult& r) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  for (const auto& c : r.emitted_cuts) f << dump_cut(c) << "\n";
}

std::string fmt(double v) {
  if (!std::isfinite(v)) return "inf";
  std::ostringstream s;
  s << std::setprecision(10) << v;
  return s.str();
}

int bench(const std::string& dir, const RunConfig& rc, const std::string& csv, std::ostream& out) {
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".inst") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw std::runtime_error("no .inst files in " + dir);

  std::ofstream csv_out;
  if (!csv.empty()) {
    csv_out.open(csv);
    if (!csv_out) throw std::runtime_error("cannot write " + csv);
    csv_out << "instance,mode,lifting,lb,ub,gap,time_s,nodes,cuts\n";
  }
  out << std::left << std::setw(24) << "instance" << std::right << std::setw(14) << "lb" << std::setw(14) << "ub"
      << std::setw(10) << "gap%" << std::setw(10) << "time_s" << std::setw(10) << "nodes" << std::setw(10) << "cuts"
      << "\n";
  double sum_gap = 0.0, sum_time = 0.0, sum_nodes = 0.0, sum_cuts = 0.0;
  int solved = 0;
  bool limited = false;
  for (const auto& f : files) {
    const Instance inst = load_instance(f.string());
    const SolveResult r = run_mode(inst, rc);
    const long cuts = r.stats.cuts_tsp + r.stats.cuts_rci;
    out << std::left << std::setw(24) << f.stem().string() << std::right << std::fixed << std::setprecision(2)
        << std::setw(14) << r.lb << std::setw(14) << r.ub << std::setw(10) << r.gap * 100.0 << std::setw(10)
        << r.stats.time_s << std::setw(10) << r.stats.nodes << std::setw(10) << cuts << "\n";
    if (csv_out) {
      csv_out << f.stem().string() << "," << rc.mode << "," << rc.lifting << "," << fmt(r.lb) << "," << fmt(r.ub) << ","
              << fmt(r.gap) << "," << fmt(r.stats.time_s) << "," << r.stats.nodes << "," << cuts << "\n";
    }
    sum_gap += r.gap;
    sum_time += r.stats.time_s;
    sum_nodes += static_cast<double>(r.stats.nodes);
    sum_cuts += static_cast<double>(cuts);
    solved += r.status == SolveStatus::optimal;
    limited = limited || r.status == SolveStatus::limit;
  }
  const double k = static_cast<double>(files.size());
  out << "\nmethod " << rc.mode << "/" << rc.lifting << "  instances " << files.size() << "  optimal " << solved
      << std::fixed << std::setprecision(2) << "  avg gap% " << sum_gap / k * 100.0 << "  avg time_s " << sum_time / k
      << "  avg nodes " << sum_nodes / k << "  avg cuts " << sum_cuts / k << "\n";
  return limited ? 2 : 0;
}

int generate(int n, int k, int q, double pct, const std::string& demands, std::uint64_t seed, const std::string& path,
             std::ostream& out) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(0.0, 1000.0);
  std::vector<Point> pts(n + 1);
  for (auto& p : pts) p = {std::round(coord(rng)), std::round(coord(rng))};
  std::vector<int> d(n + 1, 1);
  d[0] = 0;
  if (demands == "uniform") {
    std::uniform_int_distribution<int> dd(1, 10);
    for (int i = 1; i <= n; ++i) d[i] = dd(rng);
  }
  int total = 0;
  for (int i = 1; i <= n; ++i) total += d[i];
  if (q <= 0) q = std::max(*std::max_element(d.begin(), d.end()), (total + k - 1) / k + 1);
  for (int i = 1; i <= n; ++i) d[i] = std::min(d[i], q);
  Instance inst = Instance::from_coords("gen" + std::to_string(seed), pts, d, k, q);
  inst.set_budget_percentage(pct);
  const std::string text = emit_instance(inst);
  if (path.empty()) {
    out << text;
  } else {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << text;
  }
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact branch-price-and-cut for the fair CVRP"};
  app.require_subcommand(1);

  RunConfig solve_rc;
  std::string solve_file;
  auto* solve_cmd = app.add_subcommand("solve", "solve one instance");
  solve_cmd->add_option("instance", solve_file, "instance file")->required();
  add_run_options(solve_cmd, solve_rc, true);
  solve_cmd->add_option("--output", solve_rc.output, "output format")->check(CLI::IsMember({"json", "table"}));
  solve_cmd->add_option("--dump-cuts", solve_rc.dump_cuts, "write emitted cuts, one per line");

  std::string oracle_file, oracle_mode = "fcvrp_tsp";
  auto* oracle_cmd = app.add_subcommand("oracle", "brute-force optimum of a tiny instance");
  oracle_cmd->add_option("instance", oracle_file, "instance file")->required();
  oracle_cmd->add_option("--mode", oracle_mode, "objective")->check(CLI::IsMember({"fcvrp", "fcvrp_tsp", "exact", "mindist"}));

  RunConfig bench_rc;
  std::string bench_dir, csv;
  auto* bench_cmd = app.add_subcommand("bench", "solve every .inst file of a directory");
  bench_cmd->add_option("dir", bench_dir, "instance directory")->required();
  add_run_options(bench_cmd, bench_rc, true);
  bench_cmd->add_option("--csv", csv, "write per-instance rows");

  int gen_n = 8, gen_k = 2, gen_q = 0;
  double gen_pct = 110.0;
  std::string gen_demands = "unit", gen_out;
  std::uint64_t gen_seed = 0;
  auto* gen_cmd = app.add_subcommand("gen", "random Euclidean instance");
  gen_cmd->add_option("--n", gen_n, "customers")->check(CLI::Range(1, kMaxCustomers));
  gen_cmd->add_option("--k", gen_k, "vehicles")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--q", gen_q, "capacity (default: fits the demand with one unit of slack)");
  gen_cmd->add_option("--budget-pct", gen_pct, "budget as percentage of the minimum distance")->check(CLI::Range(100.0, 1e6));
  gen_cmd->add_option("--demands", gen_demands, "demand law")->check(CLI::IsMember({"unit", "uniform"}));
  gen_cmd->add_option("--seed", gen_seed, "seed");
  gen_cmd->add_option("--out", gen_out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 1;
  }

  try {
    if (*solve_cmd) {
      const Instance inst = load_instance(solve_file);
      const SolveResult r = run_mode(inst, solve_rc);
      if (!solve_rc.dump_cuts.empty()) write_cuts(solve_rc.dump_cuts, r);
      out << (solve_rc.output == "table" ? result_table(r) : result_json(r) + "\n");
      return exit_code(r.status);
    }
    if (*oracle_cmd) {
      const Instance inst = load_instance(oracle_file);
      out << result_json(run_oracle(inst, parse_oracle_mode(oracle_mode))) << "\n";
      return 0;
    }
    if (*bench_cmd) return bench(bench_dir, bench_rc, csv, out);
    if (*gen_cmd) return generate(gen_n, gen_k, gen_q, gen_pct, gen_demands, gen_seed, gen_out, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace fvrp
