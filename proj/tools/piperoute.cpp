// Command-line front end: gen, solve, validate, bench, report.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "piperoute/piperoute.hpp"

namespace pr = piperoute;

namespace {

// Exit codes for `solve`.
constexpr int kExitSolved = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitTimeout = 3;
constexpr int kExitOrderFailed = 4;

pr::Dims parse_dims(const std::string& s) {
  auto parts = pr::detail::split(s, ',');
  if (parts.size() != 3) throw CLI::ValidationError("--dims", "expected X,Y,Z");
  return {pr::detail::parse_int<int>(parts[0], 0), pr::detail::parse_int<int>(parts[1], 0),
          pr::detail::parse_int<int>(parts[2], 0)};
}

std::vector<int> parse_order(const std::string& s) {
  std::vector<int> order;
  for (const auto& p : pr::detail::split(s, ',')) order.push_back(pr::detail::parse_int<int>(p, 0));
  return order;
}

struct GenArgs {
  std::string dims;
  int pipes = 0;
  std::uint64_t seed = 0;
  std::optional<double> obstacles;
  std::string out;
};

int cmd_gen(const GenArgs& a) {
  const pr::Dims dims = parse_dims(a.dims);
  pr::Instance inst;
  try {
    inst = a.obstacles ? pr::generate_obstacles(dims, a.pipes, *a.obstacles, a.seed)
                       : pr::generate_empty(dims, a.pipes, a.seed);
  } catch (const pr::TooManyPipes& e) {
    std::cerr << "error: too many pipes: " << e.what() << '\n';
    return 2;
  } catch (const pr::GenerationFailed& e) {
    std::cerr << "error: generation failed: " << e.what() << '\n';
    return 2;
  }
  pr::save_instance(a.out, inst);
  std::cout << "dims " << dims.x << ' ' << dims.y << ' ' << dims.z << " pipes " << inst.pipes.size() << " blocked "
            << inst.grid.blocked_count() << '\n';
  return 0;
}

struct SolveArgs {
  std::string algo = "cbs";
  double w = pr::kDefaultEcbsFactor;
  std::string order;
  bool all_orders = false;
  double timeout = pr::kDefaultTimeoutSeconds;
  std::string in;
  std::string out;
};

void print_summary(std::string_view status, std::optional<std::int64_t> cost, std::optional<std::int64_t> lb,
                   double runtime) {
  char rt[32];
  std::snprintf(rt, sizeof rt, "%.3f", runtime);
  std::cout << status << ' ' << (cost ? std::to_string(*cost) : "-") << ' ' << (lb ? std::to_string(*lb) : "-") << ' '
            << rt << '\n';
}

int cmd_solve(const SolveArgs& a) {
  const pr::Instance inst = pr::load_instance(a.in);
  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); };

  pr::Solution sol;
  if (a.algo == "priority") {
    pr::PrioritizedResult res = a.all_orders          ? pr::solve_prioritized_all_orders(inst)
                                : a.order.empty()     ? pr::solve_prioritized(inst)
                                                      : pr::solve_prioritized(inst, parse_order(a.order));
    if (auto* failed = std::get_if<pr::OrderFailed>(&res)) {
      print_summary("order_failed", std::nullopt, std::nullopt, elapsed());
      std::cerr << "pipe " << failed->pipe << " could not be routed\n";
      return kExitOrderFailed;
    }
    sol = std::get<pr::Solution>(std::move(res));
  } else if (a.algo == "cbs") {
    sol = pr::solve_cbs(inst, a.timeout);
  } else {
    sol = pr::solve_ecbs(inst, a.w, a.timeout);
  }
  const double runtime = elapsed();

  if (sol.solved()) pr::save_solution(a.out, sol);
  std::string status(pr::to_string(sol.status));
  if (sol.status == pr::Status::Bounded) status += "(" + pr::detail::format_real(sol.w) + ")";
  print_summary(status, sol.solved() ? std::optional(sol.cost) : std::nullopt, sol.lower_bound, runtime);

  switch (sol.status) {
    case pr::Status::Infeasible: return kExitInfeasible;
    case pr::Status::Timeout: return kExitTimeout;
    default: return kExitSolved;
  }
}

int cmd_validate(const std::string& instance_path, const std::string& solution_path) {
  const pr::Instance inst = pr::load_instance(instance_path);
  const pr::Solution sol = pr::load_solution(solution_path);
  const auto violations = pr::validate_solution(inst, sol);
  for (const auto& v : violations) std::cout << pr::to_string(v.kind) << ": " << v.details << '\n';
  if (violations.empty()) {
    std::cout << "valid cost " << sol.cost << '\n';
    return 0;
  }
  return 1;
}

void print_report(const std::vector<pr::RunRecord>& records, double timeout_s) {
  using Group = std::tuple<pr::EnvKind, int, int, int, std::string>;
  std::map<Group, std::vector<pr::RunRecord>> groups;
  for (const auto& r : records) groups[{r.env, r.dims.x, r.dims.y, r.dims.z, r.algo.label()}].push_back(r);
  const auto bounds = pr::best_known_bounds(records);

  for (const auto& [g, recs] : groups) {
    const auto& [env, dx, dy, dz, label] = g;
    std::set<int> ks;
    std::size_t solved = 0;
    for (const auto& r : recs) {
      ks.insert(r.k);
      solved += r.solved();
    }
    std::cout << pr::to_string(env) << ' ' << dx << 'x' << dy << 'x' << dz << ' ' << label << ": solved " << solved
              << '/' << recs.size() << '\n';
    for (int k : ks) {
      double worst = 0.0;
      std::size_t n_quality = 0;
      for (const auto& r : recs) {
        if (r.k != k) continue;
        if (auto q = pr::quality_ratio(r, bounds)) {
          worst = std::max(worst, *q);
          ++n_quality;
        }
      }
      char line[128];
      std::snprintf(line, sizeof line, "  k=%-4d success %6.1f%%", k, pr::success_rate(recs, k));
      std::cout << line;
      if (n_quality > 0) {
        std::snprintf(line, sizeof line, "  worst quality %.4f", worst);
        std::cout << line;
      }
      std::cout << '\n';
    }
    const auto profile = pr::runtime_profile(recs, timeout_s);
    if (!profile.empty()) {
      char line[128];
      std::snprintf(line, sizeof line, "  runtime min %.3f median %.3f max %.3f\n", profile.front(),
                    profile[profile.size() / 2], profile.back());
      std::cout << line;
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Vertex-disjoint pipe routing on 3D grids: CBS, ECBS(w) and prioritized planning"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a random instance");
  gen_cmd->add_option("--dims", gen.dims, "Grid size X,Y,Z")->required();
  gen_cmd->add_option("--pipes", gen.pipes, "Number of pipes")->required()->check(CLI::PositiveNumber);
  gen_cmd->add_option("--seed", gen.seed, "Random seed")->required();
  gen_cmd->add_option("--obstacles", gen.obstacles, "Fraction of cells covered by obstacle columns")
      ->check(CLI::Range(0.0, 0.999999));
  gen_cmd->add_option("--out", gen.out, "Instance file to write")->required();

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Solve an instance");
  solve_cmd->add_option("--algo", solve.algo, "cbs | ecbs | priority")
      ->required()
      ->check(CLI::IsMember({"cbs", "ecbs", "priority"}));
  solve_cmd->add_option("--w", solve.w, "ECBS suboptimality factor (default 1.01)")->check(CLI::Range(1.0, 1e9));
  solve_cmd->add_option("--order", solve.order, "Priority order P0,P1,... for --algo priority");
  solve_cmd->add_flag("--all-orders", solve.all_orders, "Try every priority order (at most 8 pipes)");
  solve_cmd->add_option("--timeout", solve.timeout, "Wall-clock budget in seconds (default 100)")
      ->check(CLI::PositiveNumber);
  solve_cmd->add_option("--in", solve.in, "Instance file")->required();
  solve_cmd->add_option("--out", solve.out, "Solution file to write when solved")->required();

  std::string config_path, csv_path;
  bool quiet = false;
  auto* bench_cmd = app.add_subcommand("bench", "Run a benchmark suite and append results to CSV");
  bench_cmd->add_option("--config", config_path, "Suite config file")->required();
  bench_cmd->add_option("--out", csv_path, "CSV file (existing rows are kept and skipped)")->required();
  bench_cmd->add_flag("--quiet", quiet, "Do not log individual runs");

  std::string instance_path, solution_path;
  auto* validate_cmd = app.add_subcommand("validate", "Check a solution file against an instance");
  validate_cmd->add_option("--instance", instance_path, "Instance file")->required();
  validate_cmd->add_option("--solution", solution_path, "Solution file")->required();

  std::string report_csv;
  double report_timeout = pr::kDefaultTimeoutSeconds;
  auto* report_cmd = app.add_subcommand("report", "Summarize a benchmark CSV");
  report_cmd->add_option("--csv", report_csv, "CSV written by bench")->required();
  report_cmd->add_option("--timeout", report_timeout, "Timeout used for the runs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*gen_cmd) return cmd_gen(gen);
    if (*solve_cmd) {
      if (solve.algo != "priority" && (!solve.order.empty() || solve.all_orders)) {
        std::cerr << "error: --order/--all-orders require --algo priority\n";
        return kExitUsage;
      }
      return cmd_solve(solve);
    }
    if (*validate_cmd) return cmd_validate(instance_path, solution_path);
    if (*bench_cmd) {
      const auto cfg = pr::parse_suite_config(pr::detail::read_file(config_path));
      const auto res = pr::run_suite(cfg, csv_path, quiet ? nullptr : &std::cerr);
      std::cout << "records " << res.records.size() << " new " << res.new_records << '\n';
      return 0;
    }
    if (*report_cmd) {
      print_report(pr::read_csv(report_csv), report_timeout);
      return 0;
    }
  } catch (const pr::InvalidInstance& e) {
    std::cerr << "error: invalid input: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
