#include <gtest/gtest.h>

#include "piperoute/io.hpp"
#include "piperoute/piperoute.hpp"
#include "test_support.hpp"

namespace pr = piperoute;
using pr::testing::run_command;

namespace {

const std::string kCli = PIPEROUTE_CLI;
const std::string kFigPbs = std::string(PIPEROUTE_FIXTURES) + "/fig_pbs.inst";

std::string cli(const std::string& args) { return kCli + " " + args + " 2>/dev/null"; }

}  // namespace

TEST(CliGen, WritesInstanceAndSummary) {
  pr::testing::TempDir dir("gen");
  const auto path = dir.file("a.inst");
  const auto res = run_command(cli("gen --dims 20,20,20 --pipes 50 --seed 1 --out " + path));
  ASSERT_EQ(res.exit_code, 0);
  EXPECT_EQ(res.output, "dims 20 20 20 pipes 50 blocked 0\n");
  const auto inst = pr::load_instance(path);
  EXPECT_EQ(inst.pipe_count(), 50);
  EXPECT_EQ(pr::encode_instance(inst), pr::encode_instance(pr::generate_empty({20, 20, 20}, 50, 1)));
}

TEST(CliGen, ObstaclesAndDeterminism) {
  pr::testing::TempDir dir("gen_obs");
  const auto a = dir.file("a.inst");
  const auto b = dir.file("b.inst");
  const std::string args = "gen --dims 20,20,20 --pipes 30 --seed 4 --obstacles 0.10 --out ";
  const auto res = run_command(cli(args + a));
  ASSERT_EQ(res.exit_code, 0);
  EXPECT_EQ(res.output, "dims 20 20 20 pipes 30 blocked 800\n");
  ASSERT_EQ(run_command(cli(args + b)).exit_code, 0);
  EXPECT_EQ(pr::detail::read_file(a), pr::detail::read_file(b));
}

TEST(CliGen, Errors) {
  pr::testing::TempDir dir("gen_err");
  EXPECT_NE(run_command(cli("gen --dims 2,2,2 --pipes 5 --seed 1 --out " + dir.file("x"))).exit_code, 0);
  EXPECT_EQ(run_command(cli("gen --dims 2,2 --pipes 1 --seed 1 --out " + dir.file("x"))).exit_code, 1);
  EXPECT_EQ(run_command(cli("gen --pipes 1 --seed 1 --out " + dir.file("x"))).exit_code, 1);
}

TEST(CliSolve, AlgorithmsAndExitCodes) {
  pr::testing::TempDir dir("solve");
  const auto inst_path = dir.file("a.inst");
  const auto inst = pr::generate_empty({10, 10, 10}, 10, 3);
  pr::save_instance(inst_path, inst);
  const auto sol_path = dir.file("a.sol");

  auto res = run_command(cli("solve --algo cbs --timeout 30 --in " + inst_path + " --out " + sol_path));
  ASSERT_EQ(res.exit_code, 0);
  const auto cbs = pr::solve_cbs(inst, 30);
  EXPECT_EQ(res.output.substr(0, res.output.rfind(' ')),
            "optimal " + std::to_string(cbs.cost) + " " + std::to_string(*cbs.lower_bound));
  EXPECT_EQ(pr::load_solution(sol_path).cost, cbs.cost);

  res = run_command(cli("solve --algo ecbs --w 1.05 --timeout 30 --in " + inst_path + " --out " + sol_path));
  ASSERT_EQ(res.exit_code, 0);
  EXPECT_EQ(res.output.rfind("bounded(1.05) ", 0), 0u) << res.output;
  const auto ecbs = pr::load_solution(sol_path);
  EXPECT_LE(ecbs.cost, pr::suboptimality_limit(1.05, *ecbs.lower_bound));

  res = run_command(cli("solve --algo ecbs --timeout 30 --in " + inst_path + " --out " + sol_path));
  ASSERT_EQ(res.exit_code, 0);
  EXPECT_EQ(res.output.rfind("bounded(1.01) ", 0), 0u) << res.output;
  EXPECT_NE(pr::detail::read_file(sol_path).find("# status bounded w=1.01"), std::string::npos);

  res = run_command(cli("solve --algo priority --in " + inst_path + " --out " + sol_path));
  ASSERT_EQ(res.exit_code, 0);
  EXPECT_EQ(res.output.rfind("heuristic ", 0), 0u) << res.output;
}

TEST(CliSolve, InfeasibleTimeoutOrderFailed) {
  pr::testing::TempDir dir("solve_codes");
  const auto flat = dir.file("flat.inst");
  pr::save_instance(flat, {pr::Grid(pr::Dims{3, 3, 1}), {{0, {0, 1, 0}, {2, 1, 0}}, {1, {1, 0, 0}, {1, 2, 0}}}, {}});
  auto res = run_command(cli("solve --algo cbs --in " + flat + " --out " + dir.file("flat.sol")));
  EXPECT_EQ(res.exit_code, 2);
  EXPECT_EQ(res.output.rfind("infeasible - ", 0), 0u) << res.output;
  EXPECT_FALSE(std::filesystem::exists(dir.file("flat.sol")));

  const auto hard = dir.file("hard.inst");
  pr::save_instance(hard, pr::generate_empty({20, 20, 20}, 200, 5));
  res = run_command(cli("solve --algo cbs --timeout 0.2 --in " + hard + " --out " + dir.file("hard.sol")));
  EXPECT_EQ(res.exit_code, 3);
  EXPECT_EQ(res.output.rfind("timeout - ", 0), 0u) << res.output;

  res = run_command(cli("solve --algo priority --order 1,0 --in " + kFigPbs + " --out " + dir.file("f.sol")));
  EXPECT_EQ(res.exit_code, 4);
  res = run_command(cli("solve --algo priority --all-orders --in " + kFigPbs + " --out " + dir.file("f.sol")));
  EXPECT_EQ(res.exit_code, 4);
  res = run_command(cli("solve --algo cbs --in " + kFigPbs + " --out " + dir.file("f.sol")));
  EXPECT_EQ(res.exit_code, 0);
  EXPECT_EQ(res.output.rfind("optimal 20 20 ", 0), 0u) << res.output;
}

TEST(CliSolve, InvalidFlags) {
  pr::testing::TempDir dir("solve_flags");
  const std::string io = " --in " + kFigPbs + " --out " + dir.file("x.sol");
  EXPECT_EQ(run_command(cli("solve --algo dijkstra" + io)).exit_code, 1);
  EXPECT_EQ(run_command(cli("solve --algo ecbs --w 0.5" + io)).exit_code, 1);
  EXPECT_EQ(run_command(cli("solve --algo cbs --order 0,1" + io)).exit_code, 1);
  EXPECT_EQ(run_command(cli("solve --algo cbs --timeout -3" + io)).exit_code, 1);
  EXPECT_EQ(run_command(cli("solve --algo cbs --bogus" + io)).exit_code, 1);
  EXPECT_EQ(run_command(cli("solve --algo priority --order 0,0" + io)).exit_code, 1);
  EXPECT_EQ(run_command(cli("solve --algo cbs --in /nonexistent/x.inst --out " + dir.file("x.sol"))).exit_code, 1);
  EXPECT_EQ(run_command(cli("")).exit_code, 1);
}

TEST(CliValidate, CleanAndCorrupted) {
  pr::testing::TempDir dir("validate");
  const auto sol_path = dir.file("f.sol");
  ASSERT_EQ(run_command(cli("solve --algo cbs --in " + kFigPbs + " --out " + sol_path)).exit_code, 0);
  auto res = run_command(cli("validate --instance " + kFigPbs + " --solution " + sol_path));
  EXPECT_EQ(res.exit_code, 0);
  EXPECT_EQ(res.output, "valid cost 20\n");

  auto sol = pr::load_solution(sol_path);
  sol.routes[0].vertices.pop_back();
  sol.cost -= 1;
  const auto bad = dir.file("bad.sol");
  pr::save_solution(bad, sol);
  res = run_command(cli("validate --instance " + kFigPbs + " --solution " + bad));
  EXPECT_NE(res.exit_code, 0);
  EXPECT_NE(res.output.find("EndpointMismatch"), std::string::npos) << res.output;

  sol = pr::load_solution(sol_path);
  sol.cost += 2;
  pr::save_solution(bad, sol);
  res = run_command(cli("validate --instance " + kFigPbs + " --solution " + bad));
  EXPECT_NE(res.exit_code, 0);
  EXPECT_NE(res.output.find("CostMismatch"), std::string::npos) << res.output;
}

TEST(CliBench, RowsAndResume) {
  pr::testing::TempDir dir("bench");
  const auto cfg = dir.file("suite.cfg");
  pr::detail::write_file(cfg,
                         "env = empty\ndims = 20,20,20\nk_start = 10\nk_step = 10\nk_max = 30\n"
                         "instances = 2\ntimeout = 1\nalgos = cbs\n");
  const auto csv = dir.file("runs.csv");
  auto res = run_command(cli("bench --quiet --config " + cfg + " --out " + csv));
  ASSERT_EQ(res.exit_code, 0);
  EXPECT_EQ(res.output, "records 6 new 6\n");
  const auto text = pr::detail::read_file(csv);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 7);
  EXPECT_EQ(text.rfind(std::string(pr::kCsvHeader) + "\n", 0), 0u);

  res = run_command(cli("bench --quiet --config " + cfg + " --out " + csv));
  EXPECT_EQ(res.output, "records 6 new 0\n");

  res = run_command(cli("report --csv " + csv + " --timeout 1"));
  EXPECT_EQ(res.exit_code, 0);
  EXPECT_EQ(res.output.rfind("empty 20x20x20 cbs: solved ", 0), 0u) << res.output;
  EXPECT_NE(res.output.find("k=30"), std::string::npos) << res.output;
}
