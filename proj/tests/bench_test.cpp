#include <gtest/gtest.h>

#include <cstdlib>
#include <set>

#include "piperoute/bench.hpp"
#include "test_support.hpp"

namespace pr = piperoute;

namespace {

pr::RunRecord record(int k, std::string status, std::optional<std::int64_t> cost = {},
                     std::optional<std::int64_t> lb = {}, pr::AlgoSpec algo = {}, std::uint64_t seed = 1) {
  pr::RunRecord r;
  r.dims = {20, 20, 20};
  r.k = k;
  r.seed = seed;
  r.algo = algo;
  r.status = std::move(status);
  r.cost = cost;
  r.lb = lb;
  return r;
}

pr::SuiteConfig tiny_suite() {
  pr::SuiteConfig cfg;
  cfg.dims = {20, 20, 20};
  cfg.k_start = 10;
  cfg.k_step = 10;
  cfg.k_max = 30;
  cfg.instances = 2;
  cfg.timeout_s = 1;
  cfg.algos = {{pr::AlgoKind::Cbs, 1.0}};
  return cfg;
}

std::size_t csv_rows(const std::string& path) {
  const auto text = pr::detail::read_file(path);
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

}  // namespace

TEST(ParseAlgo, Forms) {
  EXPECT_EQ(pr::parse_algo("cbs"), (pr::AlgoSpec{pr::AlgoKind::Cbs, 1.0}));
  EXPECT_EQ(pr::parse_algo("priority").kind, pr::AlgoKind::Priority);
  EXPECT_DOUBLE_EQ(pr::parse_algo("ecbs").w, 1.01);
  EXPECT_DOUBLE_EQ(pr::parse_algo("ecbs:1.05").w, 1.05);
  EXPECT_DOUBLE_EQ(pr::parse_algo("ecbs(1.5)").w, 1.5);
  EXPECT_EQ(pr::parse_algo("ecbs(1.05)").label(), "ecbs(1.05)");
  EXPECT_THROW(pr::parse_algo("ecbs:0.5"), std::invalid_argument);
  EXPECT_THROW(pr::parse_algo("astar"), std::invalid_argument);
}

TEST(SuiteConfigParse, AllKeys) {
  const auto cfg = pr::parse_suite_config(
      "# suite\n"
      "env = obstacles\n"
      "dims = 10, 12, 14\n"
      "density = 0.2\n"
      "k_start = 5\nk_step = 5\nk_max = 15   # three increments\n"
      "instances = 3\n"
      "timeout = 2.5\n"
      "algos = cbs, ecbs:1.05, priority\n"
      "seed = 99\n"
      "workers = 2\n");
  EXPECT_EQ(cfg.env, pr::EnvKind::Obstacles);
  EXPECT_EQ(cfg.dims, (pr::Dims{10, 12, 14}));
  EXPECT_DOUBLE_EQ(cfg.density, 0.2);
  EXPECT_EQ(cfg.pipe_counts(), (std::vector<int>{5, 10, 15}));
  EXPECT_EQ(cfg.instances, 3);
  EXPECT_DOUBLE_EQ(cfg.timeout_s, 2.5);
  ASSERT_EQ(cfg.algos.size(), 3u);
  EXPECT_EQ(cfg.algos[1], (pr::AlgoSpec{pr::AlgoKind::Ecbs, 1.05}));
  EXPECT_EQ(cfg.base_seed, 99u);
  EXPECT_EQ(cfg.workers, 2);
}

TEST(SuiteConfigParse, Rejects) {
  EXPECT_THROW(pr::parse_suite_config("k_step = 0\n"), std::invalid_argument);
  EXPECT_THROW(pr::parse_suite_config("instances = 0\n"), std::invalid_argument);
  EXPECT_THROW(pr::parse_suite_config("colour = red\n"), std::invalid_argument);
  EXPECT_THROW(pr::parse_suite_config("k_start 5\n"), std::invalid_argument);
  EXPECT_THROW(pr::parse_suite_config("k_start = 30\nk_max = 20\n"), std::invalid_argument);
}

TEST(InstanceSeed, PureFunction) {
  EXPECT_EQ(pr::instance_seed(1, 10, 0), 1u ^ (10ULL << 32));
  EXPECT_EQ(pr::instance_seed(7, 20, 3), 7u ^ ((20ULL << 32) | 3u));
  std::set<std::uint64_t> seen;
  for (int k = 10; k <= 200; k += 10)
    for (int rep = 0; rep < 50; ++rep) seen.insert(pr::instance_seed(1, k, rep));
  EXPECT_EQ(seen.size(), 20u * 50u);
}

TEST(Csv, RowRoundTrip) {
  auto r = record(40, "bounded", 212, 210, {pr::AlgoKind::Ecbs, 1.05}, 12345678901234ULL);
  r.env = pr::EnvKind::Obstacles;
  r.runtime_s = 1.23456;
  r.hl_expanded = 17;
  const auto row = pr::to_csv_row(r);
  EXPECT_EQ(row, "obstacles,20,20,20,40,12345678901234,ecbs,1.05,bounded,212,210,1.235,17");
  const auto back = pr::parse_csv_row(row);
  EXPECT_EQ(pr::to_csv_row(back), row);
  EXPECT_EQ(back.key(), r.key());

  const auto timeout = record(60, "timeout", std::nullopt, 300, {pr::AlgoKind::Cbs, 1.0});
  EXPECT_EQ(pr::to_csv_row(timeout), "empty,20,20,20,60,1,cbs,1,timeout,,300,0.000,0");
  const auto prio = record(60, "order_failed", std::nullopt, std::nullopt, {pr::AlgoKind::Priority, 1.0});
  EXPECT_EQ(pr::parse_csv_row(pr::to_csv_row(prio)).algo.kind, pr::AlgoKind::Priority);
  EXPECT_THROW(pr::parse_csv_row("empty,1,2"), std::invalid_argument);
}

TEST(RunSuite, RecordCountAndResume) {
  pr::testing::TempDir dir("suite");
  const auto csv = dir.file("runs.csv");
  const auto cfg = tiny_suite();
  const auto first = pr::run_suite(cfg, csv);
  EXPECT_EQ(first.records.size(), 6u);
  EXPECT_EQ(first.new_records, 6u);
  EXPECT_EQ(csv_rows(csv), 7u);
  EXPECT_EQ(pr::detail::read_file(csv).substr(0, pr::kCsvHeader.size()), pr::kCsvHeader);

  for (const auto& r : first.records) {
    ASSERT_TRUE(r.status == "optimal" || r.status == "timeout") << r.status;
    ASSERT_TRUE(r.lb);
    if (r.solved()) { EXPECT_EQ(r.cost, r.lb); }
  }
  std::multiset<std::uint64_t> seeds;
  for (const auto& r : first.records) seeds.insert(r.seed);
  for (int k : {10, 20, 30})
    for (int rep : {0, 1}) EXPECT_EQ(seeds.count(pr::instance_seed(cfg.base_seed, k, rep)), 1u);

  const auto second = pr::run_suite(cfg, csv);
  EXPECT_EQ(second.new_records, 0u);
  EXPECT_EQ(second.records.size(), 6u);
  EXPECT_EQ(csv_rows(csv), 7u);

  // Adding an algorithm only runs the missing combinations.
  auto more = cfg;
  more.algos.push_back({pr::AlgoKind::Priority, 1.0});
  const auto third = pr::run_suite(more, csv);
  EXPECT_EQ(third.new_records, 6u);
  EXPECT_EQ(pr::read_csv(csv).size(), 12u);
}

TEST(RunSuite, SameRecordsWithWorkers) {
  pr::testing::TempDir dir("workers");
  // Small pipe counts so every run finishes and records do not depend on timing.
  auto cfg = tiny_suite();
  cfg.k_start = 4;
  cfg.k_step = 4;
  cfg.k_max = 12;
  cfg.timeout_s = 30;
  cfg.algos.push_back({pr::AlgoKind::Ecbs, 1.05});
  const auto serial = pr::run_suite(cfg, dir.file("serial.csv"));

  ::setenv("PR_BENCH_WORKERS", "3", 1);
  EXPECT_EQ(pr::bench_workers(cfg), 3);
  const auto parallel = pr::run_suite(cfg, dir.file("parallel.csv"));
  ::unsetenv("PR_BENCH_WORKERS");
  EXPECT_EQ(pr::bench_workers(cfg), 1);

  auto summary = [](const std::vector<pr::RunRecord>& rs) {
    std::map<std::string, std::tuple<std::string, std::optional<std::int64_t>, std::optional<std::int64_t>>> m;
    for (const auto& r : rs) m[r.key()] = {r.status, r.cost, r.lb};
    return m;
  };
  EXPECT_EQ(summary(serial.records), summary(parallel.records));
  EXPECT_EQ(parallel.records.size(), 12u);
}

TEST(RunAlgorithm, FillsRecord) {
  const auto inst = pr::generate_obstacles({10, 10, 10}, 8, 0.1, 77);
  const auto r = pr::run_algorithm(inst, {pr::AlgoKind::Ecbs, 1.05}, 10);
  EXPECT_EQ(r.env, pr::EnvKind::Obstacles);
  EXPECT_EQ(r.seed, 77u);
  EXPECT_EQ(r.k, 8);
  EXPECT_EQ(r.status, "bounded");
  ASSERT_TRUE(r.cost && r.lb);
  EXPECT_LE(*r.cost, pr::suboptimality_limit(1.05, *r.lb));
  EXPECT_GE(r.hl_expanded, 1u);
}

TEST(Metrics, SuccessRate) {
  std::vector<pr::RunRecord> rs;
  for (int i = 0; i < 50; ++i) rs.push_back(record(10, i < 25 ? "optimal" : "timeout"));
  for (int i = 0; i < 50; ++i) rs.push_back(record(20, "timeout"));
  for (int i = 0; i < 50; ++i) rs.push_back(record(30, "bounded"));
  EXPECT_DOUBLE_EQ(pr::success_rate(rs, 10), 50.0);
  EXPECT_DOUBLE_EQ(pr::success_rate(rs, 20), 0.0);
  EXPECT_DOUBLE_EQ(pr::success_rate(rs, 30), 100.0);
  EXPECT_DOUBLE_EQ(pr::success_rate(rs, 40), 0.0);
}

TEST(Metrics, QualityRatio) {
  const pr::AlgoSpec cbs{pr::AlgoKind::Cbs, 1.0};
  const pr::AlgoSpec e101{pr::AlgoKind::Ecbs, 1.01};
  const pr::AlgoSpec e105{pr::AlgoKind::Ecbs, 1.05};
  {
    std::vector<pr::RunRecord> rs{record(10, "optimal", 100, 100, cbs), record(10, "bounded", 106, 98, e105)};
    const auto b = pr::best_known_bounds(rs);
    EXPECT_DOUBLE_EQ(*pr::quality_ratio(rs[1], b), 1.06);
    EXPECT_DOUBLE_EQ(*pr::quality_ratio(rs[0], b), 1.0);
  }
  {
    // Only the ECBS run's own bound exists.
    std::vector<pr::RunRecord> rs{record(10, "timeout", std::nullopt, 200, cbs), record(10, "bounded", 202, 200, e101)};
    const auto b = pr::best_known_bounds(rs);
    EXPECT_LE(*pr::quality_ratio(rs[1], b), 1.01);
  }
  {
    // A timed-out ECBS run still contributes its bound.
    std::vector<pr::RunRecord> rs{record(10, "timeout", std::nullopt, 205, e101), record(10, "bounded", 210, 200, e105)};
    const auto b = pr::best_known_bounds(rs);
    EXPECT_DOUBLE_EQ(*pr::quality_ratio(rs[1], b), 210.0 / 205.0);
  }
  {
    std::vector<pr::RunRecord> rs{record(10, "heuristic", 50, std::nullopt, {pr::AlgoKind::Priority, 1.0})};
    EXPECT_FALSE(pr::quality_ratio(rs[0], pr::best_known_bounds(rs)));
    EXPECT_FALSE(pr::quality_ratio(record(10, "timeout"), pr::best_known_bounds(rs)));
  }
}

TEST(Metrics, RuntimeProfile) {
  std::vector<pr::RunRecord> rs{record(1, "optimal"), record(1, "optimal"), record(1, "timeout")};
  rs[0].runtime_s = 3.0;
  rs[1].runtime_s = 1.0;
  rs[2].runtime_s = 100.4;
  EXPECT_EQ(pr::runtime_profile(rs, 100.0), (std::vector<double>{1.0, 3.0, 100.0}));
  EXPECT_TRUE(pr::runtime_profile({}, 100.0).empty());
  std::vector<pr::RunRecord> all(4, record(1, "timeout"));
  EXPECT_EQ(pr::runtime_profile(all, 20.0), std::vector<double>(4, 20.0));
}
