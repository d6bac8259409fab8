#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <tuple>
#include <vector>

#include "cbs.hpp"
#include "ecbs.hpp"
#include "instance.hpp"
#include "io.hpp"
#include "prioritized.hpp"
#include "solution.hpp"
#include "validate.hpp"

namespace piperoute {

enum class AlgoKind { Cbs, Ecbs, Priority };

struct AlgoSpec {
  AlgoKind kind = AlgoKind::Cbs;
  double w = 1.0;

  std::string name() const {
    switch (kind) {
      case AlgoKind::Cbs: return "cbs";
      case AlgoKind::Ecbs: return "ecbs";
      case AlgoKind::Priority: return "priority";
    }
    return "?";
  }
  /// CSV `w` column: 1 for CBS, the factor for ECBS, empty for prioritized planning.
  std::string w_field() const {
    switch (kind) {
      case AlgoKind::Cbs: return "1";
      case AlgoKind::Ecbs: return detail::format_real(w);
      case AlgoKind::Priority: return "";
    }
    return "";
  }
  std::string label() const { return kind == AlgoKind::Ecbs ? "ecbs(" + w_field() + ")" : name(); }

  friend bool operator==(const AlgoSpec&, const AlgoSpec&) = default;
};

/// Accepts "cbs", "priority", "ecbs" (w = 1.01), "ecbs:W" and "ecbs(W)".
inline AlgoSpec parse_algo(std::string_view s) {
  if (s == "cbs") return {AlgoKind::Cbs, 1.0};
  if (s == "priority") return {AlgoKind::Priority, 1.0};
  if (s == "ecbs") return {AlgoKind::Ecbs, kDefaultEcbsFactor};
  if (s.starts_with("ecbs:") || (s.starts_with("ecbs(") && s.ends_with(")"))) {
    auto num = s.substr(5);
    if (num.ends_with(")")) num.remove_suffix(1);
    const double w = detail::parse_real(num, 0);
    if (!(w >= 1.0)) throw std::invalid_argument("ecbs factor must be >= 1");
    return {AlgoKind::Ecbs, w};
  }
  throw std::invalid_argument("unknown algorithm '" + std::string(s) + "'");
}

struct SuiteConfig {
  EnvKind env = EnvKind::Empty;
  Dims dims{20, 20, 20};
  double density = 0.10;  // used by the obstacle environment only
  int k_start = 10;
  int k_step = 10;
  int k_max = 200;
  int instances = 50;
  double timeout_s = kDefaultTimeoutSeconds;
  std::vector<AlgoSpec> algos{{AlgoKind::Cbs, 1.0}, {AlgoKind::Ecbs, 1.01}, {AlgoKind::Ecbs, 1.05}};
  std::uint64_t base_seed = 1;
  int workers = 1;

  std::vector<int> pipe_counts() const {
    std::vector<int> ks;
    for (int k = k_start; k <= k_max; k += k_step) ks.push_back(k);
    return ks;
  }
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t b = 0;
  for (;;) {
    const auto e = s.find(sep, b);
    out.push_back(trim(s.substr(b, e == std::string_view::npos ? std::string_view::npos : e - b)));
    if (e == std::string_view::npos) break;
    b = e + 1;
  }
  return out;
}

}  // namespace detail

/// Parses `key = value` lines; '#' starts a comment.
///
///   env = empty | obstacles        dims = 20,20,20        density = 0.10
///   k_start = 10   k_step = 10     k_max = 200            instances = 50
///   timeout = 100                  algos = cbs, ecbs:1.01, ecbs:1.05
///   seed = 1                       workers = 1
inline SuiteConfig parse_suite_config(std::string_view text) {
  SuiteConfig cfg;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    if (detail::trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = detail::trim(std::string_view(line).substr(0, eq));
    const std::string val = detail::trim(std::string_view(line).substr(eq + 1));
    auto as_int = [&] { return detail::parse_int<int>(val, line_no); };
    if (key == "env") {
      auto e = parse_env(val);
      if (!e) throw std::invalid_argument("config: unknown env '" + val + "'");
      cfg.env = *e;
    } else if (key == "dims") {
      auto parts = detail::split(val, ',');
      if (parts.size() != 3) throw std::invalid_argument("config: dims needs X,Y,Z");
      cfg.dims = {detail::parse_int<int>(parts[0], line_no), detail::parse_int<int>(parts[1], line_no),
                  detail::parse_int<int>(parts[2], line_no)};
    } else if (key == "density") {
      cfg.density = detail::parse_real(val, line_no);
    } else if (key == "k_start") {
      cfg.k_start = as_int();
    } else if (key == "k_step") {
      cfg.k_step = as_int();
    } else if (key == "k_max") {
      cfg.k_max = as_int();
    } else if (key == "instances") {
      cfg.instances = as_int();
    } else if (key == "timeout") {
      cfg.timeout_s = detail::parse_real(val, line_no);
    } else if (key == "algos") {
      cfg.algos.clear();
      for (const auto& a : detail::split(val, ',')) cfg.algos.push_back(parse_algo(a));
    } else if (key == "seed") {
      cfg.base_seed = detail::parse_int<std::uint64_t>(val, line_no);
    } else if (key == "workers") {
      cfg.workers = as_int();
    } else {
      throw std::invalid_argument("config: unknown key '" + key + "'");
    }
  }
  if (cfg.k_start < 1 || cfg.k_step < 1 || cfg.k_max < cfg.k_start)
    throw std::invalid_argument("config: pipe increments must be positive");
  if (cfg.instances < 1) throw std::invalid_argument("config: instances must be >= 1");
  if (cfg.algos.empty()) throw std::invalid_argument("config: no algorithms");
  if (cfg.workers < 1) throw std::invalid_argument("config: workers must be >= 1");
  return cfg;
}

/// Instance seed for repetition `rep` at pipe count `k`: base XOR (k << 32 | rep).
inline std::uint64_t instance_seed(std::uint64_t base, int k, int rep) {
  return base ^ ((static_cast<std::uint64_t>(k) << 32) | static_cast<std::uint32_t>(rep));
}

inline Instance make_suite_instance(const SuiteConfig& cfg, int k, std::uint64_t seed) {
  return cfg.env == EnvKind::Empty ? generate_empty(cfg.dims, k, seed)
                                   : generate_obstacles(cfg.dims, k, cfg.density, seed);
}

struct RunRecord {
  EnvKind env = EnvKind::Empty;
  Dims dims;
  int k = 0;
  std::uint64_t seed = 0;
  AlgoSpec algo;
  std::string status;  // Status name, "order_failed" or "generation_failed"
  std::optional<std::int64_t> cost;
  std::optional<std::int64_t> lb;
  double runtime_s = 0.0;
  std::uint64_t hl_expanded = 0;

  bool solved() const { return status == "optimal" || status == "bounded" || status == "heuristic"; }
  bool timed_out() const { return status == "timeout"; }

  /// Identifies one (instance, algorithm) pair for resume.
  std::string key() const {
    return std::string(to_string(env)) + ',' + std::to_string(dims.x) + ',' + std::to_string(dims.y) + ',' +
           std::to_string(dims.z) + ',' + std::to_string(k) + ',' + std::to_string(seed) + ',' + algo.name() + ',' +
           algo.w_field();
  }
  std::tuple<EnvKind, int, int, int, int, std::uint64_t> instance_key() const {
    return {env, dims.x, dims.y, dims.z, k, seed};
  }
};

inline constexpr std::string_view kCsvHeader = "env,dimx,dimy,dimz,k,seed,algo,w,status,cost,lb,runtime_s,hl_expanded";

inline std::string to_csv_row(const RunRecord& r) {
  char runtime[32];
  std::snprintf(runtime, sizeof runtime, "%.3f", r.runtime_s);
  return r.key() + ',' + r.status + ',' + (r.cost ? std::to_string(*r.cost) : "") + ',' +
         (r.lb ? std::to_string(*r.lb) : "") + ',' + runtime + ',' + std::to_string(r.hl_expanded);
}

inline RunRecord parse_csv_row(std::string_view line) {
  auto f = detail::split(line, ',');
  if (f.size() != 13) throw std::invalid_argument("csv row: expected 13 fields");
  RunRecord r;
  auto env = parse_env(f[0]);
  if (!env) throw std::invalid_argument("csv row: bad env");
  r.env = *env;
  r.dims = {detail::parse_int<int>(f[1], 0), detail::parse_int<int>(f[2], 0), detail::parse_int<int>(f[3], 0)};
  r.k = detail::parse_int<int>(f[4], 0);
  r.seed = detail::parse_int<std::uint64_t>(f[5], 0);
  r.algo = parse_algo(f[6] == "ecbs" ? "ecbs:" + f[7] : f[6]);
  r.status = f[8];
  if (!f[9].empty()) r.cost = detail::parse_int<std::int64_t>(f[9], 0);
  if (!f[10].empty()) r.lb = detail::parse_int<std::int64_t>(f[10], 0);
  r.runtime_s = detail::parse_real(f[11], 0);
  r.hl_expanded = detail::parse_int<std::uint64_t>(f[12], 0);
  return r;
}

inline std::vector<RunRecord> read_csv(const std::string& path) {
  std::vector<RunRecord> out;
  std::ifstream in(path);
  if (!in) return out;
  std::string line;
  if (!std::getline(in, line)) return out;
  if (detail::trim(line) != kCsvHeader) throw std::runtime_error(path + ": unexpected CSV header");
  while (std::getline(in, line)) {
    if (detail::trim(line).empty()) continue;
    out.push_back(parse_csv_row(detail::trim(line)));
  }
  return out;
}

/// Runs one algorithm on one instance and re-validates any solution it returns.
inline RunRecord run_algorithm(const Instance& inst, const AlgoSpec& algo, double timeout_s) {
  RunRecord rec;
  rec.algo = algo;
  rec.dims = inst.grid.dims();
  rec.k = inst.pipe_count();
  if (inst.meta) {
    rec.env = inst.meta->env;
    rec.seed = inst.meta->seed;
  }
  const auto t0 = std::chrono::steady_clock::now();
  std::optional<Solution> sol;
  switch (algo.kind) {
    case AlgoKind::Cbs: sol = solve_cbs(inst, timeout_s); break;
    case AlgoKind::Ecbs: sol = solve_ecbs(inst, algo.w, timeout_s); break;
    case AlgoKind::Priority: {
      auto res = solve_prioritized(inst);
      if (auto* s = std::get_if<Solution>(&res)) sol = std::move(*s);
      break;
    }
  }
  rec.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!sol) {
    rec.status = "order_failed";
    return rec;
  }
  rec.status = std::string(to_string(sol->status));
  rec.hl_expanded = sol->stats.hl_expanded;
  rec.lb = sol->lower_bound;
  if (sol->solved()) {
    rec.cost = sol->cost;
    if (auto v = validate_solution(inst, *sol); !v.empty()) {
      throw std::logic_error(algo.label() + " produced an invalid solution: " + v.front().details);
    }
  }
  return rec;
}

struct SuiteResult {
  std::vector<RunRecord> records;  // previously recorded rows followed by new ones
  std::size_t new_records = 0;
};

inline int bench_workers(const SuiteConfig& cfg) {
  if (const char* env = std::getenv("PR_BENCH_WORKERS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return cfg.workers;
}

/// Runs every (pipe count, repetition, algorithm) combination of `cfg`,
/// appending each record to `csv_path` as it completes. Rows already in the
/// file are kept and their combinations skipped.
inline SuiteResult run_suite(const SuiteConfig& cfg, const std::string& csv_path, std::ostream* log = nullptr) {
  SuiteResult result;
  result.records = read_csv(csv_path);
  std::set<std::string> done;
  for (const auto& r : result.records) done.insert(r.key());

  struct Job {
    int k;
    std::uint64_t seed;
    std::vector<AlgoSpec> algos;
  };
  std::vector<Job> jobs;
  for (int k : cfg.pipe_counts()) {
    for (int rep = 0; rep < cfg.instances; ++rep) {
      Job job{k, instance_seed(cfg.base_seed, k, rep), {}};
      for (const auto& a : cfg.algos) {
        RunRecord probe;
        probe.env = cfg.env;
        probe.dims = cfg.dims;
        probe.k = k;
        probe.seed = job.seed;
        probe.algo = a;
        if (!done.contains(probe.key())) job.algos.push_back(a);
      }
      if (!job.algos.empty()) jobs.push_back(std::move(job));
    }
  }

  const bool fresh = !std::filesystem::exists(csv_path) || std::filesystem::file_size(csv_path) == 0;
  std::ofstream out(csv_path, std::ios::app);
  if (!out) throw std::runtime_error("cannot open " + csv_path);
  if (fresh) out << kCsvHeader << '\n' << std::flush;

  std::mutex mu;
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  auto record = [&](RunRecord&& rec) {
    std::lock_guard lock(mu);
    out << to_csv_row(rec) << '\n' << std::flush;
    if (!out) throw std::runtime_error("write failed: " + csv_path);
    if (log) *log << rec.algo.label() << " k=" << rec.k << " seed=" << rec.seed << " " << rec.status << " "
                  << rec.runtime_s << "s\n";
    result.records.push_back(std::move(rec));
    ++result.new_records;
  };
  auto worker = [&] {
    for (;;) {
      const std::size_t j = next++;
      if (j >= jobs.size()) return;
      try {
        const Job& job = jobs[j];
        std::optional<Instance> inst;
        try {
          inst = make_suite_instance(cfg, job.k, job.seed);
        } catch (const GenerationFailed&) {
        } catch (const TooManyPipes&) {
        }
        for (const auto& a : job.algos) {
          if (!inst) {
            RunRecord rec;
            rec.env = cfg.env;
            rec.dims = cfg.dims;
            rec.k = job.k;
            rec.seed = job.seed;
            rec.algo = a;
            rec.status = "generation_failed";
            record(std::move(rec));
            continue;
          }
          record(run_algorithm(*inst, a, cfg.timeout_s));
        }
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
        next = jobs.size();
        return;
      }
    }
  };

  const int workers = std::max(1, std::min<int>(bench_workers(cfg), static_cast<int>(jobs.size())));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return result;
}

// Metrics.

/// Percentage of records at pipe count k that were solved; 0 when there are none.
/// Callers filter to one algorithm and environment first.
inline double success_rate(const std::vector<RunRecord>& records, int k) {
  std::size_t total = 0;
  std::size_t solved = 0;
  for (const auto& r : records) {
    if (r.k != k) continue;
    ++total;
    solved += r.solved();
  }
  return total == 0 ? 0.0 : 100.0 * static_cast<double>(solved) / static_cast<double>(total);
}

using InstanceKey = std::tuple<EnvKind, int, int, int, int, std::uint64_t>;

/// Per instance: the larger of CBS's optimal cost and every ECBS lower bound
/// (timed-out ECBS runs contribute their last bound).
inline std::map<InstanceKey, std::int64_t> best_known_bounds(const std::vector<RunRecord>& records) {
  std::map<InstanceKey, std::int64_t> out;
  auto offer = [&](const RunRecord& r, std::int64_t v) {
    auto [it, fresh] = out.emplace(r.instance_key(), v);
    if (!fresh) it->second = std::max(it->second, v);
  };
  for (const auto& r : records) {
    if (r.algo.kind == AlgoKind::Cbs && r.status == "optimal" && r.cost) offer(r, *r.cost);
    if (r.algo.kind == AlgoKind::Ecbs && r.lb) offer(r, *r.lb);
  }
  return out;
}

/// cost / best known bound for a solved record; nullopt when undefined.
inline std::optional<double> quality_ratio(const RunRecord& r, const std::map<InstanceKey, std::int64_t>& bounds) {
  if (!r.solved() || !r.cost) return std::nullopt;
  auto it = bounds.find(r.instance_key());
  if (it == bounds.end() || it->second <= 0) return std::nullopt;
  return static_cast<double>(*r.cost) / static_cast<double>(it->second);
}

/// Ascending runtimes; timed-out runs count as the full timeout.
inline std::vector<double> runtime_profile(const std::vector<RunRecord>& records, double timeout_s) {
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.timed_out() ? timeout_s : r.runtime_s);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace piperoute
