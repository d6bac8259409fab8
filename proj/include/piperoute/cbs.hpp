#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <tuple>
#include <vector>

#include "constraint_tree.hpp"
#include "deadline.hpp"
#include "instance.hpp"
#include "low_level.hpp"
#include "solution.hpp"

namespace piperoute {

inline constexpr double kDefaultTimeoutSeconds = 100.0;

/// Optimal conflict-based search.
///
/// Best-first over the constraint tree keyed by (cost, conflict count,
/// generation order); expands the first conflict of each node. Returns
/// Optimal, Infeasible once the tree is exhausted, or Timeout carrying the
/// cheapest open cost as lower bound.
inline Solution solve_cbs(const Instance& inst, double timeout_s = kDefaultTimeoutSeconds) {
  const Deadline deadline = Deadline::after(timeout_s);
  LowLevelPlanner planner(inst.grid, deadline);
  Solution sol;
  sol.w = 1.0;

  struct Entry {
    std::int64_t cost;
    std::int64_t conflicts;
    std::uint64_t seq;
    std::unique_ptr<CtNode> node;
  };
  auto later = [](const Entry& a, const Entry& b) {
    return std::tie(a.cost, a.conflicts, a.seq) > std::tie(b.cost, b.conflicts, b.seq);
  };
  std::vector<Entry> open;
  std::uint64_t seq = 0;
  std::optional<std::int64_t> expanding_cost;

  auto finish_stats = [&] {
    sol.stats.ll_searches = planner.searches();
    return sol;
  };

  try {
    auto root = make_cbs_root(inst, planner);
    if (!root) {
      sol.status = Status::Infeasible;
      return finish_stats();
    }
    ++sol.stats.hl_generated;
    open.push_back({root->cost, root->conflict_count, seq++, std::make_unique<CtNode>(std::move(*root))});

    while (!open.empty()) {
      if (deadline.expired()) throw DeadlineExceeded();
      std::pop_heap(open.begin(), open.end(), later);
      Entry top = std::move(open.back());
      open.pop_back();
      expanding_cost = top.cost;
      ++sol.stats.hl_expanded;

      const CtNode& node = *top.node;
      if (!node.first_conflict) {
        sol.status = Status::Optimal;
        sol.routes = node.routes(inst.grid);
        sol.cost = node.cost;
        sol.lower_bound = node.cost;
        return finish_stats();
      }
      for (auto& child : branch(node, *node.first_conflict, inst, planner)) {
        ++sol.stats.hl_generated;
        open.push_back({child.cost, child.conflict_count, seq++, std::make_unique<CtNode>(std::move(child))});
        std::push_heap(open.begin(), open.end(), later);
      }
      expanding_cost.reset();
    }
    sol.status = Status::Infeasible;
  } catch (const DeadlineExceeded&) {
    sol.status = Status::Timeout;
    std::optional<std::int64_t> lb = expanding_cost;
    if (!open.empty()) {
      const auto best = std::min_element(open.begin(), open.end(), [](const Entry& a, const Entry& b) {
                          return a.cost < b.cost;
                        })->cost;
      lb = lb ? std::min(*lb, best) : best;
    }
    sol.lower_bound = lb;
  }
  return finish_stats();
}

}  // namespace piperoute
