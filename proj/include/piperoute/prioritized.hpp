#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "instance.hpp"
#include "low_level.hpp"
#include "solution.hpp"

namespace piperoute {

//! Prioritized planning could not route `pipe` given the pipes before it.
struct OrderFailed {
  int pipe = 0;
};

using PrioritizedResult = std::variant<Solution, OrderFailed>;

inline std::vector<int> default_order(const Instance& inst) {
  std::vector<int> order(inst.pipes.size());
  std::iota(order.begin(), order.end(), 0);
  return order;
}

/// Routes pipes one at a time in `order`. Each finished route becomes an
/// obstacle; endpoints of pipes not yet routed are reserved throughout.
/// The lower bound reported is the sum of unconstrained shortest paths.
inline PrioritizedResult solve_prioritized(const Instance& inst, const std::vector<int>& order) {
  const auto k = inst.pipes.size();
  {
    std::vector<int> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != default_order(inst)) throw std::invalid_argument("order must be a permutation of pipe ids");
  }
  LowLevelPlanner planner(inst.grid);
  std::vector<Path> paths(k);
  std::vector<bool> routed(k, false);
  std::vector<CellIndex> taken;

  for (int id : order) {
    std::vector<CellIndex> blocked = taken;
    for (std::size_t j = 0; j < k; ++j) {
      if (routed[j] || static_cast<int>(j) == id) continue;
      blocked.push_back(inst.grid.index(inst.pipes[j].start));
      blocked.push_back(inst.grid.index(inst.pipes[j].goal));
    }
    const Pipe& p = inst.pipes[id];
    auto path = planner.astar(inst.grid.index(p.start), inst.grid.index(p.goal), ForbiddenCells(std::move(blocked)));
    if (!path) return OrderFailed{id};
    taken.insert(taken.end(), path->begin(), path->end());
    paths[id] = std::move(*path);
    routed[id] = true;
  }

  Solution sol;
  sol.status = Status::Heuristic;
  std::int64_t bound = 0;
  for (std::size_t i = 0; i < k; ++i) {
    sol.routes.push_back(to_route(inst.grid, paths[i]));
    sol.cost += sol.routes.back().cost();
    const Pipe& p = inst.pipes[i];
    bound += static_cast<std::int64_t>(
                 planner.astar(inst.grid.index(p.start), inst.grid.index(p.goal), ForbiddenCells{})->size()) - 1;
  }
  sol.lower_bound = bound;
  sol.stats.ll_searches = planner.searches();
  return sol;
}

inline PrioritizedResult solve_prioritized(const Instance& inst) { return solve_prioritized(inst, default_order(inst)); }

/// Tries every permutation (lexicographic) and keeps the cheapest success.
/// Returns the failure of the last ordering when none succeeds.
inline PrioritizedResult solve_prioritized_all_orders(const Instance& inst) {
  if (inst.pipes.size() > 8) throw std::invalid_argument("all-orders mode supports at most 8 pipes");
  std::vector<int> order = default_order(inst);
  std::optional<PrioritizedResult> best;
  OrderFailed last_failure{};
  do {
    auto res = solve_prioritized(inst, order);
    if (auto* s = std::get_if<Solution>(&res)) {
      if (!best || s->cost < std::get<Solution>(*best).cost) best = std::move(res);
    } else {
      last_failure = std::get<OrderFailed>(res);
    }
  } while (std::next_permutation(order.begin(), order.end()));
  if (best) return *best;
  return last_failure;
}

}  // namespace piperoute
