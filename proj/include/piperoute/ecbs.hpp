#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "cbs.hpp"
#include "constraint_tree.hpp"
#include "deadline.hpp"
#include "focal_queue.hpp"
#include "instance.hpp"
#include "low_level.hpp"
#include "solution.hpp"

namespace piperoute {

inline constexpr double kDefaultEcbsFactor = 1.01;

/// Bounded-suboptimal ECBS(w) on vertex-disjoint routing.
///
/// High level: OPEN ordered by node lower bound (sum of per-pipe fmin),
/// FOCAL holds nodes with cost <= w * min LB ordered by conflict count.
/// Low level: focal_astar against the occupancy of the node's other routes.
/// On success, cost <= floor(w * lower_bound) and lower_bound <= optimum.
inline Solution solve_ecbs(const Instance& inst, double w = kDefaultEcbsFactor,
                           double timeout_s = kDefaultTimeoutSeconds) {
  if (!(w >= 1.0)) throw std::invalid_argument("suboptimality factor must be >= 1");
  const Deadline deadline = Deadline::after(timeout_s);
  LowLevelPlanner planner(inst.grid, deadline);
  Solution sol;
  sol.w = w;

  auto plan = [&](int pipe, const ForbiddenCells& forbidden, const Occupancy& occ) -> std::optional<Replanned> {
    const Pipe& p = inst.pipes[pipe];
    auto res = planner.focal_astar(inst.grid.index(p.start), inst.grid.index(p.goal), forbidden, w, occ);
    if (!res) return std::nullopt;
    return Replanned{std::move(res->path), res->fmin};
  };
  auto replan = [&](const CtNode& parent, int pipe, const ForbiddenCells& forbidden) {
    Occupancy occ(inst.grid);
    for (std::size_t i = 0; i < parent.paths.size(); ++i)
      if (static_cast<int>(i) != pipe) occ.add_path(*parent.paths[i]);
    return plan(pipe, forbidden, occ);
  };

  using Key = std::tuple<std::int64_t, std::uint64_t>;  // (conflicts, generation order)
  FocalQueue<Key> queue(w);
  std::vector<std::unique_ptr<CtNode>> nodes;  // indexed by queue handle
  std::uint64_t seq = 0;
  std::optional<std::int64_t> expanding_lb;

  auto push = [&](CtNode&& n) {
    ++sol.stats.hl_generated;
    const auto h = queue.push(n.lower_bound, n.cost, Key{n.conflict_count, seq++});
    if (nodes.size() <= h) nodes.resize(h + 1);
    nodes[h] = std::make_unique<CtNode>(std::move(n));
  };

  try {
    // Root: pipes planned in id order, each avoiding the routes before it.
    CtNode root;
    Occupancy occ(inst.grid);
    for (const Pipe& p : inst.pipes) {
      auto planned = plan(p.id, ForbiddenCells{}, occ);
      if (!planned) {
        sol.status = Status::Infeasible;
        sol.stats.ll_searches = planner.searches();
        return sol;
      }
      occ.add_path(planned->path);
      root.pipe_lower_bounds.push_back(planned->lower_bound);
      root.paths.push_back(std::make_shared<const Path>(std::move(planned->path)));
    }
    root.refresh(inst.grid);
    push(std::move(root));

    while (!queue.empty()) {
      if (deadline.expired()) throw DeadlineExceeded();
      const std::int64_t lb = queue.min_lower();
      const auto h = queue.pop();
      std::unique_ptr<CtNode> node = std::move(nodes[h]);
      expanding_lb = node->lower_bound;
      ++sol.stats.hl_expanded;

      if (!node->first_conflict) {
        sol.status = Status::Bounded;
        sol.routes = node->routes(inst.grid);
        sol.cost = node->cost;
        sol.lower_bound = lb;
        sol.stats.ll_searches = planner.searches();
        return sol;
      }
      for (auto& child : branch(*node, *node->first_conflict, inst, replan)) push(std::move(child));
      expanding_lb.reset();
    }
    sol.status = Status::Infeasible;
  } catch (const DeadlineExceeded&) {
    sol.status = Status::Timeout;
    std::optional<std::int64_t> lb = expanding_lb;
    if (!queue.empty()) lb = lb ? std::min(*lb, queue.min_lower()) : queue.min_lower();
    sol.lower_bound = lb;
  }
  sol.stats.ll_searches = planner.searches();
  return sol;
}

}  // namespace piperoute
