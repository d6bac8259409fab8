#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "grid3d.hpp"
#include "instance.hpp"
#include "low_level.hpp"
#include "solution.hpp"

namespace piperoute {

//! Two pipes whose routes share `vertex`; pipe_i < pipe_j.
struct Conflict {
  int pipe_i = 0;
  int pipe_j = 0;
  Coord vertex;

  friend bool operator==(const Conflict&, const Conflict&) = default;
};

struct ConflictReport {
  std::int64_t count = 0;
  std::optional<Conflict> first;
};

namespace detail {

struct ConflictScan {
  std::int64_t count = 0;
  bool found = false;
  int i = 0;
  int j = 0;
  std::size_t index = 0;  // position of the shared vertex along pipe i's route
};

/// Counts (pipe pair, vertex) collisions and locates the lexicographically
/// first (i, j, index along i) one. `vertices_of(i)` yields pipe i's route.
template <class Key, class Hash, class VerticesOf>
ConflictScan scan_conflicts(std::size_t n, VerticesOf&& vertices_of) {
  std::unordered_map<Key, std::vector<int>, Hash> users;
  std::size_t total = 0;
  for (std::size_t i = 0; i < n; ++i) total += vertices_of(i).size();
  users.reserve(total);
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& v : vertices_of(i)) users[v].push_back(static_cast<int>(i));

  ConflictScan scan;
  for (const auto& [_, pipes] : users) {
    const auto m = static_cast<std::int64_t>(pipes.size());
    scan.count += m * (m - 1) / 2;
  }
  if (scan.count == 0) return scan;

  for (std::size_t i = 0; i < n && !scan.found; ++i) {
    const auto& route = vertices_of(i);
    for (std::size_t idx = 0; idx < route.size(); ++idx) {
      for (int j : users.find(route[idx])->second) {
        if (j <= static_cast<int>(i)) continue;
        if (!scan.found || j < scan.j) {
          scan.found = true;
          scan.i = static_cast<int>(i);
          scan.j = j;
          scan.index = idx;
        }
        break;  // users are sorted, the first j > i is the smallest here
      }
    }
  }
  return scan;
}

}  // namespace detail

/// Collision count over all routes and the first conflict in (i, j, index) order.
inline ConflictReport detect_conflicts(std::span<const Route> routes) {
  auto scan = detail::scan_conflicts<Coord, CoordHash>(
      routes.size(), [&](std::size_t i) -> const std::vector<Coord>& { return routes[i].vertices; });
  ConflictReport report{scan.count, std::nullopt};
  if (scan.found) report.first = Conflict{scan.i, scan.j, routes[scan.i].vertices[scan.index]};
  return report;
}

/// Constraints are shared between a node and its descendants as a parent chain.
struct ConstraintLink {
  int pipe;
  CellIndex cell;
  std::shared_ptr<const ConstraintLink> parent;
};

/// Constraint-tree node. Route paths are shared with the parent except for
/// the re-planned pipe.
struct CtNode {
  std::shared_ptr<const ConstraintLink> constraints;
  std::vector<std::shared_ptr<const Path>> paths;
  std::vector<std::int64_t> pipe_lower_bounds;
  std::int64_t cost = 0;
  std::int64_t lower_bound = 0;
  std::int64_t conflict_count = 0;
  std::optional<Conflict> first_conflict;

  ForbiddenCells forbidden_for(int pipe) const {
    std::vector<CellIndex> cells;
    for (const ConstraintLink* l = constraints.get(); l != nullptr; l = l->parent.get())
      if (l->pipe == pipe) cells.push_back(l->cell);
    return ForbiddenCells(std::move(cells));
  }

  std::vector<Constraint> constraint_list(const Grid& grid) const {
    std::vector<Constraint> out;
    for (const ConstraintLink* l = constraints.get(); l != nullptr; l = l->parent.get())
      out.push_back({l->pipe, grid.coord(l->cell)});
    std::reverse(out.begin(), out.end());
    return out;
  }

  std::vector<Route> routes(const Grid& grid) const {
    std::vector<Route> out;
    out.reserve(paths.size());
    for (const auto& p : paths) out.push_back(to_route(grid, *p));
    return out;
  }

  /// Recomputes cost, lower bound and conflict data from the paths.
  void refresh(const Grid& grid) {
    cost = 0;
    lower_bound = 0;
    for (std::size_t i = 0; i < paths.size(); ++i) {
      cost += static_cast<std::int64_t>(paths[i]->size()) - 1;
      lower_bound += pipe_lower_bounds[i];
    }
    auto scan = detail::scan_conflicts<CellIndex, std::hash<CellIndex>>(
        paths.size(), [&](std::size_t i) -> const Path& { return *paths[i]; });
    conflict_count = scan.count;
    first_conflict.reset();
    if (scan.found) first_conflict = Conflict{scan.i, scan.j, grid.coord((*paths[scan.i])[scan.index])};
  }
};

/// Result of re-planning one pipe: its path and a lower bound on its cost.
struct Replanned {
  Path path;
  std::int64_t lower_bound = 0;
};

/// Splits `node` on `conflict`: one child per side, each adding a single
/// constraint and re-planning only that pipe. A pipe is never constrained at
/// its own endpoint; children whose re-plan fails are dropped.
/// `replan(parent, pipe, forbidden) -> std::optional<Replanned>`.
template <class Replan>
std::vector<CtNode> branch(const CtNode& node, const Conflict& conflict, const Instance& inst, Replan&& replan) {
  std::vector<CtNode> children;
  const CellIndex cell = inst.grid.index(conflict.vertex);
  for (int pipe : {conflict.pipe_i, conflict.pipe_j}) {
    const Pipe& p = inst.pipes[pipe];
    if (p.start == conflict.vertex || p.goal == conflict.vertex) continue;
    CtNode child;
    child.constraints = std::make_shared<const ConstraintLink>(ConstraintLink{pipe, cell, node.constraints});
    auto planned = replan(node, pipe, child.forbidden_for(pipe));
    if (!planned) continue;
    child.paths = node.paths;
    child.pipe_lower_bounds = node.pipe_lower_bounds;
    child.paths[pipe] = std::make_shared<const Path>(std::move(planned->path));
    child.pipe_lower_bounds[pipe] = planned->lower_bound;
    child.refresh(inst.grid);
    children.push_back(std::move(child));
  }
  return children;
}

/// CBS branching: the re-planned pipe gets a shortest path under its constraints.
inline std::vector<CtNode> branch(const CtNode& node, const Conflict& conflict, const Instance& inst,
                                  LowLevelPlanner& planner) {
  return branch(node, conflict, inst,
                [&](const CtNode&, int pipe, const ForbiddenCells& forbidden) -> std::optional<Replanned> {
                  const Pipe& p = inst.pipes[pipe];
                  auto path = planner.astar(inst.grid.index(p.start), inst.grid.index(p.goal), forbidden);
                  if (!path) return std::nullopt;
                  const auto cost = static_cast<std::int64_t>(path->size()) - 1;
                  return Replanned{std::move(*path), cost};
                });
}

/// Unconstrained CBS root, or nullopt if some pipe cannot reach its goal.
inline std::optional<CtNode> make_cbs_root(const Instance& inst, LowLevelPlanner& planner) {
  CtNode root;
  for (const Pipe& p : inst.pipes) {
    auto path = planner.astar(inst.grid.index(p.start), inst.grid.index(p.goal), ForbiddenCells{});
    if (!path) return std::nullopt;
    root.pipe_lower_bounds.push_back(static_cast<std::int64_t>(path->size()) - 1);
    root.paths.push_back(std::make_shared<const Path>(std::move(*path)));
  }
  root.refresh(inst.grid);
  return root;
}

}  // namespace piperoute
