#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <queue>
#include <span>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "deadline.hpp"
#include "focal_queue.hpp"
#include "grid3d.hpp"
#include "instance.hpp"
#include "solution.hpp"

namespace piperoute {

//! Pipe `pipe` may not occupy `vertex`.
struct Constraint {
  int pipe = 0;
  Coord vertex;

  friend auto operator<=>(const Constraint&, const Constraint&) = default;
};

using Path = std::vector<CellIndex>;

/// Grids up to this many cells use flat per-cell tables; larger ones hash.
inline constexpr std::size_t kDenseCellLimit = std::size_t{1} << 21;

/// Sorted set of cells a single search must avoid.
class ForbiddenCells {
 public:
  ForbiddenCells() = default;
  explicit ForbiddenCells(std::vector<CellIndex> cells) : cells_(std::move(cells)) {
    std::sort(cells_.begin(), cells_.end());
    cells_.erase(std::unique(cells_.begin(), cells_.end()), cells_.end());
  }

  bool contains(CellIndex c) const { return std::binary_search(cells_.begin(), cells_.end(), c); }
  bool empty() const { return cells_.empty(); }
  std::size_t size() const { return cells_.size(); }

 private:
  std::vector<CellIndex> cells_;
};

/// Number of other pipes whose current route uses each cell.
class Occupancy {
 public:
  explicit Occupancy(const Grid& grid) : grid_(&grid) {
    if (grid.cell_count() <= kDenseCellLimit) dense_.assign(grid.cell_count(), 0);
  }

  void add(CellIndex c) {
    if (!dense_.empty()) ++dense_[c];
    else ++sparse_[c];
  }
  void add(const Coord& c) { add(grid_->index(c)); }
  void add_path(std::span<const CellIndex> path) {
    for (auto c : path) add(c);
  }

  void remove(CellIndex c) {
    if (!dense_.empty()) {
      --dense_[c];
    } else if (auto it = sparse_.find(c); it != sparse_.end() && --it->second == 0) {
      sparse_.erase(it);
    }
  }
  void remove_path(std::span<const CellIndex> path) {
    for (auto c : path) remove(c);
  }

  int count(CellIndex c) const {
    if (!dense_.empty()) return dense_[c];
    auto it = sparse_.find(c);
    return it == sparse_.end() ? 0 : it->second;
  }
  int count(const Coord& c) const { return count(grid_->index(c)); }

 private:
  const Grid* grid_;
  std::vector<std::uint16_t> dense_;
  std::unordered_map<CellIndex, std::uint16_t> sparse_;
};

namespace detail {

struct CellRecord {
  std::int32_t g = 0;
  std::int32_t conflicts = 0;
  CellIndex parent = 0;
  std::uint32_t handle = 0;
  bool closed = false;
};

/// Per-search cell records, reset in O(1) between searches on small grids.
class CellTable {
 public:
  explicit CellTable(std::size_t cells) {
    if (cells <= kDenseCellLimit) {
      dense_.resize(cells);
      stamps_.assign(cells, 0);
    }
  }

  void clear() {
    if (dense_.empty()) {
      sparse_.clear();
      return;
    }
    if (++stamp_ == 0) {
      std::fill(stamps_.begin(), stamps_.end(), 0);
      stamp_ = 1;
    }
  }

  CellRecord* find(CellIndex c) {
    if (!dense_.empty()) return stamps_[c] == stamp_ ? &dense_[c] : nullptr;
    auto it = sparse_.find(c);
    return it == sparse_.end() ? nullptr : &it->second;
  }

  CellRecord& insert(CellIndex c) {
    if (!dense_.empty()) {
      stamps_[c] = stamp_;
      dense_[c] = CellRecord{};
      return dense_[c];
    }
    return sparse_[c] = CellRecord{};
  }

 private:
  std::vector<CellRecord> dense_;
  std::vector<std::uint32_t> stamps_;
  std::uint32_t stamp_ = 1;
  std::unordered_map<CellIndex, CellRecord> sparse_;
};

inline int manhattan_cells(const Grid& grid, CellIndex a, CellIndex b) {
  return manhattan(grid.coord(a), grid.coord(b));
}

}  // namespace detail

struct FocalPath {
  Path path;
  std::int64_t fmin = 0;  // lower bound on the constrained shortest-path cost
};

/// Single-pipe searches over one grid. Keeps scratch tables between calls,
/// so one planner serves a whole high-level search. Not thread-safe.
class LowLevelPlanner {
 public:
  explicit LowLevelPlanner(const Grid& grid, Deadline deadline = Deadline::never())
      : grid_(&grid), table_(grid.cell_count()), deadline_(deadline) {}

  const Grid& grid() const { return *grid_; }
  std::uint64_t searches() const { return searches_; }
  std::uint64_t expansions() const { return expansions_; }

  /// Shortest path avoiding `forbidden`. Ties: f ascending, g descending,
  /// then generation order. Throws DeadlineExceeded.
  std::optional<Path> astar(CellIndex start, CellIndex goal, const ForbiddenCells& forbidden) {
    ++searches_;
    table_.clear();
    // (f, -g, seq, cell)
    using Item = std::tuple<std::int32_t, std::int32_t, std::uint64_t, CellIndex>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
    std::uint64_t seq = 0;

    auto& s = table_.insert(start);
    s.parent = start;
    open.emplace(detail::manhattan_cells(*grid_, start, goal), 0, seq++, start);

    while (!open.empty()) {
      const auto [f, neg_g, _, cell] = open.top();
      open.pop();
      detail::CellRecord* rec = table_.find(cell);
      if (rec->closed || rec->g != -neg_g) continue;
      rec->closed = true;
      tick();
      if (cell == goal) return trace(goal);

      const std::int32_t ng = rec->g + 1;
      grid_->for_each_neighbor(cell, [&](CellIndex n) {
        if (forbidden.contains(n)) return;
        detail::CellRecord* r = table_.find(n);
        if (r == nullptr) {
          r = &table_.insert(n);
        } else if (r->closed || ng >= r->g) {
          return;
        }
        r->g = ng;
        r->parent = cell;
        open.emplace(ng + detail::manhattan_cells(*grid_, n, goal), -ng, seq++, n);
      });
    }
    return std::nullopt;
  }

  /// Focal search with factor w. FOCAL prefers fewer visits to occupied
  /// cells, then f ascending, g descending, generation order. The returned
  /// path costs at most floor(w * fmin), where fmin is the smallest f in
  /// OPEN when the goal is selected. A cell reached again with a strictly
  /// smaller g is reopened so that OPEN always holds a node of some
  /// shortest path at its optimal g, which keeps fmin a valid lower bound.
  std::optional<FocalPath> focal_astar(CellIndex start, CellIndex goal, const ForbiddenCells& forbidden, double w,
                                       const Occupancy& occ) {
    ++searches_;
    table_.clear();
    using Key = std::tuple<std::int32_t, std::int32_t, std::int32_t, std::uint64_t>;
    FocalQueue<Key> queue(w);
    std::vector<CellIndex> cell_of;
    std::uint64_t seq = 0;

    auto push = [&](CellIndex cell, detail::CellRecord& r) {
      const std::int32_t f = r.g + detail::manhattan_cells(*grid_, cell, goal);
      r.handle = queue.push(f, f, Key{r.conflicts, f, -r.g, seq++});
      cell_of.push_back(cell);
    };

    auto& s = table_.insert(start);
    s.parent = start;
    s.conflicts = occ.count(start) > 0 ? 1 : 0;
    push(start, s);

    while (!queue.empty()) {
      const std::int64_t fmin = queue.min_lower();
      const auto h = queue.pop();
      const CellIndex cell = cell_of[h];
      detail::CellRecord* rec = table_.find(cell);
      rec->closed = true;
      tick();
      if (cell == goal) return FocalPath{trace(goal), fmin};

      const std::int32_t ng = rec->g + 1;
      const std::int32_t base_conflicts = rec->conflicts;
      grid_->for_each_neighbor(cell, [&](CellIndex n) {
        if (forbidden.contains(n)) return;
        const std::int32_t nc = base_conflicts + (occ.count(n) > 0 ? 1 : 0);
        detail::CellRecord* r = table_.find(n);
        if (r == nullptr) {
          r = &table_.insert(n);
        } else if (ng < r->g) {
          if (!r->closed) queue.erase(r->handle);
          r->closed = false;
        } else if (ng == r->g && nc < r->conflicts && !r->closed) {
          queue.erase(r->handle);
        } else {
          return;
        }
        r->g = ng;
        r->conflicts = nc;
        r->parent = cell;
        push(n, *r);
      });
    }
    return std::nullopt;
  }

 private:
  void tick() {
    ++expansions_;
    if ((expansions_ & 1023) == 0 && deadline_.expired()) throw DeadlineExceeded();
  }

  Path trace(CellIndex goal) {
    Path path;
    CellIndex c = goal;
    for (;;) {
      path.push_back(c);
      const CellIndex p = table_.find(c)->parent;
      if (p == c) break;
      c = p;
    }
    std::reverse(path.begin(), path.end());
    return path;
  }

  const Grid* grid_;
  detail::CellTable table_;
  Deadline deadline_;
  std::uint64_t searches_ = 0;
  std::uint64_t expansions_ = 0;
};

inline Route to_route(const Grid& grid, std::span<const CellIndex> path) {
  Route r;
  r.vertices.reserve(path.size());
  for (auto c : path) r.vertices.push_back(grid.coord(c));
  return r;
}

namespace detail {

inline ForbiddenCells forbidden_for(const Grid& grid, const Pipe& pipe, std::span<const Constraint> constraints) {
  std::vector<CellIndex> cells;
  for (const auto& c : constraints)
    if (c.pipe == pipe.id && grid.contains(c.vertex)) cells.push_back(grid.index(c.vertex));
  return ForbiddenCells(std::move(cells));
}

}  // namespace detail

/// Minimum-cost route for `pipe` avoiding its constrained vertices, or
/// nullopt when the goal is unreachable.
inline std::optional<Route> astar(const Grid& grid, const Pipe& pipe, std::span<const Constraint> constraints = {}) {
  LowLevelPlanner planner(grid);
  auto path = planner.astar(grid.index(pipe.start), grid.index(pipe.goal), detail::forbidden_for(grid, pipe, constraints));
  if (!path) return std::nullopt;
  return to_route(grid, *path);
}

struct FocalRoute {
  Route route;
  std::int64_t fmin = 0;
};

inline std::optional<FocalRoute> focal_astar(const Grid& grid, const Pipe& pipe, std::span<const Constraint> constraints,
                                             double w, const Occupancy& occ) {
  LowLevelPlanner planner(grid);
  auto res = planner.focal_astar(grid.index(pipe.start), grid.index(pipe.goal),
                                 detail::forbidden_for(grid, pipe, constraints), w, occ);
  if (!res) return std::nullopt;
  return FocalRoute{to_route(grid, res->path), res->fmin};
}

}  // namespace piperoute
