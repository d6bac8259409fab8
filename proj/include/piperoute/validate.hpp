#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "grid3d.hpp"
#include "instance.hpp"
#include "solution.hpp"

// Solution checking and an exhaustive optimality oracle. Neither reuses the
// solver search code.

namespace piperoute {

enum class ViolationKind {
  EndpointMismatch,
  NonAdjacentStep,
  BlockedCell,
  RepeatedVertexInRoute,
  SharedVertex,
  CostMismatch,
};

inline std::string_view to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::EndpointMismatch: return "EndpointMismatch";
    case ViolationKind::NonAdjacentStep: return "NonAdjacentStep";
    case ViolationKind::BlockedCell: return "BlockedCell";
    case ViolationKind::RepeatedVertexInRoute: return "RepeatedVertexInRoute";
    case ViolationKind::SharedVertex: return "SharedVertex";
    case ViolationKind::CostMismatch: return "CostMismatch";
  }
  return "Unknown";
}

struct Violation {
  ViolationKind kind;
  std::string details;
};

/// Every broken feasibility rule of `sol`; empty means the solution is valid.
inline std::vector<Violation> validate_solution(const Instance& inst, const Solution& sol) {
  std::vector<Violation> out;
  auto report = [&](ViolationKind k, std::string d) { out.push_back({k, std::move(d)}); };

  if (sol.routes.size() != inst.pipes.size()) {
    report(ViolationKind::EndpointMismatch, "expected " + std::to_string(inst.pipes.size()) + " routes, got " +
                                                std::to_string(sol.routes.size()));
  }
  std::map<Coord, int> owner;
  std::int64_t total = 0;
  for (std::size_t k = 0; k < sol.routes.size() && k < inst.pipes.size(); ++k) {
    const auto& v = sol.routes[k].vertices;
    const Pipe& pipe = inst.pipes[k];
    const std::string name = "pipe " + std::to_string(k);
    if (v.empty()) {
      report(ViolationKind::EndpointMismatch, name + ": empty route");
      continue;
    }
    total += static_cast<std::int64_t>(v.size()) - 1;
    if (v.front() != pipe.start) report(ViolationKind::EndpointMismatch, name + ": route does not begin at start");
    if (v.back() != pipe.goal) report(ViolationKind::EndpointMismatch, name + ": route does not end at goal");

    std::set<Coord> seen;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const Coord& c = v[i];
      if (!inst.grid.contains(c)) {
        report(ViolationKind::BlockedCell, name + ": " + to_string(c) + " lies outside the grid");
      } else if (!inst.grid.is_open(c)) {
        report(ViolationKind::BlockedCell, name + ": " + to_string(c) + " is blocked");
      }
      if (i > 0) {
        const Coord& p = v[i - 1];
        const int d = std::abs(p.x - c.x) + std::abs(p.y - c.y) + std::abs(p.z - c.z);
        if (d != 1) report(ViolationKind::NonAdjacentStep, name + ": step " + to_string(p) + " -> " + to_string(c));
      }
      if (!seen.insert(c).second) {
        report(ViolationKind::RepeatedVertexInRoute, name + ": revisits " + to_string(c));
        continue;
      }
      auto [it, fresh] = owner.emplace(c, static_cast<int>(k));
      if (!fresh) {
        report(ViolationKind::SharedVertex,
               "pipes " + std::to_string(it->second) + " and " + std::to_string(k) + " share " + to_string(c));
      }
    }
  }
  if (total != sol.cost) {
    report(ViolationKind::CostMismatch,
           "reported cost " + std::to_string(sol.cost) + " but routes sum to " + std::to_string(total));
  }
  return out;
}

enum class OracleOutcome { Optimal, Infeasible, CapExceeded };

struct OracleResult {
  OracleOutcome outcome = OracleOutcome::Infeasible;
  Solution solution;  // meaningful when outcome == Optimal
};

inline std::int64_t default_cost_cap(const Instance& inst) {
  std::int64_t sum = 0;
  for (const auto& p : inst.pipes) sum += manhattan(p.start, p.goal);
  return 4 * sum + 8;
}

namespace detail {

/// Iterative deepening over total cost; depth-first route enumeration per
/// pipe with BFS-distance pruning in the residual grid.
class BruteForceOracle {
 public:
  explicit BruteForceOracle(const Instance& inst) : inst_(inst), grid_(inst.grid) {
    const auto n = grid_.cell_count();
    used_.assign(n, 0);
    for (const auto& p : inst.pipes) {
      used_[grid_.index(p.start)] = 1;
      used_[grid_.index(p.goal)] = 1;
    }
    for (std::size_t i = 0; i < n; ++i) open_cells_ += grid_.is_open(static_cast<CellIndex>(i));
    lb_.resize(inst.pipes.size() + 1, 0);
    for (std::size_t i = inst.pipes.size(); i-- > 0;)
      lb_[i] = lb_[i + 1] + manhattan(inst.pipes[i].start, inst.pipes[i].goal);
    routes_.resize(inst.pipes.size());
  }

  OracleResult run(std::int64_t cost_cap) {
    const auto k = static_cast<std::int64_t>(inst_.pipes.size());
    // Disjoint simple routes visit at most every open cell once.
    const std::int64_t ceiling = open_cells_ - k;
    const std::int64_t limit = std::min(cost_cap, ceiling);
    // Grid graphs are bipartite: every route length has its Manhattan parity.
    for (std::int64_t total = lb_[0]; total <= limit; total += 2) {
      if (solve_pipe(0, total)) {
        OracleResult res{OracleOutcome::Optimal, {}};
        res.solution.status = Status::Optimal;
        res.solution.cost = 0;
        for (auto& r : routes_) {
          res.solution.cost += static_cast<std::int64_t>(r.size()) - 1;
          res.solution.routes.push_back(Route{r});
        }
        res.solution.lower_bound = res.solution.cost;
        return res;
      }
    }
    return {cost_cap >= ceiling ? OracleOutcome::Infeasible : OracleOutcome::CapExceeded, {}};
  }

 private:
  static constexpr std::array<std::array<int, 3>, 6> kSteps{
      {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}}};

  bool free_cell(const Coord& c) const {
    return grid_.contains(c) && grid_.is_open(c) && used_[grid_.index(c)] == 0;
  }

  std::vector<int> distances_to(const Coord& goal) const {
    std::vector<int> dist(grid_.cell_count(), std::numeric_limits<int>::max());
    std::deque<Coord> queue{goal};
    dist[grid_.index(goal)] = 0;
    while (!queue.empty()) {
      const Coord c = queue.front();
      queue.pop_front();
      for (const auto& s : kSteps) {
        const Coord n{c.x + s[0], c.y + s[1], c.z + s[2]};
        if (!free_cell(n) || dist[grid_.index(n)] != std::numeric_limits<int>::max()) continue;
        dist[grid_.index(n)] = dist[grid_.index(c)] + 1;
        queue.push_back(n);
      }
    }
    return dist;
  }

  bool solve_pipe(std::size_t i, std::int64_t remaining) {
    if (i == inst_.pipes.size()) return true;
    const Pipe& p = inst_.pipes[i];
    const std::int64_t budget = remaining - lb_[i + 1];
    std::vector<int> dist = distances_to(p.goal);
    // The start is reserved, so look at its free neighbours.
    int best = std::numeric_limits<int>::max();
    for (const auto& s : kSteps) {
      const Coord n{p.start.x + s[0], p.start.y + s[1], p.start.z + s[2]};
      if (n == p.goal) best = 0;
      else if (free_cell(n)) best = std::min(best, dist[grid_.index(n)]);
    }
    if (best == std::numeric_limits<int>::max() || best + 1 > budget) return false;

    auto& route = routes_[i];
    route.assign(1, p.start);
    return extend(i, remaining, budget, dist);
  }

  bool extend(std::size_t i, std::int64_t remaining, std::int64_t budget, const std::vector<int>& dist) {
    auto& route = routes_[i];
    const Pipe& p = inst_.pipes[i];
    const Coord cur = route.back();
    const auto len = static_cast<std::int64_t>(route.size());  // edges after one more step
    for (const auto& s : kSteps) {
      const Coord n{cur.x + s[0], cur.y + s[1], cur.z + s[2]};
      if (n == p.goal) {
        if (len > budget) continue;
        // Interior cells are already marked; the endpoints are reserved.
        route.push_back(n);
        if (solve_pipe(i + 1, remaining - len)) return true;
        route.pop_back();
        continue;
      }
      if (!free_cell(n)) continue;
      const int d = dist[grid_.index(n)];
      if (d == std::numeric_limits<int>::max() || len + d > budget) continue;
      route.push_back(n);
      used_[grid_.index(n)] = 1;
      if (extend(i, remaining, budget, dist)) return true;
      used_[grid_.index(n)] = 0;
      route.pop_back();
    }
    return false;
  }

  const Instance& inst_;
  const Grid& grid_;
  std::vector<std::uint8_t> used_;
  std::vector<std::int64_t> lb_;
  std::vector<std::vector<Coord>> routes_;
  std::int64_t open_cells_ = 0;
};

}  // namespace detail

/// Exact optimum for tiny instances (a few dozen cells, K <= 3).
inline OracleResult brute_force_optimal(const Instance& inst, std::optional<std::int64_t> cost_cap = std::nullopt) {
  return detail::BruteForceOracle(inst).run(cost_cap.value_or(default_cost_cap(inst)));
}

}  // namespace piperoute
