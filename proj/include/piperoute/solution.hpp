#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "grid3d.hpp"

namespace piperoute {

/// A pipe's route: start first, goal last. Cost is the number of unit edges.
struct Route {
  std::vector<Coord> vertices;

  std::int64_t cost() const { return vertices.empty() ? 0 : static_cast<std::int64_t>(vertices.size()) - 1; }
  friend bool operator==(const Route&, const Route&) = default;
};

enum class Status {
  Optimal,
  Bounded,     // within factor w of the reported lower bound
  Infeasible,  // the search space was exhausted
  Timeout,
  Heuristic,   // feasible, no optimality certificate (prioritized planning)
};

inline std::string_view to_string(Status s) {
  switch (s) {
    case Status::Optimal: return "optimal";
    case Status::Bounded: return "bounded";
    case Status::Infeasible: return "infeasible";
    case Status::Timeout: return "timeout";
    case Status::Heuristic: return "heuristic";
  }
  return "unknown";
}

inline std::optional<Status> parse_status(std::string_view s) {
  for (auto st : {Status::Optimal, Status::Bounded, Status::Infeasible, Status::Timeout, Status::Heuristic})
    if (to_string(st) == s) return st;
  return std::nullopt;
}

struct SearchStats {
  std::uint64_t hl_expanded = 0;
  std::uint64_t hl_generated = 0;
  std::uint64_t ll_searches = 0;
};

struct Solution {
  Status status = Status::Infeasible;
  double w = 1.0;
  std::vector<Route> routes;  // empty unless solved()
  std::int64_t cost = 0;
  std::optional<std::int64_t> lower_bound;
  SearchStats stats;

  bool solved() const {
    return status == Status::Optimal || status == Status::Bounded || status == Status::Heuristic;
  }
};

/// Largest integer cost admitted by factor `w` over `bound`, i.e. floor(w * bound).
/// The small slack absorbs binary rounding of factors such as 1.05.
inline std::int64_t suboptimality_limit(double w, std::int64_t bound) {
  return static_cast<std::int64_t>(std::floor(w * static_cast<double>(bound) + 1e-9));
}

}  // namespace piperoute
