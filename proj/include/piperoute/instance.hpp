#pragma once

#include <cmath>
#include <cstdint>
#include <deque>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "grid3d.hpp"
#include "rng.hpp"

namespace piperoute {

struct Pipe {
  int id = 0;
  Coord start;
  Coord goal;

  friend bool operator==(const Pipe&, const Pipe&) = default;
};

enum class EnvKind { Empty, Obstacles };

inline std::string_view to_string(EnvKind e) { return e == EnvKind::Empty ? "empty" : "obstacles"; }

inline std::optional<EnvKind> parse_env(std::string_view s) {
  if (s == "empty") return EnvKind::Empty;
  if (s == "obstacles") return EnvKind::Obstacles;
  return std::nullopt;
}

//! How a generated instance was produced.
struct GeneratorInfo {
  EnvKind env = EnvKind::Empty;
  std::uint64_t seed = 0;
  double density = 0.0;

  friend bool operator==(const GeneratorInfo&, const GeneratorInfo&) = default;
};

struct Instance {
  Grid grid;
  std::vector<Pipe> pipes;
  std::optional<GeneratorInfo> meta;

  int pipe_count() const { return static_cast<int>(pipes.size()); }
  friend bool operator==(const Instance&, const Instance&) = default;
};

struct InvalidInstance : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct TooManyPipes : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct GenerationFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Throws InvalidInstance naming the first broken invariant.
inline void validate_instance(const Instance& inst) {
  std::set<Coord> endpoints;
  for (std::size_t i = 0; i < inst.pipes.size(); ++i) {
    const Pipe& p = inst.pipes[i];
    const std::string name = "pipe " + std::to_string(i);
    if (p.id != static_cast<int>(i)) throw InvalidInstance(name + ": id out of order");
    for (const Coord& c : {p.start, p.goal}) {
      if (!inst.grid.contains(c)) throw InvalidInstance(name + ": endpoint " + to_string(c) + " out of bounds");
      if (!inst.grid.is_open(c)) throw InvalidInstance(name + ": endpoint " + to_string(c) + " is blocked");
      if (!endpoints.insert(c).second)
        throw InvalidInstance(name + ": endpoint " + to_string(c) + " duplicates another endpoint");
    }
  }
}

namespace detail {

/// Connected-component label per open cell (-1 for blocked cells).
inline std::vector<std::int32_t> component_labels(const Grid& grid) {
  std::vector<std::int32_t> label(grid.cell_count(), -1);
  std::vector<CellIndex> stack;
  std::int32_t next = 0;
  for (CellIndex s = 0; s < grid.cell_count(); ++s) {
    if (label[s] != -1 || !grid.is_open(s)) continue;
    label[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      const CellIndex c = stack.back();
      stack.pop_back();
      grid.for_each_neighbor(c, [&](CellIndex n) {
        if (label[n] == -1) {
          label[n] = next;
          stack.push_back(n);
        }
      });
    }
    ++next;
  }
  return label;
}

inline constexpr int kPairAttemptsPerPipe = 1000;

/// Draws k start/goal pairs from the open perimeter without replacement.
/// Pairs whose cells lie in different components are redrawn.
inline std::vector<Pipe> draw_pipes(const Grid& grid, int k, Rng& rng) {
  if (k < 1) throw std::invalid_argument("pipe count must be at least 1");
  std::vector<Coord> pool = grid.perimeter_cells();
  if (2 * static_cast<std::size_t>(k) > pool.size()) {
    throw TooManyPipes("need " + std::to_string(2 * k) + " endpoints but only " +
                       std::to_string(pool.size()) + " open perimeter cells exist");
  }
  std::vector<std::int32_t> labels;
  if (grid.blocked_count() > 0) labels = component_labels(grid);

  std::vector<Pipe> pipes;
  std::size_t taken = 0;
  for (int id = 0; id < k; ++id) {
    int attempts = 0;
    for (;;) {
      rng.draw_into(pool, taken);
      rng.draw_into(pool, taken + 1);
      const Coord s = pool[taken];
      const Coord g = pool[taken + 1];
      if (labels.empty() || labels[grid.index(s)] == labels[grid.index(g)]) {
        pipes.push_back({id, s, g});
        taken += 2;
        break;
      }
      if (++attempts >= kPairAttemptsPerPipe) {
        throw GenerationFailed("could not place a connected endpoint pair for pipe " + std::to_string(id));
      }
    }
  }
  return pipes;
}

}  // namespace detail

/// Empty grid with k pipes whose endpoints are drawn uniformly from the perimeter.
inline Instance generate_empty(Dims dims, int k, std::uint64_t seed) {
  Rng rng(seed);
  Instance inst{Grid(dims), {}, GeneratorInfo{EnvKind::Empty, seed, 0.0}};
  inst.pipes = detail::draw_pipes(inst.grid, k, rng);
  return inst;
}

/// Grid with floor-anchored obstacle columns covering ceil(density * cells)
/// cells, then k pipes drawn as in generate_empty with each pair connected.
inline Instance generate_obstacles(Dims dims, int k, double density, std::uint64_t seed) {
  if (!(density >= 0.0 && density < 1.0)) throw std::invalid_argument("density must be in [0, 1)");
  Rng rng(seed);
  const std::size_t cells = dims.cell_count();
  if (dims.x <= 0 || dims.y <= 0 || dims.z <= 0) throw std::invalid_argument("grid dimensions must be positive");
  const auto target = static_cast<std::size_t>(std::ceil(density * static_cast<double>(cells) - 1e-9));

  std::vector<std::uint8_t> blocked(cells, 0);
  std::vector<std::pair<int, int>> floor;
  floor.reserve(static_cast<std::size_t>(dims.x) * dims.y);
  for (int y = 0; y < dims.y; ++y)
    for (int x = 0; x < dims.x; ++x) floor.emplace_back(x, y);

  std::size_t placed = 0;
  std::size_t origins = 0;
  while (placed < target && origins < floor.size()) {
    rng.draw_into(floor, origins);
    const auto [x, y] = floor[origins++];
    auto height = static_cast<std::size_t>(rng.between(1, dims.z));
    height = std::min(height, target - placed);
    for (std::size_t z = 0; z < height; ++z) {
      blocked[static_cast<std::size_t>(x) + static_cast<std::size_t>(dims.x) * (y + static_cast<std::size_t>(dims.y) * z)] = 1;
    }
    placed += height;
  }

  Instance inst{Grid(dims, std::move(blocked)), {}, GeneratorInfo{EnvKind::Obstacles, seed, density}};
  inst.pipes = detail::draw_pipes(inst.grid, k, rng);
  return inst;
}

}  // namespace piperoute
