#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace piperoute {

//! Lattice point inside a grid box.
struct Coord {
  int x = 0;
  int y = 0;
  int z = 0;

  friend constexpr auto operator<=>(const Coord&, const Coord&) = default;
};

inline std::string to_string(const Coord& c) {
  return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + "," + std::to_string(c.z) + ")";
}

struct CoordHash {
  std::size_t operator()(const Coord& c) const noexcept {
    std::uint64_t h = static_cast<std::uint32_t>(c.x);
    h = h * 0x9E3779B97F4A7C15ULL ^ static_cast<std::uint32_t>(c.y);
    h = h * 0x9E3779B97F4A7C15ULL ^ static_cast<std::uint32_t>(c.z);
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

struct Dims {
  int x = 0;
  int y = 0;
  int z = 0;

  std::size_t cell_count() const {
    return static_cast<std::size_t>(x) * static_cast<std::size_t>(y) * static_cast<std::size_t>(z);
  }
  friend constexpr bool operator==(const Dims&, const Dims&) = default;
};

//! Linear cell index: x + X * (y + Y * z).
using CellIndex = std::uint32_t;

/// Unit-cost 6-neighbour grid with dense blocked flags. Immutable once built.
class Grid {
 public:
  Grid() = default;

  explicit Grid(Dims dims) : dims_(dims) {
    check_dims(dims);
    blocked_.assign(dims.cell_count(), 0);
  }

  /// `blocked` holds one flag per cell in linear-index order.
  Grid(Dims dims, std::vector<std::uint8_t> blocked) : dims_(dims), blocked_(std::move(blocked)) {
    check_dims(dims);
    if (blocked_.size() != dims.cell_count()) {
      throw std::invalid_argument("blocked flags do not match grid dimensions");
    }
    for (auto b : blocked_) blocked_count_ += b != 0;
  }

  Grid(Dims dims, const std::vector<Coord>& blocked_cells) : Grid(dims) {
    for (const auto& c : blocked_cells) {
      if (!contains(c)) throw std::out_of_range("blocked cell outside grid: " + to_string(c));
      auto& flag = blocked_[index(c)];
      blocked_count_ += flag == 0;
      flag = 1;
    }
  }

  const Dims& dims() const { return dims_; }
  std::size_t cell_count() const { return blocked_.size(); }
  std::size_t blocked_count() const { return blocked_count_; }

  bool contains(const Coord& c) const {
    return c.x >= 0 && c.y >= 0 && c.z >= 0 && c.x < dims_.x && c.y < dims_.y && c.z < dims_.z;
  }

  CellIndex index(const Coord& c) const {
    return static_cast<CellIndex>(c.x + dims_.x * (c.y + dims_.y * c.z));
  }

  Coord coord(CellIndex i) const {
    const int xy = dims_.x * dims_.y;
    const int iz = static_cast<int>(i) / xy;
    const int rest = static_cast<int>(i) - iz * xy;
    return {rest % dims_.x, rest / dims_.x, iz};
  }

  /// Precondition: `contains(c)`.
  bool is_open(const Coord& c) const { return blocked_[index(c)] == 0; }
  bool is_open(CellIndex i) const { return blocked_[i] == 0; }

  /// Calls `fn(CellIndex)` for every open neighbour in the order +x, -x, +y, -y, +z, -z.
  template <class Fn>
  void for_each_neighbor(CellIndex i, Fn&& fn) const {
    const Coord c = coord(i);
    const CellIndex sx = 1;
    const CellIndex sy = static_cast<CellIndex>(dims_.x);
    const CellIndex sz = static_cast<CellIndex>(dims_.x) * static_cast<CellIndex>(dims_.y);
    if (c.x + 1 < dims_.x && blocked_[i + sx] == 0) fn(i + sx);
    if (c.x > 0 && blocked_[i - sx] == 0) fn(i - sx);
    if (c.y + 1 < dims_.y && blocked_[i + sy] == 0) fn(i + sy);
    if (c.y > 0 && blocked_[i - sy] == 0) fn(i - sy);
    if (c.z + 1 < dims_.z && blocked_[i + sz] == 0) fn(i + sz);
    if (c.z > 0 && blocked_[i - sz] == 0) fn(i - sz);
  }

  std::vector<Coord> neighbors(const Coord& c) const {
    std::vector<Coord> out;
    out.reserve(6);
    for_each_neighbor(index(c), [&](CellIndex n) { out.push_back(coord(n)); });
    return out;
  }

  bool on_boundary(const Coord& c) const {
    return c.x == 0 || c.x == dims_.x - 1 || c.y == 0 || c.y == dims_.y - 1 || c.z == 0 ||
           c.z == dims_.z - 1;
  }

  /// Open boundary cells in lexicographic (x, y, z) order.
  std::vector<Coord> perimeter_cells() const {
    std::vector<Coord> out;
    for (int x = 0; x < dims_.x; ++x) {
      const bool x_face = x == 0 || x == dims_.x - 1;
      for (int y = 0; y < dims_.y; ++y) {
        const bool xy_face = x_face || y == 0 || y == dims_.y - 1;
        for (int z = 0; z < dims_.z; ++z) {
          if (!xy_face && z != 0 && z != dims_.z - 1) {
            z = dims_.z - 2;  // jump to the top face
            continue;
          }
          const Coord c{x, y, z};
          if (is_open(c)) out.push_back(c);
        }
      }
    }
    return out;
  }

  /// Blocked cells in lexicographic (x, y, z) order.
  std::vector<Coord> blocked_cells() const {
    std::vector<Coord> out;
    out.reserve(blocked_count_);
    for (int x = 0; x < dims_.x; ++x)
      for (int y = 0; y < dims_.y; ++y)
        for (int z = 0; z < dims_.z; ++z)
          if (!is_open(Coord{x, y, z})) out.push_back({x, y, z});
    return out;
  }

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.dims_ == b.dims_ && a.blocked_ == b.blocked_;
  }

 private:
  static void check_dims(const Dims& d) {
    if (d.x <= 0 || d.y <= 0 || d.z <= 0) throw std::invalid_argument("grid dimensions must be positive");
    if (d.cell_count() >= (std::size_t{1} << 32)) throw std::invalid_argument("grid too large");
  }

  Dims dims_{};
  std::vector<std::uint8_t> blocked_;
  std::size_t blocked_count_ = 0;
};

inline int manhattan(const Coord& a, const Coord& b) {
  auto d = [](int u, int v) { return u > v ? u - v : v - u; };
  return d(a.x, b.x) + d(a.y, b.y) + d(a.z, b.z);
}

}  // namespace piperoute
