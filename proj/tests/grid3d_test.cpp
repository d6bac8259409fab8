#include <gtest/gtest.h>

#include <algorithm>

#include "piperoute/grid3d.hpp"
#include "piperoute/rng.hpp"

namespace pr = piperoute;
using pr::Coord;
using pr::Grid;

TEST(Grid3d, IsOpen) {
  Grid empty(pr::Dims{3, 3, 3});
  EXPECT_TRUE(empty.is_open(Coord{1, 1, 1}));

  Grid g(pr::Dims{3, 3, 3}, std::vector<Coord>{{1, 1, 1}});
  EXPECT_FALSE(g.is_open(Coord{1, 1, 1}));
  EXPECT_TRUE(g.is_open(Coord{0, 0, 0}));
  EXPECT_EQ(g.blocked_count(), 1u);
}

TEST(Grid3d, NeighborsInteriorAndCorner) {
  Grid g(pr::Dims{3, 3, 3});
  EXPECT_EQ(g.neighbors({1, 1, 1}).size(), 6u);
  EXPECT_EQ(g.neighbors({1, 1, 1}),
            (std::vector<Coord>{{2, 1, 1}, {0, 1, 1}, {1, 2, 1}, {1, 0, 1}, {1, 1, 2}, {1, 1, 0}}));
  EXPECT_EQ(g.neighbors({0, 0, 0}), (std::vector<Coord>{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}));
}

TEST(Grid3d, NeighborsSkipBlocked) {
  Grid g(pr::Dims{3, 3, 3}, std::vector<Coord>{{1, 0, 0}});
  EXPECT_EQ(g.neighbors({0, 0, 0}), (std::vector<Coord>{{0, 1, 0}, {0, 0, 1}}));
}

TEST(Grid3d, PerimeterCells) {
  EXPECT_EQ(Grid(pr::Dims{3, 3, 3}).perimeter_cells().size(), 26u);
  EXPECT_EQ(Grid(pr::Dims{2, 2, 2}).perimeter_cells().size(), 8u);
  Grid g(pr::Dims{3, 3, 3}, std::vector<Coord>{{0, 0, 0}});
  const auto p = g.perimeter_cells();
  EXPECT_EQ(p.size(), 25u);
  EXPECT_TRUE(std::is_sorted(p.begin(), p.end()));
  EXPECT_EQ(std::find(p.begin(), p.end(), Coord{1, 1, 1}), p.end());
}

TEST(Grid3d, IndexRoundTrip) {
  Grid g(pr::Dims{5, 4, 3});
  EXPECT_EQ(g.index({1, 2, 1}), 1u + 5u * (2u + 4u * 1u));
  for (pr::CellIndex i = 0; i < g.cell_count(); ++i) EXPECT_EQ(g.index(g.coord(i)), i);
}

TEST(Grid3d, RejectsBadDims) {
  EXPECT_THROW(Grid(pr::Dims{0, 3, 3}), std::invalid_argument);
  EXPECT_THROW(Grid(pr::Dims{2, 2, 2}, std::vector<std::uint8_t>(7, 0)), std::invalid_argument);
}

// Random grids: neighbour symmetry, degree bound, perimeter size formula.
TEST(Grid3dProperty, NeighborSymmetryAndPerimeterSize) {
  pr::Rng rng(42);
  for (int trial = 0; trial < 60; ++trial) {
    const pr::Dims d{static_cast<int>(rng.between(1, 6)), static_cast<int>(rng.between(1, 6)),
                     static_cast<int>(rng.between(1, 6))};
    std::vector<std::uint8_t> flags(d.cell_count());
    for (auto& f : flags) f = rng.below(4) == 0;
    Grid g(d, flags);
    for (pr::CellIndex i = 0; i < g.cell_count(); ++i) {
      if (!g.is_open(i)) continue;
      const Coord a = g.coord(i);
      const auto na = g.neighbors(a);
      EXPECT_LE(na.size(), 6u);
      for (const Coord& b : na) {
        EXPECT_EQ(pr::manhattan(a, b), 1);
        const auto nb = g.neighbors(b);
        EXPECT_NE(std::find(nb.begin(), nb.end(), a), nb.end());
      }
    }
    Grid empty(d);
    const auto inner = static_cast<std::size_t>(std::max(0, d.x - 2) * std::max(0, d.y - 2) * std::max(0, d.z - 2));
    EXPECT_EQ(empty.perimeter_cells().size(), d.cell_count() - inner);
    for (pr::CellIndex i = 0; i < empty.cell_count(); ++i) {
      const Coord c = empty.coord(i);
      const bool interior = c.x > 0 && c.y > 0 && c.z > 0 && c.x < d.x - 1 && c.y < d.y - 1 && c.z < d.z - 1;
      if (interior) { EXPECT_EQ(empty.neighbors(c).size(), 6u); }
    }
  }
}

TEST(Rng, BelowStaysInRangeAndIsDeterministic) {
  pr::Rng a(7), b(7);
  for (int i = 0; i < 1000; ++i) {
    const auto n = 1 + static_cast<std::uint64_t>(i % 37);
    const auto v = a.below(n);
    EXPECT_LT(v, n);
    EXPECT_EQ(v, b.below(n));
  }
  // The 10000th output of a default-seeded mt19937_64 is fixed by the standard.
  std::mt19937_64 ref;
  ref.discard(9999);
  EXPECT_EQ(ref(), 9981545732273789042ULL);
}
