#include <gtest/gtest.h>

#include <random>

#include "vpfv/error.hpp"
#include "vpfv/phase_grid.hpp"

using namespace vpfv;

namespace {

PhaseSpaceGrid grid11(int nx = 64, int nv = 64) {
  const int N[] = {nx, nv};
  const double lo[] = {0.0, -6.0}, hi[] = {1.0, 6.0};
  return make_grid(1, 1, N, lo, hi);
}

}  // namespace

TEST(PhaseGrid, Spacing) {
  const auto g = grid11();
  EXPECT_DOUBLE_EQ(g.h[0], 1.0 / 64);
  EXPECT_DOUBLE_EQ(g.h[1], 12.0 / 64);
  EXPECT_TRUE(g.periodic[0]);
  EXPECT_FALSE(g.periodic[1]);
  EXPECT_EQ(g.padded_size, 70 * 70);
}

TEST(PhaseGrid, RejectsFewerVelocityDims) {
  const int N[] = {8, 8, 8};
  const double lo[] = {0, 0, -1}, hi[] = {1, 1, 1};
  EXPECT_THROW(make_grid(2, 1, N, lo, hi), Error);
}

TEST(PhaseGrid, FlatIndexRoundTrip) {
  const int N[] = {8, 8, 8};
  const double lo[] = {0, -1, -1}, hi[] = {1, 1, 1};
  const auto g = make_grid(1, 2, N, lo, hi);
  ASSERT_EQ(g.padded_size, 14 * 14 * 14);
  std::int64_t expect = 0;
  for (int i = -ghost; i < 8 + ghost; ++i)
    for (int j = -ghost; j < 8 + ghost; ++j)
      for (int k = -ghost; k < 8 + ghost; ++k) {
        const MultiIndex mi{i, j, k, 0};
        const auto off = flat_index(g, mi);
        EXPECT_EQ(off, expect++);
        EXPECT_EQ(unflatten(g, off), mi);
      }
  EXPECT_EQ(flat_index(g, {0, 0, 1, 0}) - flat_index(g, {0, 0, 0, 0}), 1);
}

TEST(PhaseGrid, OutOfRangeIndexThrows) {
  const auto g = grid11(8, 8);
  EXPECT_THROW(flat_index(g, {-4, 0, 0, 0}), Error);
  EXPECT_THROW(flat_index(g, {0, 11, 0, 0}), Error);
}

TEST(PhaseGrid, SubgridCentersMatchGlobal) {
  const int N[] = {12, 9, 15};
  const double lo[] = {0.0, -1.7, -2.3}, hi[] = {7.1, 1.3, 2.9};
  const auto g = make_grid(1, 2, N, lo, hi);
  const auto s = make_subgrid(g, {4, 3, 5, 0}, {4, 3, 5, 0});
  for (int k = 0; k < 3; ++k)
    for (int i = -ghost; i < s.N[k] + ghost; ++i) EXPECT_EQ(s.center(k, i), g.center(k, i + s.origin[k]));
}

TEST(PhaseGrid, PeriodicWrapAndFrozenGhosts) {
  const auto g = grid11(16, 16);
  DistField f("e", g);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for_each_padded(g, [&](const MultiIndex&, std::int64_t off) { f.data()[off] = u(rng); });
  const auto frozen = capture_frozen(f);
  const double v_ghost = f.at({5, 17, 0, 0});
  for_each_interior(g, [&](const MultiIndex&, std::int64_t off) { f.data()[off] += 1.0; });
  fill_local_ghosts(f, frozen);
  for (int j = 0; j < 16; ++j) {
    EXPECT_EQ(f.at({-1, j, 0, 0}), f.at({15, j, 0, 0}));
    EXPECT_EQ(f.at({16, j, 0, 0}), f.at({0, j, 0, 0}));
  }
  EXPECT_EQ(f.at({5, 17, 0, 0}), v_ghost);
}

TEST(PhaseGrid, ConstantFieldGhostsConstant) {
  const auto g = grid11(8, 8);
  DistField f("e", g, 2.5);
  const auto frozen = capture_frozen(f);
  fill_local_ghosts(f, frozen);
  for (std::int64_t i = 0; i < f.size(); ++i) EXPECT_EQ(f.data()[i], 2.5);
}

TEST(PhaseGrid, ApplyFrozenNeedsCapture) {
  const auto g = grid11(8, 8);
  DistField f("e", g);
  EXPECT_THROW(apply_frozen(f, FrozenGhosts{}), Error);
}

TEST(PhaseGrid, LiveCount) {
  const auto before = DistField::live_count();
  {
    DistField a("e", grid11(8, 8));
    DistField b = a;
    EXPECT_EQ(DistField::live_count(), before + 2);
  }
  EXPECT_EQ(DistField::live_count(), before);
}
