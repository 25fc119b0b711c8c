#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "vpfv/error.hpp"
#include "vpfv/partition.hpp"
#include "vpfv/quadrature.hpp"

using namespace vpfv;

namespace {

int brute_force(int D, int max_nonzero) {
  int count = 0;
  int total = 1;
  for (int k = 0; k < D; ++k) total *= 3;
  for (int c = 0; c < total; ++c) {
    int x = c, nz = 0;
    for (int k = 0; k < D; ++k, x /= 3) nz += x % 3 != 1;
    if (nz > 0 && nz <= max_nonzero) ++count;
  }
  return count;
}

PhaseSpaceGrid grid12() {
  const int N[] = {16, 12, 10};
  const double lo[] = {0.0, -4.0, -3.0}, hi[] = {6.0, 4.0, 3.0};
  return make_grid(1, 2, N, lo, hi);
}

void fill_smooth(DistField& f) {
  quadrature_init(f, [](std::span<const double> z) {
    return std::exp(-0.3 * (z[1] * z[1] + z[2] * z[2])) * (1.0 + 0.4 * std::sin(z[0])) + 0.01 * z[2];
  }, 2);
}

}  // namespace

TEST(Partition, NeighborCounts) {
  const auto c11 = neighbor_pairs(1, 1), c12 = neighbor_pairs(1, 2), c22 = neighbor_pairs(2, 2);
  EXPECT_EQ(c11.all, 8);
  EXPECT_EQ(c12.all, 26);
  EXPECT_EQ(c22.all, 80);
  EXPECT_EQ(c12.fvm, 18);
  EXPECT_EQ(c22.fvm, 32);
  for (auto [d, v] : {std::pair{1, 1}, {1, 2}, {2, 2}}) {
    const int D = d + v;
    const auto c = neighbor_pairs(d, v);
    EXPECT_EQ(c.all, brute_force(D, D));
    EXPECT_EQ(c.fvm, brute_force(D, 2));
    EXPECT_EQ(c.vp, 2 * D + 4 * static_cast<int>(vp_pairs(d, v).size()));
    EXPECT_LE(c.vp, c.fvm);
    EXPECT_EQ(static_cast<int>(neighbor_offsets(d, v, NeighborStrategy::vp).size()), c.vp);
  }
}

TEST(Partition, SegmentWidths) {
  EXPECT_EQ(segment_width({1, 0, 0, 0}, 3, NeighborStrategy::fvm), 3);
  EXPECT_EQ(segment_width({1, -1, 0, 0}, 3, NeighborStrategy::fvm), 1);
  EXPECT_EQ(segment_width({1, -1, 0, 0}, 3, NeighborStrategy::all), 3);
}

TEST(Partition, GhostFraction) {
  EXPECT_DOUBLE_EQ(ghost_fraction(16, 1, 2, NeighborStrategy::all), 1.0);
  // faces 6 N^2 3 + edges 12 N 1 over (N+6)^3 - N^3
  const double n = 9.0;
  EXPECT_NEAR(ghost_fraction(9, 1, 2, NeighborStrategy::fvm), (18 * n * n + 12 * n) / (std::pow(n + 6, 3) - n * n * n),
              1e-15);
  EXPECT_LT(ghost_fraction(16, 1, 2, NeighborStrategy::vp), ghost_fraction(16, 1, 2, NeighborStrategy::fvm));
  EXPECT_THROW(ghost_fraction(4, 1, 2, NeighborStrategy::fvm), Error);
}

TEST(Partition, PackUnpackRoundTrip) {
  const auto g = grid12();
  DistField a("e", g), b("e", g);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u;
  for (std::int64_t i = 0; i < a.size(); ++i) a.data()[i] = u(rng);
  std::vector<Box> boxes{Box{{0, 0, 0, 0}, {3, 12, 10, 0}}, Box{{-3, 2, 5, 0}, {2, 1, 4, 0}}};
  const auto buf = pack_ghosts(a, boxes);
  EXPECT_EQ(static_cast<std::int64_t>(buf.size()), boxes[0].count(3) + boxes[1].count(3));
  unpack_ghosts(buf, b, boxes);
  for (const auto& bx : boxes)
    for (int i = 0; i < bx.extent[0]; ++i)
      for (int j = 0; j < bx.extent[1]; ++j)
        for (int k = 0; k < bx.extent[2]; ++k) {
          const MultiIndex m{bx.lo[0] + i, bx.lo[1] + j, bx.lo[2] + k, 0};
          EXPECT_EQ(a.at(m), b.at(m));
        }
}

TEST(Partition, PlanRejectsIndivisibleSplit) {
  const auto g = grid12();
  EXPECT_THROW(plan_partitions({g}, {{3, 1, 1, 0}}, 3), Error);
}

class ExchangeTest : public ::testing::TestWithParam<NeighborStrategy> {};

TEST_P(ExchangeTest, MatchesSingleBlockGhosts) {
  const auto strategy = GetParam();
  const auto g = grid12();
  DistField whole("e", g);
  fill_smooth(whole);
  fill_local_ghosts(whole, capture_frozen(whole));

  const auto plan = plan_partitions({g}, {{2, 2, 2, 0}}, 8, 1, strategy);
  ASSERT_EQ(plan.blocks.size(), 8u);
  std::vector<DistField> blocks;
  for (const auto& b : plan.blocks) {
    DistField f("e", make_subgrid(g, b.offset, b.extent));
    fill_smooth(f);  // ghosts start from exact averages, interiors are overwritten below
    for_each_interior(f.grid(), [&](const MultiIndex& mi, std::int64_t o) {
      MultiIndex gm = mi;
      for (int k = 0; k < 3; ++k) gm[k] += b.offset[k];
      f.data()[o] = whole.at(gm);
    });
    for_each_padded(f.grid(), [&](const MultiIndex& mi, std::int64_t o) {
      bool interior = true;
      for (int k = 0; k < 3; ++k) interior = interior && mi[k] >= 0 && mi[k] < f.grid().N[k];
      if (!interior && !is_frozen_cell(f.grid(), mi)) f.data()[o] = std::nan("");
    });
    blocks.push_back(std::move(f));
  }
  std::vector<DistField*> ptrs;
  for (auto& f : blocks) ptrs.push_back(&f);
  TrafficLog log;
  HaloExchanger(plan).exchange(ptrs, &log);

  EXPECT_EQ(log.cross_partition, counted_ghost_volume(plan, strategy));
  for (std::size_t bi = 0; bi < plan.blocks.size(); ++bi) {
    const auto& b = plan.blocks[bi];
    for (const auto& seg : b.recv) {
      const auto& box = seg.dst;
      for (int i = 0; i < box.extent[0]; ++i)
        for (int j = 0; j < box.extent[1]; ++j)
          for (int k = 0; k < box.extent[2]; ++k) {
            const MultiIndex m{box.lo[0] + i, box.lo[1] + j, box.lo[2] + k, 0};
            MultiIndex gm{m[0] + b.offset[0], m[1] + b.offset[1], m[2] + b.offset[2], 0};
            gm[0] = (gm[0] + 16) % 16;
            ASSERT_EQ(blocks[bi].at(m), whole.at(gm)) << "block " << bi;
          }
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Strategies, ExchangeTest,
                         ::testing::Values(NeighborStrategy::all, NeighborStrategy::fvm, NeighborStrategy::vp));

TEST(Partition, TrafficOrdering) {
  const auto g = grid12();
  std::int64_t prev = -1;
  for (auto s : {NeighborStrategy::vp, NeighborStrategy::fvm, NeighborStrategy::all}) {
    const auto plan = plan_partitions({g}, {{2, 2, 2, 0}}, 8, 1, s);
    const auto v = counted_ghost_volume(plan, s);
    EXPECT_GT(v, prev);
    prev = v;
  }
}

TEST(Partition, CommVolumesReportBothConventions) {
  const auto g = grid12();
  const auto plan = plan_partitions({g}, {{2, 2, 1, 0}}, 4, 1, NeighborStrategy::fvm);
  const auto cv = comm_volumes(plan);
  EXPECT_GT(cv.b_ghost_wrap, 0.0);
  EXPECT_GE(cv.counted_fvm, cv.counted_vp);
  EXPECT_GT(cv.b_reduce, 0.0);
}
