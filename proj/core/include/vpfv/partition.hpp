#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vpfv/phase_grid.hpp"

namespace vpfv {

/// Which neighbor regions are exchanged.
///  all: every one of the 3^D - 1 neighbors with 3-wide ghosts.
///  fvm: axis faces (3 wide) and width-1 edges for every dimension pair.
///  vp:  axis faces and only the edges read by the Vlasov corrections.
enum class NeighborStrategy { all, fvm, vp };

using Offset = std::array<int, max_dims>;

struct NeighborCounts {
  int all = 0;
  int fvm = 0;
  int vp = 0;
};

/// Closed-form pair counts.
NeighborCounts neighbor_pairs(int d, int v);

/// Dimension pairs (a < b) whose diagonals the Vlasov corrections read.
std::vector<std::pair<int, int>> vp_pairs(int d, int v);

/// Neighbor directions exchanged under a strategy, in a fixed order.
std::vector<Offset> neighbor_offsets(int d, int v, NeighborStrategy s);

/// Ghost width along a nonzero offset component.
int segment_width(const Offset& o, int dims, NeighborStrategy s);

/// Fraction of the full 3-wide shell transferred by a strategy for an N^D
/// partition with every neighbor present.
double ghost_fraction(int N_local, int d, int v, NeighborStrategy s);

/// Axis-aligned box in local (padded) coordinates.
struct Box {
  MultiIndex lo{};
  MultiIndex extent{};
  std::int64_t count(int dims) const;
};

struct GhostSegment {
  int src_block = -1;
  int src_rank = -1;
  Offset offset{};
  bool edge = false;
  Box src;  // interior cells of the source block
  Box dst;  // ghost cells of the receiving block
  std::int64_t count = 0;
};

struct PartitionBlock {
  int species = 0;
  int partition = 0;  // lexicographic index within its species
  MultiIndex pcoord{};
  MultiIndex offset{};  // global index of the first interior cell
  MultiIndex extent{};
  int rank = 0;
  std::vector<GhostSegment> recv;
};

struct PartitionPlan {
  int d = 1;
  int v = 1;
  int species = 1;
  int species_per_rank = 1;
  int ranks = 1;
  NeighborStrategy strategy = NeighborStrategy::vp;
  std::vector<std::array<int, max_dims>> n;      // per species partition counts
  std::vector<std::array<int, max_dims>> cells;  // per species global cell counts
  std::array<bool, max_dims> periodic{};
  std::vector<PartitionBlock> blocks;

  int dims() const { return d + v; }
  int partitions(int s) const;
  int block_of(int s, const MultiIndex& pcoord) const;
  std::vector<int> blocks_of_rank(int rank) const;
};

PartitionPlan plan_partitions(const std::vector<PhaseSpaceGrid>& grids, const std::vector<std::array<int, max_dims>>& n,
                              int ranks, int species_per_rank = 1, NeighborStrategy strategy = NeighborStrategy::vp);

/// Communication volumes in floating point numbers.
struct CommVolumes {
  double b_reduce = 0.0;
  double b_phi = 0.0;
  double b_ghost = 0.0;       // printed formula, (n_i - p_i) interface factors
  double b_ghost_wrap = 0.0;  // same with wrap-inclusive factors (n_i - 1 + p_i)
  std::int64_t counted_fvm = 0;  // brute-force segment count, all pairs
  std::int64_t counted_vp = 0;   // brute-force segment count, Vlasov pairs
  bool formula_matches_count = false;
};

/// Evaluates the formulas with every species' cell counts and partition
/// counts extended to all dims (those of species 0), and counts the segments
/// of the plan geometry that cross partition boundaries.
CommVolumes comm_volumes(const PartitionPlan& plan);

/// Inter-partition ghost elements for a strategy (self copies excluded).
std::int64_t counted_ghost_volume(const PartitionPlan& plan, NeighborStrategy s);

/// Fused pack: one pass over the flattened buffer, each index resolved to its
/// (segment, cell). Boxes are in the field's local coordinates.
std::vector<double> pack_ghosts(const DistField& f, std::span<const Box> boxes);
void pack_ghosts(const DistField& f, std::span<const Box> boxes, std::span<double> buffer);
void unpack_ghosts(std::span<const double> buffer, DistField& f, std::span<const Box> boxes);

/// Element counts per (source rank, destination rank).
struct TrafficLog {
  std::map<std::pair<int, int>, std::int64_t> elements;
  std::int64_t cross_partition = 0;
  int exchanges = 0;
  std::int64_t total() const;
  std::int64_t inter_rank() const;
};

/// Staged exchange over simulated ranks with persistent buffers.
class HaloExchanger {
 public:
  explicit HaloExchanger(const PartitionPlan& plan);
  /// fields[b] is the field of plan block b.
  void exchange(std::span<DistField* const> fields, TrafficLog* log = nullptr);
  std::int64_t elements_per_exchange() const;

 private:
  const PartitionPlan* plan_;
  struct SendItem {
    int dst_block;
    int seg;
  };
  std::vector<std::vector<Box>> send_boxes_, recv_boxes_;
  std::vector<std::vector<std::int64_t>> send_offset_;  // per block, per send item
  std::vector<std::vector<SendItem>> send_items_;
  std::vector<std::vector<std::pair<int, std::int64_t>>> recv_source_;  // (src block, offset in its send buffer)
  std::vector<std::vector<double>> send_buf_, recv_buf_;
};

void simulate_exchange(const PartitionPlan& plan, std::span<DistField* const> fields, TrafficLog& log);

}  // namespace vpfv
