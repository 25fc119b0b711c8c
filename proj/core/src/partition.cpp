#include "vpfv/partition.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "vpfv/error.hpp"

namespace vpfv {

NeighborCounts neighbor_pairs(int d, int v) {
  const int D = d + v;
  NeighborCounts c;
  c.all = 1;
  for (int k = 0; k < D; ++k) c.all *= 3;
  c.all -= 1;
  c.fvm = 2 * D * D;
  const int choose_d2 = d * (d - 1) / 2;
  c.vp = 2 * D * D - 4 * choose_d2 - 4 * (v - d) * d;
  return c;
}

std::vector<std::pair<int, int>> vp_pairs(int d, int v) {
  if (d == 1 && v == 1) return {{0, 1}};
  if (d == 1 && v == 2) return {{0, 1}, {1, 2}};
  if (d == 2 && v == 2) return {{0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  throw Error(ErrorKind::unsupported, "unsupported phase-space dimensionality");
}

std::vector<Offset> neighbor_offsets(int d, int v, NeighborStrategy s) {
  const int D = d + v;
  std::vector<Offset> out;
  if (s == NeighborStrategy::all) {
    int total = 1;
    for (int k = 0; k < D; ++k) total *= 3;
    for (int c = 0; c < total; ++c) {
      Offset o{};
      int rem = c;
      bool zero = true;
      for (int k = D - 1; k >= 0; --k) {
        o[k] = rem % 3 - 1;
        rem /= 3;
        zero &= o[k] == 0;
      }
      if (!zero) out.push_back(o);
    }
    return out;
  }
  for (int k = 0; k < D; ++k) {
    for (int sg : {-1, 1}) {
      Offset o{};
      o[k] = sg;
      out.push_back(o);
    }
  }
  std::vector<std::pair<int, int>> pairs;
  if (s == NeighborStrategy::fvm) {
    for (int a = 0; a < D; ++a)
      for (int b = a + 1; b < D; ++b) pairs.emplace_back(a, b);
  } else {
    pairs = vp_pairs(d, v);
  }
  for (const auto& [a, b] : pairs) {
    for (int sa : {-1, 1}) {
      for (int sb : {-1, 1}) {
        Offset o{};
        o[a] = sa;
        o[b] = sb;
        out.push_back(o);
      }
    }
  }
  return out;
}

int segment_width(const Offset& o, int dims, NeighborStrategy s) {
  int nz = 0;
  for (int k = 0; k < dims; ++k) nz += o[k] != 0;
  if (nz == 1 || s == NeighborStrategy::all) return ghost;
  return 1;
}

double ghost_fraction(int N_local, int d, int v, NeighborStrategy s) {
  const int D = d + v;
  if (N_local < 8) throw Error(ErrorKind::invalid_extent, "ghost fraction needs N >= 8");
  auto volume = [&](NeighborStrategy st) {
    double vol = 0.0;
    for (const auto& o : neighbor_offsets(d, v, st)) {
      const int w = segment_width(o, D, st);
      double c = 1.0;
      for (int k = 0; k < D; ++k) c *= o[k] == 0 ? N_local : w;
      vol += c;
    }
    return vol;
  };
  return volume(s) / volume(NeighborStrategy::all);
}

std::int64_t Box::count(int dims) const {
  std::int64_t c = 1;
  for (int k = 0; k < dims; ++k) c *= extent[k];
  return c;
}

int PartitionPlan::partitions(int s) const {
  int p = 1;
  for (int k = 0; k < dims(); ++k) p *= n[s][k];
  return p;
}

int PartitionPlan::block_of(int s, const MultiIndex& pcoord) const {
  int start = 0;
  for (int t = 0; t < s; ++t) start += partitions(t);
  int lex = 0;
  for (int k = 0; k < dims(); ++k) lex = lex * n[s][k] + pcoord[k];
  return start + lex;
}

std::vector<int> PartitionPlan::blocks_of_rank(int rank) const {
  std::vector<int> out;
  for (int b = 0; b < static_cast<int>(blocks.size()); ++b)
    if (blocks[b].rank == rank) out.push_back(b);
  return out;
}

namespace {

std::vector<GhostSegment> build_segments(const PartitionPlan& plan, int b, NeighborStrategy strategy) {
  const auto& blk = plan.blocks[b];
  const int D = plan.dims();
  const int s = blk.species;
  std::vector<GhostSegment> segs;
  for (const auto& o : neighbor_offsets(plan.d, plan.v, strategy)) {
    MultiIndex q = blk.pcoord;
    bool exists = true;
    for (int k = 0; k < D; ++k) {
      q[k] += o[k];
      if (q[k] < 0 || q[k] >= plan.n[s][k]) {
        if (plan.periodic[k])
          q[k] = (q[k] + plan.n[s][k]) % plan.n[s][k];
        else
          exists = false;
      }
    }
    if (!exists) continue;
    const int w = segment_width(o, D, strategy);
    GhostSegment g;
    g.src_block = plan.block_of(s, q);
    g.src_rank = plan.blocks[g.src_block].rank;
    g.offset = o;
    int nz = 0;
    for (int k = 0; k < D; ++k) nz += o[k] != 0;
    g.edge = nz > 1;
    const auto& src = plan.blocks[g.src_block];
    for (int k = 0; k < D; ++k) {
      const int E = blk.extent[k];
      if (o[k] == 0) {
        g.dst.lo[k] = 0;
        g.src.lo[k] = 0;
        g.dst.extent[k] = g.src.extent[k] = E;
      } else if (o[k] < 0) {
        g.dst.lo[k] = -w;
        g.src.lo[k] = src.extent[k] - w;
        g.dst.extent[k] = g.src.extent[k] = w;
      } else {
        g.dst.lo[k] = E;
        g.src.lo[k] = 0;
        g.dst.extent[k] = g.src.extent[k] = w;
      }
    }
    g.count = g.dst.count(D);
    segs.push_back(g);
  }
  return segs;
}

}  // namespace

PartitionPlan plan_partitions(const std::vector<PhaseSpaceGrid>& grids, const std::vector<std::array<int, max_dims>>& n,
                              int ranks, int species_per_rank, NeighborStrategy strategy) {
  if (grids.empty() || grids.size() != n.size())
    throw Error(ErrorKind::dimension_mismatch, "need one partition grid per species");
  PartitionPlan plan;
  plan.d = grids[0].d;
  plan.v = grids[0].v;
  plan.species = static_cast<int>(grids.size());
  plan.species_per_rank = species_per_rank;
  plan.strategy = strategy;
  plan.n = n;
  const int D = plan.dims();
  for (int k = 0; k < D; ++k) plan.periodic[k] = grids[0].periodic[k];
  for (int s = 0; s < plan.species; ++s) {
    const auto& g = grids[s];
    if (g.d != plan.d || g.v != plan.v) throw Error(ErrorKind::dimension_mismatch, "species differ in dimensionality");
    std::array<int, max_dims> cells{};
    for (int k = 0; k < D; ++k) {
      cells[k] = g.N[k];
      if (n[s][k] < 1) throw Error(ErrorKind::divisibility, "partition counts must be positive");
      if (g.N[k] % n[s][k] != 0)
        throw Error(ErrorKind::divisibility, "dim " + std::to_string(k) + ": " + std::to_string(n[s][k]) +
                                                 " partitions do not divide " + std::to_string(g.N[k]) + " cells");
      if (g.N[k] / n[s][k] < ghost) throw Error(ErrorKind::divisibility, "partitions thinner than the ghost width");
      if (k < plan.d && (g.N[k] != grids[0].N[k] || n[s][k] != n[0][k]))
        throw Error(ErrorKind::dimension_mismatch, "physical cells and partitions must match across species");
    }
    plan.cells.push_back(cells);
  }
  const int r = species_per_rank;
  if (r < 1 || plan.species % r != 0)
    throw Error(ErrorKind::rank_mismatch, "species per rank must divide the species count");
  int expected = 0;
  if (r == 1) {
    for (int s = 0; s < plan.species; ++s) expected += plan.partitions(s);
  } else {
    for (int s = 0; s < plan.species; ++s)
      if (plan.partitions(s) != plan.partitions(s - s % r) || n[s] != n[s - s % r])
        throw Error(ErrorKind::rank_mismatch, "co-located species need identical partition grids");
    for (int grp = 0; grp < plan.species / r; ++grp) expected += plan.partitions(grp * r);
  }
  if (expected != ranks)
    throw Error(ErrorKind::rank_mismatch,
                "plan needs " + std::to_string(expected) + " ranks, " + std::to_string(ranks) + " given");
  plan.ranks = ranks;

  int rank_base = 0;
  for (int s = 0; s < plan.species; ++s) {
    const int P = plan.partitions(s);
    if (r > 1 && s % r == 0 && s > 0) rank_base += plan.partitions(s - r);
    for (int p = 0; p < P; ++p) {
      PartitionBlock blk;
      blk.species = s;
      blk.partition = p;
      int rem = p;
      for (int k = D - 1; k >= 0; --k) {
        blk.pcoord[k] = rem % n[s][k];
        rem /= n[s][k];
      }
      for (int k = 0; k < D; ++k) {
        blk.extent[k] = plan.cells[s][k] / n[s][k];
        blk.offset[k] = blk.pcoord[k] * blk.extent[k];
      }
      blk.rank = rank_base + p;
      plan.blocks.push_back(blk);
    }
    if (r == 1) rank_base += P;
  }
  for (int b = 0; b < static_cast<int>(plan.blocks.size()); ++b)
    plan.blocks[b].recv = build_segments(plan, b, strategy);
  return plan;
}

std::int64_t counted_ghost_volume(const PartitionPlan& plan, NeighborStrategy s) {
  std::int64_t total = 0;
  for (int b = 0; b < static_cast<int>(plan.blocks.size()); ++b)
    for (const auto& seg : build_segments(plan, b, s))
      if (seg.src_block != b) total += seg.count;
  return total;
}

CommVolumes comm_volumes(const PartitionPlan& plan) {
  CommVolumes cv;
  const int D = plan.dims();
  const auto& N = plan.cells[0];
  const auto& n = plan.n[0];
  std::array<int, max_dims> p{};
  for (int k = 0; k < D; ++k) p[k] = plan.periodic[k] ? 1 : 0;
  const double S = plan.species;
  const double r = plan.species_per_rank;
  double nv = 1.0, Nx = 1.0;
  for (int k = plan.d; k < D; ++k) nv *= n[k];
  for (int k = 0; k < plan.d; ++k) Nx *= N[k];
  cv.b_reduce = std::ceil(std::log2(S / r * nv)) * Nx;
  double phys_faces = 0.0;
  for (int i = 0; i < plan.d; ++i) {
    double area = 1.0;
    for (int j = 0; j < plan.d; ++j)
      if (j != i) area *= N[j];
    phys_faces += (n[i] - p[i]) * area;
  }
  cv.b_phi = cv.b_reduce + 6.0 * S * nv * phys_faces;
  auto ghost_formula = [&](auto interfaces) {
    double faces = 0.0, edges = 0.0;
    for (int i = 0; i < D; ++i) {
      double area = 1.0;
      for (int j = 0; j < D; ++j)
        if (j != i) area *= N[j];
      faces += interfaces(i) * area;
      for (int j = 0; j < D; ++j) {
        if (j == i) continue;
        double len = 1.0;
        for (int k = 0; k < D; ++k)
          if (k != i && k != j) len *= N[k];
        edges += interfaces(i) * interfaces(j) * len;
      }
    }
    return S * (6.0 * faces + 2.0 * edges);
  };
  cv.b_ghost = ghost_formula([&](int i) { return static_cast<double>(n[i] - p[i]); });
  cv.b_ghost_wrap = ghost_formula([&](int i) { return static_cast<double>(n[i] - 1 + p[i]); });
  cv.counted_fvm = counted_ghost_volume(plan, NeighborStrategy::fvm);
  cv.counted_vp = counted_ghost_volume(plan, NeighborStrategy::vp);
  cv.formula_matches_count = cv.b_ghost == static_cast<double>(cv.counted_fvm);
  return cv;
}

namespace {

// Visits the cells of each box in buffer order; fn(buffer_index, field_offset, run_length)
// is called once per contiguous run along the last dim.
template <class Fn>
std::int64_t walk_boxes(const PhaseSpaceGrid& g, std::span<const Box> boxes, Fn&& fn) {
  const int D = g.dims();
  std::int64_t i = 0;
  for (const auto& b : boxes) {
    const int run = b.extent[D - 1];
    std::int64_t rows = 1;
    for (int k = 0; k < D - 1; ++k) rows *= b.extent[k];
    MultiIndex mi = b.lo;
    for (std::int64_t r = 0; r < rows; ++r) {
      fn(i, flat_index_unchecked(g, mi), run);
      i += run;
      for (int k = D - 2; k >= 0; --k) {
        if (++mi[k] < b.lo[k] + b.extent[k]) break;
        mi[k] = b.lo[k];
      }
    }
  }
  return i;
}

std::int64_t total_count(const PhaseSpaceGrid& g, std::span<const Box> boxes) {
  std::int64_t c = 0;
  for (const auto& b : boxes) c += b.count(g.dims());
  return c;
}

}  // namespace

void pack_ghosts(const DistField& f, std::span<const Box> boxes, std::span<double> buffer) {
  const auto& g = f.grid();
  if (static_cast<std::int64_t>(buffer.size()) != total_count(g, boxes))
    throw Error(ErrorKind::length_mismatch, "pack buffer length does not match segments");
  const double* p = f.data();
  walk_boxes(g, boxes, [&](std::int64_t i, std::int64_t off, int run) {
    std::memcpy(buffer.data() + i, p + off, sizeof(double) * run);
  });
}

std::vector<double> pack_ghosts(const DistField& f, std::span<const Box> boxes) {
  std::vector<double> buf(total_count(f.grid(), boxes));
  pack_ghosts(f, boxes, buf);
  return buf;
}

void unpack_ghosts(std::span<const double> buffer, DistField& f, std::span<const Box> boxes) {
  const auto& g = f.grid();
  if (static_cast<std::int64_t>(buffer.size()) != total_count(g, boxes))
    throw Error(ErrorKind::length_mismatch, "unpack buffer length does not match segments");
  double* p = f.data();
  walk_boxes(g, boxes, [&](std::int64_t i, std::int64_t off, int run) {
    std::memcpy(p + off, buffer.data() + i, sizeof(double) * run);
  });
}

std::int64_t TrafficLog::total() const {
  std::int64_t t = 0;
  for (const auto& [k, v] : elements) t += v;
  return t;
}

std::int64_t TrafficLog::inter_rank() const {
  std::int64_t t = 0;
  for (const auto& [k, v] : elements)
    if (k.first != k.second) t += v;
  return t;
}

HaloExchanger::HaloExchanger(const PartitionPlan& plan) : plan_(&plan) {
  const int nb = static_cast<int>(plan.blocks.size());
  const int D = plan.dims();
  send_boxes_.resize(nb);
  recv_boxes_.resize(nb);
  send_offset_.resize(nb);
  send_items_.resize(nb);
  recv_source_.resize(nb);
  send_buf_.resize(nb);
  recv_buf_.resize(nb);
  std::vector<std::int64_t> send_len(nb, 0);
  for (int b = 0; b < nb; ++b) {
    const auto& segs = plan.blocks[b].recv;
    for (int s = 0; s < static_cast<int>(segs.size()); ++s) {
      const int src = segs[s].src_block;
      send_items_[src].push_back({b, s});
      send_boxes_[src].push_back(segs[s].src);
      send_offset_[src].push_back(send_len[src]);
      recv_source_[b].emplace_back(src, send_len[src]);
      send_len[src] += segs[s].src.count(D);
      recv_boxes_[b].push_back(segs[s].dst);
    }
  }
  for (int b = 0; b < nb; ++b) {
    send_buf_[b].assign(send_len[b], 0.0);
    std::int64_t rl = 0;
    for (const auto& bx : recv_boxes_[b]) rl += bx.count(D);
    recv_buf_[b].assign(rl, 0.0);
  }
}

std::int64_t HaloExchanger::elements_per_exchange() const {
  std::int64_t t = 0;
  for (const auto& r : recv_buf_) t += static_cast<std::int64_t>(r.size());
  return t;
}

void HaloExchanger::exchange(std::span<DistField* const> fields, TrafficLog* log) {
  const auto& plan = *plan_;
  const int nb = static_cast<int>(plan.blocks.size());
  if (static_cast<int>(fields.size()) != nb) throw Error(ErrorKind::length_mismatch, "one field per block expected");
  const int D = plan.dims();
  // pack, all senders
  for (int b = 0; b < nb; ++b) pack_ghosts(*fields[b], send_boxes_[b], send_buf_[b]);
  // transfer; every pair is posted before any unpack
  for (int b = 0; b < nb; ++b) {
    std::int64_t pos = 0;
    const auto& segs = plan.blocks[b].recv;
    for (std::size_t s = 0; s < segs.size(); ++s) {
      const auto [src, off] = recv_source_[b][s];
      const std::int64_t c = segs[s].src.count(D);
      std::memcpy(recv_buf_[b].data() + pos, send_buf_[src].data() + off, sizeof(double) * c);
      pos += c;
      if (log) {
        log->elements[{plan.blocks[src].rank, plan.blocks[b].rank}] += c;
        if (src != b) log->cross_partition += c;
      }
    }
  }
  // unpack
  for (int b = 0; b < nb; ++b) unpack_ghosts(recv_buf_[b], *fields[b], recv_boxes_[b]);
  if (log) ++log->exchanges;
}

void simulate_exchange(const PartitionPlan& plan, std::span<DistField* const> fields, TrafficLog& log) {
  HaloExchanger ex(plan);
  ex.exchange(fields, &log);
}

}  // namespace vpfv
