#include "vpfv/phase_grid.hpp"

#include <cmath>
#include <sstream>

#include "vpfv/error.hpp"

namespace vpfv {

namespace {

void finish_layout(PhaseSpaceGrid& g) {
  const int D = g.dims();
  std::int64_t s = 1;
  for (int k = D - 1; k >= 0; --k) {
    g.padded[k] = g.N[k] + 2 * ghost;
    g.stride[k] = s;
    s *= g.padded[k];
  }
  for (int k = D; k < max_dims; ++k) {
    g.padded[k] = 1;
    g.stride[k] = 0;
  }
  g.padded_size = s;
}

}  // namespace

std::int64_t PhaseSpaceGrid::interior_size() const {
  std::int64_t n = 1;
  for (int k = 0; k < dims(); ++k) n *= N[k];
  return n;
}

std::int64_t PhaseSpaceGrid::physical_cells() const {
  std::int64_t n = 1;
  for (int k = 0; k < d; ++k) n *= N[k];
  return n;
}

double PhaseSpaceGrid::cell_volume() const { return physical_cell_volume() * velocity_cell_volume(); }

double PhaseSpaceGrid::velocity_cell_volume() const {
  double vol = 1.0;
  for (int k = d; k < dims(); ++k) vol *= h[k];
  return vol;
}

double PhaseSpaceGrid::physical_cell_volume() const {
  double vol = 1.0;
  for (int k = 0; k < d; ++k) vol *= h[k];
  return vol;
}

bool PhaseSpaceGrid::is_subgrid() const {
  for (int k = 0; k < dims(); ++k)
    if (origin[k] != 0 || N[k] != global_N[k]) return true;
  return false;
}

PhaseSpaceGrid make_grid(int d, int v, std::span<const int> N, std::span<const double> lo,
                         std::span<const double> hi) {
  if (d < 1 || d > 2 || v < 1 || v > 2)
    throw Error(ErrorKind::dimension_mismatch, "d and v must each be 1 or 2");
  if (v < d) throw Error(ErrorKind::dimension_mismatch, "velocity dims must be >= physical dims");
  const int D = d + v;
  if (static_cast<int>(N.size()) != D || static_cast<int>(lo.size()) != D ||
      static_cast<int>(hi.size()) != D)
    throw Error(ErrorKind::dimension_mismatch, "expected " + std::to_string(D) + " entries per array");
  PhaseSpaceGrid g;
  g.d = d;
  g.v = v;
  for (int k = 0; k < D; ++k) {
    if (N[k] < 8) throw Error(ErrorKind::invalid_extent, "need at least 8 cells in dim " + std::to_string(k));
    if (!(hi[k] > lo[k]) || !std::isfinite(hi[k] - lo[k]))
      throw Error(ErrorKind::invalid_extent, "non-positive extent in dim " + std::to_string(k));
    g.N[k] = N[k];
    g.lo[k] = lo[k];
    g.hi[k] = hi[k];
    g.h[k] = (hi[k] - lo[k]) / N[k];
    g.periodic[k] = k < d;
    g.origin[k] = 0;
    g.global_N[k] = N[k];
    g.global_lo[k] = lo[k];
  }
  finish_layout(g);
  return g;
}

PhaseSpaceGrid make_subgrid(const PhaseSpaceGrid& global, const MultiIndex& offset,
                            const MultiIndex& extent) {
  PhaseSpaceGrid g = global;
  for (int k = 0; k < global.dims(); ++k) {
    if (offset[k] < 0 || extent[k] < 1 || offset[k] + extent[k] > global.N[k])
      throw Error(ErrorKind::out_of_range, "sub-box outside grid");
    g.origin[k] = global.origin[k] + offset[k];
    g.N[k] = extent[k];
    g.lo[k] = global.global_lo[k] + g.origin[k] * global.h[k];
    g.hi[k] = global.global_lo[k] + (g.origin[k] + extent[k]) * global.h[k];
  }
  finish_layout(g);
  return g;
}

std::int64_t flat_index(const PhaseSpaceGrid& g, const MultiIndex& mi) {
  for (int k = 0; k < g.dims(); ++k) {
    if (mi[k] < -ghost || mi[k] >= g.N[k] + ghost) {
      std::ostringstream os;
      os << "index " << mi[k] << " outside padded range of dim " << k;
      throw Error(ErrorKind::out_of_range, os.str());
    }
  }
  return flat_index_unchecked(g, mi);
}

MultiIndex unflatten(const PhaseSpaceGrid& g, std::int64_t offset) {
  if (offset < 0 || offset >= g.padded_size) throw Error(ErrorKind::out_of_range, "offset outside padded box");
  MultiIndex mi{};
  for (int k = 0; k < g.dims(); ++k) {
    mi[k] = static_cast<int>(offset / g.stride[k]) - ghost;
    offset %= g.stride[k];
  }
  return mi;
}

std::atomic<std::int64_t> DistField::live_{0};

DistField::DistField(std::string species, const PhaseSpaceGrid& grid, double fill)
    : species_(std::move(species)), grid_(grid), data_(static_cast<std::size_t>(grid.padded_size), fill) {
  ++live_;
}

DistField::DistField(const DistField& o) : species_(o.species_), grid_(o.grid_), data_(o.data_) {
  if (!data_.empty()) ++live_;
}

DistField::DistField(DistField&& o) noexcept
    : species_(std::move(o.species_)), grid_(o.grid_), data_(std::move(o.data_)) {
  o.data_.clear();
}

DistField& DistField::operator=(const DistField& o) {
  if (this == &o) return *this;
  const bool had = !data_.empty();
  species_ = o.species_;
  grid_ = o.grid_;
  data_ = o.data_;
  if (!had && !data_.empty()) ++live_;
  if (had && data_.empty()) --live_;
  return *this;
}

DistField& DistField::operator=(DistField&& o) noexcept {
  if (this == &o) return *this;
  if (!data_.empty()) --live_;
  species_ = std::move(o.species_);
  grid_ = o.grid_;
  data_ = std::move(o.data_);
  o.data_.clear();
  return *this;
}

DistField::~DistField() {
  if (!data_.empty()) --live_;
}

std::int64_t DistField::live_count() { return live_.load(); }

bool is_frozen_cell(const PhaseSpaceGrid& g, const MultiIndex& mi) {
  for (int k = g.d; k < g.dims(); ++k) {
    if (g.periodic[k]) continue;
    const int gi = g.origin[k] + mi[k];
    if (gi < 0 || gi >= g.global_N[k]) return true;
  }
  return false;
}

FrozenGhosts capture_frozen(const DistField& f) {
  FrozenGhosts fr;
  const auto& g = f.grid();
  for_each_padded(g, [&](const MultiIndex& mi, std::int64_t off) {
    if (is_frozen_cell(g, mi)) {
      fr.offsets.push_back(off);
      fr.values.push_back(f.data()[off]);
    }
  });
  fr.captured = true;
  return fr;
}

void apply_frozen(DistField& f, const FrozenGhosts& frozen) {
  if (!frozen.captured) throw Error(ErrorKind::missing_snapshot, "frozen ghost snapshot was never captured");
  double* p = f.data();
  for (std::size_t i = 0; i < frozen.offsets.size(); ++i) p[frozen.offsets[i]] = frozen.values[i];
}

void fill_local_ghosts(DistField& f, const FrozenGhosts& frozen) {
  const auto& g = f.grid();
  if (g.is_subgrid())
    throw Error(ErrorKind::unsupported, "local ghost fill needs the whole domain; use the exchange for partitions");
  apply_frozen(f, frozen);
  double* p = f.data();
  const int D = g.dims();
  // physical ghosts with interior velocity indices: whole velocity rows are copied
  const int nphys = g.d;
  MultiIndex pm{};
  for (int k = 0; k < nphys; ++k) pm[k] = -ghost;
  while (true) {
    bool is_ghost = false;
    for (int k = 0; k < nphys; ++k) is_ghost |= pm[k] < 0 || pm[k] >= g.N[k];
    if (is_ghost) {
      MultiIndex src = pm;
      for (int k = 0; k < nphys; ++k) src[k] = ((pm[k] % g.N[k]) + g.N[k]) % g.N[k];
      // iterate interior velocity cells; the fastest velocity dim is contiguous
      MultiIndex vm{};
      for (int k = nphys; k < D; ++k) vm[k] = 0;
      while (true) {
        MultiIndex a = pm, b = src;
        for (int k = nphys; k < D; ++k) a[k] = b[k] = vm[k];
        const std::int64_t da = flat_index_unchecked(g, a), db = flat_index_unchecked(g, b);
        for (int j = 0; j < g.N[D - 1]; ++j) p[da + j] = p[db + j];
        int k = D - 2;
        while (k >= nphys) {
          if (++vm[k] < g.N[k]) break;
          vm[k] = 0;
          --k;
        }
        if (k < nphys) break;
      }
    }
    int k = nphys - 1;
    while (k >= 0) {
      if (++pm[k] < g.N[k] + ghost) break;
      pm[k] = -ghost;
      --k;
    }
    if (k < 0) break;
  }
}

}  // namespace vpfv
