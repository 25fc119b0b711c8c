#pragma once

#include <array>
#include <atomic>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace vpfv {

inline constexpr int ghost = 3;
inline constexpr int max_dims = 4;

/// Cell coordinates; interior cells run over [0, N), ghosts extend to [-3, N+3).
using MultiIndex = std::array<int, max_dims>;

/// Phase-space grid. Physical dims come first, velocity dims last; the last
/// dim varies fastest in storage.
///
/// A grid may describe a sub-box of a larger (global) grid. In that case
/// `origin` holds the global index of local cell 0 and `global_N`/`global_lo`
/// the parent geometry, so that cell centers are bitwise identical no matter
/// how the domain is cut.
struct PhaseSpaceGrid {
  int d = 0;
  int v = 0;
  std::array<int, max_dims> N{};
  std::array<double, max_dims> lo{};
  std::array<double, max_dims> hi{};
  std::array<double, max_dims> h{};
  std::array<bool, max_dims> periodic{};

  std::array<int, max_dims> origin{};
  std::array<int, max_dims> global_N{};
  std::array<double, max_dims> global_lo{};

  std::array<std::int64_t, max_dims> padded{};
  std::array<std::int64_t, max_dims> stride{};
  std::int64_t padded_size = 0;

  int dims() const { return d + v; }
  double center(int k, int i) const { return global_lo[k] + (origin[k] + i + 0.5) * h[k]; }
  std::int64_t interior_size() const;
  std::int64_t physical_cells() const;
  double cell_volume() const;
  double velocity_cell_volume() const;
  double physical_cell_volume() const;
  bool is_subgrid() const;
};

PhaseSpaceGrid make_grid(int d, int v, std::span<const int> N, std::span<const double> lo,
                         std::span<const double> hi);

/// Sub-box [offset, offset+extent) of a global grid. Spacing is inherited, not recomputed.
PhaseSpaceGrid make_subgrid(const PhaseSpaceGrid& global, const MultiIndex& offset,
                            const MultiIndex& extent);

std::int64_t flat_index(const PhaseSpaceGrid& g, const MultiIndex& mi);
MultiIndex unflatten(const PhaseSpaceGrid& g, std::int64_t offset);

inline std::int64_t flat_index_unchecked(const PhaseSpaceGrid& g, const MultiIndex& mi) {
  std::int64_t o = 0;
  for (int k = 0; k < g.dims(); ++k) o += (mi[k] + ghost) * g.stride[k];
  return o;
}

/// Cell averages of one species on one (sub)grid, including a 3-wide ghost shell.
class DistField {
 public:
  DistField() = default;
  DistField(std::string species, const PhaseSpaceGrid& grid, double fill = 0.0);
  DistField(const DistField& o);
  DistField(DistField&& o) noexcept;
  DistField& operator=(const DistField& o);
  DistField& operator=(DistField&& o) noexcept;
  ~DistField();

  const PhaseSpaceGrid& grid() const { return grid_; }
  const std::string& species() const { return species_; }
  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  std::int64_t size() const { return static_cast<std::int64_t>(data_.size()); }
  /// Index of the fastest varying dimension.
  int fastest_dim() const { return grid_.dims() - 1; }

  double& at(const MultiIndex& mi) { return data_[flat_index(grid_, mi)]; }
  double at(const MultiIndex& mi) const { return data_[flat_index(grid_, mi)]; }

  /// Number of DistField objects holding storage in this process.
  static std::int64_t live_count();

 private:
  std::string species_;
  PhaseSpaceGrid grid_;
  std::vector<double> data_;
  static std::atomic<std::int64_t> live_;
};

/// Calls fn(mi, offset) for every interior cell, last dim fastest.
template <class Fn>
void for_each_interior(const PhaseSpaceGrid& g, Fn&& fn) {
  const int D = g.dims();
  MultiIndex mi{};
  while (true) {
    fn(mi, flat_index_unchecked(g, mi));
    int k = D - 1;
    while (k >= 0) {
      if (++mi[k] < g.N[k]) break;
      mi[k] = 0;
      --k;
    }
    if (k < 0) return;
  }
}

/// Calls fn(mi, offset) for every padded cell.
template <class Fn>
void for_each_padded(const PhaseSpaceGrid& g, Fn&& fn) {
  const int D = g.dims();
  MultiIndex mi{};
  for (int k = 0; k < D; ++k) mi[k] = -ghost;
  std::int64_t off = 0;
  while (true) {
    fn(mi, off);
    ++off;
    int k = D - 1;
    while (k >= 0) {
      if (++mi[k] < g.N[k] + ghost) break;
      mi[k] = -ghost;
      --k;
    }
    if (k < 0) return;
  }
}

/// Initial-time values of every ghost cell whose velocity index lies outside
/// the global velocity range.
struct FrozenGhosts {
  std::vector<std::int64_t> offsets;
  std::vector<double> values;
  bool captured = false;
};

bool is_frozen_cell(const PhaseSpaceGrid& g, const MultiIndex& mi);
FrozenGhosts capture_frozen(const DistField& f);
void apply_frozen(DistField& f, const FrozenGhosts& frozen);

/// Periodic wrap in physical dims and frozen values in velocity dims. Only
/// valid for a field covering the whole global grid.
void fill_local_ghosts(DistField& f, const FrozenGhosts& frozen);

}  // namespace vpfv
