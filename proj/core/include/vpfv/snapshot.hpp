#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "vpfv/phase_grid.hpp"

namespace vpfv {

/// Binary layout, little endian throughout:
///   "VPFV", u32 version, u32 d, u32 v, u32 N[d+v], f64 lo[d+v], f64 hi[d+v],
///   u32 tag length, tag bytes, f64 time, f64 interior values (last dim fastest).
inline constexpr std::uint32_t snapshot_version = 1;

struct Snapshot {
  int d = 0;
  int v = 0;
  std::vector<int> N;
  std::vector<double> lo, hi;
  std::string species;
  double time = 0.0;
  std::vector<double> values;
};

/// `f` must cover its whole grid.
void write_snapshot(const std::filesystem::path& path, const DistField& f, double time);
Snapshot read_snapshot(const std::filesystem::path& path);

/// Field on the snapshot grid with the interior filled in.
DistField to_field(const Snapshot& s);

}  // namespace vpfv
