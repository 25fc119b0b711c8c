#pragma once

#include <array>
#include <vector>

namespace vpfv {

/// Physical-grid arrays. All values are cell-center point values except the
/// densities, which are cell averages. Row-major with y fastest in 2D.
struct FieldState {
  int d = 1;
  std::array<int, 2> N{1, 1};
  std::array<double, 2> h{1.0, 1.0};
  std::vector<std::vector<double>> n;
  std::vector<double> rho;
  std::vector<double> phi;
  std::array<std::vector<double>, 2> E;

  FieldState() = default;
  FieldState(int d_, std::array<int, 2> N_, std::array<double, 2> h_, int species_count = 0);

  int cells() const { return d == 1 ? N[0] : N[0] * N[1]; }
  int index(int i, int j) const { return d == 1 ? i : i * N[1] + j; }
  /// Periodic wrap of a physical index pair.
  int wrapped(int i, int j) const;
};

}  // namespace vpfv
