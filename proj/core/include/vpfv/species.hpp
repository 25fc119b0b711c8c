#pragma once

#include <array>
#include <string>

namespace vpfv {

/// Per-species constants entering the advection speeds. `omega_p` and
/// `omega_c` are the normalization products (omega_p0 t0) and (omega_c0 t0).
struct SpeciesConfig {
  std::string name = "electron";
  double charge = -1.0;
  double mass = 1.0;
  double omega_p = 1.0;
  double omega_c = 0.0;
  double b_z = 0.0;
  std::array<double, 2> g{0.0, 0.0};

  double qm() const { return charge / mass; }
  /// Signed gyrofrequency q B_z omega_c / m.
  double gyrofrequency() const { return qm() * omega_c * b_z; }
};

}  // namespace vpfv
