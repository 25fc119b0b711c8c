#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "vpfv/phase_grid.hpp"

namespace vpfv {

struct DiagnosticsRow {
  double t = 0.0;
  long step = 0;
  double dt = 0.0;
  std::vector<double> mass;  // per species
  std::array<double, 2> momentum_vec{0.0, 0.0};
  double momentum = 0.0;  // |P|
  double field_energy = 0.0;
  double kinetic_energy = 0.0;
  double total_energy = 0.0;
  double e_norm = 0.0;
};

inline constexpr int diagnostics_version = 1;

std::string diagnostics_header(const std::vector<std::string>& species);
std::string format_row(const DiagnosticsRow& r);

struct GrowthFit {
  double gamma = 0.0;
  double stderr_gamma = 0.0;
  double intercept = 0.0;
  int samples = 0;
};

/// Least-squares slope of log|E| against t over [t0, t1].
GrowthFit fit_growth_rate(std::span<const double> t, std::span<const double> e, double t0, double t1);

/// Same fit through the local maxima of |E| only, for oscillating signals.
GrowthFit fit_peak_rate(std::span<const double> t, std::span<const double> e, double t0, double t1);

/// Exact 2^D-cell aggregation of a field at twice the resolution.
std::vector<double> aggregate(const DistField& fine);

/// (1/V) sum_i |<f_N>_i - <f_2N>_i| with <.>_i the cell integral, so the
/// mean absolute difference of cell averages.
double richardson_error(const DistField& coarse, const DistField& fine);

/// Least-squares slope of log(err) against log(h).
double convergence_order(std::span<const double> h, std::span<const double> err);

}  // namespace vpfv
