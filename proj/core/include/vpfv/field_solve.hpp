#pragma once

#include <array>
#include <memory>
#include <vector>

#include "vpfv/exact_sum.hpp"
#include "vpfv/field_state.hpp"
#include "vpfv/phase_grid.hpp"
#include "vpfv/species.hpp"

namespace vpfv {

enum class MomentSchedule { velocity_major, position_major };
enum class ReductionMode { deterministic, free_order };

/// Unscaled velocity sums of f per local physical cell, exact.
std::vector<ExactSum> velocity_sums(const DistField& f);

/// Number density n(x) = sum_v f * prod h_v on the local physical cells.
std::vector<double> zeroth_moment(const DistField& f, MomentSchedule schedule = MomentSchedule::velocity_major,
                                  ReductionMode mode = ReductionMode::deterministic);

/// Momentum density per velocity dim and kinetic-energy density (|v|^2 f / 2)
/// per local physical cell, with the h^2/12 midpoint-to-average correction.
/// Velocity ghosts must be filled.
struct HigherMoments {
  std::array<std::vector<double>, 2> momentum;
  std::vector<double> energy;
};
HigherMoments higher_moments(const DistField& f);

/// Exact whole-field totals: mass (sum f V), momentum and kinetic energy integrals.
struct MomentTotals {
  ExactSum mass;
  std::array<ExactSum, 2> momentum;
  ExactSum energy;
  void merge(const MomentTotals& o);
};
MomentTotals moment_totals(const DistField& f);

/// rho = sum_s q_s n_s, then the mean is removed.
std::vector<double> charge_density(const std::vector<std::vector<double>>& n,
                                   const std::vector<SpeciesConfig>& species, ReductionMode mode = ReductionMode::deterministic);

/// Spectral periodic Poisson solve, -lap(phi) = rho with zero-mean phi, and
/// E = -grad(phi), all at cell centers.
class PoissonSolver {
 public:
  PoissonSolver(int d, std::array<int, 2> N, std::array<double, 2> length);
  ~PoissonSolver();
  PoissonSolver(const PoissonSolver&) = delete;
  PoissonSolver& operator=(const PoissonSolver&) = delete;

  /// If `cell_average` the input is deconvolved to point values first.
  void solve(const std::vector<double>& rho, std::vector<double>& phi, std::array<std::vector<double>, 2>& E,
             bool cell_average = false);
  void solve(FieldState& fs, bool cell_average = true) { solve(fs.rho, fs.phi, fs.E, cell_average); }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace vpfv
