#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "vpfv/field_state.hpp"
#include "vpfv/phase_grid.hpp"
#include "vpfv/species.hpp"

namespace vpfv {

/// Face value at i+1/2 from cell averages s = f[i-2..i+3]. a > 0 reads
/// s[0..4] (upwind side i), a <= 0 reads s[1..5].
double reconstruct_face(std::span<const double, 6> s, double a);

/// Advection speed at a cell center, used by the generic (test) operators.
using AdvectionFn = std::function<double(int dim, const MultiIndex& mi)>;

/// Speeds of the Vlasov system for one species on `g` given the field state.
AdvectionFn vlasov_advection(const PhaseSpaceGrid& g, const SpeciesConfig& sp, const FieldState& fs);

/// c1..c5 per local physical cell. Unused coefficients are zero.
struct CorrectionCoeffs {
  int cells = 0;
  std::array<std::vector<double>, 5> c;
};

CorrectionCoeffs correction_coeffs(const PhaseSpaceGrid& g, const SpeciesConfig& sp, const FieldState& fs);

/// Closed-form transverse correction C_i at one interior cell.
double transverse_correction(const DistField& f, const CorrectionCoeffs& cc, const MultiIndex& mi);

/// Correction built from centered second differences of face products
/// A^d f_face along every transverse direction. Slow; for checking.
double generic_correction_oracle(const DistField& f, const AdvectionFn& a, const MultiIndex& mi);

/// Flux-difference operator plus generic_correction_oracle at one cell.
double generic_rhs(const DistField& f, const AdvectionFn& a, const MultiIndex& mi);

struct KernelOptions {
  bool corrections = true;
  bool check_finite = true;
};

/// out = sum_k coef[k] * terms[k] + dt * RHS(in) over the interior.
/// `in` must not alias `out`; terms may.
struct StageSpec {
  std::array<const DistField*, 3> terms{nullptr, nullptr, nullptr};
  std::array<double, 3> coef{0.0, 0.0, 0.0};
  double dt = 1.0;
};

void advance_stage(const DistField& in, const SpeciesConfig& sp, const FieldState& fs, const StageSpec& stage,
                   DistField& out, const KernelOptions& opt = {});

/// RHS of the semi-discrete Vlasov equation written into the interior of `rhs`.
void vlasov_rhs(const DistField& in, const SpeciesConfig& sp, const FieldState& fs, DistField& rhs,
                const KernelOptions& opt = {});

}  // namespace vpfv
