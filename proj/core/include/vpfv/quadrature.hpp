#pragma once

#include <functional>
#include <span>
#include <vector>

#include "vpfv/phase_grid.hpp"

namespace vpfv {

/// Gauss-Legendre nodes on [-1/2, 1/2] with weights summing to 1.
struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
};

GaussRule gauss_legendre(int points);

/// Average of fn over [c - h/2, c + h/2].
double cell_average_1d(const std::function<double(double)>& fn, double c, double h, const GaussRule& rule);

using PointFn = std::function<double(std::span<const double>)>;

/// Tensor-product cell averages of fn over every padded cell (ghosts
/// included, so frozen velocity ghosts start from exact averages).
void quadrature_init(DistField& f, const PointFn& fn, int points = 8);

/// A function of a subset of the phase-space dims.
struct Factor {
  std::vector<int> dims;
  PointFn fn;  // receives the coordinates of `dims` in order
};

/// coef * product of factors; dims not named by any factor contribute 1.
struct SeparableTerm {
  double coef = 1.0;
  std::vector<Factor> factors;
};

/// Cell averages of sum_t term_t, each factor averaged on its own small
/// sub-grid. Equal to quadrature_init of the full function up to rounding,
/// at a fraction of the cost.
void separable_init(DistField& f, std::span<const SeparableTerm> terms, int points = 8);

}  // namespace vpfv
