#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace vpfv {

using cplx = std::complex<double>;

/// Von Neumann symbol of the five-point upwind flux difference (times 60).
cplx upwind_symbol(double xi);
cplx upwind_symbol_derivative(double xi);
/// First-order upwind, e^{-j xi} - 1.
cplx first_order_symbol(double xi);
/// Stability polynomial of any four-stage fourth-order RK method.
cplx rk4_polynomial(cplx z);

struct SymbolCurve {
  std::vector<double> xi;
  std::vector<cplx> z;
};

SymbolCurve sample_curve(const std::function<cplx(double)>& symbol, int samples, double scale = 1.0);

/// Largest sigma with max_xi |R(sigma symbol(xi) / divisor)| <= 1, by bisection.
double cfl_constant(const std::function<cplx(double)>& symbol, double divisor,
                    const std::function<cplx(cplx)>& R = rk4_polynomial, int samples = 8192, double tol = 1e-10);

/// (sum_a w_a) P(xi): the L1-scaled single curve.
SymbolCurve approx_envelope(std::span<const double> w, int samples);

struct EnvelopeResult {
  SymbolCurve accepted;  // outer branch, P'(xi1) and P'(xi2) pointing the same way
  SymbolCurve rejected;  // inner branch, antiparallel tangents
  int grid = 0;
  int polish_failures = 0;
};

/// Boundary of { w1 P(xi1) + w2 P(xi2) } from the tangency condition
/// Im(conj(P'(xi1)) P'(xi2)) = 0, by a grid scan over the torus and a Newton
/// polish along xi2.
EnvelopeResult true_envelope_2d(double w1, double w2, int grid = 512);

/// Signed distance from p to the closed polygon (positive inside).
double signed_distance(const SymbolCurve& polygon, cplx p);
bool inside(const SymbolCurve& polygon, cplx p);
double polygon_area(const SymbolCurve& polygon);
double curve_diameter(const SymbolCurve& c);

/// Smallest signed distance of `inner` points to `outer`, divided by the
/// diameter of `outer`.
double min_relative_clearance(const SymbolCurve& outer, const SymbolCurve& inner);

}  // namespace vpfv
