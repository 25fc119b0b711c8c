#include "vpfv/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "vpfv/error.hpp"

namespace vpfv {

namespace {
constexpr std::array<double, 6> coeff{2.0, -15.0, 60.0, -20.0, -30.0, 3.0};
constexpr std::array<int, 6> power{-3, -2, -1, 0, 1, 2};
constexpr double two_pi = 2.0 * std::numbers::pi;
}  // namespace

cplx upwind_symbol(double xi) {
  cplx s = 0.0;
  for (int i = 0; i < 6; ++i) s += coeff[i] * std::polar(1.0, power[i] * xi);
  return s;
}

cplx upwind_symbol_derivative(double xi) {
  cplx s = 0.0;
  for (int i = 0; i < 6; ++i) s += coeff[i] * cplx(0.0, power[i]) * std::polar(1.0, power[i] * xi);
  return s;
}

cplx first_order_symbol(double xi) { return std::polar(1.0, -xi) - 1.0; }

cplx rk4_polynomial(cplx z) { return 1.0 + z * (1.0 + z * (0.5 + z * (1.0 / 6.0 + z / 24.0))); }

SymbolCurve sample_curve(const std::function<cplx(double)>& symbol, int samples, double scale) {
  SymbolCurve c;
  c.xi.resize(samples);
  c.z.resize(samples);
  for (int i = 0; i < samples; ++i) {
    c.xi[i] = two_pi * i / samples;
    c.z[i] = scale * symbol(c.xi[i]);
  }
  return c;
}

double cfl_constant(const std::function<cplx(double)>& symbol, double divisor, const std::function<cplx(cplx)>& R,
                    int samples, double tol) {
  const SymbolCurve c = sample_curve(symbol, samples);
  auto stable = [&](double sigma) {
    for (const auto& z : c.z)
      if (std::abs(R(sigma * z / divisor)) > 1.0 + 1e-12) return false;
    return true;
  };
  double lo = 0.0, hi = 1.0;
  while (stable(hi)) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e6) throw Error(ErrorKind::not_converged, "stability region appears unbounded");
  }
  int it = 0;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (stable(mid) ? lo : hi) = mid;
    if (++it > 200) throw Error(ErrorKind::not_converged, "CFL bisection did not converge");
  }
  return lo;
}

SymbolCurve approx_envelope(std::span<const double> w, int samples) {
  double s = 0.0;
  for (double x : w) s += x;
  return sample_curve(upwind_symbol, samples, s);
}

EnvelopeResult true_envelope_2d(double w1, double w2, int grid) {
  if (!(w1 > 0.0) || !(w2 > 0.0)) throw Error(ErrorKind::invalid_extent, "envelope weights must be positive");
  EnvelopeResult res;
  res.grid = grid;
  auto tangency = [](double a, double b) {
    return (std::conj(upwind_symbol_derivative(a)) * upwind_symbol_derivative(b)).imag();
  };
  const double h = two_pi / grid;
  for (int i = 0; i < grid; ++i) {
    const double x1 = i * h;
    const cplx d1 = upwind_symbol_derivative(x1);
    // xi2 samples are offset by half a step so the diagonal never lands on a node
    double prev_x = 0.5 * h;
    double prev = tangency(x1, prev_x);
    for (int j = 1; j <= grid; ++j) {
      const double x = (j + 0.5) * h;
      const double cur = tangency(x1, x);
      if ((prev < 0.0) != (cur < 0.0)) {
        double a = prev_x, b = x, fa = prev;
        double r = 0.5 * (a + b);
        bool ok = false;
        for (int it = 0; it < 60; ++it) {
          const double fr = tangency(x1, r);
          const double eps = 1e-7;
          const double df = (tangency(x1, r + eps) - tangency(x1, r - eps)) / (2 * eps);
          double next = df != 0.0 ? r - fr / df : 0.5 * (a + b);
          if (!(next > a && next < b)) next = 0.5 * (a + b);  // keep the bracket
          if ((fa < 0.0) == (fr < 0.0)) {
            a = r;
            fa = fr;
          } else {
            b = r;
          }
          if (std::abs(next - r) < 1e-14) {
            r = next;
            ok = true;
            break;
          }
          r = next;
        }
        if (!ok) ++res.polish_failures;
        const double x2 = std::fmod(r, two_pi);
        const cplx z = w1 * upwind_symbol(x1) + w2 * upwind_symbol(x2);
        const cplx d2 = upwind_symbol_derivative(x2);
        const bool same = (std::conj(d1) * d2).real() > 0.0;
        auto& branch = same ? res.accepted : res.rejected;
        branch.xi.push_back(x1);
        branch.z.push_back(z);
      }
      prev = cur;
      prev_x = x;
    }
  }
  return res;
}

bool inside(const SymbolCurve& polygon, cplx p) {
  // winding number
  int wn = 0;
  const auto& z = polygon.z;
  const std::size_t n = z.size();
  for (std::size_t i = 0; i < n; ++i) {
    const cplx a = z[i], b = z[(i + 1) % n];
    const double cross = (b.real() - a.real()) * (p.imag() - a.imag()) - (p.real() - a.real()) * (b.imag() - a.imag());
    if (a.imag() <= p.imag()) {
      if (b.imag() > p.imag() && cross > 0) ++wn;
    } else if (b.imag() <= p.imag() && cross < 0) {
      --wn;
    }
  }
  return wn != 0;
}

double signed_distance(const SymbolCurve& polygon, cplx p) {
  double best = std::numeric_limits<double>::infinity();
  const auto& z = polygon.z;
  const std::size_t n = z.size();
  for (std::size_t i = 0; i < n; ++i) {
    const cplx a = z[i], b = z[(i + 1) % n];
    const cplx ab = b - a;
    const double len2 = std::norm(ab);
    double t = len2 > 0.0 ? ((p - a) * std::conj(ab)).real() / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    best = std::min(best, std::abs(p - (a + t * ab)));
  }
  return inside(polygon, p) ? best : -best;
}

double polygon_area(const SymbolCurve& polygon) {
  double a = 0.0;
  const auto& z = polygon.z;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const cplx p = z[i], q = z[(i + 1) % z.size()];
    a += p.real() * q.imag() - q.real() * p.imag();
  }
  return 0.5 * std::abs(a);
}

double curve_diameter(const SymbolCurve& c) {
  double dmax = 0.0;
  // extent along a set of directions is enough for a tolerance scale
  for (int k = 0; k < 64; ++k) {
    const cplx dir = std::polar(1.0, std::numbers::pi * k / 64);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& z : c.z) {
      const double s = (z * std::conj(dir)).real();
      lo = std::min(lo, s);
      hi = std::max(hi, s);
    }
    dmax = std::max(dmax, hi - lo);
  }
  return dmax;
}

double min_relative_clearance(const SymbolCurve& outer, const SymbolCurve& inner) {
  const double diam = curve_diameter(outer);
  double m = std::numeric_limits<double>::infinity();
  for (const auto& z : inner.z) m = std::min(m, signed_distance(outer, z));
  return m / diam;
}

}  // namespace vpfv
