#include "vpfv/diagnostics.hpp"

#include <charconv>
#include <cmath>

#include "vpfv/error.hpp"
#include "vpfv/exact_sum.hpp"

namespace vpfv {

namespace {

std::string num(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::scientific, 16);
  return std::string(buf, r.ptr);
}

struct Line {
  double slope = 0.0, intercept = 0.0, stderr_slope = 0.0;
};

Line least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  Line l;
  l.slope = sxy / sxx;
  l.intercept = my - l.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (l.intercept + l.slope * x[i]);
    ss += r * r;
  }
  l.stderr_slope = x.size() > 2 ? std::sqrt(ss / (n - 2.0) / sxx) : 0.0;
  return l;
}

}  // namespace

std::string diagnostics_header(const std::vector<std::string>& species) {
  std::string h = "# vpfv diagnostics v" + std::to_string(diagnostics_version) + "\nt,step,dt";
  for (const auto& s : species) h += ",mass_" + s;
  h += ",momentum_x,momentum_y,momentum,field_energy,kinetic_energy,total_energy,e_norm";
  return h;
}

std::string format_row(const DiagnosticsRow& r) {
  std::string s = num(r.t) + "," + std::to_string(r.step) + "," + num(r.dt);
  for (double m : r.mass) s += "," + num(m);
  s += "," + num(r.momentum_vec[0]) + "," + num(r.momentum_vec[1]) + "," + num(r.momentum) + "," + num(r.field_energy) +
       "," + num(r.kinetic_energy) + "," + num(r.total_energy) + "," + num(r.e_norm);
  return s;
}

GrowthFit fit_growth_rate(std::span<const double> t, std::span<const double> e, double t0, double t1) {
  if (t.size() != e.size()) throw Error(ErrorKind::length_mismatch, "time and amplitude series differ in length");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t0 || t[i] > t1) continue;
    if (!(e[i] > 0.0)) throw Error(ErrorKind::out_of_range, "amplitude must be positive inside the fit window");
    x.push_back(t[i]);
    y.push_back(std::log(e[i]));
  }
  if (x.size() < 10) throw Error(ErrorKind::out_of_range, "fit window holds fewer than 10 samples");
  const Line l = least_squares(x, y);
  return {l.slope, l.stderr_slope, l.intercept, static_cast<int>(x.size())};
}

GrowthFit fit_peak_rate(std::span<const double> t, std::span<const double> e, double t0, double t1) {
  if (t.size() != e.size()) throw Error(ErrorKind::length_mismatch, "time and amplitude series differ in length");
  std::vector<double> x, y;
  for (std::size_t i = 1; i + 1 < t.size(); ++i) {
    if (t[i] < t0 || t[i] > t1) continue;
    if (e[i] > e[i - 1] && e[i] >= e[i + 1] && e[i] > 0.0) {
      // parabolic refinement of the peak through three samples
      const double ym = std::log(e[i - 1]), y0 = std::log(e[i]), yp = std::log(e[i + 1]);
      const double hs = 0.5 * (t[i + 1] - t[i - 1]);
      const double den = ym - 2.0 * y0 + yp;
      double dx = 0.0, yv = y0;
      if (den < 0.0) {
        dx = 0.5 * (ym - yp) / den;
        yv = y0 - 0.25 * (ym - yp) * dx;
      }
      x.push_back(t[i] + dx * hs);
      y.push_back(yv);
    }
  }
  if (x.size() < 2) throw Error(ErrorKind::out_of_range, "fewer than two peaks inside the fit window");
  const Line l = least_squares(x, y);
  return {l.slope, l.stderr_slope, l.intercept, static_cast<int>(x.size())};
}

std::vector<double> aggregate(const DistField& fine) {
  const auto& g = fine.grid();
  const int D = g.dims();
  for (int k = 0; k < D; ++k)
    if (g.N[k] % 2) throw Error(ErrorKind::divisibility, "fine grid must have even cell counts");
  MultiIndex nc{};
  std::int64_t cells = 1;
  for (int k = 0; k < D; ++k) {
    nc[k] = g.N[k] / 2;
    cells *= nc[k];
  }
  std::vector<double> out(cells);
  const int children = 1 << D;
  for (std::int64_t c = 0; c < cells; ++c) {
    MultiIndex ci{};
    std::int64_t rem = c;
    for (int k = D - 1; k >= 0; --k) {
      ci[k] = static_cast<int>(rem % nc[k]);
      rem /= nc[k];
    }
    ExactSum s;
    for (int ch = 0; ch < children; ++ch) {
      MultiIndex fi{};
      for (int k = 0; k < D; ++k) fi[k] = 2 * ci[k] + ((ch >> (D - 1 - k)) & 1);
      s.add(fine.data()[flat_index_unchecked(g, fi)]);
    }
    out[c] = s.value() / children;
  }
  return out;
}

double richardson_error(const DistField& coarse, const DistField& fine) {
  const auto& gc = coarse.grid();
  const auto& gf = fine.grid();
  if (gc.dims() != gf.dims()) throw Error(ErrorKind::dimension_mismatch, "fields differ in dimensionality");
  for (int k = 0; k < gc.dims(); ++k)
    if (gf.N[k] != 2 * gc.N[k]) throw Error(ErrorKind::dimension_mismatch, "fine grid must double every dimension");
  const auto agg = aggregate(fine);
  ExactSum s;
  std::int64_t i = 0;
  for_each_interior(gc, [&](const MultiIndex&, std::int64_t off) { s.add(std::abs(coarse.data()[off] - agg[i++])); });
  return s.value() / static_cast<double>(agg.size());
}

double convergence_order(std::span<const double> h, std::span<const double> err) {
  if (h.size() != err.size() || h.size() < 2) throw Error(ErrorKind::length_mismatch, "need at least two levels");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < h.size(); ++i) {
    x.push_back(std::log(h[i]));
    y.push_back(std::log(err[i]));
  }
  return least_squares(x, y).slope;
}

}  // namespace vpfv
