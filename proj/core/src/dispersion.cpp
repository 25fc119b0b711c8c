#include "vpfv/dispersion.hpp"

#include <algorithm>
#include <memory>
#include <cmath>
#include <numbers>

#include "vpfv/error.hpp"
#include "vpfv/faddeeva.hpp"
#include "vpfv/quadrature.hpp"

namespace vpfv {

namespace {

constexpr cplx I{0.0, 1.0};
constexpr double pi = std::numbers::pi;

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// Composite Gauss-Legendre nodes and weights on [a, b].
struct Nodes {
  std::vector<double> x, w;
};

Nodes composite(double a, double b, int panels, int points = 16) {
  const auto rule = gauss_legendre(points);
  Nodes n;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double c = a + (p + 0.5) * h;
    for (int q = 0; q < points; ++q) {
      n.x.push_back(c + h * rule.x[q]);
      n.w.push_back(h * rule.w[q]);
    }
  }
  return n;
}

}  // namespace

ComplexRoot polish_root(const Relation& relation, cplx guess, int max_iter) {
  // arguments far outside the physical range can overflow; treat as divergence
  const auto D = [&](cplx w) -> cplx {
    try {
      return relation(w);
    } catch (const Error&) {
      return {NAN, NAN};
    }
  };
  ComplexRoot r;
  r.guess = guess;
  cplx w = guess;
  for (int it = 1; it <= max_iter; ++it) {
    r.iterations = it;
    const cplx f = D(w);
    if (!finite(f)) return r;
    const double h = 1e-7 * std::max(std::abs(w), 1e-2);
    const cplx d = (D(w + h) - D(w - h)) / (2.0 * h);
    if (!finite(d) || d == 0.0) return r;
    const cplx step = f / d;
    w -= step;
    if (!finite(w)) return r;
    if (std::abs(step) <= 1e-14 * std::max(std::abs(w), 1e-3)) break;
  }
  r.omega = w;
  const cplx f = D(w);
  r.residual = finite(f) ? std::abs(f) : INFINITY;
  r.converged = r.residual <= root_tolerance;
  return r;
}

std::vector<ComplexRoot> scan_roots(const Relation& D, const RootWindow& win) {
  std::vector<ComplexRoot> roots;
  for (int i = 0; i < win.n_re; ++i) {
    const double re = win.n_re == 1 ? win.re_lo : win.re_lo + (win.re_hi - win.re_lo) * i / (win.n_re - 1);
    for (int j = 0; j < win.n_im; ++j) {
      const double im = win.n_im == 1 ? win.im_lo : win.im_lo + (win.im_hi - win.im_lo) * j / (win.n_im - 1);
      ComplexRoot r = polish_root(D, {re, im});
      if (!r.converged) continue;
      bool dup = false;
      for (const auto& o : roots) dup |= std::abs(o.omega - r.omega) <= 1e-8 * std::max(1.0, std::abs(r.omega));
      if (!dup) roots.push_back(r);
    }
  }
  std::sort(roots.begin(), roots.end(),
            [](const ComplexRoot& a, const ComplexRoot& b) { return a.omega.imag() > b.omega.imag(); });
  return roots;
}

std::vector<ComplexRoot> roots_in_window(const std::vector<ComplexRoot>& roots, const RootWindow& w, double margin) {
  std::vector<ComplexRoot> out;
  const double mr = margin * (w.re_hi - w.re_lo), mi = margin * (w.im_hi - w.im_lo);
  for (const auto& r : roots)
    if (r.omega.real() >= w.re_lo - mr && r.omega.real() <= w.re_hi + mr && r.omega.imag() >= w.im_lo - mi &&
        r.omega.imag() <= w.im_hi + mi)
      out.push_back(r);
  return out;
}

namespace {

ComplexRoot first_or_throw(const std::vector<ComplexRoot>& roots, const char* what) {
  if (roots.empty()) throw Error(ErrorKind::not_converged, std::string("no root found for ") + what);
  return roots.front();
}

}  // namespace

// ---- two-stream ----

cplx two_stream_dielectric(cplx omega, double k, double vt2, double u, double wpe) {
  const double vt = std::sqrt(vt2);
  const double s = std::sqrt(0.5 / vt2);
  cplx sum = 0.0;
  for (double sg : {1.0, -1.0}) {
    const cplx zeta = s * (omega / std::abs(k) - sg * u);
    sum += plasma_r(zeta);
  }
  return 1.0 + wpe * wpe / (2.0 * k * k * vt * vt) * sum;
}

std::array<cplx, 4> cold_two_stream_roots(double k, double u, double wpe) {
  const double a = k * k * u * u;
  const double disc = wpe * std::sqrt(8.0 * a + wpe * wpe);
  const cplx w2p = 0.5 * (2.0 * a + wpe * wpe + disc);
  const cplx w2m = 0.5 * (2.0 * a + wpe * wpe - disc);
  return {std::sqrt(w2p), -std::sqrt(w2p), std::sqrt(w2m), -std::sqrt(w2m)};
}

ComplexRoot two_stream_root(double k, double vt2, double u, double wpe) {
  const RootWindow w{0.0, 3.0 * std::max(wpe, std::abs(k * u)), -1.0 * wpe, 1.0 * wpe, 40, 40};
  const auto roots = scan_roots([&](cplx om) { return two_stream_dielectric(om, k, vt2, u, wpe); }, w);
  return first_or_throw(roots_in_window(roots, w, 0.05), "two-stream relation");
}

// ---- Landau ----

cplx landau_dielectric(cplx omega, double k) {
  const cplx zeta = omega / (std::sqrt(2.0) * std::abs(k));
  return 1.0 + plasma_r(zeta) / (k * k);
}

ComplexRoot landau_root(double k) {
  const RootWindow w{0.0, 3.0, -1.0, 1.0, 40, 40};
  const auto roots = scan_roots([&](cplx om) { return landau_dielectric(om, k); }, w);
  for (const auto& r : roots)
    if (r.omega.real() > 1e-6 && r.omega.imag() < 0.0) return r;
  throw Error(ErrorKind::not_converged, "no damped Langmuir root found");
}

// ---- ring distribution ----

double dgh_ring_peak(const DghParams& p) { return std::sqrt(static_cast<double>(p.ell)) * p.alpha_perp; }

double dgh_k_from_kbar(double kbar, const DghParams& p) { return kbar * p.omega_c / dgh_ring_peak(p); }

double dgh_F0(double tau, double k, const DghParams& p) {
  const double b = k * p.alpha_perp * std::cos(0.5 * tau) / p.omega_c;
  const double y = b * b;
  return std::exp(-y) * std::laguerre(static_cast<unsigned>(p.ell), y);
}

double dgh_F0_quadrature(double tau, double k, const DghParams& p) {
  const double a2 = p.alpha_perp * p.alpha_perp;
  const double norm = 1.0 / (pi * std::tgamma(p.ell + 1.0) * a2);
  const double vmax = p.alpha_perp * std::sqrt(p.ell + 60.0);
  const Nodes n = composite(0.0, vmax, 256);
  const double arg = 2.0 * k / p.omega_c * std::cos(0.5 * tau);
  double s = 0.0;
  for (std::size_t i = 0; i < n.x.size(); ++i) {
    const double v = n.x[i];
    const double t = v * v / a2;
    s += n.w[i] * norm * std::pow(t, p.ell) * std::exp(-t) * std::cyl_bessel_j(0.0, arg * v) * 2.0 * pi * v;
  }
  return s;
}

namespace {

// sin(a tau) / sin(a pi) without overflow for large |Im a|.
cplx sine_ratio(cplx a, double tau) {
  if (a.imag() >= 0.0) return std::exp(I * a * (pi - tau)) * (1.0 - std::exp(2.0 * I * a * tau)) / (1.0 - std::exp(2.0 * I * a * pi));
  return std::exp(-I * a * (pi - tau)) * (1.0 - std::exp(-2.0 * I * a * tau)) / (1.0 - std::exp(-2.0 * I * a * pi));
}

struct DghKernel {
  Nodes n;
  std::vector<double> weight;  // w_i sin(tau_i) F0(tau_i)
  DghKernel(double k, const DghParams& p, int panels) : n(composite(0.0, pi, panels)) {
    weight.resize(n.x.size());
    for (std::size_t i = 0; i < n.x.size(); ++i) weight[i] = n.w[i] * std::sin(n.x[i]) * dgh_F0(n.x[i], k, p);
  }
  cplx integral(cplx a) const {
    cplx s = 0.0;
    for (std::size_t i = 0; i < n.x.size(); ++i) s += weight[i] * sine_ratio(a, n.x[i]);
    return s;
  }
};

}  // namespace

cplx dgh_dielectric(cplx omega, double k, const DghParams& p) {
  const DghKernel ker(k, p, 64);
  return 1.0 + p.wpe * p.wpe / (p.omega_c * p.omega_c) * ker.integral(omega / p.omega_c);
}

ComplexRoot dgh_root(double k, const DghParams& p) {
  const auto ker = std::make_shared<DghKernel>(k, p, 64);
  const double scale = p.wpe * p.wpe / (p.omega_c * p.omega_c);
  const Relation D = [ker, scale, p](cplx om) { return 1.0 + scale * ker->integral(om / p.omega_c); };
  const RootWindow w{0.0, 3.0 * std::max(p.wpe, p.omega_c), -1.0, 1.0, 40, 40};
  auto roots = roots_in_window(scan_roots(D, w), w, 0.05);
  for (auto& r : roots) {
    const double a = r.omega.real() / p.omega_c;
    r.near_harmonic = std::abs(r.omega.imag()) < 1e-8 * p.omega_c && std::abs(a - std::round(a)) < 1e-6 &&
                      std::round(a) != 0.0;
  }
  return first_or_throw(roots, "ring relation");
}

// ---- lower hybrid drift ----

double LhdiClosure::lower_hybrid() const { return std::sqrt(std::abs(species[0].omega * species[1].omega)); }

LhdiClosure lhdi_closure(const LhdiParams& p) {
  if (p.mass_ratio <= 0.0 || p.temp_ratio <= 0.0 || p.beta <= 0.0)
    throw Error(ErrorKind::out_of_range, "mass ratio, temperature ratio and beta must be positive");
  LhdiClosure c;
  const double mr = p.mass_ratio;
  const double wce = p.wce_ratio > 0.0 ? p.wce_ratio : 1e-2 * std::sqrt(mr);
  // |Omega_e| / omega_pe = omega_c m_r / sqrt(m_r) with unit charge, density and field
  c.omega_c = wce / std::sqrt(mr);
  c.b_z = 1.0;
  // beta = 2 (T_i + T_e) / B^2
  const double te = p.beta / (2.0 * (1.0 + p.temp_ratio));
  const double ti = p.temp_ratio * te;
  auto& ion = c.species[0];
  auto& el = c.species[1];
  ion = {"ion", 1.0, 1.0, ti, std::sqrt(ti / 1.0), 0.0, c.omega_c * c.b_z, 1.0, 12.14};
  el = {"electron", -1.0, 1.0 / mr, te, std::sqrt(te * mr), 0.0, -c.omega_c * c.b_z * mr, mr, mr < 100.0 ? 18.21 : 6.07};
  const double vd_ratio = p.vd_ratio > 0.0 ? p.vd_ratio : 9.0 + 9.0 / mr;
  c.v_drift = vd_ratio * ion.vt;
  // u_s = G_y / Omega_s and v_D = u_i - u_e
  c.g_y = c.v_drift / (1.0 / ion.omega - 1.0 / el.omega);
  ion.drift_x = c.g_y / ion.omega;
  el.drift_x = c.g_y / el.omega;
  return c;
}

namespace {

struct LhdiKernel {
  Nodes n;
  std::array<std::vector<double>, 2> weight;  // w_i sin(phi_i) F_s(phi_i)
  LhdiKernel(double k, const LhdiClosure& c, int panels) : n(composite(0.0, 2.0 * pi, panels)) {
    for (int s = 0; s < 2; ++s) {
      const auto& sp = c.species[s];
      const double b = 2.0 * k * k * sp.vt * sp.vt / (sp.omega * sp.omega);
      weight[s].resize(n.x.size());
      for (std::size_t i = 0; i < n.x.size(); ++i) {
        const double sh = std::sin(0.5 * n.x[i]);
        weight[s][i] = n.w[i] * std::sin(n.x[i]) * std::exp(-b * sh * sh);
      }
    }
  }
};

cplx lhdi_eval(cplx omega, double k, const LhdiClosure& c, const LhdiKernel& ker) {
  cplx total = 1.0;
  for (int s = 0; s < 2; ++s) {
    const auto& sp = c.species[s];
    const cplx W = (omega - k * sp.drift_x) / sp.omega;
    cplx sum = 0.0;
    if (W.imag() >= 0.0) {
      const cplx den = 1.0 - std::exp(2.0 * pi * I * W);
      for (std::size_t i = 0; i < ker.n.x.size(); ++i) sum += ker.weight[s][i] * std::exp(I * W * ker.n.x[i]);
      sum /= den;
    } else {
      const cplx den = 1.0 - std::exp(-2.0 * pi * I * W);
      for (std::size_t i = 0; i < ker.n.x.size(); ++i)
        sum += ker.weight[s][i] * std::exp(I * W * (ker.n.x[i] - 2.0 * pi));
      sum = -sum / den;
    }
    total += sp.wp2 / (sp.omega * sp.omega) * sum;
  }
  return total;
}

}  // namespace

cplx lhdi_dielectric(cplx omega, double k, const LhdiClosure& c) { return lhdi_eval(omega, k, c, LhdiKernel(k, c, 128)); }

ComplexRoot lhdi_root(double k, const LhdiClosure& c) {
  const auto ker = std::make_shared<LhdiKernel>(k, c, 128);
  const Relation D = [ker, k, c](cplx om) { return lhdi_eval(om, k, c, *ker); };
  const double lo = k * std::min(c.species[0].drift_x, c.species[1].drift_x);
  const double hi = k * std::max(c.species[0].drift_x, c.species[1].drift_x);
  const double wlh = c.lower_hybrid();
  const RootWindow w{lo, hi, -wlh, 6.0 * wlh, 40, 40};
  return first_or_throw(roots_in_window(scan_roots(D, w), w, 0.05), "lower hybrid drift relation");
}

std::vector<ScanPoint> scan_k(const std::vector<double>& ks, const std::function<Relation(double)>& relation,
                              const std::function<RootWindow(double)>& window) {
  std::vector<ScanPoint> out;
  for (double k : ks) {
    const Relation D = relation(k);
    const RootWindow w = window(k);
    auto roots = roots_in_window(scan_roots(D, w), w, 0.05);
    if (!out.empty() && out.back().root.converged) {
      ComplexRoot cont = polish_root(D, out.back().root.omega);
      if (cont.converged) roots.push_back(cont);
    }
    ScanPoint sp{k, {}};
    for (const auto& r : roots)
      if (!sp.root.converged || r.omega.imag() > sp.root.omega.imag()) sp.root = r;
    out.push_back(sp);
  }
  return out;
}

}  // namespace vpfv
