#pragma once

#include <array>
#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace vpfv {

using cplx = std::complex<double>;
using Relation = std::function<cplx(cplx)>;

struct ComplexRoot {
  cplx omega{};
  double residual = 0.0;
  int iterations = 0;
  cplx guess{};
  bool converged = false;
  bool near_harmonic = false;
};

/// Rectangle of initial guesses in the omega plane.
struct RootWindow {
  double re_lo = 0.0, re_hi = 3.0;
  double im_lo = -1.0, im_hi = 1.0;
  int n_re = 40, n_im = 40;
};

inline constexpr double root_tolerance = 1e-10;

/// Newton iteration with a finite-difference derivative.
ComplexRoot polish_root(const Relation& D, cplx guess, int max_iter = 80);

/// Distinct converged roots (residual <= root_tolerance) started from every
/// guess of the window, sorted by decreasing imaginary part.
std::vector<ComplexRoot> scan_roots(const Relation& D, const RootWindow& w);

/// Roots lying inside the (expanded) window only.
std::vector<ComplexRoot> roots_in_window(const std::vector<ComplexRoot>& roots, const RootWindow& w, double margin = 0.0);

// ---- two-stream: two Maxwellian beams at +-u, each of density 1/2 ----

cplx two_stream_dielectric(cplx omega, double k, double vt2, double u = 1.0, double wpe = 1.0);
/// omega^2 of the cold limit, [(2k^2u^2 + wpe^2) +- wpe sqrt(8k^2u^2 + wpe^2)] / 2.
std::array<cplx, 4> cold_two_stream_roots(double k, double u = 1.0, double wpe = 1.0);
/// Root with the largest imaginary part.
ComplexRoot two_stream_root(double k, double vt2, double u = 1.0, double wpe = 1.0);

// ---- Landau damping of a unit Maxwellian ----

cplx landau_dielectric(cplx omega, double k);
/// Least damped root with positive real frequency.
ComplexRoot landau_root(double k);

// ---- ring distribution across a uniform magnetic field ----

struct DghParams {
  int ell = 4;
  double alpha_perp = 0.70710678118654752440;
  double omega_c = 0.05;  // |Omega_e|
  double wpe = 1.0;
};

double dgh_ring_peak(const DghParams& p);
double dgh_k_from_kbar(double kbar, const DghParams& p);
/// Bessel-weighted radial integral of the ring, closed form e^{-y} L_l(y).
double dgh_F0(double tau, double k, const DghParams& p);
/// Same integral by direct quadrature over v_perp (for checking).
double dgh_F0_quadrature(double tau, double k, const DghParams& p);
cplx dgh_dielectric(cplx omega, double k, const DghParams& p);
ComplexRoot dgh_root(double k, const DghParams& p);

// ---- acceleration-driven lower hybrid drift ----

struct LhdiParams {
  double mass_ratio = 25.0;
  double temp_ratio = 1.0;   // T_i / T_e
  double beta = 2.5e-3;
  double vd_ratio = 0.0;     // v_D / v_Ti; 0 selects 9 + 9 / m_r
  double wce_ratio = 0.0;    // |Omega_e / omega_pe|; 0 selects 1e-2 sqrt(m_r)
};

struct LhdiSpecies {
  std::string name;
  double charge = 0.0;
  double mass = 0.0;
  double temperature = 0.0;
  double vt = 0.0;
  double drift_x = 0.0;
  double omega = 0.0;  // signed gyrofrequency
  double wp2 = 0.0;    // plasma frequency squared
  double alpha = 0.0;  // velocity half-width in thermal speeds
};

/// Primitive quantities in units where omega_p0 t_0 = 1, n = 1, B_z = 1.
struct LhdiClosure {
  double omega_c = 0.0;  // omega_c0 t_0
  double b_z = 1.0;
  double g_y = 0.0;
  double v_drift = 0.0;
  std::array<LhdiSpecies, 2> species;  // ion, electron
  double lower_hybrid() const;
};

LhdiClosure lhdi_closure(const LhdiParams& p);
cplx lhdi_dielectric(cplx omega, double k, const LhdiClosure& c);
/// Fastest growing root; window spans the two Doppler shifts k u_s.
ComplexRoot lhdi_root(double k, const LhdiClosure& c);

struct ScanPoint {
  double k = 0.0;
  ComplexRoot root;
};

/// Root along a list of k, each started from the previous root and from the
/// relation's own window.
std::vector<ScanPoint> scan_k(const std::vector<double>& ks, const std::function<Relation(double)>& relation,
                              const std::function<RootWindow(double)>& window);

}  // namespace vpfv
