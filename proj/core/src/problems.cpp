#include "vpfv/problems.hpp"

#include <cmath>
#include <numbers>

#include "vpfv/error.hpp"

namespace vpfv {

namespace {

constexpr double pi = std::numbers::pi;

Factor fn1(int dim, std::function<double(double)> f) {
  return {{dim}, [f = std::move(f)](std::span<const double> x) { return f(x[0]); }};
}

Factor fn2(int a, int b, std::function<double(double, double)> f) {
  return {{a, b}, [f = std::move(f)](std::span<const double> x) { return f(x[0], x[1]); }};
}

std::function<double(double)> gaussian(double mean, double vt) {
  const double norm = 1.0 / (vt * std::sqrt(2.0 * pi));
  return [=](double v) { return norm * std::exp(-(v - mean) * (v - mean) / (2.0 * vt * vt)); };
}

void check_dims(const PhaseSpaceGrid& g, int d, int v, const char* what) {
  if (g.d != d || g.v != v)
    throw Error(ErrorKind::dimension_mismatch, std::string(what) + " needs " + std::to_string(d) + "D-" +
                                                   std::to_string(v) + "V, got " + std::to_string(g.d) + "D-" +
                                                   std::to_string(g.v) + "V");
}

}  // namespace

double DghInitParams::k() const {
  return kbar * omega_c / (std::sqrt(static_cast<double>(ell)) * alpha_perp);
}

std::vector<SeparableTerm> two_stream_terms(const TwoStreamParams& p) {
  const double vt = std::sqrt(p.vt2);
  const double k = p.k;
  const auto sinx = fn1(0, [k](double x) { return std::sin(k * x); });
  const auto gp = fn1(1, gaussian(p.u, vt));
  const auto gm = fn1(1, gaussian(-p.u, vt));
  return {{0.5, {gp}}, {0.5, {gm}}, {p.delta, {sinx, gp}}, {-p.delta, {sinx, gm}}};
}

std::vector<SeparableTerm> dgh_terms(const DghInitParams& p) {
  const double a2 = p.alpha_perp * p.alpha_perp;
  const double norm = 1.0 / (pi * std::tgamma(p.ell + 1.0) * a2);
  const int ell = p.ell;
  auto ring = [=](double vx, double vy) {
    const double t = (vx * vx + vy * vy) / a2;
    return norm * std::pow(t, ell) * std::exp(-t);
  };
  const double k = p.k();
  // sin(4 theta - k x) = sin(4 theta) cos(k x) - cos(4 theta) sin(k x)
  const auto r0 = fn2(1, 2, ring);
  const auto rs = fn2(1, 2, [=](double vx, double vy) { return ring(vx, vy) * std::sin(4.0 * std::atan2(vy, vx)); });
  const auto rc = fn2(1, 2, [=](double vx, double vy) { return ring(vx, vy) * std::cos(4.0 * std::atan2(vy, vx)); });
  const auto cx = fn1(0, [k](double x) { return std::cos(k * x); });
  const auto sx = fn1(0, [k](double x) { return std::sin(k * x); });
  return {{1.0, {r0}}, {p.delta, {rs, cx}}, {-p.delta, {rc, sx}}};
}

std::vector<SeparableTerm> lhdi_terms(const LhdiSpecies& s, double delta, double k) {
  const auto gx = fn1(1, gaussian(s.drift_x, s.vt));
  const auto gy = fn1(2, gaussian(0.0, s.vt));
  std::vector<SeparableTerm> t{{1.0, {gx, gy}}};
  if (delta != 0.0) t.push_back({delta, {fn1(0, [k](double x) { return std::sin(k * x); }), gx, gy}});
  return t;
}

std::vector<SeparableTerm> landau_terms(const LandauParams& p, int d) {
  if (d == 1) {
    const double k = p.kx;
    const auto m = fn1(1, gaussian(0.0, 1.0));
    return {{1.0, {m}}, {p.alpha, {fn1(0, [k](double x) { return std::cos(k * x); }), m}}};
  }
  const auto mx = fn1(2, gaussian(0.0, 1.0));
  const auto my = fn1(3, gaussian(0.0, 1.0));
  const double kx = p.kx, ky = p.ky;
  return {{1.0, {mx, my}},
          {p.alpha, {fn1(0, [kx](double x) { return std::cos(kx * x); }), mx, my}},
          {p.alpha, {fn1(1, [ky](double y) { return std::cos(ky * y); }), mx, my}}};
}

std::vector<SeparableTerm> advection_terms(const AdvectionParams& p, const PhaseSpaceGrid& g) {
  SeparableTerm t{1.0, {}};
  for (int k = 0; k < g.dims(); ++k) {
    const double lo = g.global_lo[k];
    const double len = g.global_N[k] * g.h[k];
    const double a = p.amplitude;
    t.factors.push_back(fn1(k, [=](double x) { return 1.0 + a * std::sin(2.0 * pi * (x - lo) / len); }));
  }
  return {t};
}

void init_two_stream(DistField& f, const TwoStreamParams& p, int points) {
  check_dims(f.grid(), 1, 1, "two-stream");
  separable_init(f, two_stream_terms(p), points);
}

void init_dgh(DistField& f, const DghInitParams& p, int points) {
  check_dims(f.grid(), 1, 2, "ring distribution");
  separable_init(f, dgh_terms(p), points);
}

void init_lhdi(DistField& f, const LhdiSpecies& s, double delta, double k, int points) {
  check_dims(f.grid(), 1, 2, "lower hybrid drift");
  separable_init(f, lhdi_terms(s, delta, k), points);
}

void init_landau(DistField& f, const LandauParams& p, int points) {
  const auto& g = f.grid();
  if (!((g.d == 1 && g.v == 1) || (g.d == 2 && g.v == 2)))
    throw Error(ErrorKind::dimension_mismatch, "Landau damping needs 1D-1V or 2D-2V");
  separable_init(f, landau_terms(p, g.d), points);
}

TwoStreamParams two_stream_params(const RunConfig& c) {
  TwoStreamParams p;
  p.vt2 = c.param("vt2", p.vt2);
  p.u = c.param("u", p.u);
  p.delta = c.param("delta", p.delta);
  p.k = c.param("k", p.k);
  return p;
}

DghInitParams dgh_params(const RunConfig& c) {
  DghInitParams p;
  p.ell = static_cast<int>(c.param("ell", p.ell));
  p.alpha_perp = c.param("alpha_perp", p.alpha_perp);
  p.delta = c.param("delta", p.delta);
  p.kbar = c.param("kbar", p.kbar);
  p.omega_c = c.param("omega_c", p.omega_c);
  return p;
}

LhdiInitParams lhdi_params(const RunConfig& c) {
  LhdiInitParams p;
  p.physics.mass_ratio = c.param("mass_ratio", p.physics.mass_ratio);
  p.physics.temp_ratio = c.param("temp_ratio", p.physics.temp_ratio);
  p.physics.beta = c.param("beta", p.physics.beta);
  p.physics.vd_ratio = c.param("vd_ratio", 0.0);
  p.physics.wce_ratio = c.param("wce_ratio", 0.0);
  p.delta_e = c.param("delta_e", p.delta_e);
  p.delta_i = c.param("delta_i", p.delta_i);
  p.k = c.param("k", p.k);
  return p;
}

LandauParams landau_params(const RunConfig& c) {
  LandauParams p;
  p.alpha = c.param("alpha", p.alpha);
  p.kx = c.param("kx", c.param("k", p.kx));
  p.ky = c.param("ky", p.ky);
  return p;
}

ProblemSetup make_problem(const RunConfig& cfg) {
  ProblemSetup ps;
  ps.kind = cfg.problem;
  ps.d = cfg.d;
  ps.v = cfg.v;
  const int d = cfg.d, v = cfg.v, D = d + v;
  if (d < 1 || d > 2 || v < d || v > 2) throw Error(ErrorKind::dimension_mismatch, "unsupported d/v combination");

  // physical defaults per problem
  struct Defaults {
    std::string name = "electron";
    double charge = -1.0, mass = 1.0, vt = 1.0, drift = 0.0, vmax = 8.0;
    double delta = 0.0;
  };
  std::vector<Defaults> defs(1);
  std::array<double, 2> wavenumber{0.0, 0.0};
  double omega_c = cfg.omega_c, b_z = cfg.b_z;
  std::array<double, 2> g = cfg.g;
  LhdiClosure closure;
  LhdiInitParams lp;

  if (ps.kind == "two_stream") {
    if (d != 1 || v != 1) throw Error(ErrorKind::dimension_mismatch, "two_stream needs d = 1, v = 1");
    const auto p = two_stream_params(cfg);
    wavenumber[0] = p.k;
    ps.info = {{"k", p.k}, {"vt2", p.vt2}, {"u", p.u}, {"delta", p.delta}};
  } else if (ps.kind == "dgh") {
    if (d != 1 || v != 2) throw Error(ErrorKind::dimension_mismatch, "dgh needs d = 1, v = 2");
    const auto p = dgh_params(cfg);
    wavenumber[0] = p.k();
    omega_c = p.omega_c;
    b_z = 1.0;
    ps.info = {{"k", p.k()}, {"kbar", p.kbar}, {"omega_c", p.omega_c}, {"delta", p.delta}};
  } else if (ps.kind == "lhdi") {
    if (d != 1 || v != 2) throw Error(ErrorKind::dimension_mismatch, "lhdi needs d = 1, v = 2");
    lp = lhdi_params(cfg);
    closure = lhdi_closure(lp.physics);
    wavenumber[0] = lp.k;
    omega_c = closure.omega_c;
    b_z = closure.b_z;
    g = {0.0, closure.g_y};
    defs.assign(2, {});
    for (int s = 0; s < 2; ++s) {
      const auto& sp = closure.species[s];
      defs[s] = {sp.name, sp.charge, sp.mass, sp.vt, sp.drift_x, 0.0, s == 0 ? lp.delta_i : lp.delta_e};
    }
    ps.info = {{"k", lp.k}, {"mass_ratio", lp.physics.mass_ratio}, {"g_y", closure.g_y},
               {"omega_c", closure.omega_c}, {"v_drift", closure.v_drift}};
  } else if (ps.kind == "landau") {
    if (!((d == 1 && v == 1) || (d == 2 && v == 2)))
      throw Error(ErrorKind::dimension_mismatch, "landau needs 1D-1V or 2D-2V");
    const auto p = landau_params(cfg);
    wavenumber = {p.kx, p.ky};
    ps.info = {{"alpha", p.alpha}, {"kx", p.kx}, {"ky", p.ky}};
  } else if (ps.kind == "advection") {
    defs[0].charge = 0.0;
    defs[0].vmax = 6.0;
  } else {
    throw Error(ErrorKind::unsupported, "unknown problem type '" + ps.kind + "'");
  }

  // physical extent
  for (int k = 0; k < d; ++k) {
    if (!cfg.length.empty()) {
      if (static_cast<int>(cfg.length.size()) != d) throw Error(ErrorKind::dimension_mismatch, "length needs d entries");
      ps.length[k] = cfg.length[k];
    } else if (wavenumber[k] > 0.0) {
      ps.length[k] = 2.0 * pi / wavenumber[k];
    } else {
      ps.length[k] = 1.0;
    }
  }

  const int nspecies = std::max<int>(static_cast<int>(defs.size()), static_cast<int>(cfg.species.size()));
  if (cfg.species.size() > defs.size() && ps.kind == "lhdi")
    throw Error(ErrorKind::dimension_mismatch, "lhdi has exactly two species");
  for (int s = 0; s < nspecies; ++s) {
    const Defaults df = s < static_cast<int>(defs.size()) ? defs[s] : Defaults{};
    const SpeciesSection sec = s < static_cast<int>(cfg.species.size()) ? cfg.species[s] : SpeciesSection{};
    SpeciesConfig sp;
    sp.name = sec.name.empty() ? df.name : sec.name;
    sp.charge = sec.charge.value_or(df.charge);
    sp.mass = sec.mass.value_or(df.mass);
    sp.omega_p = cfg.omega_p;
    sp.omega_c = omega_c;
    sp.b_z = b_z;
    sp.g = g;
    ps.species.push_back(sp);

    std::vector<int> N(D);
    std::vector<double> lo(D), hi(D);
    for (int k = 0; k < d; ++k) {
      if (static_cast<int>(cfg.cells.size()) <= k) throw Error(ErrorKind::dimension_mismatch, "cells missing physical entries");
      N[k] = cfg.cells[k];
      lo[k] = 0.0;
      hi[k] = ps.length[k];
    }
    for (int a = 0; a < v; ++a) {
      const int k = d + a;
      if (static_cast<int>(sec.cells.size()) == v) N[k] = sec.cells[a];
      else if (static_cast<int>(cfg.cells.size()) == D) N[k] = cfg.cells[k];
      else throw Error(ErrorKind::dimension_mismatch, "cells needs d + v entries for species " + sp.name);
      const double mean = a == 0 ? df.drift : 0.0;
      if (!sec.v_lo.empty() || !sec.v_hi.empty()) {
        if (static_cast<int>(sec.v_lo.size()) != v || static_cast<int>(sec.v_hi.size()) != v)
          throw Error(ErrorKind::dimension_mismatch, "v_lo and v_hi need v entries");
        lo[k] = sec.v_lo[a];
        hi[k] = sec.v_hi[a];
      } else if (sec.alpha || (ps.kind == "lhdi" && cfg.v_max.empty())) {
        const double alpha = sec.alpha.value_or(closure.species[s].alpha);
        lo[k] = mean - alpha * df.vt;
        hi[k] = mean + alpha * df.vt;
      } else {
        double vm = df.vmax;
        if (!cfg.v_max.empty()) vm = cfg.v_max.size() == 1 ? cfg.v_max[0] : cfg.v_max.at(a);
        lo[k] = -vm;
        hi[k] = vm;
      }
    }
    auto grid = make_grid(d, v, N, lo, hi);
    if (cfg.velocity_boundary == "periodic")
      for (int k = d; k < D; ++k) grid.periodic[k] = true;
    ps.grids.push_back(grid);

    if (ps.kind == "two_stream") ps.init.push_back(two_stream_terms(two_stream_params(cfg)));
    else if (ps.kind == "dgh") ps.init.push_back(dgh_terms(dgh_params(cfg)));
    else if (ps.kind == "lhdi") ps.init.push_back(lhdi_terms(closure.species[s], df.delta, lp.k));
    else if (ps.kind == "landau") ps.init.push_back(landau_terms(landau_params(cfg), d));
    else {
      AdvectionParams ap;
      ap.amplitude = cfg.param("amplitude", ap.amplitude);
      ps.init.push_back(advection_terms(ap, grid));
    }
  }
  return ps;
}

}  // namespace vpfv
