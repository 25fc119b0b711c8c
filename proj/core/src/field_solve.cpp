#include "vpfv/field_solve.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "vpfv/error.hpp"

namespace vpfv {

FieldState::FieldState(int d_, std::array<int, 2> N_, std::array<double, 2> h_, int species_count)
    : d(d_), N(N_), h(h_) {
  if (d == 1) N[1] = 1;
  const int c = cells();
  n.assign(species_count, std::vector<double>(c, 0.0));
  rho.assign(c, 0.0);
  phi.assign(c, 0.0);
  E[0].assign(c, 0.0);
  E[1].assign(d == 2 ? c : 0, 0.0);
}

int FieldState::wrapped(int i, int j) const {
  const int wi = ((i % N[0]) + N[0]) % N[0];
  if (d == 1) return wi;
  const int wj = ((j % N[1]) + N[1]) % N[1];
  return wi * N[1] + wj;
}

namespace {

struct Layout {
  int nphys;      // local physical cells
  std::int64_t nvel;  // interior velocity cells per physical cell
};

Layout layout(const PhaseSpaceGrid& g) {
  Layout l{1, 1};
  for (int k = 0; k < g.d; ++k) l.nphys *= g.N[k];
  for (int k = g.d; k < g.dims(); ++k) l.nvel *= g.N[k];
  return l;
}

// Calls fn(phys, offset_of_first_velocity_row_cell, velocity_multi_index) for
// each interior velocity row; rows run along the last dim.
template <class Fn>
void for_each_velocity_row(const PhaseSpaceGrid& g, Fn&& fn) {
  const int D = g.dims();
  MultiIndex mi{};
  std::int64_t rows = 1;
  for (int k = 0; k < D - 1; ++k) rows *= g.N[k];
  for (std::int64_t r = 0; r < rows; ++r) {
    std::int64_t rem = r;
    for (int k = D - 2; k >= 0; --k) {
      mi[k] = static_cast<int>(rem % g.N[k]);
      rem /= g.N[k];
    }
    mi[D - 1] = 0;
    const int phys = g.d == 1 ? mi[0] : mi[0] * g.N[1] + mi[1];
    fn(phys, flat_index_unchecked(g, mi), mi);
  }
}

}  // namespace

std::vector<ExactSum> velocity_sums(const DistField& f) {
  const auto& g = f.grid();
  const Layout l = layout(g);
  std::vector<ExactSum> acc(l.nphys);
  const int nl = g.N[g.dims() - 1];
  const double* p = f.data();
  for_each_velocity_row(g, [&](int phys, std::int64_t off, const MultiIndex&) {
    for (int j = 0; j < nl; ++j) acc[phys].add(p[off + j]);
  });
  return acc;
}

std::vector<double> zeroth_moment(const DistField& f, MomentSchedule schedule, ReductionMode mode) {
  const auto& g = f.grid();
  const Layout l = layout(g);
  const double vol = g.velocity_cell_volume();
  std::vector<double> n(l.nphys, 0.0);
  if (mode == ReductionMode::deterministic) {
    const auto acc = velocity_sums(f);
    for (int i = 0; i < l.nphys; ++i) n[i] = acc[i].value() * vol;
    return n;
  }
  const int nl = g.N[g.dims() - 1];
  const double* p = f.data();
  if (schedule == MomentSchedule::velocity_major) {
    // contiguous velocity rows reduced by a pairwise tree, then added per cell
    std::vector<double> tmp(nl);
    for_each_velocity_row(g, [&](int phys, std::int64_t off, const MultiIndex&) {
      for (int j = 0; j < nl; ++j) tmp[j] = p[off + j];
      int len = nl;
      while (len > 1) {
        const int half = len / 2;
        for (int j = 0; j < half; ++j) tmp[j] = tmp[2 * j] + tmp[2 * j + 1];
        if (len & 1) tmp[half] = tmp[len - 1];
        len = half + (len & 1);
      }
      n[phys] += tmp[0];
    });
  } else {
    // short sequential sums in v, accumulated position by position
    std::vector<std::vector<double>> rows;
    for_each_velocity_row(g, [&](int phys, std::int64_t off, const MultiIndex&) {
      double s = 0.0;
      for (int j = 0; j < nl; ++j) s += p[off + j];
      if (static_cast<int>(rows.size()) <= phys) rows.resize(phys + 1);
      rows[phys].push_back(s);
    });
    const std::size_t per_cell = rows.empty() ? 0 : rows[0].size();
    for (std::size_t r = 0; r < per_cell; ++r)
      for (int i = 0; i < l.nphys; ++i) n[i] += rows[i][r];
  }
  for (auto& x : n) x *= vol;
  return n;
}

HigherMoments higher_moments(const DistField& f) {
  const auto& g = f.grid();
  const Layout l = layout(g);
  HigherMoments hm;
  for (int a = 0; a < g.v; ++a) hm.momentum[a].assign(l.nphys, 0.0);
  hm.energy.assign(l.nphys, 0.0);
  const int D = g.dims();
  const double vol = g.velocity_cell_volume();
  std::array<std::vector<ExactSum>, 2> mom;
  for (int a = 0; a < g.v; ++a) mom[a].resize(l.nphys);
  std::vector<ExactSum> en(l.nphys);
  const double* p = f.data();
  const int nl = g.N[D - 1];
  for_each_velocity_row(g, [&](int phys, std::int64_t off, const MultiIndex& mi) {
    for (int j = 0; j < nl; ++j) {
      const double* c = p + off + j;
      double e = 0.0;
      for (int a = 0; a < g.v; ++a) {
        const int k = g.d + a;
        const double hv = g.h[k];
        const double vc = g.center(k, a == g.v - 1 ? j : mi[k]);
        const std::int64_t s = g.stride[k];
        const double df = c[s] - c[-s];  // 2 h f'
        // cell integral / h of v f and v^2 f using f ~ fbar + f'(v - vc)
        mom[a][phys].add(vc * c[0] + (hv / 24.0) * df);
        e += (vc * vc + hv * hv / 12.0) * c[0] + (hv * vc / 12.0) * df;
      }
      en[phys].add(0.5 * e);
    }
  });
  for (int i = 0; i < l.nphys; ++i) {
    for (int a = 0; a < g.v; ++a) hm.momentum[a][i] = mom[a][i].value() * vol;
    hm.energy[i] = en[i].value() * vol;
  }
  return hm;
}

void MomentTotals::merge(const MomentTotals& o) {
  mass.merge(o.mass);
  momentum[0].merge(o.momentum[0]);
  momentum[1].merge(o.momentum[1]);
  energy.merge(o.energy);
}

MomentTotals moment_totals(const DistField& f) {
  const auto& g = f.grid();
  MomentTotals t;
  const int D = g.dims();
  const double* p = f.data();
  const int nl = g.N[D - 1];
  const double vol = g.cell_volume();
  for_each_velocity_row(g, [&](int, std::int64_t off, const MultiIndex& mi) {
    for (int j = 0; j < nl; ++j) {
      const double* c = p + off + j;
      t.mass.add(c[0] * vol);
      double e = 0.0;
      for (int a = 0; a < g.v; ++a) {
        const int k = g.d + a;
        const double hv = g.h[k];
        const double vc = g.center(k, a == g.v - 1 ? j : mi[k]);
        const std::int64_t s = g.stride[k];
        const double df = c[s] - c[-s];
        t.momentum[a].add((vc * c[0] + (hv / 24.0) * df) * vol);
        e += (vc * vc + hv * hv / 12.0) * c[0] + (hv * vc / 12.0) * df;
      }
      t.energy.add(0.5 * e * vol);
    }
  });
  return t;
}

std::vector<double> charge_density(const std::vector<std::vector<double>>& n,
                                   const std::vector<SpeciesConfig>& species, ReductionMode mode) {
  if (n.size() != species.size()) throw Error(ErrorKind::dimension_mismatch, "one density per species expected");
  if (n.empty()) return {};
  const std::size_t c = n[0].size();
  std::vector<double> rho(c, 0.0);
  for (std::size_t s = 0; s < n.size(); ++s) {
    if (n[s].size() != c) throw Error(ErrorKind::dimension_mismatch, "densities on different grids");
    for (std::size_t i = 0; i < c; ++i) rho[i] += species[s].charge * n[s][i];
  }
  double mean = 0.0;
  if (mode == ReductionMode::deterministic) {
    ExactSum acc;
    for (double r : rho) acc.add(r);
    mean = acc.value() / static_cast<double>(c);
  } else {
    for (double r : rho) mean += r;
    mean /= static_cast<double>(c);
  }
  for (auto& r : rho) r -= mean;
  return rho;
}

struct PoissonSolver::Impl {
  int d;
  std::array<int, 2> N;
  std::array<double, 2> L;
  int nc;  // complex coefficients
  double* real = nullptr;
  fftw_complex* spec = nullptr;
  fftw_complex* work = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
};

PoissonSolver::PoissonSolver(int d, std::array<int, 2> N, std::array<double, 2> length) : impl_(new Impl) {
  auto& m = *impl_;
  m.d = d;
  m.N = N;
  if (d == 1) m.N[1] = 1;
  m.L = length;
  const int nlast = d == 1 ? m.N[0] / 2 + 1 : m.N[1] / 2 + 1;
  m.nc = d == 1 ? nlast : m.N[0] * nlast;
  const int nr = m.N[0] * m.N[1];
  m.real = fftw_alloc_real(nr);
  m.spec = fftw_alloc_complex(m.nc);
  m.work = fftw_alloc_complex(m.nc);
  if (d == 1) {
    m.fwd = fftw_plan_dft_r2c_1d(m.N[0], m.real, m.spec, FFTW_ESTIMATE);
    m.bwd = fftw_plan_dft_c2r_1d(m.N[0], m.work, m.real, FFTW_ESTIMATE);
  } else {
    m.fwd = fftw_plan_dft_r2c_2d(m.N[0], m.N[1], m.real, m.spec, FFTW_ESTIMATE);
    m.bwd = fftw_plan_dft_c2r_2d(m.N[0], m.N[1], m.work, m.real, FFTW_ESTIMATE);
  }
}

PoissonSolver::~PoissonSolver() {
  auto& m = *impl_;
  fftw_destroy_plan(m.fwd);
  fftw_destroy_plan(m.bwd);
  fftw_free(m.real);
  fftw_free(m.spec);
  fftw_free(m.work);
}

void PoissonSolver::solve(const std::vector<double>& rho, std::vector<double>& phi,
                          std::array<std::vector<double>, 2>& E, bool cell_average) {
  auto& m = *impl_;
  const int nr = m.N[0] * m.N[1];
  if (static_cast<int>(rho.size()) != nr) throw Error(ErrorKind::dimension_mismatch, "rho has wrong size");
  double mean = 0.0, amax = 0.0;
  for (double r : rho) {
    mean += r;
    amax = std::max(amax, std::abs(r));
  }
  mean /= nr;
  if (std::abs(mean) > 1e-10 * (amax + 1e-300) && std::abs(mean) > 1e-14)
    throw Error(ErrorKind::invalid_extent, "Poisson source must have zero mean");
  for (int i = 0; i < nr; ++i) m.real[i] = rho[i];
  fftw_execute(m.fwd);

  const double two_pi = 2.0 * std::numbers::pi;
  const int nlast = m.d == 1 ? m.N[0] / 2 + 1 : m.N[1] / 2 + 1;
  const int nrows = m.d == 1 ? 1 : m.N[0];
  auto wave = [&](int idx, int n, double len) {
    const int sidx = idx <= n / 2 ? idx : idx - n;
    return two_pi * sidx / len;
  };
  auto sinc = [](double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; };
  auto* s = reinterpret_cast<std::complex<double>*>(m.spec);
  auto* w = reinterpret_cast<std::complex<double>*>(m.work);
  const double norm = 1.0 / nr;
  const double hx = m.L[0] / m.N[0];
  const double hy = m.d == 2 ? m.L[1] / m.N[1] : 1.0;

  // phi_hat = rho_hat / |k|^2
  for (int r = 0; r < nrows; ++r) {
    for (int c = 0; c < nlast; ++c) {
      const int idx = r * nlast + c;
      double kx, ky = 0.0;
      if (m.d == 1) {
        kx = wave(c, m.N[0], m.L[0]);
      } else {
        kx = wave(r, m.N[0], m.L[0]);
        ky = wave(c, m.N[1], m.L[1]);
      }
      const double k2 = kx * kx + ky * ky;
      if (k2 == 0.0) {
        s[idx] = 0.0;
        continue;
      }
      double deconv = 1.0;
      if (cell_average) deconv = sinc(0.5 * kx * hx) * (m.d == 2 ? sinc(0.5 * ky * hy) : 1.0);
      s[idx] *= norm / (k2 * deconv);
    }
  }
  phi.assign(nr, 0.0);
  for (int i = 0; i < m.nc; ++i) w[i] = s[i];
  fftw_execute(m.bwd);
  for (int i = 0; i < nr; ++i) phi[i] = m.real[i];

  for (int comp = 0; comp < m.d; ++comp) {
    for (int r = 0; r < nrows; ++r) {
      for (int c = 0; c < nlast; ++c) {
        const int idx = r * nlast + c;
        int mode_idx, n;
        double len;
        if (m.d == 1) {
          mode_idx = c;
          n = m.N[0];
          len = m.L[0];
        } else if (comp == 0) {
          mode_idx = r;
          n = m.N[0];
          len = m.L[0];
        } else {
          mode_idx = c;
          n = m.N[1];
          len = m.L[1];
        }
        const bool nyquist = (n % 2 == 0) && mode_idx == n / 2;
        const double k = nyquist ? 0.0 : wave(mode_idx, n, len);
        w[idx] = std::complex<double>(0.0, -k) * s[idx];
      }
    }
    fftw_execute(m.bwd);
    E[comp].assign(nr, 0.0);
    for (int i = 0; i < nr; ++i) E[comp][i] = m.real[i];
  }
  if (m.d == 1) E[1].clear();
}

}  // namespace vpfv
