#include "vpfv/fvm.hpp"

#include <cmath>
#include <sstream>

#include "vpfv/error.hpp"

namespace vpfv {

double reconstruct_face(std::span<const double, 6> s, double a) {
  if (a > 0.0) return (2.0 * s[0] - 13.0 * s[1] + 47.0 * s[2] + 27.0 * s[3] - 3.0 * s[4]) / 60.0;
  return (-3.0 * s[1] + 27.0 * s[2] + 47.0 * s[3] - 13.0 * s[4] + 2.0 * s[5]) / 60.0;
}

namespace {

double field_at(const FieldState& fs, int comp, int gi, int gj) {
  const auto& e = fs.E[comp];
  if (e.empty()) return 0.0;
  return e[fs.wrapped(gi, gj)];
}

struct Pair {
  int a, b, coef;
  double sign;
};

// Diagonal pairs read by the closed-form corrections, with the sign that turns
// (f[+a+b] + f[-a-b]) - (f[+a-b] + f[-a+b]) into the tabulated bracket.
std::vector<Pair> correction_pairs(int d, int v) {
  if (d == 1 && v == 1) return {{0, 1, 0, -1.0}};
  if (d == 1 && v == 2) return {{0, 1, 0, -1.0}, {1, 2, 1, 1.0}};
  if (d == 2 && v == 2)
    return {{0, 2, 0, -1.0}, {2, 3, 1, 1.0}, {1, 2, 2, 1.0}, {1, 3, 3, -1.0}, {0, 3, 4, 1.0}};
  throw Error(ErrorKind::unsupported, "unsupported phase-space dimensionality");
}

}  // namespace

AdvectionFn vlasov_advection(const PhaseSpaceGrid& g, const SpeciesConfig& sp, const FieldState& fs) {
  return [g, sp, &fs](int k, const MultiIndex& mi) -> double {
    const int d = g.d;
    if (k < d) return g.center(d + k, mi[d + k]);
    const int gi = g.origin[0] + mi[0];
    const int gj = d == 2 ? g.origin[1] + mi[1] : 0;
    const double wp2 = sp.omega_p * sp.omega_p;
    const double wcb = sp.omega_c * sp.b_z;
    const double vx = g.center(d, mi[d]);
    const double vy = g.v == 2 ? g.center(d + 1, mi[d + 1]) : 0.0;
    if (k == d) return sp.qm() * (wp2 * field_at(fs, 0, gi, gj) + wcb * vy) + sp.g[0];
    return sp.qm() * (wp2 * field_at(fs, 1, gi, gj) - wcb * vx) + sp.g[1];
  };
}

CorrectionCoeffs correction_coeffs(const PhaseSpaceGrid& g, const SpeciesConfig& sp, const FieldState& fs) {
  CorrectionCoeffs cc;
  const int nx = g.N[0];
  const int ny = g.d == 2 ? g.N[1] : 1;
  cc.cells = nx * ny;
  for (auto& c : cc.c) c.assign(cc.cells, 0.0);
  const double qm = sp.qm();
  const double wp2 = sp.omega_p * sp.omega_p;
  const double wcb = sp.omega_c * sp.b_z;
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      const int p = i * ny + j;
      const int gi = g.origin[0] + i;
      const int gj = g.d == 2 ? g.origin[1] + j : 0;
      if (g.d == 1) {
        const double hx = g.h[0], hvx = g.h[1];
        cc.c[0][p] = hvx / (48.0 * hx) +
                     wp2 / (96.0 * hvx) * qm * (field_at(fs, 0, gi + 1, 0) - field_at(fs, 0, gi - 1, 0));
        if (g.v == 2) {
          const double hvy = g.h[2];
          cc.c[1][p] = (sp.omega_c / 48.0) * qm * sp.b_z * (hvx / hvy - hvy / hvx);
        }
      } else {
        const double hx = g.h[0], hy = g.h[1], hvx = g.h[2], hvy = g.h[3];
        cc.c[0][p] = hvx / (48.0 * hx) +
                     wp2 / (96.0 * hvx) * qm * (field_at(fs, 0, gi + 1, gj) - field_at(fs, 0, gi - 1, gj));
        cc.c[1][p] = (sp.omega_c / 48.0) * qm * sp.b_z * (hvx / hvy - hvy / hvx);
        cc.c[2][p] = wp2 / (96.0 * hvx) * qm * (field_at(fs, 0, gi, gj - 1) - field_at(fs, 0, gi, gj + 1));
        cc.c[3][p] = hvy / (48.0 * hy) +
                     wp2 / (96.0 * hvy) * qm * (field_at(fs, 1, gi, gj + 1) - field_at(fs, 1, gi, gj - 1));
        cc.c[4][p] = wp2 / (96.0 * hvy) * qm * (field_at(fs, 1, gi - 1, gj) - field_at(fs, 1, gi + 1, gj));
      }
    }
  }
  (void)wcb;
  return cc;
}

double transverse_correction(const DistField& f, const CorrectionCoeffs& cc, const MultiIndex& mi) {
  const auto& g = f.grid();
  const auto pairs = correction_pairs(g.d, g.v);
  const std::int64_t o = flat_index(g, mi);
  const double* p = f.data() + o;
  const int phys = g.d == 1 ? mi[0] : mi[0] * g.N[1] + mi[1];
  double c = 0.0;
  for (const auto& pr : pairs) {
    const std::int64_t sa = g.stride[pr.a], sb = g.stride[pr.b];
    const double br = (p[sa + sb] + p[-sa - sb]) - (p[sa - sb] + p[-sa + sb]);
    c += (pr.sign * cc.c[pr.coef][phys]) * br;
  }
  return c;
}

namespace {

double face_at(const DistField& f, const MultiIndex& cell, int k, double a) {
  std::array<double, 6> s{};
  MultiIndex m = cell;
  for (int q = 0; q < 6; ++q) {
    m[k] = cell[k] - 2 + q;
    s[q] = f.at(m);
  }
  return reconstruct_face(s, a);
}

}  // namespace

double generic_correction_oracle(const DistField& f, const AdvectionFn& a, const MultiIndex& mi) {
  const auto& g = f.grid();
  const int D = g.dims();
  double c = 0.0;
  for (int k = 0; k < D; ++k) {
    double diff = 0.0;
    for (int side = 0; side < 2; ++side) {
      MultiIndex base = mi;
      if (side == 1) base[k] -= 1;  // face i-1/2 is face (i-1)+1/2
      double corr = 0.0;
      for (int t = 0; t < D; ++t) {
        if (t == k) continue;
        MultiIndex mp = base, mm = base;
        mp[t] += 1;
        mm[t] -= 1;
        const double a0 = a(k, base), ap = a(k, mp), am = a(k, mm);
        const double f0 = face_at(f, base, k, a0), fp = face_at(f, mp, k, ap), fm = face_at(f, mm, k, am);
        corr += ((ap - a0) * (fp - f0) + (am - a0) * (fm - f0)) / 24.0;
      }
      diff += side == 0 ? corr : -corr;
    }
    c -= diff / g.h[k];
  }
  return c;
}

double generic_rhs(const DistField& f, const AdvectionFn& a, const MultiIndex& mi) {
  const auto& g = f.grid();
  double r = generic_correction_oracle(f, a, mi);
  for (int k = 0; k < g.dims(); ++k) {
    const double ak = a(k, mi);
    MultiIndex left = mi;
    left[k] -= 1;
    r -= ak / g.h[k] * (face_at(f, mi, k, ak) - face_at(f, left, k, ak));
  }
  return r;
}

namespace {

[[noreturn]] void report_non_finite(const DistField& out, std::int64_t line_base, int n) {
  const auto& g = out.grid();
  for (int j = 0; j < n; ++j) {
    if (!std::isfinite(out.data()[line_base + j])) {
      const MultiIndex mi = unflatten(g, line_base + j);
      std::ostringstream os;
      os << "non-finite value in species '" << out.species() << "' at cell (";
      for (int k = 0; k < g.dims(); ++k) os << (k ? "," : "") << g.origin[k] + mi[k];
      os << ")";
      throw Error(ErrorKind::non_finite, os.str());
    }
  }
  throw Error(ErrorKind::non_finite, "non-finite line sum in species '" + out.species() + "'");
}

template <int d, int v>
void stage_kernel(const DistField& in, const SpeciesConfig& sp, const FieldState& fs, const CorrectionCoeffs& cc,
                  const StageSpec& st, DistField& out, const KernelOptions& opt) {
  constexpr int D = d + v;
  constexpr int L = D - 1;  // contiguous dim
  constexpr int NP = d == 1 ? (v == 1 ? 1 : 2) : 5;
  const PhaseSpaceGrid& g = in.grid();
  const double* __restrict f = in.data();
  double* o = out.data();
  const int nl = g.N[L];

  std::array<std::int64_t, D> s{};
  std::array<double, D> inv60h{};
  for (int k = 0; k < D; ++k) {
    s[k] = g.stride[k];
    inv60h[k] = 1.0 / (60.0 * g.h[k]);
  }
  std::vector<double> clast(nl);
  for (int j = 0; j < nl; ++j) clast[j] = g.center(L, j);

  const auto pairs = correction_pairs(d, v);
  std::array<std::int64_t, NP> pa{}, pb{};
  for (int p = 0; p < NP; ++p) {
    pa[p] = s[pairs[p].a];
    pb[p] = s[pairs[p].b];
  }

  int nterm = 0;
  std::array<const double*, 3> tp{};
  std::array<double, 3> tc{};
  for (int t = 0; t < 3; ++t) {
    if (st.terms[t] != nullptr && st.coef[t] != 0.0) {
      tp[nterm] = st.terms[t]->data();
      tc[nterm] = st.coef[t];
      ++nterm;
    }
  }
  const double dt = st.dt;
  const double qm = sp.qm();
  const double wp2 = sp.omega_p * sp.omega_p;
  const double wcb = sp.omega_c * sp.b_z;

  std::int64_t nlines = 1;
  for (int k = 0; k < L; ++k) nlines *= g.N[k];

  for (std::int64_t line = 0; line < nlines; ++line) {
    MultiIndex mi{};
    std::int64_t rem = line;
    for (int k = L - 1; k >= 0; --k) {
      mi[k] = static_cast<int>(rem % g.N[k]);
      rem /= g.N[k];
    }
    std::int64_t base = 0;
    for (int k = 0; k < D; ++k) base += (mi[k] + ghost) * s[k];

    const int phys = d == 1 ? mi[0] : mi[0] * g.N[1] + mi[1];
    const int gi = g.origin[0] + mi[0];
    const int gj = d == 2 ? g.origin[1] + mi[1] : 0;
    const double ex = field_at(fs, 0, gi, gj);
    const double ey = field_at(fs, 1, gi, gj);

    // A_k = a0[k] + a1[k] * clast[j]
    std::array<double, D> a0{}, a1{};
    if constexpr (d == 1 && v == 1) {
      a0[0] = 0.0;
      a1[0] = 1.0;
      a0[1] = qm * (wp2 * ex) + sp.g[0];
      a1[1] = 0.0;
    } else if constexpr (d == 1 && v == 2) {
      const double vx = g.center(1, mi[1]);
      a0[0] = vx;
      a1[0] = 0.0;
      a0[1] = qm * (wp2 * ex) + sp.g[0];
      a1[1] = qm * wcb;
      a0[2] = qm * (wp2 * ey) + sp.g[1] - qm * wcb * vx;
      a1[2] = 0.0;
    } else {
      const double vx = g.center(2, mi[2]);
      a0[0] = vx;
      a1[0] = 0.0;
      a0[1] = 0.0;
      a1[1] = 1.0;
      a0[2] = qm * (wp2 * ex) + sp.g[0];
      a1[2] = qm * wcb;
      a0[3] = qm * (wp2 * ey) + sp.g[1] - qm * wcb * vx;
      a1[3] = 0.0;
    }
    std::array<double, NP> w{};
    if (opt.corrections)
      for (int p = 0; p < NP; ++p) w[p] = pairs[p].sign * cc.c[pairs[p].coef][phys];

    const double* __restrict fl = f + base;
    double* ol = o + base;
    const double* t0 = nterm > 0 ? tp[0] + base : nullptr;
    const double* t1 = nterm > 1 ? tp[1] + base : nullptr;
    const double* t2 = nterm > 2 ? tp[2] + base : nullptr;
    double line_sum = 0.0;

    for (int j = 0; j < nl; ++j) {
      const double* p = fl + j;
      double flux = 0.0;
      for (int k = 0; k < D; ++k) {
        const std::int64_t sk = s[k];
        const double A = a0[k] + a1[k] * clast[j];
        const double m3 = p[-3 * sk], m2 = p[-2 * sk], m1 = p[-sk], c0 = p[0], p1 = p[sk], p2 = p[2 * sk],
                     p3 = p[3 * sk];
        const double fp_pos = 2.0 * m2 - 13.0 * m1 + 47.0 * c0 + 27.0 * p1 - 3.0 * p2;
        const double fm_pos = 2.0 * m3 - 13.0 * m2 + 47.0 * m1 + 27.0 * c0 - 3.0 * p1;
        const double fp_neg = -3.0 * m1 + 27.0 * c0 + 47.0 * p1 - 13.0 * p2 + 2.0 * p3;
        const double fm_neg = -3.0 * m2 + 27.0 * m1 + 47.0 * c0 - 13.0 * p1 + 2.0 * p2;
        const double diff = A > 0.0 ? fp_pos - fm_pos : fp_neg - fm_neg;
        flux += (A * inv60h[k]) * diff;
      }
      double corr = 0.0;
      for (int q = 0; q < NP; ++q) {
        const std::int64_t sa = pa[q], sb = pb[q];
        corr += w[q] * ((p[sa + sb] + p[-sa - sb]) - (p[sa - sb] + p[-sa + sb]));
      }
      const double rhs = corr - flux;
      double val = dt * rhs;
      if (nterm > 0) val = tc[0] * t0[j] + val;
      if (nterm > 1) val = tc[1] * t1[j] + val;
      if (nterm > 2) val = tc[2] * t2[j] + val;
      ol[j] = val;
      line_sum += val;
    }
    if (opt.check_finite && !std::isfinite(line_sum)) {
      bool bad = false;
      for (int j = 0; j < nl; ++j) bad |= !std::isfinite(ol[j]);
      if (bad) report_non_finite(out, base, nl);
    }
  }
}

}  // namespace

void advance_stage(const DistField& in, const SpeciesConfig& sp, const FieldState& fs, const StageSpec& stage,
                   DistField& out, const KernelOptions& opt) {
  const auto& g = in.grid();
  if (out.size() != in.size()) throw Error(ErrorKind::dimension_mismatch, "stage output has wrong size");
  if (&in == &out) throw Error(ErrorKind::unsupported, "stage input and output must differ");
  const CorrectionCoeffs cc = correction_coeffs(g, sp, fs);
  if (g.d == 1 && g.v == 1)
    stage_kernel<1, 1>(in, sp, fs, cc, stage, out, opt);
  else if (g.d == 1 && g.v == 2)
    stage_kernel<1, 2>(in, sp, fs, cc, stage, out, opt);
  else if (g.d == 2 && g.v == 2)
    stage_kernel<2, 2>(in, sp, fs, cc, stage, out, opt);
  else
    throw Error(ErrorKind::unsupported, "unsupported phase-space dimensionality");
}

void vlasov_rhs(const DistField& in, const SpeciesConfig& sp, const FieldState& fs, DistField& rhs,
                const KernelOptions& opt) {
  advance_stage(in, sp, fs, StageSpec{}, rhs, opt);
}

}  // namespace vpfv
