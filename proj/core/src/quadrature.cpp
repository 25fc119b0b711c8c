#include "vpfv/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "vpfv/error.hpp"

namespace vpfv {

GaussRule gauss_legendre(int n) {
  if (n < 1 || n > 64) throw Error(ErrorKind::out_of_range, "unsupported quadrature order");
  GaussRule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    double p0 = 1.0, p1 = 0.0;
    for (int j = 1; j <= n; ++j) {
      const double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
    }
    dp = n * (z * p0 - p1) / (z * z - 1.0);
    const double w = 1.0 / ((1.0 - z * z) * dp * dp);  // half of the [-1,1] weight
    r.x[i] = -0.5 * z;
    r.x[n - 1 - i] = 0.5 * z;
    r.w[i] = r.w[n - 1 - i] = w;
  }
  return r;
}

double cell_average_1d(const std::function<double(double)>& fn, double c, double h, const GaussRule& rule) {
  double s = 0.0;
  for (std::size_t q = 0; q < rule.x.size(); ++q) s += rule.w[q] * fn(c + h * rule.x[q]);
  return s;
}

void quadrature_init(DistField& f, const PointFn& fn, int points) {
  const auto rule = gauss_legendre(points);
  const auto& g = f.grid();
  const int D = g.dims();
  const int nq = static_cast<int>(rule.x.size());
  int total = 1;
  for (int k = 0; k < D; ++k) total *= nq;
  std::vector<double> x(D);
  for_each_padded(g, [&](const MultiIndex& mi, std::int64_t off) {
    double s = 0.0;
    for (int c = 0; c < total; ++c) {
      int rem = c;
      double w = 1.0;
      for (int k = D - 1; k >= 0; --k) {
        const int q = rem % nq;
        rem /= nq;
        x[k] = g.center(k, mi[k]) + g.h[k] * rule.x[q];
        w *= rule.w[q];
      }
      s += w * fn(x);
    }
    f.data()[off] = s;
  });
}

namespace {

// Averages of one factor over the padded cells of its dims, last dim fastest.
std::vector<double> factor_table(const PhaseSpaceGrid& g, const Factor& fac, const GaussRule& rule) {
  const int m = static_cast<int>(fac.dims.size());
  const int nq = static_cast<int>(rule.x.size());
  std::vector<int> ext(m);
  std::size_t cells = 1;
  for (int a = 0; a < m; ++a) {
    ext[a] = g.N[fac.dims[a]] + 2 * ghost;
    cells *= ext[a];
  }
  int total = 1;
  for (int a = 0; a < m; ++a) total *= nq;
  std::vector<double> table(cells);
  std::vector<double> x(m);
  std::vector<int> idx(m);
  for (std::size_t c = 0; c < cells; ++c) {
    std::size_t rem = c;
    for (int a = m - 1; a >= 0; --a) {
      idx[a] = static_cast<int>(rem % ext[a]) - ghost;
      rem /= ext[a];
    }
    double s = 0.0;
    for (int qc = 0; qc < total; ++qc) {
      int r = qc;
      double w = 1.0;
      for (int a = m - 1; a >= 0; --a) {
        const int q = r % nq;
        r /= nq;
        const int k = fac.dims[a];
        x[a] = g.center(k, idx[a]) + g.h[k] * rule.x[q];
        w *= rule.w[q];
      }
      s += w * fac.fn(x);
    }
    table[c] = s;
  }
  return table;
}

}  // namespace

void separable_init(DistField& f, std::span<const SeparableTerm> terms, int points) {
  const auto rule = gauss_legendre(points);
  const auto& g = f.grid();
  const int D = g.dims();
  struct Prepared {
    std::vector<int> dims;
    std::vector<std::int64_t> stride;
    std::vector<double> table;
  };
  std::vector<std::vector<Prepared>> prep(terms.size());
  for (std::size_t t = 0; t < terms.size(); ++t) {
    for (const auto& fac : terms[t].factors) {
      for (int k : fac.dims)
        if (k < 0 || k >= D) throw Error(ErrorKind::dimension_mismatch, "factor names a missing dimension");
      Prepared p;
      p.dims = fac.dims;
      p.stride.resize(fac.dims.size());
      std::int64_t s = 1;
      for (int a = static_cast<int>(fac.dims.size()) - 1; a >= 0; --a) {
        p.stride[a] = s;
        s *= g.N[fac.dims[a]] + 2 * ghost;
      }
      p.table = factor_table(g, fac, rule);
      prep[t].push_back(std::move(p));
    }
  }
  for_each_padded(g, [&](const MultiIndex& mi, std::int64_t off) {
    double s = 0.0;
    for (std::size_t t = 0; t < terms.size(); ++t) {
      double v = terms[t].coef;
      for (const auto& p : prep[t]) {
        std::int64_t o = 0;
        for (std::size_t a = 0; a < p.dims.size(); ++a) o += (mi[p.dims[a]] + ghost) * p.stride[a];
        v *= p.table[o];
      }
      s += v;
    }
    f.data()[off] = s;
  });
}

}  // namespace vpfv
