#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "vpfv/exact_sum.hpp"
#include "vpfv/field_solve.hpp"
#include "vpfv/quadrature.hpp"

using namespace vpfv;

namespace {

constexpr double pi = std::numbers::pi;

PhaseSpaceGrid maxwellian_grid() {
  const int N[] = {16, 64};
  const double lo[] = {0.0, -8.0}, hi[] = {4.0 * pi, 8.0};
  return make_grid(1, 1, N, lo, hi);
}

}  // namespace

TEST(ExactSum, OrderIndependent) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> x(5000);
  for (auto& v : x) v = u(rng) * std::pow(10.0, 20.0 * u(rng));
  ExactSum a;
  for (double v : x) a.add(v);
  std::shuffle(x.begin(), x.end(), rng);
  ExactSum b, c;
  for (std::size_t i = 0; i < x.size(); ++i) (i % 2 ? b : c).add(x[i]);
  b.merge(c);
  EXPECT_EQ(a.value(), b.value());
}

TEST(ExactSum, Cancellation) {
  ExactSum s;
  s.add(1e100);
  s.add(1.0);
  s.add(-1e100);
  s.add(1e-100);
  EXPECT_EQ(s.value(), 1.0);
  EXPECT_TRUE(ExactSum{}.empty());
}

TEST(Poisson, OneDimensionalMode) {
  const int n = 32;
  const double L = 4.0 * pi, k = 2.0 * pi / L * 3.0, h = L / n;
  PoissonSolver ps(1, {n, 1}, {L, 1.0});
  std::vector<double> rho(n), phi;
  std::array<std::vector<double>, 2> E;
  for (int i = 0; i < n; ++i) rho[i] = std::cos(k * (i + 0.5) * h);
  ps.solve(rho, phi, E, false);
  for (int i = 0; i < n; ++i) {
    const double x = (i + 0.5) * h;
    EXPECT_NEAR(phi[i], std::cos(k * x) / (k * k), 1e-13);
    EXPECT_NEAR(E[0][i], std::sin(k * x) / k, 1e-13);
  }
}

TEST(Poisson, CellAverageDeconvolution) {
  const int n = 16;
  const double L = 2.0 * pi, k = 2.0, h = L / n;
  PoissonSolver ps(1, {n, 1}, {L, 1.0});
  std::vector<double> rho(n), phi;
  std::array<std::vector<double>, 2> E;
  for (int i = 0; i < n; ++i) {
    const double x = (i + 0.5) * h;
    rho[i] = (std::sin(k * (x + h / 2)) - std::sin(k * (x - h / 2))) / (k * h);
  }
  ps.solve(rho, phi, E, true);
  for (int i = 0; i < n; ++i) EXPECT_NEAR(E[0][i], std::sin(k * (i + 0.5) * h) / k, 1e-13);
}

TEST(Poisson, TwoDimensionalMode) {
  const int nx = 16, ny = 8;
  const double Lx = 2.0 * pi, Ly = pi;
  PoissonSolver ps(2, {nx, ny}, {Lx, Ly});
  std::vector<double> rho(nx * ny), phi;
  std::array<std::vector<double>, 2> E;
  const double kx = 1.0, ky = 2.0, k2 = kx * kx + ky * ky;
  auto xc = [&](int i) { return (i + 0.5) * Lx / nx; };
  auto yc = [&](int j) { return (j + 0.5) * Ly / ny; };
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) rho[i * ny + j] = std::sin(kx * xc(i)) * std::cos(ky * yc(j));
  ps.solve(rho, phi, E, false);
  double mean = 0.0;
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) {
      const double s = std::sin(kx * xc(i)) * std::cos(ky * yc(j));
      EXPECT_NEAR(phi[i * ny + j], s / k2, 1e-13);
      EXPECT_NEAR(E[0][i * ny + j], -kx * std::cos(kx * xc(i)) * std::cos(ky * yc(j)) / k2, 1e-13);
      EXPECT_NEAR(E[1][i * ny + j], ky * std::sin(kx * xc(i)) * std::sin(ky * yc(j)) / k2, 1e-13);
      mean += phi[i * ny + j];
    }
  EXPECT_NEAR(mean, 0.0, 1e-12);
}

TEST(Poisson, RejectsNonNeutralSource) {
  PoissonSolver ps(1, {8, 1}, {1.0, 1.0});
  std::vector<double> rho(8, 0.5), phi;
  std::array<std::vector<double>, 2> E;
  EXPECT_ANY_THROW(ps.solve(rho, phi, E));
}

TEST(Moments, ChargeDensityIsNeutralized) {
  std::vector<SpeciesConfig> sp(2);
  sp[0].charge = 1.0;
  sp[1].charge = -1.0;
  const std::vector<std::vector<double>> n{{1.0, 1.2, 0.9, 1.1}, {1.0, 1.0, 1.0, 1.3}};
  const auto rho = charge_density(n, sp);
  double s = 0.0;
  for (double r : rho) s += r;
  EXPECT_NEAR(s, 0.0, 1e-15);
  EXPECT_NEAR(rho[1] - rho[0], 0.2, 1e-15);
}

TEST(Moments, MaxwellianMoments) {
  const auto g = maxwellian_grid();
  DistField f("electron", g);
  const double u = 0.3, T = 0.8;
  quadrature_init(f, [&](std::span<const double> z) {
    return (1.0 + 0.2 * std::cos(z[0])) * std::exp(-(z[1] - u) * (z[1] - u) / (2 * T)) / std::sqrt(2 * pi * T);
  });
  const auto n_vm = zeroth_moment(f, MomentSchedule::velocity_major);
  const auto n_pm = zeroth_moment(f, MomentSchedule::position_major);
  const auto n_free = zeroth_moment(f, MomentSchedule::position_major, ReductionMode::free_order);
  const auto hm = higher_moments(f);
  for (int i = 0; i < g.N[0]; ++i) {
    EXPECT_EQ(n_vm[i], n_pm[i]);
    EXPECT_NEAR(n_free[i], n_vm[i], 1e-14);
    EXPECT_NEAR(hm.momentum[0][i], u * n_vm[i], 1e-10);
    EXPECT_NEAR(hm.energy[i], 0.5 * (T + u * u) * n_vm[i], 1e-10);
  }
  const auto tot = moment_totals(f);
  EXPECT_NEAR(tot.mass.value(), 4.0 * pi, 1e-10);
}
