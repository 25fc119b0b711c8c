#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "vpfv/error.hpp"
#include "vpfv/field_solve.hpp"
#include "vpfv/problems.hpp"

using namespace vpfv;

namespace {

constexpr double pi = std::numbers::pi;

DistField initial_field(const ProblemSetup& ps, int s) {
  DistField f(ps.species[s].name, ps.grids[s]);
  separable_init(f, ps.init[s], 6);
  return f;
}

double mean_density(const DistField& f) {
  const auto n = zeroth_moment(f);
  double s = 0.0;
  for (double x : n) s += x;
  return s / static_cast<double>(n.size());
}

}  // namespace

TEST(Problems, TwoStreamSetup) {
  const auto cfg = parse_config("[domain]\nd = 1\nv = 1\ncells = 32, 64\nv_max = 8\n[problem]\ntype = two_stream\nk = 0.5\n");
  const auto ps = make_problem(cfg);
  ASSERT_EQ(ps.species.size(), 1u);
  EXPECT_EQ(ps.species[0].charge, -1.0);
  EXPECT_NEAR(ps.length[0], 2.0 * pi / 0.5, 1e-14);
  EXPECT_NEAR(ps.grids[0].lo[1], -8.0, 0.0);
  EXPECT_NEAR(mean_density(initial_field(ps, 0)), 1.0, 1e-12);
}

TEST(Problems, SeparableMatchesDirectQuadrature) {
  const auto cfg = parse_config("[domain]\nd = 1\nv = 1\ncells = 16, 16\nv_max = 6\n[problem]\ntype = landau\nalpha = 0.3\n");
  const auto ps = make_problem(cfg);
  DistField a = initial_field(ps, 0), b("electron", ps.grids[0]);
  const double k = landau_params(cfg).kx;
  quadrature_init(b, [k](std::span<const double> z) {
    return (1.0 + 0.3 * std::cos(k * z[0])) * std::exp(-0.5 * z[1] * z[1]) / std::sqrt(2.0 * pi);
  }, 6);
  for (std::int64_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a.data()[i], b.data()[i], 1e-15);
}

TEST(Problems, LandauDensityPerturbation) {
  const auto cfg = parse_config("[domain]\nd = 1\nv = 1\ncells = 32, 64\nv_max = 8\n[problem]\ntype = landau\nalpha = 0.01\nkx = 0.5\n");
  const auto ps = make_problem(cfg);
  const auto f = initial_field(ps, 0);
  const auto n = zeroth_moment(f);
  const auto& g = ps.grids[0];
  // cell average of 1 + a cos(kx)
  const double h = g.h[0], k = 0.5;
  for (int i = 0; i < g.N[0]; ++i) {
    const double x = g.center(0, i);
    const double want = 1.0 + 0.01 * (std::sin(k * (x + h / 2)) - std::sin(k * (x - h / 2))) / (k * h);
    EXPECT_NEAR(n[i], want, 1e-12);
  }
}

TEST(Problems, DghRingIsNormalized) {
  const auto cfg = parse_config("[domain]\nd = 1\nv = 2\ncells = 16, 48, 48\nv_max = 4.5, 4.5\n[problem]\ntype = dgh\n");
  const auto ps = make_problem(cfg);
  EXPECT_NEAR(ps.length[0], 2.0 * pi / dgh_params(cfg).k(), 1e-12);
  EXPECT_NEAR(mean_density(initial_field(ps, 0)), 1.0, 1e-8);
  EXPECT_GT(ps.species[0].omega_c, 0.0);
}

TEST(Problems, LhdiIsQuasiNeutral) {
  const auto cfg = parse_config(
      "[domain]\nd = 1\nv = 2\ncells = 16, 32, 32\n[species]\nname = ion\n[species]\nname = electron\n"
      "[problem]\ntype = lhdi\nmass_ratio = 25\n");
  const auto ps = make_problem(cfg);
  ASSERT_EQ(ps.species.size(), 2u);
  double charge = 0.0;
  for (int s = 0; s < 2; ++s) charge += ps.species[s].charge * mean_density(initial_field(ps, s));
  EXPECT_NEAR(charge, 0.0, 1e-8);
  EXPECT_NEAR(ps.species[0].mass / ps.species[1].mass, 25.0, 1e-12);
}

TEST(Problems, AdvectionTracerIsUncharged) {
  const auto cfg = parse_config(
      "[domain]\nd = 1\nv = 1\ncells = 16, 16\nv_max = 6\nvelocity_boundary = periodic\n[problem]\ntype = advection\n");
  const auto ps = make_problem(cfg);
  EXPECT_EQ(ps.species[0].charge, 0.0);
  EXPECT_TRUE(ps.grids[0].periodic[1]);
}

TEST(Problems, Rejections) {
  EXPECT_THROW(make_problem(parse_config("[domain]\nd = 1\nv = 2\ncells = 8, 8, 8\n[problem]\ntype = two_stream\n")),
               Error);
  EXPECT_THROW(make_problem(parse_config("[domain]\nd = 1\nv = 1\ncells = 8, 8\n[problem]\ntype = bogus\n")), Error);
}
