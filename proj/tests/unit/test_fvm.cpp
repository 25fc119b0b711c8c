#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "vpfv/error.hpp"
#include "vpfv/fvm.hpp"
#include "vpfv/quadrature.hpp"

using namespace vpfv;

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

double poly_avg(int j, int p) {
  return (std::pow(j + 0.5, p + 1) - std::pow(j - 0.5, p + 1)) / (p + 1);
}

// L1 error of the semi-discrete RHS on a 1D-1V grid with a constant velocity force.
double rhs_error(int n, bool corrections) {
  const int N[] = {n, n};
  const double lo[] = {0.0, -6.0}, hi[] = {two_pi, 6.0};
  const auto g = make_grid(1, 1, N, lo, hi);
  SpeciesConfig sp;
  sp.g = {0.7, 0.0};
  FieldState fs(1, {n, 1}, {g.h[0], 1.0}, 1);
  fs.E[0].assign(n, 0.0);

  DistField f("electron", g), exact("electron", g), rhs("electron", g);
  quadrature_init(f, [](std::span<const double> z) {
    return std::exp(-0.5 * z[1] * z[1]) * (1.0 + 0.5 * std::sin(z[0]));
  });
  quadrature_init(exact, [&](std::span<const double> z) {
    const double e = std::exp(-0.5 * z[1] * z[1]);
    return -z[1] * 0.5 * std::cos(z[0]) * e + sp.g[0] * z[1] * e * (1.0 + 0.5 * std::sin(z[0]));
  });
  fill_local_ghosts(f, capture_frozen(f));
  vlasov_rhs(f, sp, fs, rhs, KernelOptions{corrections, true});
  double err = 0.0;
  for_each_interior(g, [&](const MultiIndex&, std::int64_t o) { err += std::abs(rhs.data()[o] - exact.data()[o]); });
  return err * g.cell_volume();
}

}  // namespace

TEST(Fvm, ReconstructionExactForQuartics) {
  for (int p = 0; p <= 4; ++p) {
    std::array<double, 6> s{};
    for (int k = 0; k < 6; ++k) s[k] = poly_avg(k - 2, p);
    const double face = std::pow(0.5, p);
    EXPECT_NEAR(reconstruct_face(s, 1.0), face, 1e-12) << "degree " << p;
    EXPECT_NEAR(reconstruct_face(s, -1.0), face, 1e-12) << "degree " << p;
  }
}

TEST(Fvm, ReconstructionIsUpwindBiased) {
  std::array<double, 6> s{0, 0, 0, 0, 0, 1};
  EXPECT_EQ(reconstruct_face(s, 1.0), 0.0);
  EXPECT_NE(reconstruct_face(s, -1.0), 0.0);
  s = {1, 0, 0, 0, 0, 0};
  EXPECT_NE(reconstruct_face(s, 1.0), 0.0);
  EXPECT_EQ(reconstruct_face(s, -1.0), 0.0);
}

TEST(Fvm, ConstantStateIsStationary) {
  const int N[] = {16, 16};
  const double lo[] = {0.0, -4.0}, hi[] = {1.0, 4.0};
  const auto g = make_grid(1, 1, N, lo, hi);
  SpeciesConfig sp;
  sp.g = {0.3, 0.0};
  FieldState fs(1, {16, 1}, {g.h[0], 1.0}, 1);
  fs.E[0].assign(16, 0.25);
  DistField f("electron", g, 1.5), rhs("electron", g);
  vlasov_rhs(f, sp, fs, rhs);
  for_each_interior(g, [&](const MultiIndex&, std::int64_t o) { EXPECT_NEAR(rhs.data()[o], 0.0, 1e-13); });
}

TEST(Fvm, FourthOrderWithCorrections) {
  const double e1 = rhs_error(32, true), e2 = rhs_error(64, true), e3 = rhs_error(128, true);
  const double p1 = std::log2(e1 / e2), p2 = std::log2(e2 / e3);
  EXPECT_GE(p2, 3.8) << e1 << " " << e2 << " " << e3 << " " << p1;
}

TEST(Fvm, SecondOrderWithoutCorrections) {
  const double e2 = rhs_error(64, false), e3 = rhs_error(128, false);
  EXPECT_LE(std::log2(e2 / e3), 3.0);
}

// L1 distance between the closed-form kernel and the face-product oracle on a
// magnetized 1D-2V grid.
static double oracle_gap(int n) {
  const int N[] = {n, n, n};
  const double lo[] = {0.0, -5.0, -5.5}, hi[] = {two_pi, 5.0, 4.5};
  const auto g = make_grid(1, 2, N, lo, hi);
  SpeciesConfig sp;
  sp.omega_c = 0.6;
  sp.b_z = 1.0;
  sp.omega_p = 1.3;
  sp.g = {0.1, -0.2};
  FieldState fs(1, {n, 1}, {g.h[0], 1.0}, 1);
  fs.E[0].resize(n);
  for (int i = 0; i < n; ++i) fs.E[0][i] = 0.4 * std::sin(g.center(0, i));
  DistField f("electron", g), rhs("electron", g);
  quadrature_init(f, [](std::span<const double> z) {
    return std::exp(-0.5 * (z[1] * z[1] + z[2] * z[2])) * (1.0 + 0.3 * std::cos(z[0]) * z[2]);
  }, 4);
  fill_local_ghosts(f, capture_frozen(f));
  vlasov_rhs(f, sp, fs, rhs);
  const auto a = vlasov_advection(g, sp, fs);
  double gap = 0.0;
  for_each_interior(g, [&](const MultiIndex& mi, std::int64_t o) { gap += std::abs(rhs.data()[o] - generic_rhs(f, a, mi)); });
  return gap * g.cell_volume();
}

TEST(Fvm, KernelAgreesWithGenericOracleAsymptotically) {
  const double g1 = oracle_gap(16), g2 = oracle_gap(32);
  EXPECT_GE(std::log2(g1 / g2), 3.5) << g1 << " " << g2;
}

TEST(Fvm, AdvanceStageFusesTerms) {
  const int N[] = {8, 8};
  const double lo[] = {0.0, -4.0}, hi[] = {1.0, 4.0};
  const auto g = make_grid(1, 1, N, lo, hi);
  SpeciesConfig sp;
  sp.g = {0.5, 0.0};
  FieldState fs(1, {8, 1}, {g.h[0], 1.0}, 1);
  fs.E[0].assign(8, 0.0);
  DistField f("electron", g), a("electron", g, 2.0), b("electron", g, -1.0), rhs("electron", g), out("electron", g);
  quadrature_init(f, [](std::span<const double> z) { return std::exp(-z[1] * z[1]) * (2.0 + std::sin(6.0 * z[0])); });
  fill_local_ghosts(f, capture_frozen(f));
  vlasov_rhs(f, sp, fs, rhs);
  StageSpec st;
  st.terms = {&a, &b, &f};
  st.coef = {0.5, 3.0, 0.25};
  st.dt = 0.01;
  advance_stage(f, sp, fs, st, out);
  for_each_interior(g, [&](const MultiIndex&, std::int64_t o) {
    const double want = 0.5 * 2.0 + 3.0 * -1.0 + 0.25 * f.data()[o] + 0.01 * rhs.data()[o];
    EXPECT_NEAR(out.data()[o], want, 1e-14);
  });
}

TEST(Fvm, NonFiniteInputIsReported) {
  const int N[] = {8, 8};
  const double lo[] = {0.0, -4.0}, hi[] = {1.0, 4.0};
  const auto g = make_grid(1, 1, N, lo, hi);
  SpeciesConfig sp;
  FieldState fs(1, {8, 1}, {g.h[0], 1.0}, 1);
  fs.E[0].assign(8, 0.0);
  DistField f("electron", g, 1.0), rhs("electron", g);
  f.at({3, 3, 0, 0}) = std::nan("");
  try {
    vlasov_rhs(f, sp, fs, rhs);
    FAIL() << "expected a non-finite error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::non_finite);
  }
}
