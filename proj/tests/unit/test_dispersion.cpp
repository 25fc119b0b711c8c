#include <gtest/gtest.h>

#include <cmath>

#include "vpfv/dispersion.hpp"
#include "vpfv/faddeeva.hpp"

using namespace vpfv;

namespace {

struct ZRef {
  cplx zeta, z;
};

// Reference values from 40-digit arithmetic.
const ZRef z_table[] = {
    {{0.5, 0.3}, {-0.53727392083567747971, 1.0897959782962678749}},
    {{2.0, 0.0}, {-0.60268077784758393207, 0.032463624680131724052}},
    {{-1.5, 0.5}, {0.59859367878297833625, 0.34852829257691806572}},
    {{0.1, -0.2}, {-0.28792269430932120611, 2.2274318948747680631}},
    {{3.0, -2.0}, {-0.21461963494891254417, -0.14416976544860713077}},
    {{8.0, 1.0}, {-0.12398387088288405032, 0.015745879281136706405}},
    {{0.001, 0.0}, {-0.0019999986666672000415, 1.7724520784525513484}},
    {{-4.0, -0.5}, {0.25391439714430033263, -0.034075663535422278147}},
};

}  // namespace

TEST(Faddeeva, ReferenceValues) {
  for (const auto& r : z_table) {
    const cplx z = plasma_z(r.zeta);
    EXPECT_LE(std::abs(z - r.z), 1e-13 * std::abs(r.z)) << r.zeta;
  }
}

TEST(Faddeeva, Symmetry) {
  for (const auto& r : z_table) {
    const cplx w = faddeeva_w(r.zeta);
    EXPECT_LE(std::abs(faddeeva_w(-std::conj(r.zeta)) - std::conj(w)), 1e-14 * std::abs(w));
  }
}

TEST(Faddeeva, ResponseFunctionMatchesDirectForm) {
  for (const cplx zeta : {cplx{0.7, 0.2}, cplx{2.5, -0.4}, cplx{-1.0, 1.0}, cplx{6.0, 0.5}}) {
    const cplx direct = 1.0 + zeta * plasma_z(zeta);
    EXPECT_LE(std::abs(plasma_r(zeta) - direct), 1e-12 * (1.0 + std::abs(direct))) << zeta;
    EXPECT_LE(std::abs(plasma_z_prime(zeta) + 2.0 * direct), 1e-12 * (1.0 + std::abs(direct)));
  }
  // large argument: 1 + zeta Z ~ -1 / (2 zeta^2)
  const cplx big{40.0, 0.5};
  EXPECT_NEAR(std::abs(plasma_r(big) * (-2.0 * big * big) - 1.0), 0.0, 2e-3);
}

TEST(Dispersion, LandauRoot) {
  const auto r = landau_root(0.5);
  ASSERT_TRUE(r.converged);
  EXPECT_NEAR(r.omega.real(), 1.41566188860454, 1e-9);
  EXPECT_NEAR(r.omega.imag(), -0.153359466909604, 1e-9);
  EXPECT_LE(std::abs(landau_dielectric(r.omega, 0.5)), 1e-9);
}

TEST(Dispersion, TwoStreamRoot) {
  const auto r = two_stream_root(0.6, 0.1);
  ASSERT_TRUE(r.converged);
  EXPECT_NEAR(r.omega.imag(), 0.293172, 2e-6);
  // vT^2 = 0.4 at k = 0.7 is stable
  EXPECT_LT(two_stream_root(0.7, 0.4).omega.imag(), 0.0);
}

TEST(Dispersion, TwoStreamTable) {
  const double ks[] = {0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8};
  const double g01[] = {0.1555, 0.2138, 0.2558, 0.2819, 0.2932, 0.2906, 0.2747};
  const double g04[] = {0.0545, 0.0659, 0.0636, 0.0477, 0.0193, -0.0204, -0.0701};
  for (int i = 0; i < 7; ++i) {
    EXPECT_NEAR(two_stream_root(ks[i], 0.1).omega.imag(), g01[i], 6e-5) << ks[i];
    EXPECT_NEAR(two_stream_root(ks[i], 0.4).omega.imag(), g04[i], 6e-5) << ks[i];
  }
}

TEST(Dispersion, ColdLimit) {
  const double k = 0.5;
  const auto cold = cold_two_stream_roots(k);
  double g = 0.0;
  for (const auto& w : cold) g = std::max(g, w.imag());
  // (2k^2 + 1 - sqrt(8k^2 + 1)) / 2 < 0 gives a purely growing mode
  EXPECT_NEAR(g, std::sqrt(-(2 * k * k + 1 - std::sqrt(8 * k * k + 1)) / 2), 1e-12);
  EXPECT_NEAR(two_stream_root(k, 1e-4).omega.imag(), g, 5e-3);
}

TEST(Dispersion, DghRoot) {
  const DghParams p;
  const double k = dgh_k_from_kbar(3.2, p);
  EXPECT_NEAR(dgh_F0(0.3, k, p), dgh_F0_quadrature(0.3, k, p), 1e-10);
  const auto r = dgh_root(k, p);
  ASSERT_TRUE(r.converged);
  EXPECT_NEAR(r.omega.imag(), 0.01537157, 2e-7);
}

TEST(Dispersion, LhdiRates) {
  const auto c = lhdi_closure(LhdiParams{});
  EXPECT_NEAR(c.species[0].mass / c.species[1].mass, 25.0, 1e-12);
  EXPECT_NEAR(lhdi_root(2.0, c).omega.imag(), 0.0543, 1e-4);
  EXPECT_NEAR(lhdi_root(8.0, c).omega.imag(), 0.0977, 1e-4);
  EXPECT_NEAR(lhdi_root(20.0, c).omega.imag(), 0.0954, 1e-4);
}

TEST(Dispersion, PolishConvergesOnQuadratic) {
  const auto r = polish_root([](cplx w) { return w * w + 4.0; }, {0.3, 1.5});
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(std::abs(r.omega - cplx{0.0, 2.0}), 0.0, 1e-9);
  const auto all = scan_roots([](cplx w) { return (w - 1.0) * (w - cplx{2.0, 0.5}); }, RootWindow{});
  ASSERT_EQ(all.size(), 2u);
  EXPECT_NEAR(all[0].omega.imag(), 0.5, 1e-9);
}
