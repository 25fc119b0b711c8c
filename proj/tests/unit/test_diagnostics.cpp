#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "vpfv/config.hpp"
#include "vpfv/diagnostics.hpp"
#include "vpfv/error.hpp"
#include "vpfv/quadrature.hpp"
#include "vpfv/snapshot.hpp"

using namespace vpfv;

namespace {

const char* full_config = R"(# every section
[domain]
d = 1
v = 2
cells = 32, 16, 16
length = 12.5
v_max = 5, 4
omega_p = 1.5
omega_c = 0.2
b_z = 1
g = 0.1, -0.3

[species]
name = ion
charge = 1
mass = 25
alpha = 6
partition = 2, 1

[species]
name = electron
v_lo = -3, -3
v_hi = 3, 2
cells = 24, 24

[problem]
type = lhdi
mass_ratio = 25
k = 2

[time]
t_end = 3.5
dt = 0.01
cfl_fraction = 0.5
integrator = butcher
max_steps = 40

[partition]
x = 2
v = 1, 2
deterministic = false
strategy = fvm
moments = position_major

[output]
directory = out/x
cadence = 3
snapshot = true
)";

std::filesystem::path temp_dir() {
  auto p = std::filesystem::temp_directory_path() / "vpfv_unit";
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace

TEST(Config, ParsesEverySection) {
  const auto c = parse_config(full_config);
  EXPECT_EQ(c.v, 2);
  EXPECT_EQ(c.cells, (std::vector<int>{32, 16, 16}));
  EXPECT_EQ(c.v_max, (std::vector<double>{5, 4}));
  EXPECT_EQ(c.g[1], -0.3);
  ASSERT_EQ(c.species.size(), 2u);
  EXPECT_EQ(c.species[0].mass, 25.0);
  EXPECT_EQ(c.species[1].v_hi, (std::vector<double>{3, 2}));
  EXPECT_EQ(c.problem, "lhdi");
  EXPECT_EQ(c.param("k", 0.0), 2.0);
  EXPECT_EQ(c.param("missing", 7.0), 7.0);
  EXPECT_EQ(c.integrator, "butcher");
  EXPECT_EQ(c.max_steps, 40);
  EXPECT_FALSE(c.deterministic);
  EXPECT_EQ(c.strategy, "fvm");
  EXPECT_TRUE(c.snapshot);
  EXPECT_EQ(c.cadence, 3);
}

TEST(Config, RoundTrip) {
  const auto c = parse_config(full_config);
  EXPECT_EQ(parse_config(serialize_config(c)), c);
}

TEST(Config, Errors) {
  EXPECT_THROW(parse_config("[domain]\nbogus = 1\n"), Error);
  EXPECT_THROW(parse_config("[nowhere]\n"), Error);
  EXPECT_THROW(parse_config("[domain]\ncells = 8, x\n"), Error);
  EXPECT_THROW(parse_config("d = 1\n"), Error);
  EXPECT_THROW(load_config("/nonexistent/file.cfg"), Error);
}

TEST(Snapshot, RoundTrip) {
  const int N[] = {8, 12};
  const double lo[] = {0.0, -3.0}, hi[] = {2.0, 3.0};
  const auto g = make_grid(1, 1, N, lo, hi);
  DistField f("electron", g);
  quadrature_init(f, [](std::span<const double> z) { return std::sin(z[0]) * std::exp(-z[1] * z[1]); }, 3);
  const auto path = temp_dir() / "snap.vpfv";
  write_snapshot(path, f, 1.25);
  const auto s = read_snapshot(path);
  EXPECT_EQ(s.species, "electron");
  EXPECT_EQ(s.time, 1.25);
  EXPECT_EQ(s.N, (std::vector<int>{8, 12}));
  const auto back = to_field(s);
  for_each_interior(g, [&](const MultiIndex& mi, std::int64_t o) { EXPECT_EQ(back.at(mi), f.data()[o]); });
}

TEST(Snapshot, RejectsCorruptFile) {
  const auto path = temp_dir() / "bad.vpfv";
  std::ofstream(path) << "NOPE";
  EXPECT_THROW(read_snapshot(path), Error);
}

TEST(Diagnostics, HeaderAndRow) {
  const auto h = diagnostics_header({"ion", "electron"});
  EXPECT_NE(h.find("mass_ion"), std::string::npos);
  DiagnosticsRow r;
  r.t = 0.5;
  r.step = 3;
  r.mass = {1.0, 2.0};
  const auto line = format_row(r);
  EXPECT_EQ(std::count(h.begin(), h.end(), ','), std::count(line.begin(), line.end(), ','));
}

TEST(Diagnostics, GrowthFitRecoversRate) {
  std::vector<double> t, e;
  for (int i = 0; i < 200; ++i) {
    t.push_back(0.1 * i);
    e.push_back(3e-4 * std::exp(0.27 * t.back()));
  }
  const auto fit = fit_growth_rate(t, e, 2.0, 15.0);
  EXPECT_NEAR(fit.gamma, 0.27, 1e-12);
  EXPECT_GE(fit.samples, 10);
  EXPECT_THROW(fit_growth_rate(t, e, 2.0, 2.5), Error);
}

TEST(Diagnostics, PeakFitOnDampedOscillation) {
  std::vector<double> t, e;
  for (int i = 0; i < 4000; ++i) {
    t.push_back(0.01 * i);
    e.push_back(std::abs(std::exp(-0.15 * t.back()) * std::cos(1.4 * t.back())));
  }
  EXPECT_NEAR(fit_peak_rate(t, e, 0.0, 30.0).gamma, -0.15, 2e-3);
}

TEST(Diagnostics, RichardsonAndOrder) {
  const int Nc[] = {8, 8}, Nf[] = {16, 16};
  const double lo[] = {0.0, -1.0}, hi[] = {1.0, 1.0};
  const auto gc = make_grid(1, 1, Nc, lo, hi), gf = make_grid(1, 1, Nf, lo, hi);
  DistField c("e", gc), f("e", gf);
  auto fn = [](std::span<const double> z) { return z[0] * z[0] + z[1]; };
  quadrature_init(c, fn, 4);
  quadrature_init(f, fn, 4);
  const auto agg = aggregate(f);
  ASSERT_EQ(agg.size(), 64u);
  EXPECT_NEAR(richardson_error(c, f), 0.0, 1e-15);
  const double h[] = {0.1, 0.05, 0.025}, err[] = {1e-3, 6.25e-5, 3.90625e-6};
  EXPECT_NEAR(convergence_order(h, err), 4.0, 1e-12);
}
