#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "vpfv/error.hpp"
#include "vpfv/simulation.hpp"

using namespace vpfv;

namespace {

RunConfig two_stream(int nx, int nv, const std::string& extra = "") {
  return parse_config("[domain]\nd = 1\nv = 1\ncells = " + std::to_string(nx) + ", " + std::to_string(nv) +
                      "\nv_max = 6\n[problem]\ntype = two_stream\ndelta = 1e-2\n[time]\nt_end = 1\n" + extra);
}

RunConfig lhdi(const std::string& partition) {
  return parse_config(
      "[domain]\nd = 1\nv = 2\ncells = 16, 16, 16\n[species]\nname = ion\n[species]\nname = electron\n"
      "[problem]\ntype = lhdi\nmass_ratio = 25\ndelta_e = 1e-2\n[partition]\n" +
      partition);
}

bool bitwise_equal(const DistField& a, const DistField& b) {
  bool same = true;
  for_each_interior(a.grid(), [&](const MultiIndex& mi, std::int64_t o) { same = same && a.data()[o] == b.at(mi); });
  return same;
}

RunOptions silent() {
  RunOptions o;
  o.write_files = false;
  return o;
}

}  // namespace

TEST(Simulation, UniformMaxwellianIsEquilibrium) {
  auto cfg = parse_config("[domain]\nd = 1\nv = 1\ncells = 16, 32\nv_max = 6\n[problem]\ntype = landau\nalpha = 0\n");
  Simulation sim(cfg, silent());
  const auto before = sim.gather(0);
  for (int i = 0; i < 5; ++i) sim.step();
  const auto after = sim.gather(0);
  double diff = 0.0;
  for_each_interior(before.grid(), [&](const MultiIndex& mi, std::int64_t o) {
    diff = std::max(diff, std::abs(before.data()[o] - after.at(mi)));
  });
  EXPECT_LT(diff, 1e-14);
  EXPECT_LT(sim.diagnostics().e_norm, 1e-14);
}

TEST(Simulation, PartitionedRunIsBitwiseIdentical) {
  Simulation one(lhdi("x = 1\nv = 1, 1\n"), silent());
  Simulation many(lhdi("x = 2\nv = 2, 1\n"), silent());
  EXPECT_GT(many.plan().ranks, 1);
  for (int i = 0; i < 3; ++i) {
    const double dt = one.step();
    many.step(dt);
  }
  for (int s = 0; s < 2; ++s) EXPECT_TRUE(bitwise_equal(one.gather(s), many.gather(s))) << s;
  const auto ra = one.diagnostics(), rb = many.diagnostics();
  EXPECT_EQ(ra.total_energy, rb.total_energy);
  EXPECT_EQ(ra.mass, rb.mass);
}

TEST(Simulation, StrategiesAgreeBitwise) {
  Simulation vp(lhdi("x = 2\nv = 2, 2\nstrategy = vp\n"), silent());
  Simulation all(lhdi("x = 2\nv = 2, 2\nstrategy = all\n"), silent());
  for (int i = 0; i < 2; ++i) all.step(vp.step());
  EXPECT_TRUE(bitwise_equal(vp.gather(1), all.gather(1)));
  EXPECT_LT(vp.traffic().total(), all.traffic().total());
}

TEST(Simulation, LowStorageMatchesButcher) {
  Simulation a(two_stream(32, 32), silent()), b(two_stream(32, 32), silent());
  b.set_integrator(Integrator::butcher);
  for (int i = 0; i < 10; ++i) b.step(a.step());
  const auto fa = a.gather(0), fb = b.gather(0);
  double diff = 0.0;
  for_each_interior(fa.grid(), [&](const MultiIndex& mi, std::int64_t o) {
    diff = std::max(diff, std::abs(fa.data()[o] - fb.at(mi)));
  });
  EXPECT_LT(diff, 1e-13);
}

TEST(Simulation, LowStorageKeepsThreeBuffers) {
  {
    Simulation a(two_stream(32, 32, "[partition]\nx = 2\n"), silent());
    for (int i = 0; i < 3; ++i) a.step();
    EXPECT_EQ(a.persistent_fields(), 6);
    EXPECT_EQ(a.peak_live_fields(), a.persistent_fields());
  }
  Simulation b(two_stream(32, 32), silent());
  b.set_integrator(Integrator::butcher);
  b.step();
  EXPECT_GT(b.peak_live_fields(), b.persistent_fields());
}

TEST(Simulation, MassIsConservedAndDtMatchesCfl) {
  Simulation sim(two_stream(32, 32), silent());
  const double m0 = sim.diagnostics().mass[0];
  const double dt_l1 = sim.stable_dt();
  EXPECT_LE(sim.stable_dt_linf(), dt_l1 * 2.0 + 1e-15);
  const double dt = sim.step();
  EXPECT_NEAR(dt, 0.9 * dt_l1, 1e-15);
  for (int i = 0; i < 20; ++i) sim.step();
  EXPECT_NEAR(sim.diagnostics().mass[0], m0, 1e-13 * m0);
}

TEST(Simulation, FreeOrderModeRuns) {
  Simulation det(two_stream(32, 32, "[partition]\nv = 2\n"), silent());
  Simulation fr(two_stream(32, 32, "[partition]\nv = 2\ndeterministic = false\nmoments = position_major\n"), silent());
  for (int i = 0; i < 3; ++i) fr.step(det.step());
  EXPECT_NEAR(det.diagnostics().total_energy, fr.diagnostics().total_energy, 1e-12);
}

TEST(Simulation, RunWritesDiagnostics) {
  const auto dir = std::filesystem::temp_directory_path() / "vpfv_sim_run";
  std::filesystem::remove_all(dir);
  auto cfg = two_stream(16, 16, "[output]\ncadence = 2\n");
  cfg.t_end = 0.5;
  RunOptions o;
  o.directory = dir;
  Simulation sim(cfg, o);
  const auto res = sim.run();
  ASSERT_TRUE(res.ok);
  EXPECT_NEAR(res.t, 0.5, 1e-14);
  std::ifstream in(dir / "diagnostics.csv");
  ASSERT_TRUE(in.good());
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) ++lines;
  EXPECT_EQ(lines, static_cast<int>(res.rows.size()) + 2);  // version comment and column names
  EXPECT_EQ(res.rows.back().step, res.steps);
}

TEST(Simulation, OutputDirectoryOverride) {
  auto cfg = two_stream(16, 16);
  cfg.directory = "from_config";
  ::unsetenv("VPFV_OUTPUT_DIR");
  EXPECT_EQ(output_directory(cfg), std::filesystem::path("from_config"));
  ::setenv("VPFV_OUTPUT_DIR", "/tmp/elsewhere", 1);
  EXPECT_EQ(output_directory(cfg), std::filesystem::path("/tmp/elsewhere"));
  ::unsetenv("VPFV_OUTPUT_DIR");
}

TEST(Simulation, NonFiniteStateStopsRun) {
  const auto dir = std::filesystem::temp_directory_path() / "vpfv_sim_nan";
  std::filesystem::remove_all(dir);
  auto cfg = two_stream(16, 16);
  RunOptions o;
  o.directory = dir;
  Simulation sim(cfg, o);
  sim.state()[0].at({3, 3, 0, 0}) = std::nan("");
  const auto res = sim.run();
  EXPECT_FALSE(res.ok);
  EXPECT_NE(res.error.find("non-finite"), std::string::npos);
}

TEST(Simulation, ConfigErrors) {
  EXPECT_THROW(Simulation(parse_config(""), silent()), Error);
  EXPECT_THROW(Simulation(two_stream(16, 16, "[time]\nintegrator = euler\n"), silent()), Error);
  EXPECT_THROW(Simulation(two_stream(16, 16, "[partition]\nx = 3\n"), silent()), Error);
}
