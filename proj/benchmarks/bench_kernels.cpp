#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "vpfv/faddeeva.hpp"
#include "vpfv/field_solve.hpp"
#include "vpfv/fvm.hpp"
#include "vpfv/partition.hpp"
#include "vpfv/quadrature.hpp"

using namespace vpfv;

namespace {

PhaseSpaceGrid grid(int v, int n) {
  std::vector<int> N(1 + v, n);
  std::vector<double> lo(1 + v, -5.0), hi(1 + v, 5.0);
  lo[0] = 0.0;
  hi[0] = 2.0 * std::numbers::pi;
  return make_grid(1, v, N, lo, hi);
}

DistField maxwellian(const PhaseSpaceGrid& g) {
  DistField f("electron", g);
  quadrature_init(f, [](std::span<const double> z) {
    double r2 = 0.0;
    for (std::size_t k = 1; k < z.size(); ++k) r2 += z[k] * z[k];
    return (1.0 + 0.1 * std::cos(z[0])) * std::exp(-0.5 * r2);
  }, 2);
  return f;
}

FieldState field(const PhaseSpaceGrid& g) {
  FieldState fs(1, {g.N[0], 1}, {g.h[0], 1.0}, 1);
  fs.E[0].resize(g.N[0]);
  for (int i = 0; i < g.N[0]; ++i) fs.E[0][i] = 0.1 * std::sin(g.center(0, i));
  return fs;
}

void stage(benchmark::State& state, int v) {
  const auto g = grid(v, static_cast<int>(state.range(0)));
  const auto f = maxwellian(g);
  DistField out("electron", g);
  const auto fs = field(g);
  SpeciesConfig sp;
  sp.omega_c = 0.1;
  sp.b_z = 1.0;
  StageSpec st;
  st.terms = {&f, nullptr, nullptr};
  st.coef = {1.0, 0.0, 0.0};
  st.dt = 1e-3;
  for (auto _ : state) {
    advance_stage(f, sp, fs, st, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.counters["ns_per_cell"] = benchmark::Counter(static_cast<double>(g.interior_size()),
                                                     benchmark::Counter::kIsIterationInvariantRate |
                                                         benchmark::Counter::kInvert);
}

void BM_Stage1D1V(benchmark::State& s) { stage(s, 1); }
void BM_Stage1D2V(benchmark::State& s) { stage(s, 2); }

void BM_PackGhosts(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto g = grid(2, n);
  const auto f = maxwellian(g);
  std::vector<Box> boxes;
  for (int k = 0; k < 3; ++k) {
    Box b{{0, 0, 0, 0}, {n, n, n, 0}};
    b.extent[k] = ghost;
    boxes.push_back(b);
  }
  std::vector<double> buf;
  for (const auto& b : boxes) buf.resize(buf.size() + b.count(3));
  for (auto _ : state) {
    pack_ghosts(f, boxes, buf);
    benchmark::DoNotOptimize(buf.data());
  }
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(buf.size() * sizeof(double)));
}

void BM_UnpackGhosts(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto g = grid(2, n);
  auto f = maxwellian(g);
  std::vector<Box> boxes;
  for (int k = 0; k < 3; ++k) {
    Box b{{0, 0, 0, 0}, {n, n, n, 0}};
    b.lo[k] = -ghost;
    b.extent[k] = ghost;
    boxes.push_back(b);
  }
  std::vector<double> buf;
  for (const auto& b : boxes) buf.resize(buf.size() + b.count(3), 1.0);
  for (auto _ : state) {
    unpack_ghosts(buf, f, boxes);
    benchmark::ClobberMemory();
  }
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(buf.size() * sizeof(double)));
}

void BM_ZerothMoment(benchmark::State& state) {
  const auto g = grid(2, static_cast<int>(state.range(0)));
  const auto f = maxwellian(g);
  const auto mode = state.range(1) ? ReductionMode::deterministic : ReductionMode::free_order;
  for (auto _ : state) benchmark::DoNotOptimize(zeroth_moment(f, MomentSchedule::velocity_major, mode));
}

void BM_MomentTotals(benchmark::State& state) {
  const auto g = grid(2, static_cast<int>(state.range(0)));
  const auto f = maxwellian(g);
  for (auto _ : state) benchmark::DoNotOptimize(moment_totals(f).mass.value());
}

void BM_Faddeeva(benchmark::State& state) {
  const double r = static_cast<double>(state.range(0));
  std::complex<double> z{r, 0.3}, acc{};
  for (auto _ : state) {
    acc += faddeeva_w(z);
    z += 1e-9;
  }
  benchmark::DoNotOptimize(acc);
}

}  // namespace

BENCHMARK(BM_Stage1D1V)->Arg(128)->Arg(512)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Stage1D2V)->Arg(32)->Arg(64)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_PackGhosts)->Arg(32)->Arg(64);
BENCHMARK(BM_UnpackGhosts)->Arg(32)->Arg(64);
BENCHMARK(BM_ZerothMoment)->Args({64, 1})->Args({64, 0})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_MomentTotals)->Arg(64)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Faddeeva)->Arg(0)->Arg(3)->Arg(12);
BENCHMARK_MAIN();
