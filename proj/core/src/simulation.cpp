#include "vpfv/simulation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>

#include "vpfv/error.hpp"
#include "vpfv/exact_sum.hpp"
#include "vpfv/quadrature.hpp"
#include "vpfv/snapshot.hpp"
#include "vpfv/stability.hpp"
#include "vpfv/time_stepping.hpp"

namespace vpfv {

namespace {

std::vector<DistField*> pointers(BlockSet& set) {
  std::vector<DistField*> p;
  p.reserve(set.size());
  for (auto& f : set) p.push_back(&f);
  return p;
}

double max_abs_center(const PhaseSpaceGrid& g, int k) {
  double m = 0.0;
  for (int i = 0; i < g.global_N[k]; ++i) m = std::max(m, std::abs(g.global_lo[k] + (i + 0.5) * g.h[k]));
  return m;
}

}  // namespace

double rk4_fv_sigma() {
  static const double sigma = cfl_constant(upwind_symbol, 60.0);
  return sigma;
}

NeighborStrategy parse_strategy(const std::string& s) {
  if (s == "all") return NeighborStrategy::all;
  if (s == "fvm") return NeighborStrategy::fvm;
  if (s == "vp") return NeighborStrategy::vp;
  throw Error(ErrorKind::parse, "unknown neighbor strategy '" + s + "'");
}

PartitionPlan make_plan(const RunConfig& cfg, const ProblemSetup& setup) {
  const int d = setup.d, v = setup.v;
  std::vector<std::array<int, max_dims>> n;
  for (std::size_t s = 0; s < setup.grids.size(); ++s) {
    std::array<int, max_dims> c{};
    c.fill(1);
    for (int k = 0; k < d; ++k)
      if (k < static_cast<int>(cfg.partition_x.size())) c[k] = cfg.partition_x[k];
    const std::vector<int>* pv = &cfg.partition_v;
    if (s < cfg.species.size() && !cfg.species[s].partition.empty()) pv = &cfg.species[s].partition;
    for (int a = 0; a < v; ++a)
      if (a < static_cast<int>(pv->size())) c[d + a] = (*pv)[a];
    n.push_back(c);
  }
  const int r = cfg.species_per_rank;
  int ranks = 0;
  const int S = static_cast<int>(n.size());
  for (int s = 0; s < S; ++s) {
    if (r > 1 && s % r != 0) continue;
    int p = 1;
    for (int k = 0; k < d + v; ++k) p *= n[s][k];
    ranks += p;
  }
  return plan_partitions(setup.grids, n, ranks, r, parse_strategy(cfg.strategy));
}

std::filesystem::path output_directory(const RunConfig& cfg) {
  if (const char* env = std::getenv("VPFV_OUTPUT_DIR"); env != nullptr && *env != '\0') return env;
  return cfg.directory;
}

struct Simulation::System {
  using Buffer = BlockSet;
  Simulation* sim;
  void stage(const Buffer& in, const Terms<Buffer>& terms, double dt, Buffer& out) {
    sim->stage(const_cast<Buffer&>(in), terms, dt, out);
  }
  void combine(Buffer& out, const Terms<Buffer>& terms) { sim->combine(out, terms); }
  Buffer make_buffer(const Buffer& like) {
    Buffer b = like;
    sim->note_live();
    return b;
  }
};

Simulation::Simulation(const RunConfig& cfg, RunOptions opt) : Simulation(cfg, make_problem(cfg), std::move(opt)) {}

Simulation::Simulation(const RunConfig& cfg, ProblemSetup setup, RunOptions opt)
    : cfg_(cfg), opt_(std::move(opt)), setup_(std::move(setup)) {
  plan_ = make_plan(cfg_, setup_);
  exchanger_ = std::make_unique<HaloExchanger>(plan_);
  const auto& g0 = setup_.grids[0];
  std::array<int, 2> N{g0.N[0], setup_.d == 2 ? g0.N[1] : 1};
  std::array<double, 2> h{g0.h[0], setup_.d == 2 ? g0.h[1] : 1.0};
  const int S = static_cast<int>(setup_.species.size());
  fs_ = FieldState(setup_.d, N, h, S);
  poisson_ = std::make_unique<PoissonSolver>(setup_.d, N, setup_.length);
  integrator_ = cfg_.integrator == "butcher" ? Integrator::butcher : Integrator::low_storage;
  if (cfg_.integrator != "butcher" && cfg_.integrator != "low_storage")
    throw Error(ErrorKind::parse, "unknown integrator '" + cfg_.integrator + "'");
  reduction_ = cfg_.deterministic ? ReductionMode::deterministic : ReductionMode::free_order;
  if (cfg_.moments == "position_major")
    schedule_ = MomentSchedule::position_major;
  else if (cfg_.moments != "velocity_major")
    throw Error(ErrorKind::parse, "unknown moment schedule '" + cfg_.moments + "'");
  sigma_ = rk4_fv_sigma();

  for (const auto& blk : plan_.blocks) {
    const auto& g = setup_.grids[blk.species];
    DistField f(setup_.species[blk.species].name, make_subgrid(g, blk.offset, blk.extent));
    separable_init(f, setup_.init[blk.species], 8);
    const auto& sg = f.grid();
    std::vector<std::int64_t> idx;
    const int nx = sg.N[0], ny = setup_.d == 2 ? sg.N[1] : 1;
    for (int i = 0; i < nx; ++i)
      for (int j = 0; j < ny; ++j)
        idx.push_back(setup_.d == 2 ? static_cast<std::int64_t>(sg.origin[0] + i) * N[1] + sg.origin[1] + j
                                    : sg.origin[0] + i);
    phys_index_.push_back(std::move(idx));
    f0_.push_back(std::move(f));
  }
  f1_ = f0_;
  fout_ = f0_;
  sums_.assign(S, std::vector<ExactSum>(fs_.cells()));
  other_live_ = DistField::live_count() - persistent_fields();
  peak_live_ = persistent_fields();
}

Simulation::~Simulation() = default;

std::int64_t Simulation::persistent_fields() const { return 3 * static_cast<std::int64_t>(plan_.blocks.size()); }

void Simulation::note_live() { peak_live_ = std::max(peak_live_, DistField::live_count() - other_live_); }

void Simulation::prepare(BlockSet& in) {
  if (prepared_ == &in) return;
  auto p = pointers(in);
  exchanger_->exchange(p, &traffic_);
  const int S = static_cast<int>(setup_.species.size());
  for (int s = 0; s < S; ++s) {
    if (reduction_ == ReductionMode::deterministic)
      for (auto& a : sums_[s]) a = ExactSum{};
    fs_.n[s].assign(fs_.cells(), 0.0);
  }
  for (std::size_t b = 0; b < in.size(); ++b) {
    const int s = plan_.blocks[b].species;
    const auto& idx = phys_index_[b];
    if (reduction_ == ReductionMode::deterministic) {
      const auto acc = velocity_sums(in[b]);
      for (std::size_t i = 0; i < acc.size(); ++i) sums_[s][idx[i]].merge(acc[i]);
    } else {
      const auto n = zeroth_moment(in[b], schedule_, reduction_);
      for (std::size_t i = 0; i < n.size(); ++i) fs_.n[s][idx[i]] += n[i];
    }
  }
  if (reduction_ == ReductionMode::deterministic)
    for (int s = 0; s < S; ++s) {
      const double vol = setup_.grids[s].velocity_cell_volume();
      for (int i = 0; i < fs_.cells(); ++i) fs_.n[s][i] = sums_[s][i].value() * vol;
    }
  fs_.rho = charge_density(fs_.n, setup_.species, reduction_);
  poisson_->solve(fs_, true);
  prepared_ = &in;
}

void Simulation::stage(BlockSet& in, const std::array<std::pair<double, const BlockSet*>, 3>& terms, double dt,
                       BlockSet& out) {
  prepare(in);
  for (std::size_t b = 0; b < in.size(); ++b) {
    StageSpec st;
    for (int t = 0; t < 3; ++t) {
      st.coef[t] = terms[t].first;
      st.terms[t] = terms[t].second != nullptr ? &(*terms[t].second)[b] : nullptr;
    }
    st.dt = dt;
    advance_stage(in[b], setup_.species[plan_.blocks[b].species], fs_, st, out[b], kopt_);
  }
  if (prepared_ == &out) prepared_ = nullptr;
  note_live();
}

void Simulation::combine(BlockSet& out, const std::array<std::pair<double, const BlockSet*>, 3>& terms) {
  for (std::size_t b = 0; b < out.size(); ++b) {
    const auto& g = out[b].grid();
    double* o = out[b].data();
    std::array<const double*, 3> tp{};
    for (int t = 0; t < 3; ++t) tp[t] = terms[t].second != nullptr ? (*terms[t].second)[b].data() : nullptr;
    for_each_interior(g, [&](const MultiIndex&, std::int64_t off) {
      double acc = 0.0;
      for (int t = 0; t < 3; ++t)
        if (tp[t] != nullptr) acc += terms[t].first * tp[t][off];
      o[off] = acc;
    });
  }
  if (prepared_ == &out) prepared_ = nullptr;
  note_live();
}

double Simulation::speed_bound(bool linf) {
  prepare(f0_);
  const int d = setup_.d, v = setup_.v, D = d + v;
  std::vector<std::vector<double>> soh;
  for (std::size_t s = 0; s < setup_.species.size(); ++s) {
    const auto& g = setup_.grids[s];
    const auto& sp = setup_.species[s];
    std::vector<double> a(D, 0.0);
    std::array<double, 2> vmax{0.0, 0.0};
    for (int k = 0; k < v; ++k) vmax[k] = max_abs_center(g, d + k);
    for (int k = 0; k < d; ++k) a[k] = vmax[k] / g.h[k];
    const double wp2 = sp.omega_p * sp.omega_p;
    const double rot = std::abs(sp.qm() * sp.omega_c * sp.b_z);
    for (int c = 0; c < v; ++c) {
      const auto& e = fs_.E[c];
      double m = std::abs(sp.g[c]);
      for (double x : e) m = std::max(m, std::abs(sp.qm() * wp2 * x + sp.g[c]));
      const double other = v == 2 ? vmax[1 - c] : 0.0;
      a[d + c] = (m + rot * other) / g.h[d + c];
    }
    soh.push_back(std::move(a));
  }
  return linf ? max_stable_dt_linf(soh, sigma_, 1.0) : max_stable_dt(soh, sigma_, 1.0);
}

double Simulation::stable_dt() { return speed_bound(false); }
double Simulation::stable_dt_linf() { return speed_bound(true); }

double Simulation::step(std::optional<double> dt_opt) {
  double dt = dt_opt ? *dt_opt : cfg_.cfl_fraction * stable_dt();
  if (!std::isfinite(dt) || dt <= 0.0) throw Error(ErrorKind::non_finite, "no finite stable time step");
  System sys{this};
  if (integrator_ == Integrator::low_storage) {
    rk4_38_low_storage_step(sys, f0_, f1_, fout_, dt);
    std::swap(f0_, fout_);
  } else {
    rk4_butcher_step(sys, f0_, dt);
  }
  prepared_ = nullptr;
  t_ += dt;
  ++steps_;
  return dt;
}

DiagnosticsRow Simulation::diagnostics() {
  prepare(f0_);
  const int S = static_cast<int>(setup_.species.size());
  std::vector<MomentTotals> tot(S);
  for (std::size_t b = 0; b < f0_.size(); ++b) tot[plan_.blocks[b].species].merge(moment_totals(f0_[b]));
  DiagnosticsRow r;
  r.t = t_;
  r.step = steps_;
  for (int s = 0; s < S; ++s) {
    const double m = setup_.species[s].mass;
    r.mass.push_back(tot[s].mass.value());
    for (int a = 0; a < setup_.v && a < 2; ++a) r.momentum_vec[a] += m * tot[s].momentum[a].value();
    r.kinetic_energy += m * tot[s].energy.value();
  }
  r.momentum = std::hypot(r.momentum_vec[0], r.momentum_vec[1]);
  ExactSum e2;
  for (const auto& comp : fs_.E)
    for (double x : comp) e2.add(x * x);
  const double dV = setup_.d == 2 ? fs_.h[0] * fs_.h[1] : fs_.h[0];
  const double wp2 = setup_.species[0].omega_p * setup_.species[0].omega_p;
  r.e_norm = std::sqrt(e2.value() * dV);
  r.field_energy = 0.5 * wp2 * e2.value() * dV;
  r.total_energy = r.field_energy + r.kinetic_energy;
  return r;
}

DistField Simulation::gather(int species) const {
  DistField g(setup_.species[species].name, setup_.grids[species]);
  const auto& gg = g.grid();
  for (std::size_t b = 0; b < f0_.size(); ++b) {
    if (plan_.blocks[b].species != species) continue;
    const auto& lg = f0_[b].grid();
    const double* src = f0_[b].data();
    double* dst = g.data();
    for_each_interior(lg, [&](const MultiIndex& mi, std::int64_t off) {
      MultiIndex gm = mi;
      for (int k = 0; k < lg.dims(); ++k) gm[k] += lg.origin[k];
      dst[flat_index_unchecked(gg, gm)] = src[off];
    });
  }
  return g;
}

void Simulation::scatter(int species, const DistField& global) {
  const auto& gg = global.grid();
  for (std::size_t b = 0; b < f0_.size(); ++b) {
    if (plan_.blocks[b].species != species) continue;
    const auto& lg = f0_[b].grid();
    double* dst = f0_[b].data();
    for_each_interior(lg, [&](const MultiIndex& mi, std::int64_t off) {
      MultiIndex gm = mi;
      for (int k = 0; k < lg.dims(); ++k) gm[k] += lg.origin[k];
      dst[off] = global.data()[flat_index_unchecked(gg, gm)];
    });
  }
  prepared_ = nullptr;
}

void Simulation::write_snapshots(const std::filesystem::path& dir, const std::string& tag) const {
  std::filesystem::create_directories(dir);
  for (std::size_t s = 0; s < setup_.species.size(); ++s)
    write_snapshot(dir / (setup_.species[s].name + tag + ".vpfv"), gather(static_cast<int>(s)), t_);
}

RunResult Simulation::run() {
  RunResult res;
  res.directory = opt_.directory ? *opt_.directory : output_directory(cfg_);
  std::ofstream csv;
  if (opt_.write_files) {
    std::filesystem::create_directories(res.directory);
    csv.open(res.directory / "diagnostics.csv");
    if (!csv) throw Error(ErrorKind::io, "cannot write " + (res.directory / "diagnostics.csv").string());
    std::vector<std::string> names;
    for (const auto& sp : setup_.species) names.push_back(sp.name);
    csv << diagnostics_header(names) << "\n";
  }
  auto emit = [&](double dt) {
    auto row = diagnostics();
    row.dt = dt;
    if (csv.is_open()) csv << format_row(row) << "\n" << std::flush;
    if (opt_.on_row) opt_.on_row(row);
    res.rows.push_back(std::move(row));
  };
  const int cadence = std::max(1, cfg_.cadence);
  const double eps = 1e-12 * std::max(1.0, std::abs(cfg_.t_end));
  double last_dt = 0.0;
  try {
    emit(0.0);
    while (t_ < cfg_.t_end - eps && (cfg_.max_steps <= 0 || steps_ < cfg_.max_steps)) {
      double dt = cfg_.dt ? *cfg_.dt : cfg_.cfl_fraction * stable_dt();
      if (t_ + dt > cfg_.t_end) dt = cfg_.t_end - t_;
      last_dt = step(dt);
      if (steps_ % cadence == 0) emit(last_dt);
    }
    if (steps_ % cadence != 0) emit(last_dt);
    if (cfg_.snapshot && opt_.write_files) write_snapshots(res.directory, "");
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::non_finite) throw;
    res.ok = false;
    res.error = e.what();
    if (opt_.write_files) write_snapshots(res.directory, "_last_good");
  }
  res.steps = steps_;
  res.t = t_;
  return res;
}

}  // namespace vpfv

namespace vpfv {

ConvergenceResult convergence_study(const RunConfig& base, int levels) {
  if (levels < 3) throw Error(ErrorKind::out_of_range, "a convergence order needs at least 3 levels");
  std::vector<DistField> fields;
  std::vector<std::vector<int>> cells;
  std::vector<double> hs, secs;
  for (int l = 0; l < levels; ++l) {
    RunConfig cfg = base;
    for (auto& n : cfg.cells) n <<= l;
    for (auto& sp : cfg.species)
      for (auto& n : sp.cells) n <<= l;
    cfg.cadence = 1 << 30;
    RunOptions opt;
    opt.write_files = false;
    const auto t0 = std::chrono::steady_clock::now();
    Simulation sim(cfg, opt);
    const auto r = sim.run();
    if (!r.ok) throw Error(ErrorKind::non_finite, "convergence level " + std::to_string(l) + ": " + r.error);
    secs.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    fields.push_back(sim.gather(0));
    cells.push_back(cfg.cells);
    hs.push_back(sim.setup().grids[0].h[0]);
  }
  ConvergenceResult res;
  std::vector<double> h, e;
  for (int l = 0; l + 1 < levels; ++l) {
    ConvergenceLevel lv;
    lv.cells = cells[l];
    lv.h = hs[l];
    lv.error = richardson_error(fields[l], fields[l + 1]);
    lv.seconds = secs[l];
    h.push_back(lv.h);
    e.push_back(lv.error);
    res.levels.push_back(lv);
  }
  res.order = convergence_order(h, e);
  return res;
}

}  // namespace vpfv
