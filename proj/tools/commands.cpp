#include "commands.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "json.hpp"
#include "vpfv/dispersion.hpp"
#include "vpfv/error.hpp"
#include "vpfv/partition.hpp"
#include "vpfv/simulation.hpp"
#include "vpfv/stability.hpp"

namespace vpfv::cli {

using nlohmann::json;

int run(const RunArgs& a) {
  const RunConfig cfg = load_config(a.config);
  RunOptions opt;
  if (a.output) opt.directory = *a.output;
  long rows = 0;
  if (!a.quiet)
    opt.on_row = [&](const DiagnosticsRow& r) {
      if (rows++ % 10 == 0)
        std::fprintf(stderr, "t=%-10.4f step=%-8ld |E|=%-12.5e W=%.12e\n", r.t, r.step, r.e_norm, r.total_energy);
    };
  Simulation sim(cfg, opt);
  const RunResult r = sim.run();
  json out{{"directory", r.directory.string()},
           {"steps", r.steps},
           {"t", r.t},
           {"ok", r.ok},
           {"problem", sim.setup().kind},
           {"ranks", sim.plan().ranks},
           {"ghost_elements", sim.traffic().total()}};
  if (!r.ok) out["error"] = r.error;
  for (const auto& [key, value] : sim.setup().info) out["info"][key] = value;
  std::cout << out.dump(2) << "\n";
  return r.ok ? 0 : 1;
}

int convergence(const ConvergenceArgs& a) {
  const RunConfig cfg = load_config(a.config);
  const ConvergenceResult res = convergence_study(cfg, a.levels);
  std::printf("N,h,error\n");
  for (const auto& lv : res.levels) std::printf("%d,%.17g,%.17g\n", lv.cells[0], lv.h, lv.error);
  std::printf("# order %.4f\n", res.order);
  return 0;
}

namespace {

void write_curve(const std::filesystem::path& path, const SymbolCurve& c) {
  std::ofstream o(path);
  if (!o) throw Error(ErrorKind::io, "cannot write " + path.string());
  o << "xi,re,im\n";
  char buf[96];
  for (std::size_t i = 0; i < c.z.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", i < c.xi.size() ? c.xi[i] : 0.0, c.z[i].real(), c.z[i].imag());
    o << buf;
  }
}

}  // namespace

int stability(const StabilityArgs& a) {
  const double s4 = cfl_constant(upwind_symbol, 60.0, rk4_polynomial, a.samples);
  const double s1 = cfl_constant(first_order_symbol, 1.0, rk4_polynomial, a.samples);
  std::printf("method,stages,sigma,sigma_eff\n");
  std::printf("rk4_38_fv4,4,%.6f,%.6f\n", s4, s4 / 4.0);
  std::printf("rk4_38_fv1,4,%.6f,%.6f\n", s1, s1 / 4.0);
  std::printf("\nweights,approx_over_true,accepted_over_rejected,encloses\n");
  if (a.curves) std::filesystem::create_directories(*a.curves);
  for (const auto& w : {std::array<double, 2>{1, 1}, {2, 1}, {10, 1}}) {
    const auto env = true_envelope_2d(w[0], w[1], a.grid);
    const auto approx = approx_envelope(w, a.samples);
    const double c_true = min_relative_clearance(approx, env.accepted);
    const double c_rej = env.rejected.z.empty() ? 0.0 : min_relative_clearance(env.accepted, env.rejected);
    std::printf("%g:%g,%.3e,%.3e,%d\n", w[0], w[1], c_true, c_rej, c_true >= -1e-6 && c_rej >= -1e-6 ? 1 : 0);
    if (a.curves) {
      const std::string tag = std::to_string(static_cast<int>(w[0])) + "_" + std::to_string(static_cast<int>(w[1]));
      write_curve(*a.curves / ("approx_" + tag + ".csv"), approx);
      write_curve(*a.curves / ("accepted_" + tag + ".csv"), env.accepted);
      write_curve(*a.curves / ("rejected_" + tag + ".csv"), env.rejected);
    }
  }
  if (a.curves) {
    write_curve(*a.curves / "fv4_symbol.csv", sample_curve(upwind_symbol, a.samples));
    write_curve(*a.curves / "fv1_symbol.csv", sample_curve(first_order_symbol, a.samples));
  }
  return 0;
}

namespace {

const char* strategy_name(NeighborStrategy s) {
  switch (s) {
    case NeighborStrategy::all: return "all";
    case NeighborStrategy::fvm: return "fvm";
    default: return "vp";
  }
}

}  // namespace

int plan(const PlanArgs& a) {
  const RunConfig cfg = load_config(a.config);
  const ProblemSetup setup = make_problem(cfg);
  const PartitionPlan p = make_plan(cfg, setup);
  json out;
  out["d"] = p.d;
  out["v"] = p.v;
  out["ranks"] = p.ranks;
  out["strategy"] = strategy_name(p.strategy);
  const auto pairs = neighbor_pairs(p.d, p.v);
  out["neighbor_pairs"] = {{"all", pairs.all}, {"fvm", pairs.fvm}, {"vp", pairs.vp}};
  for (const auto& b : p.blocks) {
    json jb{{"species", setup.species[b.species].name}, {"partition", b.partition}, {"rank", b.rank}};
    for (int k = 0; k < p.dims(); ++k) {
      jb["offset"].push_back(b.offset[k]);
      jb["extent"].push_back(b.extent[k]);
    }
    std::int64_t recv = 0;
    for (const auto& s : b.recv) recv += s.count;
    jb["segments"] = b.recv.size();
    jb["ghost_elements"] = recv;
    out["blocks"].push_back(jb);
  }
  const auto cv = comm_volumes(p);
  out["volumes"] = {{"reduce", cv.b_reduce},
                    {"phi", cv.b_phi},
                    {"ghost_formula", cv.b_ghost},
                    {"ghost_formula_wrap", cv.b_ghost_wrap},
                    {"counted_fvm", cv.counted_fvm},
                    {"counted_vp", cv.counted_vp},
                    {"formula_matches_count", cv.formula_matches_count}};
  for (auto s : {NeighborStrategy::all, NeighborStrategy::fvm, NeighborStrategy::vp})
    out["counted"][strategy_name(s)] = counted_ghost_volume(p, s);
  std::cout << out.dump(2) << "\n";
  return 0;
}

int dispersion(const DispersionArgs& a) {
  std::printf("k,re,im,residual,iterations,guess_re,guess_im,converged,near_harmonic\n");
  int failures = 0;
  LhdiParams lp;
  lp.mass_ratio = a.mass_ratio;
  lp.temp_ratio = a.temp_ratio;
  lp.beta = a.beta;
  const LhdiClosure closure = lhdi_closure(lp);
  DghParams dp;
  dp.ell = a.ell;
  dp.alpha_perp = a.alpha_perp;
  dp.omega_c = a.omega_c;
  for (double k : a.k) {
    ComplexRoot r;
    try {
      if (a.relation == "two_stream") r = two_stream_root(k, a.vt2, a.u);
      else if (a.relation == "landau") r = landau_root(k);
      else if (a.relation == "dgh") r = dgh_root(a.kbar ? dgh_k_from_kbar(k, dp) : k, dp);
      else r = lhdi_root(k, closure);
    } catch (const Error& e) {
      std::fprintf(stderr, "k=%g: %s\n", k, e.what());
      ++failures;
      continue;
    }
    std::printf("%.10g,%.15g,%.15g,%.3e,%d,%.6g,%.6g,%d,%d\n", k, r.omega.real(), r.omega.imag(), r.residual,
                r.iterations, r.guess.real(), r.guess.imag(), r.converged ? 1 : 0, r.near_harmonic ? 1 : 0);
  }
  return failures == 0 ? 0 : 1;
}

}  // namespace vpfv::cli
