#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "vpfv/error.hpp"

int main(int argc, char** argv) {
  using namespace vpfv::cli;
  CLI::App app{"Finite-volume Vlasov-Poisson solver"};
  app.require_subcommand(1);

  RunArgs run_a;
  auto* run_c = app.add_subcommand("run", "Run a configuration and write diagnostics.csv");
  run_c->add_option("config", run_a.config, "configuration file")->required();
  run_c->add_option("-o,--output", run_a.output, "output directory (overrides VPFV_OUTPUT_DIR and the config)");
  run_c->add_flag("-q,--quiet", run_a.quiet, "no progress lines");

  ConvergenceArgs conv_a;
  auto* conv_c = app.add_subcommand("convergence", "Richardson self-convergence over doubled grids");
  conv_c->add_option("config", conv_a.config, "configuration file")->required();
  conv_c->add_option("--levels", conv_a.levels, "number of grids")->check(CLI::Range(3, 6));

  StabilityArgs stab_a;
  auto* stab_c = app.add_subcommand("stability", "CFL table and stability envelopes (CSV)");
  stab_c->add_option("--samples", stab_a.samples, "samples per symbol curve");
  stab_c->add_option("--grid", stab_a.grid, "tangency scan grid");
  stab_c->add_option("--curves", stab_a.curves, "directory for sampled curve CSVs");

  PlanArgs plan_a;
  auto* plan_c = app.add_subcommand("plan", "Partition plan and communication volumes (JSON)");
  plan_c->add_option("config", plan_a.config, "configuration file")->required();

  DispersionArgs disp_a;
  auto* disp_c = app.add_subcommand("dispersion", "Dispersion roots as CSV (k, Re w, Im w, residual)");
  disp_c->add_option("relation", disp_a.relation, "two_stream | landau | dgh | lhdi")
      ->required()
      ->check(CLI::IsMember({"two_stream", "landau", "dgh", "lhdi"}));
  disp_c->add_option("-k,--k", disp_a.k, "wavenumbers")->delimiter(',')->required();
  disp_c->add_option("--vt2", disp_a.vt2, "two_stream: beam thermal speed squared");
  disp_c->add_option("--u", disp_a.u, "two_stream: beam speed");
  disp_c->add_option("--ell", disp_a.ell, "dgh: ring index");
  disp_c->add_option("--alpha-perp", disp_a.alpha_perp, "dgh: ring thermal width");
  disp_c->add_option("--omega-c", disp_a.omega_c, "dgh: |Omega_e| / omega_pe");
  disp_c->add_flag("--kbar", disp_a.kbar, "dgh: k values are k v_perp0 / |Omega_e|");
  disp_c->add_option("--mass-ratio", disp_a.mass_ratio, "lhdi: m_i / m_e");
  disp_c->add_option("--temp-ratio", disp_a.temp_ratio, "lhdi: T_i / T_e");
  disp_c->add_option("--beta", disp_a.beta, "lhdi: plasma beta");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run_c) return run(run_a);
    if (*conv_c) return convergence(conv_a);
    if (*stab_c) return stability(stab_a);
    if (*plan_c) return plan(plan_a);
    if (*disp_c) return dispersion(disp_a);
  } catch (const vpfv::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
