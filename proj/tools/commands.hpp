#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace vpfv::cli {

struct RunArgs {
  std::string config;
  std::optional<std::string> output;
  bool quiet = false;
};

struct ConvergenceArgs {
  std::string config;
  int levels = 3;
};

struct StabilityArgs {
  int samples = 8192;
  int grid = 512;
  std::optional<std::filesystem::path> curves;
};

struct PlanArgs {
  std::string config;
};

struct DispersionArgs {
  std::string relation;
  std::vector<double> k;
  double vt2 = 0.1;
  double u = 1.0;
  int ell = 4;
  double alpha_perp = 0.70710678118654752440;
  double omega_c = 0.05;
  bool kbar = false;  // k values are normalized ring wavenumbers
  double mass_ratio = 25.0;
  double temp_ratio = 1.0;
  double beta = 2.5e-3;
};

int run(const RunArgs& a);
int convergence(const ConvergenceArgs& a);
int stability(const StabilityArgs& a);
int plan(const PlanArgs& a);
int dispersion(const DispersionArgs& a);

}  // namespace vpfv::cli
