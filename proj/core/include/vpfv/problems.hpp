#pragma once

#include <map>
#include <string>
#include <vector>

#include "vpfv/config.hpp"
#include "vpfv/dispersion.hpp"
#include "vpfv/phase_grid.hpp"
#include "vpfv/quadrature.hpp"
#include "vpfv/species.hpp"

namespace vpfv {

struct TwoStreamParams {
  double vt2 = 0.1;
  double u = 1.0;
  double delta = 1e-5;
  double k = 0.6;
};

struct DghInitParams {
  int ell = 4;
  double alpha_perp = 0.70710678118654752440;
  double delta = 1e-4;
  double kbar = 3.2;
  double omega_c = 0.05;  // |Omega_e| / omega_pe
  double k() const;
};

struct LhdiInitParams {
  LhdiParams physics;
  double delta_e = 1e-3;
  double delta_i = 0.0;
  double k = 2.0;
};

struct LandauParams {
  double alpha = 0.5;
  double kx = 0.5;
  double ky = 0.5;
};

/// Product of 1 + a sin(2 pi x_k / L_k) over every dim; advected by v and
/// G only (the species carries no charge).
struct AdvectionParams {
  double amplitude = 0.5;
};

std::vector<SeparableTerm> two_stream_terms(const TwoStreamParams& p);
std::vector<SeparableTerm> dgh_terms(const DghInitParams& p);
std::vector<SeparableTerm> lhdi_terms(const LhdiSpecies& s, double delta, double k);
/// 1D-1V or 2D-2V depending on `d`.
std::vector<SeparableTerm> landau_terms(const LandauParams& p, int d);
std::vector<SeparableTerm> advection_terms(const AdvectionParams& p, const PhaseSpaceGrid& g);

void init_two_stream(DistField& f, const TwoStreamParams& p, int points = 8);
void init_dgh(DistField& f, const DghInitParams& p, int points = 8);
void init_lhdi(DistField& f, const LhdiSpecies& s, double delta, double k, int points = 8);
void init_landau(DistField& f, const LandauParams& p, int points = 8);

/// Everything a run needs, resolved from a configuration.
struct ProblemSetup {
  std::string kind;
  int d = 1;
  int v = 1;
  std::vector<SpeciesConfig> species;
  std::vector<PhaseSpaceGrid> grids;  // global grid per species
  std::vector<std::vector<SeparableTerm>> init;
  std::array<double, 2> length{1.0, 1.0};
  std::map<std::string, double> info;  // derived quantities worth reporting
};

ProblemSetup make_problem(const RunConfig& cfg);

TwoStreamParams two_stream_params(const RunConfig& cfg);
DghInitParams dgh_params(const RunConfig& cfg);
LhdiInitParams lhdi_params(const RunConfig& cfg);
LandauParams landau_params(const RunConfig& cfg);

}  // namespace vpfv
