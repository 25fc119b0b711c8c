#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vpfv {

/// One [species] section. Unset fields fall back to the problem defaults.
struct SpeciesSection {
  std::string name;
  std::optional<double> charge;
  std::optional<double> mass;
  std::vector<double> v_lo, v_hi;  // explicit velocity box
  std::optional<double> alpha;     // box u +- alpha v_T instead
  std::vector<int> cells;          // velocity cells, overrides [domain]
  std::vector<int> partition;      // velocity partitions, overrides [partition]

  bool operator==(const SpeciesSection&) const = default;
};

/// Sectioned key = value text, '#' comments, lists separated by commas.
///
///   [domain]    d v cells length v_max omega_p omega_c b_z g velocity_boundary
///   [species]   name charge mass v_lo v_hi alpha cells partition   (repeatable)
///   [problem]   type, then problem parameters
///   [time]      t_end dt cfl_fraction integrator max_steps
///   [partition] x v species_per_rank deterministic strategy moments
///   [output]    directory cadence snapshot
struct RunConfig {
  int d = 1;
  int v = 1;
  std::vector<int> cells;       // every dim; velocity entries are the default per species
  std::vector<double> length;   // physical; empty means one wavelength of the problem mode
  std::vector<double> v_max;    // symmetric velocity bounds per velocity dim
  double omega_p = 1.0;
  double omega_c = 0.0;
  double b_z = 0.0;
  std::array<double, 2> g{0.0, 0.0};
  std::string velocity_boundary = "frozen";  // or "periodic"

  std::vector<SpeciesSection> species;

  std::string problem;
  std::map<std::string, std::string> params;

  double t_end = 1.0;
  std::optional<double> dt;
  double cfl_fraction = 0.9;
  std::string integrator = "low_storage";  // or "butcher"
  long max_steps = 0;

  std::vector<int> partition_x;
  std::vector<int> partition_v;
  int species_per_rank = 1;
  bool deterministic = true;
  std::string strategy = "vp";
  std::string moments = "velocity_major";

  std::string directory = "output";
  int cadence = 10;
  bool snapshot = false;

  bool operator==(const RunConfig&) const = default;

  double param(const std::string& key, double fallback) const;
  bool has_param(const std::string& key) const { return params.count(key) != 0; }
};

RunConfig parse_config(std::string_view text, const std::string& source = "<config>");
RunConfig load_config(const std::filesystem::path& path);
std::string serialize_config(const RunConfig& c);

}  // namespace vpfv
