#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vpfv/config.hpp"
#include "vpfv/diagnostics.hpp"
#include "vpfv/field_solve.hpp"
#include "vpfv/fvm.hpp"
#include "vpfv/partition.hpp"
#include "vpfv/problems.hpp"

namespace vpfv {

enum class Integrator { low_storage, butcher };

/// All blocks of every species for one of the three buffer roles.
using BlockSet = std::vector<DistField>;

struct RunOptions {
  std::optional<std::filesystem::path> directory;  // overrides the config
  bool write_files = true;
  bool quiet = true;
  /// Called with each emitted diagnostics row.
  std::function<void(const DiagnosticsRow&)> on_row;
};

struct RunResult {
  std::vector<DiagnosticsRow> rows;
  bool ok = true;
  std::string error;
  long steps = 0;
  double t = 0.0;
  std::filesystem::path directory;
};

/// Per-species partitions of the whole phase space advanced together with
/// the self-consistent field. Ranks are simulated in one process.
class Simulation {
 public:
  explicit Simulation(const RunConfig& cfg, RunOptions opt = {});
  Simulation(const RunConfig& cfg, ProblemSetup setup, RunOptions opt = {});
  ~Simulation();

  /// Advance one step of size dt (CFL bound when not given).
  double step(std::optional<double> dt = std::nullopt);
  /// Run to t_end (or max_steps) writing diagnostics at the configured cadence.
  RunResult run();

  double time() const { return t_; }
  long steps() const { return steps_; }
  const RunConfig& config() const { return cfg_; }
  const ProblemSetup& setup() const { return setup_; }
  const PartitionPlan& plan() const { return plan_; }
  const TrafficLog& traffic() const { return traffic_; }
  Integrator integrator() const { return integrator_; }
  void set_integrator(Integrator i) { integrator_ = i; }
  void set_kernel_options(const KernelOptions& k) { kopt_ = k; }

  /// Largest stable dt for the current state (L1 bound) and the max-norm variant.
  double stable_dt();
  double stable_dt_linf();

  /// Ghost exchange, moments and field solve for the current state, then the
  /// diagnostics of that state.
  DiagnosticsRow diagnostics();
  const FieldState& fields() const { return fs_; }

  /// Whole-grid copy of one species (interior only).
  DistField gather(int species) const;
  /// Overwrite the interior of one species from a whole-grid field.
  void scatter(int species, const DistField& global);
  BlockSet& state() { return f0_; }

  /// Most DistField storages alive at once during a step.
  std::int64_t peak_live_fields() const { return peak_live_; }
  std::int64_t persistent_fields() const;

  void write_snapshots(const std::filesystem::path& dir, const std::string& tag) const;

 private:
  struct System;
  friend struct System;

  void prepare(BlockSet& in);
  void stage(BlockSet& in, const std::array<std::pair<double, const BlockSet*>, 3>& terms, double dt, BlockSet& out);
  void combine(BlockSet& out, const std::array<std::pair<double, const BlockSet*>, 3>& terms);
  double speed_bound(bool linf);
  void note_live();

  RunConfig cfg_;
  RunOptions opt_;
  ProblemSetup setup_;
  PartitionPlan plan_;
  std::unique_ptr<HaloExchanger> exchanger_;
  std::unique_ptr<PoissonSolver> poisson_;
  TrafficLog traffic_;
  FieldState fs_;
  BlockSet f0_, f1_, fout_;
  std::vector<std::vector<std::int64_t>> phys_index_;  // per block, local physical cell -> global
  const BlockSet* prepared_ = nullptr;
  Integrator integrator_ = Integrator::low_storage;
  KernelOptions kopt_;
  ReductionMode reduction_ = ReductionMode::deterministic;
  MomentSchedule schedule_ = MomentSchedule::velocity_major;
  std::vector<std::vector<ExactSum>> sums_;  // per species, global physical cell
  std::int64_t other_live_ = 0;
  double sigma_ = 0.0;
  double t_ = 0.0;
  long steps_ = 0;
  std::int64_t peak_live_ = 0;
};

/// Partition plan of a configuration: [partition] x/v counts (or per-species
/// overrides), one rank per block unless species share ranks.
PartitionPlan make_plan(const RunConfig& cfg, const ProblemSetup& setup);
NeighborStrategy parse_strategy(const std::string& s);

struct ConvergenceLevel {
  std::vector<int> cells;
  double h = 0.0;       // first physical spacing of the coarse run
  double error = 0.0;   // Richardson error against the next finer run
  double seconds = 0.0;  // walltime of the coarse run
};

struct ConvergenceResult {
  std::vector<ConvergenceLevel> levels;  // levels - 1 entries
  double order = 0.0;
};

/// Runs `base` with every cell count scaled by 1, 2, ..., 2^(levels-1) and
/// compares consecutive species-0 results.
ConvergenceResult convergence_study(const RunConfig& base, int levels);

/// Output directory: VPFV_OUTPUT_DIR when set, else the configured one.
std::filesystem::path output_directory(const RunConfig& cfg);

/// CFL constant of the fourth-order upwind operator with RK4, computed once.
double rk4_fv_sigma();

}  // namespace vpfv
