#pragma once

#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "bbm/analysis.hpp"
#include "bbm/experiment_spec.hpp"
#include "bbm/timeloop.hpp"

namespace bbm {

/// Model configuration implied by a spec (bathymetry, degrees, penalty, variant).
ModelConfig model_config(const ExperimentSpec& spec, Variant variant);
Rectangle spec_domain(const ExperimentSpec& spec);

struct ConvergenceResult {
  ErrorReport report;
  bool ok = true;       // false when a level blew up
  std::string error;
};

/// Manufactured-solution study on grids N = 8 + 4 i. Writes errors.csv into
/// spec.out after every level so partial results survive a failure.
ConvergenceResult run_convergence(const ExperimentSpec& spec, std::ostream* log = nullptr);

/// One level of the convergence study.
ErrorRow convergence_level(const ExperimentSpec& spec, int N);

struct ShoalingRun {
  std::string variant;
  RunResult result;
  double initial_mass = 0.0;
  double initial_energy = 0.0;
  double max_mass_drift = 0.0;    // relative to the wave's excess mass
  double max_energy_drift = 0.0;  // relative
};

/// Solitary wave over a plane beach; one run per requested variant. Writes
/// gauges_<variant>.csv and conservation_<variant>.csv into spec.out.
std::vector<ShoalingRun> run_shoaling(const ExperimentSpec& spec, std::ostream* log = nullptr);

/// Generic run from a config: gauges.csv, conservation.csv and final_state.txt.
RunResult run_generic(const ExperimentSpec& spec, std::ostream* log = nullptr);

/// Text dump of a state:
///   line 1: "bbmwave-state 1"
///   line 2: "t <t>"
///   "vertices <n> cells <m>", then n lines "x y" and m lines "v0 v1 v2"
///   "eta <degree> <n>" followed by n coefficients, one per line
///   "u <degree> <2m>" followed by the x block then the y block
void write_state(std::ostream& os, const State& state);

}  // namespace bbm
