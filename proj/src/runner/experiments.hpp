#pragma once

#include <string>

#include "runner/run_config.hpp"

namespace gwp::runner {

struct RunResult {
  std::string path;
  long potential_evaluations = 0;
  double wall_seconds = 0.0;
  int rows = 0;
  /// False when an expect-check comparison failed.
  bool checks_passed = true;
};

/// Executes the experiment and writes <output_dir>/<prefix>.csv.
RunResult run_experiment(const RunConfig& cfg, const std::string& output_dir);

/// Worker count for sweeps: GWPDYN_THREADS if set, else the hardware count.
int sweep_threads();

}  // namespace gwp::runner
